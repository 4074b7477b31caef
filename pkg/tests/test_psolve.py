"""
Tests for Polynomial Solver Service
Homotopy continuation and multistart Newton on small systems with known solutions
"""

import numpy as np
import pytest

from secant_scope.config import TestingConfig
from secant_scope.services.psolve import (
    Polynomial,
    PolySystem,
    SolveOptions,
    bezout_bound,
    dedup_solutions,
    multistart_newton,
    solve_square_system,
)
from secant_scope.utils.errors import ContractViolation


def as_set(points, digits=6):
    return {tuple(complex(round(z.real, digits), round(z.imag, digits)) for z in p) for p in points}


class TestSolveSquareSystem:
    """Test cases for the total-degree homotopy"""

    @pytest.fixture
    def opts(self):
        """Solver options from the testing profile"""
        return SolveOptions.from_config(TestingConfig, seed=11)

    @pytest.fixture
    def circle_hyperbola(self):
        """x^2 + y^2 = 5, x y = 2: four real solutions"""
        x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        return PolySystem.from_polynomials([x * x + y * y - 5, x * y - 2])

    def test_bezout_bound(self, circle_hyperbola):
        """Product of total degrees"""
        assert bezout_bound(circle_hyperbola) == 4

    def test_all_solutions_found(self, circle_hyperbola, opts):
        """Every isolated solution is reached"""
        solutions, diag = solve_square_system(circle_hyperbola, opts)
        expected = {(1, 2), (2, 1), (-1, -2), (-2, -1)}
        assert as_set(solutions) == {tuple(complex(v) for v in p) for p in expected}
        assert diag.paths_tracked == 4
        assert diag.max_residual < 1e-8

    def test_solutions_are_seed_independent(self, circle_hyperbola, opts):
        """Different gamma draws give the same solution set"""
        first, _ = solve_square_system(circle_hyperbola, opts)
        second, _ = solve_square_system(circle_hyperbola, opts.with_seed(97))
        assert as_set(first) == as_set(second)

    def test_complex_solutions(self, opts):
        """x^2 + 1 = 0, y = 2x"""
        x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        system = PolySystem.from_polynomials([x * x + 1, y - 2 * x])
        solutions, _ = solve_square_system(system, opts)
        assert as_set(solutions) == {(1j, 2j), (-1j, -2j)}

    def test_constant_equation_has_no_solutions(self, opts):
        """A nonzero constant equation makes the system inconsistent"""
        x = Polynomial.variable(2, 0)
        system = PolySystem.from_polynomials([x * x - 1, Polynomial.constant(2, 3)], 2)
        assert bezout_bound(system) == 0
        solutions, diag = solve_square_system(system, opts)
        assert solutions.shape == (0, 2)
        assert diag.paths_tracked == 0

    def test_non_square_rejected(self, opts):
        """The solver only accepts square systems"""
        x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        system = PolySystem.from_polynomials([x * y - 1])
        with pytest.raises(ContractViolation):
            solve_square_system(system, opts)


class TestMultistartNewton:
    """Test cases for the independent multistart solver"""

    def test_agrees_with_homotopy(self):
        """Both solvers find the same four points"""
        x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        system = PolySystem.from_polynomials([x * x - 1, y * y - 4])
        opts = SolveOptions.from_config(TestingConfig, seed=3)
        newton, diag = multistart_newton(system, opts, n_starts=500)
        homotopy, _ = solve_square_system(system, opts)
        assert as_set(newton) == as_set(homotopy)
        assert len(newton) == 4
        assert diag.method == 'multistart'


class TestHelpers:
    """Test cases for evaluation and deduplication"""

    def test_relative_residual_zero_at_solution(self):
        """Residual vanishes at an exact root"""
        x = Polynomial.variable(1, 0)
        system = PolySystem.from_polynomials([x * x - 4])
        residual = system.relative_residual(np.array([[2.0 + 0j]]))
        assert residual[0] == pytest.approx(0.0)

    def test_dedup_solutions(self):
        """Near-identical points collapse"""
        points = np.array([[1.0, 2.0], [1.0 + 1e-12, 2.0], [3.0, 4.0]], dtype=complex)
        assert len(dedup_solutions(points)) == 2
