"""
Tests for Rational Curves Service
Embedding checks, alignment and k-secant enumeration on rational space curves
"""

import numpy as np
import pytest

from secant_scope.config import TestingConfig
from secant_scope.services.binary_forms import BinaryForm, Field, PointP1
from secant_scope.services.lines import LineP3, random_rational_line
from secant_scope.services.rational_curves import (
    RationalCurveMap,
    classical_quadrisecant_count,
    construct_with_k_secant,
    find_k_secants,
    intersection_divisor_with_line,
    is_aligned,
    random_rational_curve,
    secant_order,
    validate_embedding,
)
from secant_scope.services.secant_search import SecantSearchOptions
from secant_scope.utils.errors import ConstructionBudgetExceeded, ContractViolation


def curve_from_coeffs(*rows):
    return RationalCurveMap.from_forms([BinaryForm.from_coeffs(row) for row in rows])


class TestRationalCurveMap:
    """Test cases for the curve container"""

    @pytest.fixture
    def twisted_cubic(self):
        """(s^3, s^2 t, s t^2, t^3)"""
        return curve_from_coeffs([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])

    def test_needs_four_forms(self):
        """A space curve has exactly four coordinate forms"""
        with pytest.raises(ContractViolation):
            curve_from_coeffs([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0])

    def test_degree_below_three_rejected(self):
        """Conics are not space curves"""
        with pytest.raises(ContractViolation):
            curve_from_coeffs([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1])

    def test_rank(self, twisted_cubic):
        """The twisted cubic spans P3"""
        assert twisted_cubic.rank() == 4
        assert twisted_cubic.is_exact


class TestValidateEmbedding:
    """Test cases for validate_embedding"""

    def test_twisted_cubic_is_embedded(self):
        """No base points, no double points, no cusps"""
        curve = curve_from_coeffs([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])
        verdict = validate_embedding(curve, seed=1, config_class=TestingConfig)
        assert verdict.status == 'valid'
        assert verdict.reasons == ()

    def test_base_point_detected(self):
        """(s^4, s^3 t, s^2 t^2, s t^3) share the factor s"""
        curve = curve_from_coeffs([1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0])
        verdict = validate_embedding(curve, config_class=TestingConfig)
        assert verdict.status == 'invalid'
        assert 'base_point' in verdict.reasons
        assert verdict.base_points.multiplicity_of(PointP1(0, 1)) == 1

    def test_nodal_curve_detected(self):
        """(s^3 - s t^2, s^2 t - t^3, t^3, 0) identifies [1:1] and [1:-1]"""
        curve = curve_from_coeffs([1, 0, -1, 0], [0, 1, 0, -1], [0, 0, 0, 1], [0, 0, 0, 0])
        verdict = validate_embedding(curve, seed=2, config_class=TestingConfig)
        assert verdict.status == 'invalid'
        assert 'non_injective' in verdict.reasons
        assert 'degenerate' in verdict.reasons

    def test_verdict_serializes(self):
        """to_dict carries the status and string coordinates"""
        curve = curve_from_coeffs([1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0])
        payload = validate_embedding(curve, config_class=TestingConfig).to_dict()
        assert payload['status'] == 'invalid'
        assert len(payload['base_points']) == 1
        assert 'base_point' in payload['reasons']


class TestAlignment:
    """Test cases for is_aligned and intersection_divisor_with_line"""

    @pytest.fixture
    def twisted_cubic(self):
        """(s^3, s^2 t, s t^2, t^3)"""
        return curve_from_coeffs([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])

    def test_two_points_always_aligned(self, twisted_cubic):
        """Two points span a line"""
        pts = [PointP1(1, 0, Field.RATIONAL), PointP1(3, 1, Field.RATIONAL)]
        assert is_aligned(twisted_cubic, pts)

    def test_twisted_cubic_has_no_trisecant(self, twisted_cubic):
        """Three points of the twisted cubic are never collinear"""
        pts = [PointP1(1, 0, Field.RATIONAL), PointP1(0, 1, Field.RATIONAL), PointP1(1, 1, Field.RATIONAL)]
        assert not is_aligned(twisted_cubic, pts)

    def test_repeated_points_rejected(self, twisted_cubic):
        """Alignment is a statement about distinct points"""
        with pytest.raises(ContractViolation):
            is_aligned(twisted_cubic, [PointP1(1, 1, Field.RATIONAL), PointP1(2, 2, Field.RATIONAL)])

    def test_chord_meets_twice(self, twisted_cubic):
        """The line x1 = x2 = 0 is the chord through f([1:0]) and f([0:1])"""
        line = LineP3.from_dual_frame((0, 1, 0, 0), (0, 0, 1, 0), Field.RATIONAL)
        divisor = intersection_divisor_with_line(twisted_cubic, line)
        assert divisor.degree == 2
        assert divisor.multiplicity_of(PointP1(1, 0)) == 1
        assert divisor.multiplicity_of(PointP1(0, 1)) == 1

    def test_random_line_misses(self, twisted_cubic):
        """A random rational line does not meet the curve"""
        line = random_rational_line(np.random.default_rng(5))
        assert intersection_divisor_with_line(twisted_cubic, line).degree == 0


class TestConstructions:
    """Test cases for planted constructions"""

    def test_planted_quadrisecant(self):
        """(5, 4): the planted line is a proper 4-secant through aligned points"""
        curve, record = construct_with_k_secant(5, 4, seed=7, config_class=TestingConfig)
        assert curve.degree == 5
        assert curve.is_exact
        assert record.length == 4
        assert record.proper
        assert is_aligned(curve, record.divisor.support)

    def test_parameters_out_of_range(self):
        """k must stay below d"""
        with pytest.raises(ContractViolation):
            construct_with_k_secant(5, 5)

    def test_budget_exhaustion_reports_seed_trail(self, mocker):
        """Every attempt rejected raises with the seeds that were tried"""
        mocker.patch(
            'secant_scope.services.rational_curves.validate_embedding',
            return_value=mocker.Mock(valid=False, reasons=('degenerate',)),
        )
        with pytest.raises(ConstructionBudgetExceeded) as excinfo:
            construct_with_k_secant(6, 4, seed=3, config_class=TestingConfig)
        assert len(excinfo.value.seed_trail) == TestingConfig.CONSTRUCTION_RETRY_BUDGET
        assert excinfo.value.seed_trail[0] == [3, 0]


class TestSecantSearch:
    """Test cases for find_k_secants and secant_order"""

    @pytest.fixture
    def opts(self):
        """Search options from the testing profile"""
        return SecantSearchOptions.from_config(TestingConfig, seed=4)

    def test_classical_count(self):
        """(d-2)(d-3)^2(d-4)/12"""
        assert classical_quadrisecant_count(5) == 1
        assert classical_quadrisecant_count(6) == 6
        assert classical_quadrisecant_count(7) == 20

    def test_k_above_degree_rejected(self, opts):
        """A line cannot meet a degree-d curve more than d times"""
        curve = random_rational_curve(5, seed=1, config_class=TestingConfig)
        with pytest.raises(ContractViolation, match='k exceeds curve degree'):
            find_k_secants(curve, 6, opts)

    def test_twisted_cubic_secant_order(self, opts):
        """Only chords meet the twisted cubic twice"""
        curve = curve_from_coeffs([1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1])
        assert find_k_secants(curve, 3, opts) == []
        assert secant_order(curve, opts) == (2, [])

    def test_random_quintic_has_one_quadrisecant(self, opts):
        """Every rational quintic has exactly one 4-secant line"""
        curve = random_rational_curve(5, seed=11, config_class=TestingConfig)
        records = find_k_secants(curve, 4, opts)
        assert len(records) == 1
        assert records[0].length == 4

    def test_random_sextic_quadrisecant_count(self, opts):
        """A general rational sextic has six 4-secant lines"""
        curve = random_rational_curve(6, seed=12, config_class=TestingConfig)
        records = find_k_secants(curve, 4, opts)
        assert len(records) == 6
        assert all(r.length == 4 for r in records)

    def test_unique_maximal_secant(self, opts):
        """(6, 5): the planted 5-secant is the only one and fixes the order"""
        curve, planted = construct_with_k_secant(6, 5, seed=2, config_class=TestingConfig)
        order, witnesses = secant_order(curve, opts)
        assert order == 5
        assert len(witnesses) == 1
        assert witnesses[0].maximal
        assert witnesses[0].line.same_line(planted.line.to_complex())

    def test_longer_secants_are_nested(self, opts):
        """Every 5-secant is among the lines of length >= 4"""
        curve, _ = construct_with_k_secant(6, 5, seed=2, config_class=TestingConfig)
        longer = find_k_secants(curve, 5, opts)
        shorter = find_k_secants(curve, 4, opts)
        assert longer
        for record in longer:
            assert any(record.line.same_line(other.line) for other in shorter)

    def test_secants_follow_coordinate_changes(self, opts):
        """A projective change on P3 moves the lines; a Möbius change on P1 leaves them"""
        curve = random_rational_curve(6, seed=12, config_class=TestingConfig)
        lower = np.array([[1, 0, 0, 0], [1, 1, 0, 0], [0, -1, 1, 0], [0, 0, 1, 1]])
        upper = np.array([[1, 1, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]])
        matrix = lower @ upper
        moved = RationalCurveMap.from_forms([curve.pullback(row) for row in matrix.tolist()])
        moved = moved.mobius([[1, 1], [1, 2]])
        base = find_k_secants(curve, 4, opts)
        image = find_k_secants(moved, 4, SecantSearchOptions.from_config(TestingConfig, seed=9))
        assert len(image) == len(base) == 6
        for record in base:
            assert any(record.line.transform(matrix).same_line(other.line) for other in image)
