"""
Tests for Binary Forms Service
Divisors, gcd degrees and root finding checked against an exact oracle
"""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from secant_scope.services.binary_forms import (
    BinaryForm,
    DivisorP1,
    Field,
    PointP1,
    common_divisor,
    eval_form,
    evaluation_scale,
    form_from_divisor,
    gcd_degree,
    gcd_form,
    mobius_transform,
    principal_subresultants,
    random_form,
    remainder_by_monic,
    roots_of_form,
)
from secant_scope.services.linalg import exact_nullspace, exact_rank, numeric_rank
from secant_scope.utils.errors import (
    AmbiguousVerdict,
    ContractViolation,
    FieldMismatchError,
    SingularMatrixError,
    ZeroFormError,
)

S, T = sympy.symbols('s t')


def to_sympy(form: BinaryForm):
    d = form.degree
    return sum(sympy.Rational(c.numerator, c.denominator) * S ** (d - i) * T ** i
               for i, c in enumerate(form.coeffs))


def oracle_gcd_degree(f: BinaryForm, g: BinaryForm) -> int:
    return sympy.Poly(sympy.gcd(to_sympy(f), to_sympy(g)), S, T).total_degree()


class TestPointsAndDivisors:
    """Test cases for points and divisors on P1"""

    def test_rational_point_canonical_form(self):
        """Proportional coordinates give the same exact point"""
        assert PointP1(2, 4, Field.RATIONAL) == PointP1(1, 2, Field.RATIONAL)
        assert PointP1(0, 5, Field.RATIONAL) == PointP1(0, 1, Field.RATIONAL)

    def test_origin_is_rejected(self):
        """[0:0] is not a point"""
        with pytest.raises(ContractViolation):
            PointP1(0, 0, Field.RATIONAL)

    def test_float_point_rejected_in_rational_field(self):
        """A float cannot enter an exact container"""
        with pytest.raises(FieldMismatchError):
            PointP1(0.5, 1, Field.RATIONAL)

    def test_divisor_merges_repeated_points(self):
        """Repeated support points add their multiplicities"""
        p = PointP1(1, 3, Field.RATIONAL)
        divisor = DivisorP1(((p, 1), (PointP1(2, 6, Field.RATIONAL), 2)))
        assert divisor.degree == 3
        assert divisor.points == ((p, 3),)
        assert not divisor.is_reduced

    def test_nonpositive_multiplicity_rejected(self):
        """Multiplicities are positive"""
        with pytest.raises(ContractViolation):
            DivisorP1(((PointP1(1, 1, Field.RATIONAL), 0),))


class TestFormFromDivisor:
    """Test cases for form_from_divisor"""

    @pytest.fixture
    def divisor(self):
        """Degree-4 divisor including the point at infinity"""
        return DivisorP1((
            (PointP1(1, 0, Field.RATIONAL), 1),
            (PointP1(2, 1, Field.RATIONAL), 2),
            (PointP1(Fraction(-1, 3), 1, Field.RATIONAL), 1),
        ))

    def test_form_vanishes_on_support(self, divisor):
        """Every support point is a root"""
        form = form_from_divisor(divisor)
        assert form.degree == 4
        assert form.is_exact
        for point in divisor.support:
            assert eval_form(form, point) == 0

    def test_multiplicities_match_oracle(self, divisor):
        """The form factors as the divisor prescribes"""
        form = form_from_divisor(divisor)
        factors = dict(sympy.factor_list(to_sympy(form))[1])
        assert factors[T] == 1
        assert factors[S - 2 * T] == 2
        assert factors[3 * S + T] == 1

    def test_empty_divisor_rejected(self):
        """There is no form of degree 0 to return"""
        with pytest.raises(ContractViolation):
            form_from_divisor(DivisorP1())

    def test_leading_coefficient_normalized(self, divisor):
        """The first nonzero coefficient is 1"""
        form = form_from_divisor(divisor)
        assert next(c for c in form.coeffs if c != 0) == 1


class TestEvalForm:
    """Test cases for eval_form"""

    def test_floating_evaluation_matches_monomial_sum(self):
        """Horner evaluation agrees with the direct sum to 1e-12 relative"""
        rng = np.random.default_rng(13)
        for _ in range(20):
            form = random_form(5, rng)
            point = PointP1(complex(rng.standard_normal(), rng.standard_normal()), 1.0 + 0j)
            s, t = point.coords()
            direct = sum(c * s ** (5 - i) * t ** i for i, c in enumerate(form.coeffs))
            assert abs(eval_form(form, point) - direct) <= 1e-12 * evaluation_scale(form, point)

    def test_monomial_at_poles(self):
        """s^5 vanishes at [0:1] and is 1 at [1:0]"""
        form = BinaryForm.monomial(5, 0)
        assert eval_form(form, PointP1(0, 1, Field.RATIONAL)) == 0
        assert eval_form(form, PointP1(1, 0, Field.RATIONAL)) == 1


class TestGcdDegree:
    """Test cases for exact and floating gcd degrees"""

    @pytest.fixture
    def rng(self):
        """Seeded generator"""
        return np.random.default_rng(20240611)

    def planted_pair(self, rng, planted: int, extra: int):
        common = DivisorP1.from_points(
            PointP1(int(v), 1, Field.RATIONAL) for v in rng.choice(np.arange(-9, 10), size=planted, replace=False)
        ) if planted else None
        f = random_form(extra, rng, Field.RATIONAL)
        g = random_form(extra + 1, rng, Field.RATIONAL)
        if common is not None:
            h = form_from_divisor(common)
            f, g = f * h, g * h
        return f, g

    @pytest.mark.parametrize('planted', [0, 1, 2, 3, 4])
    def test_euclid_matches_sympy(self, rng, planted):
        """Exact gcd degree agrees with sympy on planted common factors"""
        for _ in range(10):
            f, g = self.planted_pair(rng, planted, 3)
            assert gcd_degree(f, g, method='euclid') == oracle_gcd_degree(f, g)
            assert gcd_degree(f, g, method='euclid') >= planted

    @pytest.mark.parametrize('planted', [0, 1, 2, 3])
    def test_subresultant_matches_euclid_on_rationals(self, rng, planted):
        """Both exact methods agree"""
        for _ in range(10):
            f, g = self.planted_pair(rng, planted, 4)
            assert gcd_degree(f, g, method='subresultant') == gcd_degree(f, g, method='euclid')

    def test_common_root_at_infinity(self):
        """Vanishing leading coefficients share the point [1:0]"""
        f = BinaryForm.from_coeffs([0, 1, -3])
        g = BinaryForm.from_coeffs([0, 0, 1, 5])
        assert gcd_degree(f, g) == 1
        assert gcd_form(f, g).coeffs == (0, 1)

    def test_floating_planted_roots(self, rng):
        """Well-separated planted complex roots are recovered"""
        roots = [0.3 + 0.1j, -1.2 + 0.7j]
        common = DivisorP1.from_points(PointP1(z, 1) for z in roots)
        h = form_from_divisor(common)
        f = random_form(3, rng) * h
        g = random_form(4, rng) * h
        assert gcd_degree(f, g) == 2

    def test_zero_form_rejected(self):
        """gcd with the zero form is undefined"""
        with pytest.raises(ZeroFormError):
            gcd_degree(BinaryForm.zero(2), BinaryForm.from_coeffs([1, 1]))

    def test_mixed_fields_rejected(self):
        """Exact and floating forms do not mix silently"""
        with pytest.raises(FieldMismatchError):
            gcd_degree(BinaryForm.from_coeffs([1, 2]), BinaryForm.from_coeffs([1.0, 2.0]))

    def test_ambiguity_band_raises(self):
        """A subresultant just above the threshold is reported, not guessed"""
        f = BinaryForm.from_coeffs([1.0, -1.0])
        g = BinaryForm.from_coeffs([1.0, -1.0 - 1e-7])
        with pytest.raises(AmbiguousVerdict):
            gcd_degree(f, g, threshold=1e-8, band=1e2)


class TestRootsAndSubstitution:
    """Test cases for roots_of_form and mobius_transform"""

    def test_roots_with_multiplicity(self):
        """(s - 2t)^2 (s + 3t) t has a double root and two simple ones"""
        divisor = DivisorP1((
            (PointP1(2, 1, Field.RATIONAL), 2),
            (PointP1(-3, 1, Field.RATIONAL), 1),
            (PointP1(1, 0, Field.RATIONAL), 1),
        ))
        roots = roots_of_form(form_from_divisor(divisor))
        assert roots.degree == 4
        assert roots.multiplicity_of(PointP1(2, 1)) == 2
        assert roots.multiplicity_of(PointP1(-3, 1)) == 1
        assert roots.multiplicity_of(PointP1(1, 0)) == 1

    def test_singular_substitution_rejected(self):
        """Degenerate substitutions are refused"""
        with pytest.raises(SingularMatrixError):
            mobius_transform(BinaryForm.from_coeffs([1, 0, 1]), ((1, 2), (2, 4)))

    def test_substitution_preserves_gcd_degree(self):
        """gcd degree is invariant under a change of coordinates"""
        f = form_from_divisor(DivisorP1.from_points([PointP1(1, 1, Field.RATIONAL), PointP1(3, 1, Field.RATIONAL)]))
        g = form_from_divisor(DivisorP1.from_points([PointP1(1, 1, Field.RATIONAL), PointP1(-5, 1, Field.RATIONAL)]))
        matrix = ((2, 1), (1, 1))
        assert gcd_degree(mobius_transform(f, matrix), mobius_transform(g, matrix)) == gcd_degree(f, g) == 1


class TestSubresultantsAndDivision:
    """Test cases for principal subresultants, monic remainders and shared divisors"""

    def test_resultant_matches_oracle(self):
        """sres_0 is the resultant up to sign"""
        f = BinaryForm.from_coeffs([1, 0, -4])
        g = BinaryForm.from_coeffs([1, -3])
        x = sympy.symbols('x')
        expected = sympy.resultant(x ** 2 - 4, x - 3, x)
        assert abs(principal_subresultants(f, g)[0]) == abs(expected)

    def test_common_factor_pattern(self):
        """One shared linear factor: sres_0 vanishes, sres_1 does not"""
        f = BinaryForm.from_coeffs([1, -3, 2])
        g = BinaryForm.from_coeffs([1, 0, -1])
        sres = principal_subresultants(f, g)
        assert len(sres) == 2
        assert sres[0] == 0
        assert sres[1] != 0

    def test_degree_zero_rejected(self):
        """Subresultants need positive degrees"""
        with pytest.raises(ContractViolation):
            principal_subresultants(BinaryForm.from_coeffs([3]), BinaryForm.from_coeffs([1, 1]))

    def test_remainder_by_monic(self):
        """x^2 - 1 is divisible by x - 1, x^2 + 1 leaves 2"""
        assert remainder_by_monic([1, 0, -1], [1, -1]) == [0]
        assert remainder_by_monic([1, 0, 1], [1, -1]) == [2]

    def test_remainder_of_short_dividend(self):
        """A dividend below the divisor degree is its own remainder"""
        assert remainder_by_monic([4], [1, 2, 3]) == [4]

    @pytest.fixture
    def sharing_forms(self):
        """Three forms whose only shared factor is s - t"""
        return [
            BinaryForm.from_coeffs([1, -3, 2]),
            BinaryForm.from_coeffs([1, -1, 0]),
            BinaryForm.from_coeffs([0, 1, -1, 0]),
        ]

    def test_common_divisor_exact(self, sharing_forms):
        """Exact gcd of rational forms"""
        divisor = common_divisor(sharing_forms)
        assert divisor.degree == 1
        assert divisor.multiplicity_of(PointP1(1, 1)) == 1

    def test_common_divisor_floating(self, sharing_forms):
        """Root clusters give the same divisor over floats"""
        divisor = common_divisor([f.to_complex() for f in sharing_forms])
        assert divisor.degree == 1
        assert divisor.multiplicity_of(PointP1(1, 1)) == 1

    def test_common_divisor_skips_zero_forms(self, sharing_forms):
        """Zero forms do not constrain the divisor"""
        assert common_divisor(sharing_forms + [BinaryForm.zero(2)]).degree == 1
        with pytest.raises(ZeroFormError):
            common_divisor([BinaryForm.zero(2)])


class TestRank:
    """Test cases for exact and numerical rank"""

    def test_exact_rank(self):
        """Dependent rows drop the rank"""
        assert exact_rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2

    def test_numeric_rank_gap(self):
        """A clean spectrum gives an unambiguous rank"""
        matrix = np.diag([3.0, 1.0, 1e-14])
        decision = numeric_rank(matrix)
        assert decision.rank == 2
        assert decision.clear

    def test_strict_rank_raises_without_gap(self):
        """Strict mode refuses to decide on a smooth spectrum"""
        with pytest.raises(AmbiguousVerdict):
            numeric_rank(np.diag([1.0, 1e-6, 1e-8]), strict=True)

    def test_exact_nullspace(self):
        """Kernel vectors are annihilated by every row"""
        rows = [[1, 2, 3], [2, 4, 6]]
        basis = exact_nullspace(rows)
        assert len(basis) == 2
        for vec in basis:
            assert all(sum(Fraction(a) * b for a, b in zip(row, vec)) == 0 for row in rows)
