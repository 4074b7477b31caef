"""
Tests for Strata Service
Conditions imposed by aligned schemes, expected and estimated stratum dimensions
"""

import pytest

from secant_scope.config import TestingConfig
from secant_scope.services.strata import (
    VERIFICATION_ROWS,
    DimensionReport,
    conditions_imposed,
    estimate_local_dimension,
    expected_dim,
    expected_dims,
    monotonicity_violations,
    random_aligned_scheme,
    stratum_equations,
    verification_table,
)
from secant_scope.utils.errors import ContractViolation


class TestConditionsImposed:
    """Test cases for conditions_imposed"""

    @pytest.mark.parametrize('degree,expected', [(1, 2), (2, 3), (3, 4), (5, 4)])
    def test_length_four(self, degree, expected):
        """A length-4 aligned scheme imposes min(4, m + 1) conditions"""
        scheme = random_aligned_scheme(4, seed=2)
        assert conditions_imposed(scheme, degree) == expected

    def test_full_grid(self):
        """min(k, m + 1) for 2 <= k <= 8 and 1 <= m <= 6"""
        for k in range(2, 9):
            scheme = random_aligned_scheme(k, seed=k)
            assert scheme.is_exact
            for m in range(1, 7):
                assert conditions_imposed(scheme, m) == min(k, m + 1)

    def test_degree_must_be_positive(self):
        """Constants impose nothing meaningful"""
        with pytest.raises(ContractViolation):
            conditions_imposed(random_aligned_scheme(3), 0)


class TestExpectedDimensions:
    """Test cases for the closed-form dimension table"""

    @pytest.mark.parametrize('label,params,expected', [
        ('Gr', {}, 4),
        ('Alk', {'k': 4}, 8),
        ('Alk', {'k': 5}, 9),
        ('Pk', {'d': 5, 'k': 4}, 4),
        ('Pk', {'d': 6, 'k': 4}, 6),
        ('Pk', {'d': 6, 'k': 5}, 5),
        ('Pk', {'d': 7, 'k': 6}, 6),
        ('Ik_rational', {'d': 5, 'k': 4}, 20),
        ('Ik_rational', {'d': 6, 'k': 5}, 23),
        ('CI_fiber', {'a': 4, 'b': 4, 'k': 4}, 58),
        ('Hk_ci', {'a': 4, 'b': 5, 'k': 5}, 84),
        ('Hk_ci', {'a': 4, 'b': 4, 'k': 4}, 66),
        ('Hdm1_rational', {'d': 6}, 23),
    ])
    def test_expected_dim(self, label, params, expected):
        """Closed forms for each stratum"""
        assert expected_dim(label, params) == expected

    def test_table_consistency(self):
        """The (d - 1)-secant stratum agrees with the general formula"""
        table = expected_dims(d=6, k=5)
        assert table['Hk_rational'] == 23
        assert table['Hdm1_rational'] == 23
        assert table['I_rational'] == 4 * 6 - 5 - 8

    def test_out_of_range_rejected(self):
        """k must stay below d for rational strata"""
        with pytest.raises(ContractViolation):
            expected_dims(d=5, k=5)

    def test_unknown_label_rejected(self):
        """Only known strata have formulas"""
        with pytest.raises(ContractViolation):
            expected_dim('Xk', {'k': 4})

    @pytest.mark.parametrize('d', [6, 7, 8])
    def test_dimensions_drop_with_k(self, d):
        """Longer secants cut out strictly smaller strata"""
        assert monotonicity_violations(d) == []


class TestLocalDimension:
    """Test cases for stratum charts and the dimension estimator"""

    def test_grassmannian(self):
        """No equations: the chart dimension is the answer"""
        report = estimate_local_dimension(stratum_equations('Gr'))
        assert report.estimated_dim == 4
        assert report.verdict == 'match'

    def test_aligned_schemes(self):
        """Al^k is a product chart of dimension 4 + k"""
        chart = stratum_equations('Alk', {'k': 4}, seed=3)
        assert chart.ambient_dim == 8
        assert chart.equations.n_polys == 0
        assert estimate_local_dimension(chart).estimated_dim == 8

    def test_pencil_chart(self):
        """P_k at (6, 4) has dimension 2d - k - 2"""
        chart = stratum_equations('Pk', {'d': 6, 'k': 4}, seed=1, config_class=TestingConfig)
        assert chart.ambient_dim == 2 * 5 + 4
        assert chart.residual() < 1e-10
        report = estimate_local_dimension(chart, config_class=TestingConfig)
        assert report.estimated_dim == 6
        assert report.verdict == 'match'

    def test_ambiguous_rank_verdict(self, mocker):
        """A blurred spectrum gives an ambiguous verdict instead of a number"""
        mocker.patch('secant_scope.services.strata.numeric_rank',
                     return_value=mocker.Mock(rank=1, gap=10.0))
        chart = stratum_equations('Pk', {'d': 5, 'k': 4}, seed=1, config_class=TestingConfig)
        report = estimate_local_dimension(chart, config_class=TestingConfig)
        assert report.verdict == 'ambiguous'

    def test_unknown_stratum(self):
        """Unknown labels are contract violations"""
        with pytest.raises(ContractViolation):
            stratum_equations('Hk_rational', {'d': 6, 'k': 5})

    def test_missing_parameter(self):
        """Each chart names the parameters it needs"""
        with pytest.raises(ContractViolation, match="'d'"):
            stratum_equations('Pk', {'k': 4})

    @pytest.mark.slow
    def test_verification_table(self):
        """Every standard row matches its expected dimension"""
        reports = verification_table(seed=0, config_class=TestingConfig)
        assert len(reports) == len(VERIFICATION_ROWS)
        assert all(isinstance(r, DimensionReport) for r in reports)
        assert [r.verdict for r in reports] == ['match'] * len(reports)
        assert monotonicity_violations(6, reports=reports) == []
