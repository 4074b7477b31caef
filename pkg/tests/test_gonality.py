"""
Tests for Gonality Service
Formula layer, numeric hypothesis search and curve analysis
"""

import numpy as np
import pytest

from secant_scope.config import TestingConfig
from secant_scope.services.binary_forms import BinaryForm, DivisorP1
from secant_scope.services.ci_curves import CICurve, SurfacePoly, random_smooth_ci
from secant_scope.services.gonality import (
    ASSUMPTION_BIELLIPTIC,
    ASSUMPTION_PARTIAL_SEARCH,
    GON_MINUS_2,
    GON_MINUS_3,
    STATUS_OUT_OF_REGIME,
    STATUS_VERIFIED,
    STATUS_WITH_ASSUMPTIONS,
    analyze_curve,
    check_ci_hypotheses,
    check_null_correlation_hypotheses,
    check_theorem_hypotheses,
    clifford_trichotomy,
    cm_degree_bound,
    genus_subcanonical,
    gonality_from_secants,
)
from secant_scope.services.lines import LineP3, SecantRecord
from secant_scope.services.rational_curves import RationalCurveMap
from secant_scope.services.secant_search import SecantSearchOptions
from secant_scope.utils.errors import ContractViolation


class TestFormulas:
    """Test cases for the closed formulas"""

    @pytest.mark.parametrize('dC,l,expected', [(20, 4, 16), (16, 4, 12), (6, 3, 3)])
    def test_gonality(self, dC, l, expected):
        """Gonality is the degree minus the secant order"""
        assert gonality_from_secants(dC, l) == expected

    @pytest.mark.parametrize('dC,l,expected', [
        (20, 3, (14, GON_MINUS_3)),
        (16, 4, (10, GON_MINUS_2)),
        (10, 3, (4, GON_MINUS_3)),
        (20, 5, (13, GON_MINUS_2)),
    ])
    def test_clifford_trichotomy(self, dC, l, expected):
        """l = 3 gives dC - 6, longer secants give gonality - 2"""
        assert clifford_trichotomy(dC, l) == expected

    def test_gon_minus_three_is_hyperplane_value(self):
        """In the gon-3 case the Clifford index equals dC - 6"""
        for dC in range(7, 40):
            clifford, case = clifford_trichotomy(dC, 3)
            assert case == GON_MINUS_3
            assert clifford == dC - 6 == gonality_from_secants(dC, 3) - 3

    def test_trichotomy_needs_room(self):
        """dC >= l + 4"""
        with pytest.raises(ContractViolation):
            clifford_trichotomy(7, 4)

    @pytest.mark.parametrize('alpha,dC,expected', [(0, 4, 1), (1, 6, 4), (4, 16, 33)])
    def test_genus(self, alpha, dC, expected):
        """(alpha dC + 2) / 2"""
        assert genus_subcanonical(alpha, dC) == expected

    def test_odd_genus_numerator_rejected(self):
        """alpha dC must be even"""
        with pytest.raises(ContractViolation):
            genus_subcanonical(1, 5)

    @pytest.mark.parametrize('clifford,expected', [(14, 24), (0, 3), (10, 18)])
    def test_cm_bound(self, clifford, expected):
        """floor(3 (c + 2) / 2)"""
        assert cm_degree_bound(clifford) == expected

    def test_gonality_rejects_short_curves(self):
        """dC must exceed l"""
        with pytest.raises(ContractViolation):
            gonality_from_secants(4, 4)


class TestHypothesisSearch:
    """Test cases for the numeric hypothesis checker"""

    def test_ci_4_5_passes(self):
        """CI(4, 5) passes at f = 5 with s = 2"""
        search = check_ci_hypotheses(4, 5)
        assert search.overall
        assert search.passing.f == 5
        assert search.passing.witness_s == 2
        assert search.passing.lower_bound == (5 - 5 + 3) * 5

    def test_ci_4_4_fails(self):
        """CI(4, 4) has no admissible f"""
        search = check_ci_hypotheses(4, 4)
        assert not search.overall
        assert search.passing is None
        assert [r.f for r in search.reports] == [5, 6, 7]

    def test_ci_5_5_fails_degree_condition(self):
        """CI(5, 5) fails condition d) for every f"""
        search = check_ci_hypotheses(5, 5)
        assert not search.overall
        assert all('d' in r.failed_conditions() for r in search.reports)

    def test_null_correlation_t7_passes(self):
        """N(7): alpha = 10, dC = 50, passing at f = 9 with s = 2"""
        search = check_null_correlation_hypotheses(7)
        assert (search.alpha, search.dC) == (10, 50)
        assert [r.f for r in search.reports] == [9, 10, 11, 12, 13]
        assert search.passing.f == 9
        assert search.passing.witness_s == 2
        assert search.passing.lower_bound == (10 - 9 + 3) * 9

    def test_null_correlation_t6_fails(self):
        """N(6) fails condition d) at every admissible f"""
        search = check_null_correlation_hypotheses(6)
        assert not search.overall
        assert all('d' in r.failed_conditions() for r in search.reports)

    def test_null_correlation_needs_room(self):
        """Small twists leave no surface degree to try"""
        with pytest.raises(ContractViolation):
            check_null_correlation_hypotheses(2)

    def test_clifford_mode_shifts(self):
        """Clifford mode reports p = alpha - 1"""
        search = check_theorem_hypotheses(5, 20, mode='clifford')
        assert all(r.p == 4 for r in search.reports)
        assert [r.f for r in search.reports] == list(range(1, 9))

    def test_condition_a_is_assumed(self):
        """Condition a) is cohomological and never decided"""
        search = check_theorem_hypotheses(5, 20)
        assert {r.cond_a_status for r in search.reports} == {'assumed'}

    def test_unknown_mode_rejected(self):
        """Only the configured modes are accepted"""
        with pytest.raises(ContractViolation):
            check_theorem_hypotheses(5, 20, mode='other')

    def test_twist_above_alpha_rejected(self):
        """p <= alpha"""
        with pytest.raises(ContractViolation):
            check_theorem_hypotheses(5, 20, p=6)

    def test_serialization(self):
        """to_dict carries per-f reports and the passing one"""
        payload = check_ci_hypotheses(4, 5).to_dict()
        assert payload['overall'] is True
        assert payload['passing']['f'] == 5
        assert payload['passing']['overall'] is True
        assert len(payload['reports']) == 4


class TestAnalyzeCurve:
    """Test cases for analyze_curve"""

    @pytest.fixture
    def opts(self):
        """Search options from the testing profile"""
        return SecantSearchOptions.from_config(TestingConfig, seed=1)

    def random_ci(self, a, b, seed=0):
        rng = np.random.default_rng(seed)
        return CICurve(SurfacePoly.random(a, rng), SurfacePoly.random(b, rng))

    def test_rational_curve_out_of_regime(self, opts):
        """The theorem layer is off for rational curves"""
        forms = [BinaryForm.monomial(3, i) for i in range(4)]
        report = analyze_curve(RationalCurveMap.from_forms(forms), opts, config_class=TestingConfig)
        assert report.kind == 'rational'
        assert report.l == 2
        assert report.status == STATUS_OUT_OF_REGIME
        assert not report.theorem_layer
        assert report.gonality is None

    def test_ci_4_4_numbers(self, opts, mocker):
        """Secant order 4 on CI(4, 4) gives gonality 12 and Clifford index 10"""
        mocker.patch('secant_scope.services.gonality.secant_order_ci', return_value=(4, []))
        report = analyze_curve(self.random_ci(4, 4), opts, config_class=TestingConfig)
        assert (report.gonality, report.clifford, report.clifford_case) == (12, 10, GON_MINUS_2)
        assert report.genus == 33
        assert report.pencil_degree_bound == 18
        assert report.status == STATUS_WITH_ASSUMPTIONS
        assert ASSUMPTION_BIELLIPTIC in report.assumptions
        assert 'smoothness unknown' in report.assumptions

    def test_ci_4_5_numbers(self, opts, mocker):
        """Secant order 5 on CI(4, 5) gives gonality 15 and Clifford index 13"""
        mocker.patch('secant_scope.services.gonality.secant_order_ci', return_value=(5, []))
        report = analyze_curve(self.random_ci(4, 5), opts, non_bielliptic=True, config_class=TestingConfig)
        assert (report.gonality, report.clifford) == (15, 13)
        assert report.status == STATUS_VERIFIED
        assert report.hypotheses.passing.f == 5
        assert ASSUMPTION_BIELLIPTIC not in report.assumptions

    def test_witness_search_never_verified(self, mocker):
        """A witness-mode search leaves the secant order a lower bound"""
        mocker.patch('secant_scope.services.gonality.secant_order_ci', return_value=(5, []))
        opts = SecantSearchOptions.from_config(TestingConfig, seed=1, mode='witness')
        report = analyze_curve(self.random_ci(4, 5), opts, non_bielliptic=True, config_class=TestingConfig)
        assert report.hypotheses.overall
        assert report.status == STATUS_WITH_ASSUMPTIONS
        assert not report.complete
        assert ASSUMPTION_PARTIAL_SEARCH in report.assumptions

    def test_small_a_out_of_regime(self, opts, mocker):
        """a < 4 keeps the secant order but drops the theorem layer"""
        mocker.patch('secant_scope.services.gonality.secant_order_ci', return_value=(3, []))
        report = analyze_curve(self.random_ci(3, 3), opts, config_class=TestingConfig)
        assert report.status == STATUS_OUT_OF_REGIME
        assert report.genus == 10
        assert report.gonality is None

    def test_witness_must_reverify(self, opts, mocker):
        """A maximal witness whose length changes on re-check is rejected"""
        line = mocker.Mock(spec=LineP3)
        record = SecantRecord(line, DivisorP1(), 5, True, maximal=True)
        mocker.patch('secant_scope.services.gonality.secant_order_ci', return_value=(5, [record]))
        mocker.patch('secant_scope.services.gonality.line_intersection_length', return_value=4)
        with pytest.raises(ContractViolation):
            analyze_curve(self.random_ci(4, 5), opts, config_class=TestingConfig)

    @pytest.mark.slow
    def test_random_ci_4_4_end_to_end(self, opts):
        """A random smooth CI(4, 4) has 4-secants and no longer ones"""
        curve = random_smooth_ci(4, 4, seed=1, config_class=TestingConfig)
        report = analyze_curve(curve, opts, config_class=TestingConfig)
        assert report.l == 4
        assert report.gonality == 12
        assert report.clifford == 10
        assert report.witnesses
