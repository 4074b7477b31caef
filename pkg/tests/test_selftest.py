"""
Tests for Self-test Service
Property suites and their tallies
"""

import pytest

from secant_scope.services.selftest import (
    MAX_RECORDED_FAILURES,
    SUITES,
    SuiteResult,
    alignment_suite,
    conditions_suite,
    formula_suite,
    run_suites,
    subresultant_suite,
)


class TestSuiteResult:
    """Test cases for the tally container"""

    def test_record_counts(self):
        """Passing and failing cases are both counted"""
        result = SuiteResult('demo')
        result.record(True, case=1)
        result.record(False, case=2)
        assert (result.trials, result.passed) == (2, 1)
        assert not result.ok
        assert result.failures == [{'case': 2}]

    def test_failures_are_capped(self):
        """Only the first few failing cases are kept"""
        result = SuiteResult('demo')
        for i in range(MAX_RECORDED_FAILURES + 3):
            result.record(False, case=i)
        assert result.trials == MAX_RECORDED_FAILURES + 3
        assert len(result.failures) == MAX_RECORDED_FAILURES

    def test_to_dict(self):
        """Serialized tallies carry the ok flag"""
        result = SuiteResult('demo')
        result.record(True)
        assert result.to_dict() == {'name': 'demo', 'trials': 1, 'passed': 1, 'failures': [], 'ok': True}


class TestSuites:
    """Test cases for the property suites on reduced sizes"""

    def test_formula_suite(self):
        """Closed formulas agree with each other"""
        result = formula_suite()
        assert result.ok
        assert result.trials > 100

    def test_conditions_suite(self):
        """Aligned schemes impose min(k, m + 1) conditions"""
        result = conditions_suite(max_length=5, max_degree=4, seed=3)
        assert result.ok
        assert result.trials == 4 * 4

    def test_subresultant_suite(self):
        """Both gcd degree methods agree on planted factors"""
        result = subresultant_suite(trials=24, seed=2)
        assert result.ok
        assert result.trials == 24

    def test_alignment_suite(self):
        """Rank and pencil criteria agree"""
        result = alignment_suite(trials=6, degrees=(4, 5), seed=1)
        assert result.ok
        assert result.trials == 12

    def test_run_suites_selects_by_name(self, mocker):
        """run_suites runs the named suites in order and passes the seed on"""
        fake = mocker.Mock(return_value=SuiteResult('alignment'))
        mocker.patch.dict(SUITES, {'alignment': fake})
        results = run_suites(['alignment', 'formulas'], seed=9)
        assert [r.name for r in results] == ['alignment', 'formulas']
        fake.assert_called_once_with(seed=9)

    @pytest.mark.slow
    def test_full_size_suites(self):
        """Alignment and subresultant suites at their default sizes"""
        for result in run_suites(['alignment', 'subresultant'], seed=0):
            assert result.ok, result.failures
