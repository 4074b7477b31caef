"""
Tests for Utilities
Report envelopes, deterministic JSON and command parameter helpers
"""

import json

import pytest
from marshmallow import ValidationError

from secant_scope.config import Config, TestingConfig
from secant_scope.utils.errors import ContractViolation, RootFindingError
from secant_scope.utils.responses import (
    canonical_json,
    error_response,
    exception_response,
    input_hash,
    success_response,
)
from secant_scope.utils.validators import (
    config_with_overrides,
    read_curve_file,
    require_parameters,
    validate_secant_length,
)


class TestResponses:
    """Test cases for report envelopes"""

    def test_canonical_json_sorts_keys(self):
        """Key order never depends on insertion order"""
        assert canonical_json({'b': 1, 'a': 2}) == canonical_json({'a': 2, 'b': 1})
        assert canonical_json({'b': 1, 'a': 2}, indent=None) == '{"a":2,"b":1}'
        assert canonical_json({}).endswith('\n')

    def test_canonical_json_rejects_nan(self):
        """Reports never carry NaN"""
        with pytest.raises(ValueError):
            canonical_json({'x': float('nan')})

    def test_input_hash(self):
        """Hash depends on content, not key order"""
        first = input_hash([{'kind': 'ci', 'a': 1}])
        assert first == input_hash([{'a': 1, 'kind': 'ci'}])
        assert first != input_hash([{'kind': 'ci', 'a': 2}])
        assert len(first) == 64

    def test_success_envelope(self):
        """Success reports carry the run metadata"""
        report = success_response('done', data={'x': 1}, command='hypcheck', seed=3,
                                  config_class=TestingConfig, assumptions=['smoothness unknown'])
        assert report['success'] is True
        assert report['seed'] == 3
        assert report['data'] == {'x': 1}
        assert report['assumptions'] == ['smoothness unknown']
        assert report['tolerances']['rank_cutoff'] == TestingConfig.RANK_CUTOFF
        json.loads(canonical_json(report))

    def test_error_envelope(self):
        """Error reports carry the message and the code"""
        report = error_response('bad', details={'k': 1}, error_code='X', command='secants')
        assert report['success'] is False
        assert report['error'] == {'message': 'bad', 'details': {'k': 1}, 'code': 'X'}

    def test_exception_details_made_plain(self):
        """Non-JSON details are stringified"""
        error = RootFindingError('roots diverged', {'form': object()})
        report = exception_response(error, 'analyze')
        assert report['error']['code'] == 'ROOT_FINDING'
        assert isinstance(report['error']['details']['form'], str)
        canonical_json(report)


class TestValidators:
    """Test cases for parameter and file validation"""

    def test_config_without_overrides(self):
        """Plain profiles are returned as is"""
        assert config_with_overrides('testing') is TestingConfig
        assert config_with_overrides('nope') is Config

    def test_config_with_overrides(self):
        """Overrides live on a subclass"""
        before = TestingConfig.RANK_GAP
        cls = config_with_overrides('testing', {'rank_gap': before * 2})
        assert issubclass(cls, TestingConfig)
        assert cls.RANK_GAP == before * 2
        assert TestingConfig.RANK_GAP == before

    def test_invalid_json_file(self, tmp_path):
        """Unparseable files are validation errors"""
        path = tmp_path / 'broken.json'
        path.write_text('{"kind": ')
        with pytest.raises(ValidationError):
            read_curve_file(str(path))

    def test_secant_length(self):
        """3 <= k <= degree"""
        curve = type('Curve', (), {'degree': 5})()
        validate_secant_length(curve, 5)
        with pytest.raises(ContractViolation):
            validate_secant_length(curve, 2)
        with pytest.raises(ContractViolation, match='k exceeds curve degree'):
            validate_secant_length(curve, 6)

    def test_require_parameters(self):
        """Missing parameters are named"""
        with pytest.raises(ValidationError, match='d, k'):
            require_parameters({'d': None, 'k': None, 'a': 4}, 'd', 'k', 'a')
