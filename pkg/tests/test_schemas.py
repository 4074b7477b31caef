"""
Tests for Schemas
Curve file loading, run configuration validation and report serialization
"""

from fractions import Fraction

import pytest
from marshmallow import ValidationError

from secant_scope.schemas.curves import ScalarField, dump_curve, load_curve
from secant_scope.schemas.reports import DimensionReportSchema, RunConfigSchema
from secant_scope.services.binary_forms import Field
from secant_scope.services.ci_curves import CICurve
from secant_scope.services.rational_curves import RationalCurveMap
from secant_scope.services.strata import DimensionReport


class TestScalarField:
    """Test cases for scalar decoding"""

    @pytest.fixture
    def field(self):
        return ScalarField()

    def test_rationals(self, field):
        """Integers and p/q strings are exact"""
        assert field.deserialize(3) == Fraction(3)
        assert field.deserialize('-3/4') == Fraction(-3, 4)

    def test_complex(self, field):
        """Floats and [re, im] pairs are complex"""
        assert field.deserialize(0.5) == complex(0.5)
        assert field.deserialize([1.0, -2.0]) == complex(1, -2)

    @pytest.mark.parametrize('value', [True, 'abc', '1/0', [1, 2, 3], {'re': 1}])
    def test_invalid(self, field, value):
        """Anything else is rejected"""
        with pytest.raises(ValidationError):
            field.deserialize(value)

    def test_serialize(self, field):
        """Fractions become strings, complex numbers pairs"""
        assert field.serialize('x', {'x': Fraction(1, 2)}) == '1/2'
        assert field.serialize('x', {'x': 2j}) == [0.0, 2.0]


class TestCurveSchemas:
    """Test cases for load_curve and dump_curve"""

    @pytest.fixture
    def twisted_cubic(self):
        """Rational curve document"""
        return {
            'kind': 'rational',
            'degree': 3,
            'forms': [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, '1/2']],
        }

    @pytest.fixture
    def quadric_pair(self):
        """Complete intersection document of two quadrics"""
        return {
            'kind': 'ci',
            'fa': {'degree': 2, 'terms': [[[1, 0, 0, 1], 1], [[0, 1, 1, 0], -1]]},
            'fb': {'degree': 2, 'terms': [[[2, 0, 0, 0], 1], [[0, 2, 0, 0], 1], [[0, 0, 2, 0], 1],
                                          [[0, 0, 0, 2], 1]]},
        }

    def test_load_rational(self, twisted_cubic):
        """Rational documents build exact curves"""
        curve = load_curve(twisted_cubic)
        assert isinstance(curve, RationalCurveMap)
        assert curve.field is Field.RATIONAL
        assert curve.forms[3].coeffs[3] == Fraction(1, 2)

    def test_dump_rational(self, twisted_cubic):
        """Dumping writes exact coefficients as strings"""
        payload = dump_curve(load_curve(twisted_cubic))
        assert payload['kind'] == 'rational'
        assert payload['field'] == 'rational'
        assert payload['forms'][3] == ['0', '0', '0', '1/2']

    def test_wrong_coefficient_count(self, twisted_cubic):
        """Each form has degree + 1 coefficients"""
        twisted_cubic['forms'][0] = [1, 0, 0]
        with pytest.raises(ValidationError) as excinfo:
            load_curve(twisted_cubic)
        assert 'forms' in excinfo.value.messages

    def test_float_in_rational_file(self, twisted_cubic):
        """Rational curves need exact coefficients"""
        twisted_cubic['forms'][0][0] = 1.0
        with pytest.raises(ValidationError):
            load_curve(twisted_cubic)

    def test_unknown_field_rejected(self, twisted_cubic):
        """Unknown keys are errors"""
        twisted_cubic['color'] = 'red'
        with pytest.raises(ValidationError):
            load_curve(twisted_cubic)

    def test_kind_mismatch(self, twisted_cubic):
        """An explicit kind must match the document"""
        with pytest.raises(ValidationError):
            load_curve(twisted_cubic, kind='ci')

    def test_not_an_object(self):
        """Curve files hold a JSON object"""
        with pytest.raises(ValidationError):
            load_curve([1, 2, 3])

    def test_load_ci(self, quadric_pair):
        """CI documents build complete intersections"""
        curve = load_curve(quadric_pair)
        assert isinstance(curve, CICurve)
        assert (curve.a, curve.b) == (2, 2)
        assert curve.smoothness == 'unknown'

    def test_dump_ci(self, quadric_pair):
        """Dumped CI documents load back to the same surfaces"""
        curve = load_curve(quadric_pair)
        again = load_curve(dump_curve(curve))
        assert again.fa.terms == curve.fa.terms
        assert again.fb.terms == curve.fb.terms

    def test_surface_term_degree(self, quadric_pair):
        """Terms must match the surface degree"""
        quadric_pair['fa']['terms'].append([[1, 0, 0, 0], 1])
        with pytest.raises(ValidationError):
            load_curve(quadric_pair)

    def test_surface_order(self, quadric_pair):
        """deg fa <= deg fb"""
        quadric_pair['fa'] = {'degree': 3, 'terms': [[[3, 0, 0, 0], 1]]}
        with pytest.raises(ValidationError) as excinfo:
            load_curve(quadric_pair)
        assert 'fa' in excinfo.value.messages


class TestRunConfigSchema:
    """Test cases for command parameter validation"""

    def test_defaults(self):
        """Only the command is required"""
        run = RunConfigSchema().load({'command': 'selftest'})
        assert run['seed'] == 0
        assert run['profile'] == 'default'
        assert run['format'] == 'json'
        assert run['tolerances'] == {}

    def test_degree_order(self):
        """a <= b"""
        with pytest.raises(ValidationError) as excinfo:
            RunConfigSchema().load({'command': 'hypcheck', 'a': 5, 'b': 4})
        assert 'a' in excinfo.value.messages

    def test_csv_only_for_dimension_tables(self):
        """CSV output is a verify-dims feature"""
        RunConfigSchema().load({'command': 'verify-dims', 'format': 'csv'})
        with pytest.raises(ValidationError):
            RunConfigSchema().load({'command': 'secants', 'format': 'csv'})

    def test_tolerance_names(self):
        """Overrides name known tolerances with positive values"""
        run = RunConfigSchema().load({'command': 'secants', 'tolerances': {'rank_gap': '100'}})
        assert run['tolerances'] == {'rank_gap': 100.0}
        with pytest.raises(ValidationError):
            RunConfigSchema().load({'command': 'secants', 'tolerances': {'speed': 1}})
        with pytest.raises(ValidationError):
            RunConfigSchema().load({'command': 'secants', 'tolerances': {'rank_gap': -1}})

    def test_negative_seed(self):
        """Seeds are non-negative"""
        with pytest.raises(ValidationError):
            RunConfigSchema().load({'command': 'selftest', 'seed': -1})


class TestReportSchemas:
    """Test cases for report serialization"""

    def test_infinite_gap_is_null(self):
        """An empty spectrum has no finite gap"""
        report = DimensionReport('Gr', {}, 4, 0, 4, 4, float('inf'), 'match')
        payload = DimensionReportSchema().dump(report)
        assert payload['singular_value_gap'] is None
        assert payload['verdict'] == 'match'
        assert payload == report.to_dict()
