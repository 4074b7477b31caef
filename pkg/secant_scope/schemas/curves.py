"""
Curve Schemas
Curve file validation and serialization using Marshmallow
"""

from fractions import Fraction
from numbers import Number
from typing import Union

from marshmallow import (
    RAISE, Schema, ValidationError, fields, post_load, pre_dump, validate, validates_schema
)

from ..services.binary_forms import BinaryForm, Field
from ..services.ci_curves import SMOOTHNESS_STATES, CICurve, SurfacePoly
from ..services.rational_curves import RationalCurveMap
from ..utils.errors import ContractViolation

FIELDS = [f.value for f in Field]
CURVE_KINDS = ['rational', 'ci']


class ScalarField(fields.Field):
    """
    Exact rationals as integers or "p/q" strings, complex numbers as [re, im]

    Floats are read as complex values.
    """

    default_error_messages = {
        'invalid': 'Must be an integer, a "p/q" string, a float or an [re, im] pair',
    }

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else encode_scalar(value)

    def _deserialize(self, value, attr, data, **kwargs) -> Union[Fraction, complex]:
        if isinstance(value, bool):
            raise self.make_error('invalid')
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise self.make_error('invalid')
        if isinstance(value, float):
            return complex(value)
        if isinstance(value, (list, tuple)) and len(value) == 2 \
                and all(isinstance(v, Number) and not isinstance(v, bool) for v in value):
            return complex(value[0], value[1])
        raise self.make_error('invalid')


def encode_scalar(value):
    if isinstance(value, Fraction):
        return str(value)
    value = complex(value)
    return [value.real, value.imag]


def _in_field(values, field: str, where: str):
    if field == Field.RATIONAL.value and any(not isinstance(v, Fraction) for v in values):
        raise ValidationError(f'Rational curves need exact coefficients in {where}', 'field')


class RationalCurveSchema(Schema):
    """Schema for a rational curve file: four binary forms of a common degree"""

    class Meta:
        unknown = RAISE

    kind = fields.Str(required=True, validate=validate.Equal('rational'))
    field = fields.Str(
        validate=validate.OneOf(FIELDS),
        load_default=Field.RATIONAL.value,
        error_messages={'invalid': 'Field must be rational or complex'}
    )
    degree = fields.Int(
        required=True,
        validate=validate.Range(min=3, max=40),
        error_messages={'required': 'Curve degree is required'}
    )
    forms = fields.List(
        fields.List(ScalarField()),
        required=True,
        validate=validate.Length(equal=4),
        error_messages={'required': 'Four forms are required'}
    )

    @validates_schema
    def validate_forms(self, data, **kwargs):
        """Each form carries degree + 1 coefficients in the declared field"""
        for index, coeffs in enumerate(data['forms']):
            if len(coeffs) != data['degree'] + 1:
                raise ValidationError(
                    f"Form {index} needs {data['degree'] + 1} coefficients, got {len(coeffs)}", 'forms'
                )
            _in_field(coeffs, data['field'], f'form {index}')

    @pre_dump
    def from_curve(self, curve: RationalCurveMap, **kwargs):
        return {
            'kind': 'rational',
            'field': curve.field.value,
            'degree': curve.degree,
            'forms': [list(f.coeffs) for f in curve.forms],
        }

    @post_load
    def make_curve(self, data, **kwargs) -> RationalCurveMap:
        field = Field(data['field'])
        try:
            forms = tuple(BinaryForm(data['degree'], tuple(coeffs), field) for coeffs in data['forms'])
            return RationalCurveMap(data['degree'], forms, field)
        except ContractViolation as e:
            raise ValidationError(e.message, 'forms')


class SurfaceSchema(Schema):
    """Schema for a surface polynomial given by [exponent, coefficient] terms"""

    class Meta:
        unknown = RAISE

    degree = fields.Int(required=True, validate=validate.Range(min=1, max=12))
    terms = fields.List(
        fields.Tuple((fields.List(fields.Int(validate=validate.Range(min=0)), validate=validate.Length(equal=4)),
                      ScalarField())),
        required=True,
        validate=validate.Length(min=1),
        error_messages={'required': 'Surface terms are required'}
    )

    @validates_schema
    def validate_terms(self, data, **kwargs):
        """Every exponent vector has the declared total degree"""
        for exponent, _ in data['terms']:
            if sum(exponent) != data['degree']:
                raise ValidationError(f"Term {exponent} is not of degree {data['degree']}", 'terms')

    @pre_dump
    def from_surface(self, surface: SurfacePoly, **kwargs):
        return {'degree': surface.degree, 'terms': [(list(e), c) for e, c in surface.terms]}


class CICurveSchema(Schema):
    """Schema for a complete intersection file: surfaces fa and fb with deg fa <= deg fb"""

    class Meta:
        unknown = RAISE

    kind = fields.Str(required=True, validate=validate.Equal('ci'))
    field = fields.Str(validate=validate.OneOf(FIELDS), load_default=Field.RATIONAL.value)
    fa = fields.Nested(SurfaceSchema, required=True)
    fb = fields.Nested(SurfaceSchema, required=True)
    smoothness = fields.Str(validate=validate.OneOf(SMOOTHNESS_STATES), load_default='unknown')
    notes = fields.List(fields.Str(), load_default=list)

    @validates_schema
    def validate_surfaces(self, data, **kwargs):
        if data['fa']['degree'] > data['fb']['degree']:
            raise ValidationError('Expected deg fa <= deg fb', 'fa')
        for name in ('fa', 'fb'):
            _in_field([c for _, c in data[name]['terms']], data['field'], name)

    @pre_dump
    def from_curve(self, curve: CICurve, **kwargs):
        return {
            'kind': 'ci',
            'field': Field.RATIONAL.value if curve.is_exact else Field.COMPLEX.value,
            'fa': curve.fa,
            'fb': curve.fb,
            'smoothness': curve.smoothness,
            'notes': list(curve.notes),
        }

    @post_load
    def make_curve(self, data, **kwargs) -> CICurve:
        field = Field(data['field'])
        try:
            fa, fb = (SurfacePoly(data[name]['degree'], tuple((tuple(e), c) for e, c in data[name]['terms']), field)
                      for name in ('fa', 'fb'))
            return CICurve(fa, fb, data['smoothness'], tuple(data['notes']))
        except ContractViolation as e:
            raise ValidationError(e.message, 'fa')


CURVE_SCHEMAS = {
    'rational': RationalCurveSchema,
    'ci': CICurveSchema,
}


def load_curve(data: dict, kind: str = None) -> Union[RationalCurveMap, CICurve]:
    """
    Validate a curve document and build the curve

    Args:
        data: parsed JSON document
        kind: expected kind, or None to accept either

    Raises:
        ValidationError: malformed document or a kind other than the expected one
    """

    if not isinstance(data, dict):
        raise ValidationError('Curve file must contain a JSON object')
    found = data.get('kind')
    if found not in CURVE_SCHEMAS:
        raise ValidationError(f'Curve kind must be one of {CURVE_KINDS}', 'kind')
    if kind is not None and found != kind:
        raise ValidationError(f'Expected a {kind} curve, got {found}', 'kind')
    return CURVE_SCHEMAS[found]().load(data)


def dump_curve(curve: Union[RationalCurveMap, CICurve]) -> dict:
    schema = RationalCurveSchema() if isinstance(curve, RationalCurveMap) else CICurveSchema()
    return schema.dump(curve)
