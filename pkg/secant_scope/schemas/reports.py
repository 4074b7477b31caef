"""
Report Schemas
Run configuration validation and report serialization using Marshmallow
"""

import math

from marshmallow import RAISE, Schema, ValidationError, fields, validate, validates_schema

from ..config import config
from .curves import ScalarField, encode_scalar

COMMANDS = ['analyze', 'construct', 'secants', 'verify-dims', 'verify-counts', 'hypcheck', 'selftest']
FORMATS = ['json', 'csv']

# CLI tolerance names and the Config attributes they override
TOLERANCE_OVERRIDES = {
    'newton_residual': 'NEWTON_RESIDUAL',
    'residual_tolerance': 'RESIDUAL_TOLERANCE',
    'rank_cutoff': 'RANK_CUTOFF',
    'rank_gap': 'RANK_GAP',
    'subresultant_threshold': 'SUBRESULTANT_ZERO_THRESHOLD',
    'dedup_tolerance': 'SOLUTION_DEDUP_TOLERANCE',
    'path_failure_cap': 'PATH_FAILURE_CAP',
}


class RunConfigSchema(Schema):
    """Schema for the parameters of one command run"""

    class Meta:
        unknown = RAISE
        ordered = True

    command = fields.Str(
        required=True,
        validate=validate.OneOf(COMMANDS),
        error_messages={'required': 'Command is required'}
    )
    inputs = fields.List(fields.Str(), load_default=list)
    kind = fields.Str(validate=validate.OneOf(['rational', 'ci']), allow_none=True, load_default=None)
    k = fields.Int(validate=validate.Range(min=1), allow_none=True, load_default=None)
    d = fields.Int(validate=validate.Range(min=3, max=40), allow_none=True, load_default=None)
    a = fields.Int(validate=validate.Range(min=1, max=12), allow_none=True, load_default=None)
    b = fields.Int(validate=validate.Range(min=1, max=12), allow_none=True, load_default=None)
    seed = fields.Int(
        validate=validate.Range(min=0, max=2 ** 64 - 1),
        load_default=0,
        error_messages={'invalid': 'Seed must be a non-negative 64-bit integer'}
    )
    tolerances = fields.Dict(
        keys=fields.Str(validate=validate.OneOf(list(TOLERANCE_OVERRIDES))),
        values=fields.Float(validate=validate.Range(min=0, min_inclusive=False)),
        load_default=dict
    )
    profile = fields.Str(validate=validate.OneOf(list(config)), load_default='default')
    output = fields.Str(allow_none=True, load_default=None)
    format = fields.Str(validate=validate.OneOf(FORMATS), load_default='json')

    @validates_schema
    def validate_parameters(self, data, **kwargs):
        """Cross-field checks that do not need a curve"""
        if data['a'] is not None and data['b'] is not None and data['a'] > data['b']:
            raise ValidationError('Expected a <= b', 'a')
        if data['format'] == 'csv' and data['command'] != 'verify-dims':
            raise ValidationError('CSV output is only available for dimension tables', 'format')


def _finite_or_none(value):
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return None
    return value


class LineSchema(Schema):
    field = fields.Function(lambda line: line.field.value)
    plucker = fields.List(ScalarField())
    frame = fields.List(fields.List(ScalarField()))
    dual_frame = fields.List(fields.List(ScalarField()))


class DivisorSchema(Schema):
    points = fields.Method('dump_points')
    degree = fields.Int()

    def dump_points(self, divisor):
        return [{'point': [encode_scalar(p.s), encode_scalar(p.t)], 'multiplicity': m} for p, m in divisor.points]


class SecantRecordSchema(Schema):
    """Schema for a found secant line and its intersection divisor"""

    line = fields.Nested(LineSchema)
    divisor = fields.Nested(DivisorSchema)
    length = fields.Int()
    proper = fields.Bool()
    maximal = fields.Bool()
    reduced = fields.Bool()
    residual = fields.Float()


class DimensionReportSchema(Schema):
    label = fields.Str()
    params = fields.Dict(keys=fields.Str(), values=fields.Int())
    ambient_dim = fields.Int()
    jacobian_rank = fields.Int()
    estimated_dim = fields.Int()
    expected_dim = fields.Int()
    singular_value_gap = fields.Function(lambda r: _finite_or_none(r.singular_value_gap))
    verdict = fields.Str()


class HypothesisReportSchema(Schema):
    mode = fields.Str()
    alpha = fields.Int()
    f = fields.Int()
    p = fields.Int()
    dC = fields.Int()
    d_max = fields.Int()
    cond_a_status = fields.Str()
    cond_b = fields.Bool()
    cond_c = fields.Bool()
    witness_s = fields.Int(allow_none=True)
    cond_d = fields.Bool()
    lower_bound = fields.Int()
    overall = fields.Bool()


class HypothesisSearchSchema(Schema):
    mode = fields.Str()
    alpha = fields.Int()
    dC = fields.Int()
    overall = fields.Bool()
    passing = fields.Nested(HypothesisReportSchema, allow_none=True)
    reports = fields.List(fields.Nested(HypothesisReportSchema))


class GonalityReportSchema(Schema):
    """Schema for the secant order and the derived gonality and Clifford index"""

    kind = fields.Str()
    dC = fields.Int()
    l = fields.Int()  # noqa: E741
    genus = fields.Int(allow_none=True)
    gonality = fields.Int(allow_none=True)
    clifford = fields.Int(allow_none=True)
    clifford_case = fields.Str(allow_none=True)
    pencil_degree_bound = fields.Int(allow_none=True)
    status = fields.Str()
    theorem_layer = fields.Bool()
    assumptions = fields.List(fields.Str())
    witnesses = fields.List(fields.Nested(SecantRecordSchema))
    hypotheses = fields.Nested(HypothesisSearchSchema, allow_none=True)
    complete = fields.Bool()
