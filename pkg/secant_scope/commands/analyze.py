"""
Analyze Command
Secant order, gonality and Clifford index of a curve file
"""

import logging
from functools import partial

import click

from ..schemas.reports import GonalityReportSchema
from ..services.ci_curves import smoothness_screen
from ..services.gonality import analyze_curve
from ..services.rational_curves import validate_embedding
from ..services.secant_search import SecantSearchOptions
from ..utils.errors import ContractViolation
from ..utils.responses import input_hash, success_response
from ..utils.validators import read_curve_file
from .common import mode_option, out_option, run_command, seed_option, tolerance_option

logger = logging.getLogger(__name__)


def analyze_action(run, config_class, mode: str = 'auto', non_bielliptic: bool = False,
                   skip_smoothness: bool = False):
    """
    Load the curve, check it, and build the gonality report

    Rational curves must pass validate_embedding; complete intersections of
    unknown smoothness are screened first unless screening is skipped.
    """

    curve, document = read_curve_file(run['inputs'][0], run['kind'])
    seed = run['seed']
    extra = {}
    assumptions = []
    if run['kind'] == 'rational':
        verdict = validate_embedding(curve, seed=seed, config_class=config_class)
        if verdict.status == 'invalid':
            raise ContractViolation("curve is not an embedding", verdict.to_dict())
        if verdict.status == 'inconclusive':
            assumptions.append('embedding check inconclusive: ' + '; '.join(verdict.reasons))
        extra['embedding'] = verdict.to_dict()
    elif curve.smoothness == 'unknown' and not skip_smoothness:
        smooth, status = smoothness_screen(curve, seed=seed, config_class=config_class)
        if not smooth:
            raise ContractViolation("complete intersection is singular", {'smoothness': status})
        curve = curve.with_smoothness(status)

    opts = SecantSearchOptions.from_config(config_class, seed=seed, mode=mode)
    report = analyze_curve(curve, opts, non_bielliptic, config_class)
    data = GonalityReportSchema().dump(report)
    data.update(extra)
    return success_response(
        f"Secant order {report.l} ({report.status})",
        data=data,
        command='analyze',
        seed=seed,
        config_class=config_class,
        digest=input_hash([document]),
        assumptions=assumptions + report.assumptions,
    )


@click.command('analyze')
@click.argument('kind', type=click.Choice(['rational', 'ci']))
@click.option('--input', 'input_path', required=True, help='Curve file (JSON).')
@seed_option
@mode_option
@click.option('--non-bielliptic', is_flag=True, help='Assert that the curve is not bielliptic.')
@click.option('--skip-smoothness', is_flag=True, help='Do not screen complete intersections for singularities.')
@tolerance_option
@out_option
@click.pass_context
def analyze(ctx, kind, input_path, seed, mode, non_bielliptic, skip_smoothness, tolerances, output):
    """Secants and gonality report of a rational or complete-intersection curve."""

    run_command(ctx, {
        'command': 'analyze',
        'kind': kind,
        'inputs': [input_path],
        'seed': seed,
        'tolerances': tolerances,
        'output': output,
    }, partial(analyze_action, mode=mode, non_bielliptic=non_bielliptic, skip_smoothness=skip_smoothness))
