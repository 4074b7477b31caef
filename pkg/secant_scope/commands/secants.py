"""
Secants Command
k-secant line enumeration for a curve file
"""

import logging
from functools import partial

import click

from ..schemas.reports import SecantRecordSchema
from ..services.ci_curves import CICurve, find_k_secants_ci
from ..services.rational_curves import classical_quadrisecant_count, find_k_secants
from ..services.secant_search import SecantSearchOptions
from ..utils.responses import input_hash, success_response
from ..utils.validators import read_curve_file, require_parameters, validate_secant_length
from .common import mode_option, out_option, run_command, seed_option, tolerance_option

logger = logging.getLogger(__name__)


def secants_action(run, config_class, mode: str = 'auto'):
    require_parameters(run, 'k')
    curve, document = read_curve_file(run['inputs'][0])
    k = run['k']
    validate_secant_length(curve, k)
    opts = SecantSearchOptions.from_config(config_class, seed=run['seed'], mode=mode)
    complete = opts.lists_every_line or k >= curve.degree
    if isinstance(curve, CICurve):
        records = find_k_secants_ci(curve, k, opts)
        kind = 'ci'
        # lines of length above a lie on Fa and come from a complete solve
        complete = complete or k > curve.a
    else:
        records = find_k_secants(curve, k, opts)
        kind = 'rational'
    data = {
        'kind': kind,
        'degree': curve.degree,
        'k': k,
        'count': len(records),
        'complete': complete,
        'records': SecantRecordSchema(many=True).dump(records),
    }
    if kind == 'rational' and k == 4 and curve.degree >= 5:
        data['classical_count'] = classical_quadrisecant_count(curve.degree)
    return success_response(
        f"{len(records)} lines of length >= {k}" + ('' if complete else ' (witness search, partial)'),
        data=data,
        command='secants',
        seed=run['seed'],
        config_class=config_class,
        digest=input_hash([document]),
        assumptions=[] if complete else ['witness-mode search: the line set may be partial'],
    )


@click.command('secants')
@click.option('--input', 'input_path', required=True, help='Curve file (JSON).')
@click.option('--k', 'k', type=int, required=True, help='Minimum intersection length.')
@seed_option
@mode_option
@tolerance_option
@out_option
@click.pass_context
def secants(ctx, input_path, k, seed, mode, tolerances, output):
    """List the lines meeting a curve in a scheme of length at least k."""

    run_command(ctx, {
        'command': 'secants',
        'inputs': [input_path],
        'k': k,
        'seed': seed,
        'tolerances': tolerances,
        'output': output,
    }, partial(secants_action, mode=mode))
