"""
Construct Command
Random curves, optionally with a planted long secant line
"""

import logging
from functools import partial

import click

from ..schemas.curves import dump_curve
from ..schemas.reports import LineSchema, SecantRecordSchema
from ..services.ci_curves import construct_ci_with_secant_line, line_intersection_length, random_smooth_ci
from ..services.rational_curves import construct_with_k_secant, random_rational_curve
from ..utils.responses import success_response
from ..utils.validators import require_parameters
from .common import out_option, run_command, seed_option

logger = logging.getLogger(__name__)


def construct_action(run, config_class, plant: bool = True):
    seed = run['seed']
    notes = []
    if run['kind'] == 'rational':
        require_parameters(run, *(('d', 'k') if plant else ('d',)))
        if plant:
            curve, record = construct_with_k_secant(run['d'], run['k'], seed, config_class)
            planted = SecantRecordSchema().dump(record)
        else:
            curve, planted = random_rational_curve(run['d'], seed, config_class), None
        message = f"Degree-{curve.degree} rational curve"
    else:
        require_parameters(run, 'a', 'b')
        if plant:
            curve, line = construct_ci_with_secant_line(run['a'], run['b'], seed, config_class)
            planted = {'line': LineSchema().dump(line), 'length': line_intersection_length(curve, line)}
        else:
            curve, planted = random_smooth_ci(run['a'], run['b'], seed, config_class), None
        notes = list(curve.notes)
        message = f"Complete intersection CI({curve.a},{curve.b})"
    logger.info(f"{message} constructed from seed {seed}")
    return success_response(
        message,
        data={'curve': dump_curve(curve), 'planted': planted},
        command='construct',
        seed=seed,
        config_class=config_class,
        assumptions=notes,
    )


@click.command('construct')
@click.argument('kind', type=click.Choice(['rational', 'ci']))
@click.option('--d', 'd', type=int, default=None, help='Degree of a rational curve.')
@click.option('--k', 'k', type=int, default=None, help='Length of the planted secant of a rational curve.')
@click.option('--a', 'a', type=int, default=None, help='Degree of the first surface.')
@click.option('--b', 'b', type=int, default=None, help='Degree of the second surface.')
@click.option('--plant/--no-plant', default=True, show_default=True, help='Plant a long secant line.')
@seed_option
@out_option
@click.pass_context
def construct(ctx, kind, d, k, a, b, plant, seed, output):
    """Emit a random curve file, with a planted k-secant (rational) or b-secant (ci) line."""

    run_command(ctx, {
        'command': 'construct',
        'kind': kind,
        'd': d,
        'k': k,
        'a': a,
        'b': b,
        'seed': seed,
        'output': output,
    }, partial(construct_action, plant=plant))
