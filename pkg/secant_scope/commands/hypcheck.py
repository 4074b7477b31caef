"""
Hypcheck Command
Numeric hypothesis search for the gonality and Clifford index statements
"""

import logging
from functools import partial
from typing import Optional

import click
from marshmallow import ValidationError

from ..config import Config
from ..schemas.reports import HypothesisSearchSchema
from ..services.gonality import check_ci_hypotheses, check_null_correlation_hypotheses, check_theorem_hypotheses
from ..utils.responses import success_response
from .common import out_option, run_command

logger = logging.getLogger(__name__)


def hypcheck_action(run, config_class, alpha: Optional[int] = None, dc: Optional[int] = None,
                    mode: str = 'gonality', p: Optional[int] = None, d_max: Optional[int] = None,
                    twist: Optional[int] = None):
    if run['a'] is not None and run['b'] is not None:
        search = check_ci_hypotheses(run['a'], run['b'], mode, p, d_max, config_class)
        subject = f"CI({run['a']},{run['b']})"
    elif twist is not None:
        search = check_null_correlation_hypotheses(twist, mode, p, d_max, config_class)
        subject = f"null-correlation N({twist})"
    elif alpha is not None and dc is not None:
        search = check_theorem_hypotheses(alpha, dc, mode, p, None, d_max, config_class)
        subject = f"alpha={alpha}, dC={dc}"
    else:
        raise ValidationError('Give --a and --b, --null-correlation, or --alpha and --dc', 'a')
    data = HypothesisSearchSchema().dump(search)
    passing = search.passing
    verdict = f"PASS at f={passing.f}, s={passing.witness_s}" if passing else 'FAIL'
    return success_response(
        f"{subject}, {mode} conditions: {verdict}",
        data=data,
        command='hypcheck',
        seed=run['seed'],
        config_class=config_class,
        assumptions=['condition a) is cohomological and not checked'],
    )


@click.command('hypcheck')
@click.option('--a', 'a', type=int, default=None, help='Degree of the first surface of a complete intersection.')
@click.option('--b', 'b', type=int, default=None, help='Degree of the second surface.')
@click.option('--null-correlation', 'twist', type=int, default=None,
              help='Twist t of a curve cut out by a section of N(t), N null-correlation.')
@click.option('--alpha', type=int, default=None, help='Canonical twist of a subcanonical curve.')
@click.option('--dc', 'dc', type=int, default=None, help='Degree of the curve.')
@click.option('--mode', type=click.Choice(Config.HYPOTHESIS_MODES), default='gonality', show_default=True)
@click.option('--p', 'p', type=int, default=None, help='Twist p <= alpha for gonality mode.')
@click.option('--d-max', 'd_max', type=int, default=None, help='Divisor degree in condition c), default dC - 3.')
@out_option
@click.pass_context
def hypcheck(ctx, a, b, twist, alpha, dc, mode, p, d_max, output):
    """Search surface degrees f and integers s meeting the numeric conditions."""

    run_command(ctx, {
        'command': 'hypcheck',
        'a': a,
        'b': b,
        'output': output,
    }, partial(hypcheck_action, alpha=alpha, dc=dc, mode=mode, p=p, d_max=d_max, twist=twist))
