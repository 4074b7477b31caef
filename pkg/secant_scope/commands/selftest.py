"""
Selftest Command
Runs the fast property suites in-process and reports their tallies
"""

import logging
from functools import partial
from typing import Sequence

import click

from ..services.selftest import SUITES, run_suites
from ..utils.errors import AmbiguousVerdict
from ..utils.responses import success_response
from .common import out_option, run_command, seed_option

logger = logging.getLogger(__name__)


def selftest_action(run, config_class, suites: Sequence[str] = tuple(SUITES)):
    results = run_suites(suites, run['seed'])
    failed = [r.name for r in results if not r.ok]
    data = {'suites': [r.to_dict() for r in results], 'ok': not failed}
    if failed:
        raise AmbiguousVerdict(f"property suites failed: {', '.join(failed)}", data)
    return success_response(
        f"{len(results)} property suites passed",
        data=data,
        command='selftest',
        seed=run['seed'],
        config_class=config_class,
    )


@click.command('selftest')
@click.option('--suite', 'suites', type=click.Choice(list(SUITES)), multiple=True,
              help='Suite to run, repeatable; all when omitted.')
@seed_option
@out_option
@click.pass_context
def selftest(ctx, suites, seed, output):
    """Alignment, subresultant, conditions-imposed and formula property suites."""

    run_command(ctx, {
        'command': 'selftest',
        'seed': seed,
        'output': output,
    }, partial(selftest_action, suites=tuple(suites) or tuple(SUITES)))
