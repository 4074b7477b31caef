"""
Command Utilities
Shared options, parameter validation and report writing for the commands
"""

import csv
import io
import logging
from typing import Any, Callable, Dict, Iterable, Sequence

import click
from marshmallow import ValidationError

from ..services.secant_search import SEARCH_MODES
from ..utils.errors import SecantScopeError
from ..utils.responses import canonical_json, exception_response, validation_error_response
from ..utils.validators import config_with_overrides, validate_run_config

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['label', 'params', 'ambient_dim', 'jacobian_rank', 'estimated_dim', 'expected_dim',
               'singular_value_gap', 'verdict']

seed_option = click.option('--seed', default=0, show_default=True, type=int, help='Base seed of the run.')
out_option = click.option('--out', 'output', default=None, help='Report file; stdout when omitted.')
mode_option = click.option('--mode', type=click.Choice(SEARCH_MODES), default='auto', show_default=True,
                           help='Secant search mode.')
tolerance_option = click.option('--tol', 'tolerances', multiple=True, metavar='NAME=VALUE',
                                help='Tolerance override, repeatable.')


def parse_tolerances(values: Iterable[str]) -> Dict[str, Any]:
    parsed: Dict[str, Any] = {}
    for item in values:
        name, sep, value = item.partition('=')
        if not sep:
            raise ValidationError(f"Tolerance override {item!r} is not NAME=VALUE", 'tolerances')
        parsed[name.strip()] = value.strip()
    return parsed


def render_csv(rows: Sequence[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for row in rows:
        flat = dict(row)
        flat['params'] = ';'.join(f'{k}={v}' for k, v in sorted(row['params'].items()))
        writer.writerow({key: flat.get(key) for key in CSV_COLUMNS})
    return buffer.getvalue()


def write_report(text: str, output: str = None):
    if output is None:
        click.echo(text, nl=False)
        return
    with open(output, 'w', encoding='utf-8', newline='') as handle:
        handle.write(text)
    logger.info(f"Report written to {output}")


def run_command(ctx: click.Context, raw: Dict[str, Any],
                action: Callable[[Dict[str, Any], type], Dict[str, Any]]):
    """
    Validate parameters, run an action and write its report

    Validation failures exit with 2, tool errors with their family's exit
    code; the error report goes to stderr.

    Args:
        ctx: click context carrying the profile name
        raw: command parameters, tolerances as NAME=VALUE strings
        action: callable taking (validated parameters, config class) and
            returning a success report
    """

    command = raw['command']
    try:
        raw = dict(raw, tolerances=parse_tolerances(raw.get('tolerances', ())),
                   profile=ctx.obj.get('profile', 'default'))
        run = validate_run_config(raw)
        config_class = config_with_overrides(run['profile'], run['tolerances'])
        report = action(run, config_class)
    except ValidationError as e:
        messages = e.messages if isinstance(e.messages, (dict, list)) else str(e.messages)
        click.echo(canonical_json(validation_error_response(messages, command=command)), err=True, nl=False)
        ctx.exit(2)
    except SecantScopeError as e:
        logger.error(f"{command} failed: {e.message}")
        click.echo(canonical_json(exception_response(e, command)), err=True, nl=False)
        ctx.exit(e.exit_code)

    if run['format'] == 'csv':
        write_report(render_csv(report['data']['rows']), run['output'])
    else:
        write_report(canonical_json(report), run['output'])
