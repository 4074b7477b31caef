"""
Secant Scope Package Initialization
Command-line factory for multisecant analysis of space curves
"""

__version__ = '1.0.0'

import logging  # noqa: E402

import click  # noqa: E402

from .config import Config, config  # noqa: E402


def create_cli(config_class=Config):
    """
    Command-line factory function

    Args:
        config_class: Configuration class used when no --profile is given

    Returns:
        click.Group: Configured command group
    """

    default_profile = next((name for name, cls in config.items() if cls is config_class), 'default')

    @click.group()
    @click.version_option(__version__, prog_name='secant-scope')
    @click.option('--verbose', '-v', is_flag=True, help='Debug logging on stderr.')
    @click.option('--profile', type=click.Choice(list(config)), default=default_profile, show_default=True,
                  help='Configuration profile.')
    @click.pass_context
    def cli(ctx, verbose, profile):
        """Multisecant lines, gonality and stratum dimensions of space curves."""
        configure_logging(verbose)
        ctx.ensure_object(dict)
        ctx.obj['profile'] = profile

    from .commands import register_commands
    register_commands(cli)

    logger = logging.getLogger(__name__)
    logger.debug("Command line created successfully")

    return cli


def configure_logging(verbose: bool = False):
    """
    Configure package logging on stderr

    Args:
        verbose: debug level instead of warnings only
    """

    logger = logging.getLogger(__name__)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)

    # Create formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    if not logger.handlers:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    logger.debug(f"Logging configured - Verbose: {verbose}")
