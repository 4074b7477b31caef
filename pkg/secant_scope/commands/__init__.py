"""
Commands Package Initialization
Sub-command registration for the command line
"""

import logging


def register_commands(cli):
    """
    Register all sub-commands with the command group

    Args:
        cli: click group created by create_cli
    """

    logger = logging.getLogger(__name__)

    try:
        from .analyze import analyze
        from .construct import construct
        from .hypcheck import hypcheck
        from .secants import secants
        from .selftest import selftest
        from .verify import verify

        for command in (analyze, construct, secants, verify, hypcheck, selftest):
            cli.add_command(command)

        logger.debug("Commands registered successfully")

    except ImportError as e:
        logger.error(f"Failed to import commands: {e}")
        raise
