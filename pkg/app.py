#!/usr/bin/env python3
"""
Secant Scope
Main command-line entry point
"""

from secant_scope import create_cli
from secant_scope.config import Config


def main():
    """Main command-line entry point"""

    cli = create_cli(Config)
    cli(prog_name='secant-scope')


if __name__ == '__main__':
    main()
