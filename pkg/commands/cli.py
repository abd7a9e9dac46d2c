"""Command-line entry point for egn-bounds.

Usage:
    egn-bounds project --state ghz3.json
    egn-bounds bound --state state.json --m 3 [--no-optimize]
    egn-bounds verify-enip --n 5
    egn-bounds region --n 5 --m 4
    egn-bounds ghz-table --n-min 3 --n-max 7
    egn-bounds self-check --quick

Each command writes one JSON document (CSV for ghz-table) to standard
output; logs and the self-check summary go to standard error. Exit codes
are 0 on success, 1 on domain errors or failed checks, 2 on usage errors.
"""

import argparse
import sys
from typing import Dict, List, Optional, TextIO, Type

from commands.base_command import BaseCommand, CommandResult
from commands.geometry_commands import RegionCommand, VerifyEnipCommand
from commands.report_commands import GhzTableCommand, SelfCheckCommand
from commands.state_commands import BoundCommand, ProjectCommand
from utils.formatting import dumps
from utils.logger import set_level

COMMANDS: Dict[str, Type[BaseCommand]] = {
    command.name: command
    for command in (
        ProjectCommand,
        BoundCommand,
        VerifyEnipCommand,
        RegionCommand,
        GhzTableCommand,
        SelfCheckCommand,
    )
}


def build_parser() -> argparse.ArgumentParser:
    """Parser with one sub-command per registered command."""
    parser = argparse.ArgumentParser(
        prog="egn-bounds",
        description="Certified lower bounds on M-inseparable multiqubit entanglement",
    )
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        help="console log level (default from LOG_LEVEL)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, command in COMMANDS.items():
        command.add_arguments(subparsers.add_parser(name, help=command.help))
    return parser


def emit(result: CommandResult, stream: TextIO) -> None:
    """Write a command's document to a stream."""
    payload = result.payload()
    if isinstance(payload, str):
        stream.write(payload)
    else:
        stream.write(dumps(payload) + "\n")


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse arguments, run one command and print its output.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])
        stdout: Stream for the command's document (defaults to sys.stdout)

    Returns:
        Process exit code
    """
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help
        return e.code if isinstance(e.code, int) else 2

    command = COMMANDS[args.command]()
    if args.log_level:
        set_level(args.log_level)
    result = command.execute(args)
    emit(result, stdout)
    return result.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
