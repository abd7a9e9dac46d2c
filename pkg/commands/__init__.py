"""CLI commands for egn-bounds."""

from commands.base_command import BaseCommand, CommandResult
from commands.cli import COMMANDS, run

__all__ = ["BaseCommand", "CommandResult", "COMMANDS", "run"]
