"""
CommandManager class to register subcommands and dispatch a run to them.
"""
from __future__ import annotations

import argparse
import logging
from typing import Dict, Iterable, Mapping, Optional, Sequence, TextIO

from commands.characterizecommand import CharacterizeCommand
from commands.command import Command
from commands.defectcommand import DefectCommand
from commands.locccommand import LoccCommand
from commands.reportcommand import ReportCommand
from commands.signallingcommand import SignallingCommand
from constants import EXIT_DEGENERATE, EXIT_INPUT_ERROR, EXIT_OK, EXIT_VIOLATION, VERSION
from loccverifier import DegenerateResourceError
from reportwriter import OutputError, ReportWriter
from runconfig import RunConfig

logger = logging.getLogger(__name__)


class CommandManager:
    """Owns the registered subcommands and turns argv into an exit code."""

    def __init__(self, commands: Optional[Iterable[Command]] = None):
        self.commands: Dict[str, Command] = {}
        for command in commands or ():
            self.register(command)

    @classmethod
    def default(cls) -> "CommandManager":
        return cls([
            DefectCommand(),
            SignallingCommand(),
            LoccCommand(),
            CharacterizeCommand(),
            ReportCommand(),
        ])

    def register(self, command: Command) -> None:
        if command.name in self.commands:
            raise ValueError(f"Command {command.name!r} is already registered")
        self.commands[command.name] = command

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="hadamard-nogo",
            description="Numerical no-go checks for a universal Hadamard gate.",
        )
        parser.add_argument("--version", action="version", version=VERSION)
        parser.add_argument("-v", "--verbose", action="store_true", help="log debug output to stderr")
        subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
        subparsers.required = True
        for command in self.commands.values():
            command.configure(subparsers.add_parser(command.name, help=command.help))
        return parser

    def run(
        self,
        argv: Optional[Sequence[str]] = None,
        environ: Optional[Mapping[str, str]] = None,
        stream: Optional[TextIO] = None,
    ) -> int:
        """Parse `argv`, run the chosen command and return the process exit code."""
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.WARNING,
            format="%(levelname)s: %(message)s",
        )

        try:
            config = RunConfig.from_namespace(args, environ)
            result = self.commands[config.command].execute(config)
            ReportWriter(config.output_format, config.output_path).write(result, stream)
        except DegenerateResourceError as e:
            logger.error("%s", e)
            return EXIT_DEGENERATE
        except (ValueError, ArithmeticError, OutputError) as e:
            logger.error("%s", e)
            return EXIT_INPUT_ERROR

        if config.fail_on_violation and result.violation:
            return EXIT_VIOLATION
        return EXIT_OK
