"""
Base Command abstract class for the command-line subcommands.
"""
from __future__ import annotations

import argparse
from abc import ABC, abstractmethod
from typing import Any, Dict, List

from constants import VERSION
from qubitmodel import QubitSpec
from reportwriter import CommandResult, complex_to_pair, format_number
from runconfig import OUTPUT_FORMATS, InputError, RunConfig


class Command(ABC):
    """Abstract base class for all subcommands."""

    name = ""
    help = ""
    default_format = "text"

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Register the subcommand's own flags."""

    @abstractmethod
    def execute(self, config: RunConfig) -> CommandResult:
        """Run the subcommand."""

    def configure(self, parser: argparse.ArgumentParser) -> None:
        """Shared flags, then the subcommand's own."""
        parser.add_argument("--format", choices=OUTPUT_FORMATS, default=self.default_format)
        parser.add_argument("--output", help="write the report to this path instead of stdout")
        parser.add_argument("--tol", type=float, help="violation tolerance (default 1e-9 or $NOGO_TOL)")
        parser.add_argument("--fail-on-violation", action="store_true",
                            help="exit with status 1 when a violation is found")
        self.add_arguments(parser)

    @staticmethod
    def add_state_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--a", nargs=2, type=float, metavar=("RE", "IM"), help="amplitude of |0>")
        parser.add_argument("--b", nargs=2, type=float, metavar=("RE", "IM"), help="amplitude of |1>")
        parser.add_argument("--ensemble-beta", type=float, help="pick the ensemble state with this beta")
        parser.add_argument("--sign", choices=("+", "-"), default="+", help="sign of alpha for --ensemble-beta")
        parser.add_argument("--renormalize", action="store_true", help="accept unnormalized amplitudes")

    @staticmethod
    def require_qubit(config: RunConfig) -> QubitSpec:
        if config.qubit is None:
            raise InputError("A state is required: give --a RE IM --b RE IM or --ensemble-beta")
        return config.qubit

    @staticmethod
    def qubit_document(psi: QubitSpec) -> Dict[str, Any]:
        return {
            "a": complex_to_pair(psi.a),
            "b": complex_to_pair(psi.b),
            "generic": psi.is_generic,
        }

    @staticmethod
    def document(config: RunConfig, **sections: Any) -> Dict[str, Any]:
        document = {
            "version": VERSION,
            "tolerances": {
                "violation": config.tolerance,
                "constraint": config.constraint_tolerance,
            },
        }
        document.update(sections)
        return document

    @staticmethod
    def describe(pairs: Dict[str, Any]) -> List[str]:
        width = max(len(key) for key in pairs)
        lines = []
        for key, value in pairs.items():
            if isinstance(value, complex):
                text = f"{format_number(value.real)} {format_number(value.imag)}i"
            elif isinstance(value, (tuple, list)):
                text = ", ".join(format_number(v) for v in value)
            else:
                text = format_number(value) if not isinstance(value, str) else value
            lines.append(f"{key.ljust(width)}  {text}")
        return lines
