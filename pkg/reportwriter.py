"""
ReportWriter: canonical JSON, CSV and text rendering of command results,
and writing them to a file or standard output.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, TextIO

import numpy as np
from numpy.typing import ArrayLike

logger = logging.getLogger(__name__)


class OutputError(OSError):
    """Raised when a report cannot be written."""


def format_number(value: Any) -> str:
    """Shortest decimal that round-trips to the same float; booleans as true/false."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def matrix_to_pairs(matrix: ArrayLike) -> List[List[List[float]]]:
    """Row-major [re, im] pairs."""
    array = np.asarray(matrix, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in array]


def vector_to_pairs(vector: ArrayLike) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vector, dtype=np.complex128).ravel()]


def complex_to_pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def canonical_json(document: Any) -> str:
    """Sorted keys and repr floats, so parsing and re-dumping is byte-identical."""
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n"


def format_matrix(matrix: ArrayLike) -> List[str]:
    array = np.asarray(matrix, dtype=np.complex128)
    return ["  [" + ", ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in row) + "]" for row in array]


@dataclass
class Table:
    header: Sequence[str]
    rows: List[Sequence[Any]] = field(default_factory=list)


@dataclass
class CommandResult:
    """What a command produced: a JSON document, text lines and an optional table."""

    document: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    table: Optional[Table] = None
    violation: bool = False


class ReportWriter:
    """Renders command results and writes them out."""

    DEFAULT_FORMAT = "text"

    def __init__(self, output_format: Optional[str] = None, output_path: Optional[str] = None):
        self.output_format = output_format or self.DEFAULT_FORMAT
        self.output_path = output_path

    def render_csv(self, table: Table) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([format_number(value) for value in row])
        return buffer.getvalue()

    def render(self, result: CommandResult) -> str:
        if self.output_format == "json":
            return canonical_json(result.document)
        if self.output_format == "csv" or (result.table is not None and not result.lines):
            if result.table is None:
                raise OutputError("This command has no tabular output; use text or json")
            return self.render_csv(result.table)
        return "\n".join(result.lines) + "\n"

    def write(self, result: CommandResult, stream: Optional[TextIO] = None) -> None:
        """Write the rendered report to the output path, or to `stream` (stdout by default)."""
        text = self.render(result)
        if self.output_path is None:
            (stream or sys.stdout).write(text)
            return
        try:
            with open(self.output_path, "w", encoding="utf-8", newline="") as f:
                f.write(text)
        except (IOError, OSError) as e:
            logger.warning("Could not write report to %s: %s", self.output_path, e)
            raise OutputError(f"Could not write report to {self.output_path}: {e}") from e
        logger.info("Wrote %s report to %s", self.output_format, self.output_path)

    @staticmethod
    def load(path: str) -> Dict[str, Any]:
        """Read back a JSON report."""
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except (IOError, OSError, json.JSONDecodeError) as e:
            raise OutputError(f"Could not read report {path}: {e}") from e
