"""
RunConfig: parsed command-line input plus environment overrides.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from characterization import SweepError, SweepGrid
from constants import (
    CONSTRAINT_TOLERANCE,
    INPUT_NORM_SLACK,
    TOLERANCE_ENV_VAR,
    VIOLATION_TOLERANCE,
)
from qubitmodel import EnsembleParam, InvalidQubitError, QubitSpec, ensemble_state

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("text", "json", "csv")


class InputError(ValueError):
    """Raised for command-line input that cannot be turned into a run."""


def tolerance_from_environment(environ: Optional[Mapping[str, str]] = None) -> Optional[float]:
    """The NOGO_TOL override, or None when it is unset."""
    environ = os.environ if environ is None else environ
    raw = environ.get(TOLERANCE_ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = float(raw)
    except ValueError as e:
        raise InputError(f"{TOLERANCE_ENV_VAR}={raw!r} is not a number") from e
    if not math.isfinite(value) or value <= 0.0:
        raise InputError(f"{TOLERANCE_ENV_VAR} must be a positive number, got {raw!r}")
    return value


def parse_qubit(
    a: Optional[Sequence[float]] = None,
    b: Optional[Sequence[float]] = None,
    ensemble_beta: Optional[float] = None,
    sign: str = "+",
    renormalize: bool = False,
) -> QubitSpec:
    """
    Build a qubit from (re, im) pairs for a and b, or from an ensemble beta.

    Typed amplitudes may drift from unit norm by INPUT_NORM_SLACK; larger
    drifts are rejected unless `renormalize` is set.
    """
    if ensemble_beta is not None:
        if a is not None or b is not None:
            raise InputError("Give either --a/--b or --ensemble-beta, not both")
        if sign not in ("+", "-"):
            raise InputError(f"Sign must be '+' or '-', got {sign!r}")
        try:
            return ensemble_state(EnsembleParam(ensemble_beta, 1 if sign == "+" else -1))
        except InvalidQubitError as e:
            raise InputError(str(e)) from e

    if a is None or b is None:
        raise InputError("Both --a and --b are required when --ensemble-beta is not given")
    amplitude_a, amplitude_b = complex(*a), complex(*b)
    norm = math.hypot(abs(amplitude_a), abs(amplitude_b))
    if not math.isfinite(norm) or norm == 0.0:
        raise InputError("Amplitudes must be finite and not both zero")
    if abs(norm - 1.0) > INPUT_NORM_SLACK and not renormalize:
        raise InputError(
            f"State norm is {norm!r}; pass --renormalize to accept unnormalized amplitudes"
        )
    if abs(norm - 1.0) > INPUT_NORM_SLACK:
        logger.warning("Renormalizing input state with norm %r", norm)
    return QubitSpec.normalized(amplitude_a, amplitude_b)


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs to run, independent of argparse."""

    command: str
    qubit: Optional[QubitSpec] = None
    tolerance: float = VIOLATION_TOLERANCE
    constraint_tolerance: float = CONSTRAINT_TOLERANCE
    output_format: str = "text"
    output_path: Optional[str] = None
    fail_on_violation: bool = False
    grid: Optional[SweepGrid] = None
    trajectory: Optional[str] = None
    points: int = 41
    workers: int = 1

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise InputError(f"Unknown output format {self.output_format!r}")
        for flag, value in (("--tol", self.tolerance), ("--constraint-tol", self.constraint_tolerance)):
            if not math.isfinite(value) or value <= 0.0:
                raise InputError(f"{flag} must be a positive finite number, got {value!r}")
        if self.workers < 1:
            raise InputError("--workers must be at least 1")

    @classmethod
    def from_namespace(
        cls, args: argparse.Namespace, environ: Optional[Mapping[str, str]] = None
    ) -> "RunConfig":
        tolerance = getattr(args, "tol", None)
        if tolerance is None:
            tolerance = tolerance_from_environment(environ)
        if tolerance is None:
            tolerance = VIOLATION_TOLERANCE
        constraint_tolerance = getattr(args, "constraint_tol", None)
        if constraint_tolerance is None:
            constraint_tolerance = tolerance

        qubit = None
        if getattr(args, "a", None) is not None or getattr(args, "b", None) is not None \
                or getattr(args, "ensemble_beta", None) is not None:
            qubit = parse_qubit(
                args.a, args.b, args.ensemble_beta, args.sign, args.renormalize
            )

        grid = None
        if getattr(args, "theta", None) is not None:
            try:
                grid = SweepGrid(args.theta, args.phi, args.chi)
            except SweepError as e:
                raise InputError(str(e)) from e

        return cls(
            command=args.command,
            qubit=qubit,
            tolerance=tolerance,
            constraint_tolerance=constraint_tolerance,
            output_format=getattr(args, "format", None) or "text",
            output_path=getattr(args, "output", None),
            fail_on_violation=getattr(args, "fail_on_violation", False),
            grid=grid,
            trajectory=getattr(args, "trajectory", None),
            points=getattr(args, "points", 41),
            workers=getattr(args, "workers", 1),
        )
