"""
Sweeps of the qubit state space that classify every state by both
verdicts, plus Bloch trajectories of the consistent ensemble and of its
orthogonal complements.
"""
from __future__ import annotations

import cmath
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache, partial
from typing import Iterator, List, Optional, Tuple

import numpy as np

from constants import (
    CONSTRAINT_TOLERANCE,
    NORM_TOLERANCE,
    REFINE_BASIN,
    SWEEP_BLOCK_POINTS,
    SWEEP_MAX_POINTS,
    VIOLATION_TOLERANCE,
)
from loccverifier import (
    constraint_residual,
    constraint_residuals,
    entropies_after_locc,
    residual_entropies,
)
from numericcore import inverse_binary_entropy
from qubitmodel import (
    EnsembleParam,
    InvalidQubitError,
    QubitSpec,
    bloch_coordinates,
    bloch_vectors,
    ensemble_deviations,
    ensemble_state,
    in_ensemble,
    orthogonal_complement,
)
from signallingverifier import signalling_distances

logger = logging.getLogger(__name__)

ENSEMBLE = "ensemble"
COMPLEMENT = "complement"
TRAJECTORY_KINDS = (ENSEMBLE, COMPLEMENT)


class SweepError(ValueError):
    """Raised for sweep requests that are malformed or too large."""


@dataclass(frozen=True)
class SweepGrid:
    """
    Regular grid over (theta, phi, chi) with
    a = cos(theta/2) e^{i chi}, b = sin(theta/2) e^{i (chi + phi)}.

    theta covers [0, pi] inclusive; phi and chi cover [0, 2 pi) exclusive.
    """

    theta_points: int
    phi_points: int
    chi_points: int = 1

    MIN_THETA_POINTS = 2
    MIN_PHI_POINTS = 2
    MIN_CHI_POINTS = 1

    def __post_init__(self):
        if self.theta_points < self.MIN_THETA_POINTS or self.phi_points < self.MIN_PHI_POINTS:
            raise SweepError("theta and phi need at least 2 points each")
        if self.chi_points < self.MIN_CHI_POINTS:
            raise SweepError("chi needs at least 1 point")
        if self.size > SWEEP_MAX_POINTS:
            raise SweepError(f"Grid of {self.size} points exceeds the limit of {SWEEP_MAX_POINTS}")

    @property
    def size(self) -> int:
        return self.theta_points * self.phi_points * self.chi_points

    def thetas(self) -> np.ndarray:
        return np.linspace(0.0, math.pi, self.theta_points)

    def phis(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.phi_points) / self.phi_points

    def chis(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.chi_points) / self.chi_points

    def row(self, theta: float) -> Iterator[Tuple[float, float, float]]:
        for phi in self.phis():
            for chi in self.chis():
                yield float(theta), float(phi), float(chi)

    def points(self) -> Iterator[Tuple[float, float, float]]:
        """Grid points in theta-major, then phi, then chi order."""
        for theta in self.thetas():
            yield from self.row(theta)


def qubit_at(theta: float, phi: float, chi: float) -> QubitSpec:
    a = math.cos(theta / 2.0) * cmath.exp(1j * chi)
    b = math.sin(theta / 2.0) * cmath.exp(1j * (chi + phi))
    return QubitSpec(a, b)


def grid_parameters(psi: QubitSpec) -> Tuple[float, float, float]:
    """Inverse of `qubit_at`; phi and chi are reduced to [0, 2 pi)."""
    theta = 2.0 * math.acos(min(1.0, abs(psi.a)))
    chi = cmath.phase(psi.a) if abs(psi.a) > NORM_TOLERANCE else 0.0
    phi = cmath.phase(psi.b) - chi if abs(psi.b) > NORM_TOLERANCE else 0.0
    return theta, phi % (2.0 * math.pi), chi % (2.0 * math.pi)


@lru_cache(maxsize=None)
def deviation_tolerance(tol: float = VIOLATION_TOLERANCE) -> float:
    """
    Distance from the ensemble at which the created entropy reaches `tol`.

    Entropy and constraint residual grow quadratically with the distance
    from the ensemble while the trace distance and the component offsets
    grow linearly. Linear indicators are therefore compared with
    sqrt(lambda) where binary_entropy(lambda) = tol.
    """
    return math.sqrt(inverse_binary_entropy(tol))


@dataclass(frozen=True)
class ClassificationRecord:
    theta: float
    phi: float
    chi: float
    x: float
    y: float
    z: float
    signalling_distance: float
    entropy_after: float
    constraint_residual: float
    residual_entropy: float
    ensemble_deviation: float
    in_ensemble: bool
    generic: bool

    def indicators_agree(
        self,
        tol: float = VIOLATION_TOLERANCE,
        constraint_tol: float = CONSTRAINT_TOLERANCE,
    ) -> bool:
        """True when the distance, entropy, residual and ensemble tests all agree."""
        linear = deviation_tolerance(tol)
        flags = {
            self.signalling_distance <= linear,
            self.entropy_after <= tol,
            self.residual_entropy <= constraint_tol,
            self.ensemble_deviation <= linear,
        }
        return len(flags) == 1


def classify_many(
    a: np.ndarray,
    b: np.ndarray,
    params: np.ndarray,
    tol: float = VIOLATION_TOLERANCE,
) -> List[ClassificationRecord]:
    """
    Classify the qubits (a[i], b[i]) in one vectorized pass.

    `params` holds the (theta, phi, chi) of each row as recorded. Rows with
    b = 0 go through the degenerate resource like every other row.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    bloch = bloch_vectors(a, b)
    distances = signalling_distances(a, b)
    entropy_after = entropies_after_locc(a, b)
    residuals = constraint_residuals(a, b)
    implied = residual_entropies(a, b)
    deviations = ensemble_deviations(a, b)
    linear = deviation_tolerance(tol)
    generic = (np.abs(a) > NORM_TOLERANCE) & (np.abs(b) > NORM_TOLERANCE)
    return [
        ClassificationRecord(
            theta=float(params[i, 0]),
            phi=float(params[i, 1]),
            chi=float(params[i, 2]),
            x=float(bloch[i, 0]),
            y=float(bloch[i, 1]),
            z=float(bloch[i, 2]),
            signalling_distance=float(distances[i]),
            entropy_after=float(entropy_after[i]),
            constraint_residual=float(residuals[i]),
            residual_entropy=float(implied[i]),
            ensemble_deviation=float(deviations[i]),
            in_ensemble=bool(deviations[i] <= linear),
            generic=bool(generic[i]),
        )
        for i in range(a.size)
    ]


def classify(
    psi: QubitSpec,
    params: Optional[Tuple[float, float, float]] = None,
    tol: float = VIOLATION_TOLERANCE,
) -> ClassificationRecord:
    theta, phi, chi = grid_parameters(psi) if params is None else params
    return classify_many(np.array([psi.a]), np.array([psi.b]), np.array([[theta, phi, chi]]), tol)[0]


def _classify_block(params: np.ndarray, tol: float) -> List[ClassificationRecord]:
    theta, phi, chi = params[:, 0], params[:, 1], params[:, 2]
    a = np.cos(theta / 2.0) * np.exp(1j * chi)
    b = np.sin(theta / 2.0) * np.exp(1j * (chi + phi))
    return classify_many(a, b, params, tol)


def _grid_block(grid: SweepGrid, start: int, stop: int) -> np.ndarray:
    # Flat index i maps to (theta, phi, chi) in theta-major order.
    index = np.arange(start, stop)
    rest, chi = np.divmod(index, grid.chi_points)
    theta, phi = np.divmod(rest, grid.phi_points)
    return np.stack([grid.thetas()[theta], grid.phis()[phi], grid.chis()[chi]], axis=1)


def sweep(
    grid: SweepGrid,
    workers: int = 1,
    tol: float = VIOLATION_TOLERANCE,
    block_size: int = SWEEP_BLOCK_POINTS,
) -> List[ClassificationRecord]:
    """
    Classify every grid point, `block_size` points per vectorized pass.

    With `workers` > 1 blocks are spread over a process pool; every record
    depends on its own point only and the merge keeps grid order, so the
    output is identical to a serial run.
    """
    logger.info("Sweeping %d grid points with %d worker(s)", grid.size, workers)
    if workers > 1:
        block_size = min(block_size, -(-grid.size // workers))
    blocks = [_grid_block(grid, start, min(start + block_size, grid.size))
              for start in range(0, grid.size, block_size)]
    if workers <= 1:
        return [record for block in blocks for record in _classify_block(block, tol)]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        chunks = executor.map(partial(_classify_block, tol=tol), blocks)
        return [record for chunk in chunks for record in chunk]


def _ensemble_params(points: int) -> Iterator[EnsembleParam]:
    if points < 2:
        raise SweepError("At least 2 points are needed along the ensemble curve")
    for sign in (1, -1):
        for beta in np.linspace(-1.0, 1.0, points):
            yield EnsembleParam(float(beta), sign)


def sweep_ensemble(points: int, tol: float = VIOLATION_TOLERANCE) -> List[ClassificationRecord]:
    """Classification records sampled on the consistent ensemble, both alpha signs."""
    qubits = [ensemble_state(param) for param in _ensemble_params(points)]
    a = np.array([psi.a for psi in qubits])
    b = np.array([psi.b for psi in qubits])
    params = np.array([grid_parameters(psi) for psi in qubits])
    return classify_many(a, b, params, tol)


@dataclass(frozen=True)
class TrajectoryPoint:
    beta: float
    x: float
    y: float
    z: float


def trajectory(points: int, which: str = ENSEMBLE) -> List[TrajectoryPoint]:
    """
    Bloch points of the ensemble (or of its complements) for beta uniform on
    [-1, 1], first for alpha >= 0 and then for alpha <= 0.
    """
    if which not in TRAJECTORY_KINDS:
        raise SweepError(f"Unknown trajectory {which!r}; expected one of {TRAJECTORY_KINDS}")
    result = []
    for param in _ensemble_params(points):
        psi = ensemble_state(param)
        if which == COMPLEMENT:
            psi = orthogonal_complement(psi)
        result.append(TrajectoryPoint(param.beta, *bloch_coordinates(psi)))
    return result


def zero_set_refine(seed: QubitSpec, tol: float = NORM_TOLERANCE) -> QubitSpec:
    """
    Project a nearly consistent state onto the ensemble: beta_b is dropped,
    both real parts are replaced by their mean, and the result renormalized.
    """
    residual = constraint_residual(seed)
    if residual >= REFINE_BASIN:
        raise SweepError(
            f"Seed residual {residual:.3g} is outside the refinement basin ({REFINE_BASIN})"
        )
    mean = 0.5 * (seed.alpha_a + seed.alpha_b)
    try:
        refined = QubitSpec.normalized(complex(mean, seed.beta_a), complex(mean, 0.0))
    except InvalidQubitError as e:
        raise SweepError(f"Seed projects onto the zero vector: {e}") from e
    if not in_ensemble(refined, tol):
        raise SweepError(f"Refined state {refined} still misses the ensemble by more than {tol}")
    return refined
