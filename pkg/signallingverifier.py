"""
No-signalling check for the universal Hadamard machine.

Alice (four-dimensional) and Bob (one qubit) share a maximally entangled
resource whose Bob branches are |0>, |psi>, |1> and |psi_bar>. Bob runs the
machine on his qubit; if Alice's reduced state changes, the machine would
let Bob signal to her without communication.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from constants import EIGEN_TOLERANCE, VIOLATION_TOLERANCE
from numericcore import DensityMatrix, partial_trace, partial_trace_many, trace_distance, trace_distances
from qubitmodel import (
    BasisLabel,
    Branch,
    BranchLabel,
    FormalState,
    QubitSpec,
    apply_machine,
    concretize,
    concretize_many,
)

logger = logging.getLogger(__name__)

ALICE_DIMENSION = 4
ALICE = 0
BOB = 1


def build_signalling_resource(psi: QubitSpec) -> FormalState:
    bob_branches = (
        BranchLabel(Branch.ZERO),
        BranchLabel(Branch.PSI, psi),
        BranchLabel(Branch.ONE),
        BranchLabel(Branch.PSI_BAR, psi),
    )
    return FormalState.of(
        *((0.5, (BasisLabel(k, ALICE_DIMENSION), bob)) for k, bob in enumerate(bob_branches))
    )


def apply_machine_bob(resource: FormalState) -> FormalState:
    return apply_machine(resource, BOB)


def rdm_before(psi: QubitSpec) -> DensityMatrix:
    return partial_trace(concretize(build_signalling_resource(psi)), keep=[ALICE])


def rdm_after(psi: QubitSpec) -> DensityMatrix:
    return partial_trace(concretize(apply_machine_bob(build_signalling_resource(psi))), keep=[ALICE])


# Any qubit will do; concretize_many substitutes the real ones row by row.
_TEMPLATE_QUBIT = QubitSpec(0.0, 1.0)


def rdm_before_many(a: NDArray, b: NDArray) -> NDArray[np.complex128]:
    """Alice's reduced states before Bob acts, one 4x4 matrix per qubit (a[i], b[i])."""
    amplitudes = concretize_many(build_signalling_resource(_TEMPLATE_QUBIT), a, b)
    return partial_trace_many(amplitudes, (ALICE_DIMENSION, 2), [ALICE])


def rdm_after_many(a: NDArray, b: NDArray) -> NDArray[np.complex128]:
    """Alice's reduced states after Bob runs the machine, one per qubit."""
    amplitudes = concretize_many(apply_machine_bob(build_signalling_resource(_TEMPLATE_QUBIT)), a, b)
    return partial_trace_many(amplitudes, (ALICE_DIMENSION, 2), [ALICE])


def signalling_distances(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    return trace_distances(rdm_before_many(a, b), rdm_after_many(a, b))


def closed_form_rho_before(psi: QubitSpec) -> NDArray[np.complex128]:
    """Alice's reduced state before Bob acts, written out entry by entry."""
    a, b = psi.a, psi.b
    ac, bc = a.conjugate(), b.conjugate()
    rho = np.array(
        [
            [1, ac, 0, b],
            [a, 1, b, 0],
            [0, bc, 1, -a],
            [bc, 0, -ac, 1],
        ],
        dtype=np.complex128,
    )
    return rho / 4.0


def closed_form_rho_after(psi: QubitSpec) -> NDArray[np.complex128]:
    """Alice's reduced state after Bob runs the machine, written out entry by entry."""
    a, b = psi.a, psi.b
    ac, bc = a.conjugate(), b.conjugate()
    rho = np.zeros((4, 4), dtype=np.complex128)
    np.fill_diagonal(rho, 2.0)
    rho[1, 0] = a + bc + b - ac
    rho[3, 0] = a - bc + b + ac
    rho[0, 1] = ac + bc + b - a
    rho[2, 1] = ac - bc + b + a
    rho[1, 2] = a + bc - b + ac
    rho[3, 2] = a - bc - b - ac
    rho[0, 3] = a + bc - b + ac
    rho[2, 3] = ac - bc - b - a
    return rho / 8.0


def coefficient_residuals(psi: QubitSpec) -> Tuple[complex, complex]:
    """
    Entries (1,0) and (3,0) of rho_after - rho_before.

    Both vanish exactly when alpha_a = alpha_b and beta_b = 0.
    """
    a, b = psi.a, psi.b
    ac, bc = a.conjugate(), b.conjugate()
    first = (a + bc + b - ac) / 8.0 - a / 4.0
    second = (a - bc + b + ac) / 8.0 - bc / 4.0
    return first, second


@dataclass(frozen=True, eq=False)
class SignallingVerdict:
    qubit: QubitSpec
    rho_before: DensityMatrix
    rho_after: DensityMatrix
    distance: float
    residual_alpha: float
    residual_beta: float
    signalling: bool
    spectra_equal: bool
    tolerance: float


def signalling_verdict(psi: QubitSpec, tol: Optional[float] = None) -> SignallingVerdict:
    """Compare Alice's reduced state before and after Bob runs the machine."""
    tolerance = VIOLATION_TOLERANCE if tol is None else tol
    before = rdm_before(psi)
    after = rdm_after(psi)
    distance = trace_distance(before, after)
    verdict = SignallingVerdict(
        qubit=psi,
        rho_before=before,
        rho_after=after,
        distance=distance,
        residual_alpha=psi.alpha_a - psi.alpha_b,
        residual_beta=psi.beta_b,
        signalling=distance > tolerance,
        spectra_equal=before.spectrum.matches(after.spectrum, EIGEN_TOLERANCE),
        tolerance=tolerance,
    )
    logger.debug("Signalling verdict for %s: distance %.3e", psi, distance)
    return verdict
