"""
Entanglement-monotonicity check for the universal Hadamard machine.

Alice holds one qubit, Bob holds B1 and B2. The shared resource is a
product across the Alice:Bob cut, so Alice's reduced state is pure. Bob
runs the machine on B2; any entropy in Alice's reduced state afterwards
is entanglement created by a local operation.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from constants import (
    CONSTRAINT_TOLERANCE,
    MATRIX_TOLERANCE,
    NORM_TOLERANCE,
    VIOLATION_TOLERANCE,
)
from numericcore import (
    DensityMatrix,
    StateVector,
    binary_entropy,
    entropies,
    partial_trace,
    partial_trace_many,
    tensor_product,
    von_neumann_entropy,
)
from qubitmodel import (
    SQRT_HALF,
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

ALICE = 0
B1 = 1
B2 = 2


class DegenerateResourceError(ValueError):
    """Raised when the resource loses its psi-dependent branch (b = 0)."""


class InconsistentAlgebraError(ArithmeticError):
    """Raised when two equivalent closed forms disagree beyond rounding."""


def is_degenerate(psi: QubitSpec) -> bool:
    # |0 psi> - |psi 0> = b (|01> - |10>), so b = 0 wipes out Alice's |1> branch.
    return abs(psi.b) <= NORM_TOLERANCE


def _require_non_degenerate(psi: QubitSpec, allow_degenerate: bool) -> None:
    if is_degenerate(psi) and not allow_degenerate:
        raise DegenerateResourceError(
            f"Resource is degenerate for b = {psi.b!r}: the psi branch vanishes"
        )


def build_locc_resource(psi: QubitSpec) -> FormalState:
    """
    Alice's |0> paired with the singlet on (B1, B2) plus Alice's |1> paired
    with (|0 psi> - |psi 0>)/sqrt(2).

    Carries the written prefactor 1/(1 + |b|^2); the state is renormalized
    when concretized.
    """
    prefactor = 1.0 / (1.0 + abs(psi.b) ** 2)
    weight = prefactor * SQRT_HALF
    zero, one = BranchLabel(Branch.ZERO), BranchLabel(Branch.ONE)
    psi_label = BranchLabel(Branch.PSI, psi)
    alice0, alice1 = BasisLabel(0, 2), BasisLabel(1, 2)
    return FormalState.of(
        (weight, (alice0, zero, one)),
        (-weight, (alice0, one, zero)),
        (weight, (alice1, zero, psi_label)),
        (-weight, (alice1, psi_label, zero)),
    )


def singlet() -> StateVector:
    return StateVector(np.array([0.0, SQRT_HALF, -SQRT_HALF, 0.0]), (2, 2))


def product_form(psi: QubitSpec) -> StateVector:
    """(|0> + b|1>) on Alice tensored with the singlet on Bob, normalized."""
    alice = StateVector.from_amplitudes([1.0, psi.b], (2,))
    return tensor_product(alice, singlet())


def apply_machine_b2(resource: FormalState) -> FormalState:
    return apply_machine(resource, B2)


def rdm_before_locc(psi: QubitSpec, allow_degenerate: bool = False) -> DensityMatrix:
    _require_non_degenerate(psi, allow_degenerate)
    return partial_trace(concretize(build_locc_resource(psi)), keep=[ALICE])


def rdm_after_locc(psi: QubitSpec, allow_degenerate: bool = False) -> DensityMatrix:
    _require_non_degenerate(psi, allow_degenerate)
    return partial_trace(concretize(apply_machine_b2(build_locc_resource(psi))), keep=[ALICE])


# Any qubit will do; concretize_many substitutes the real ones row by row.
_TEMPLATE_QUBIT = QubitSpec(0.0, 1.0)


def rdm_after_locc_many(a: NDArray, b: NDArray) -> NDArray[np.complex128]:
    """
    Alice's post-machine states for many qubits at once.

    Degenerate rows (b = 0) are evaluated like any other.
    """
    amplitudes = concretize_many(apply_machine_b2(build_locc_resource(_TEMPLATE_QUBIT)), a, b)
    return partial_trace_many(amplitudes, (2, 2, 2), [ALICE])


def entropies_after_locc(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    return entropies(rdm_after_locc_many(a, b))


def closed_form_rho_before_locc(psi: QubitSpec) -> NDArray[np.complex128]:
    b = psi.b
    rho = np.array([[1.0, b.conjugate()], [b, abs(b) ** 2]], dtype=np.complex128)
    return rho / (1.0 + abs(b) ** 2)


def _normalization_of(alpha_a, alpha_b, beta_b):
    return 1.0 + alpha_a ** 2 + alpha_b ** 2 + beta_b ** 2 - alpha_a * alpha_b


def _residual_of(alpha_a, alpha_b, beta_b):
    return beta_b ** 2 + 0.75 * (alpha_a - alpha_b) ** 2


def _residual_entropy_of(alpha_a, alpha_b, beta_b):
    # lambda_plus * lambda_minus = residual / N^2 and lambda_plus + lambda_minus = 1.
    determinant = np.clip(
        _residual_of(alpha_a, alpha_b, beta_b) / _normalization_of(alpha_a, alpha_b, beta_b) ** 2,
        0.0,
        0.25,
    )
    lambda_minus = 2.0 * determinant / (1.0 + np.sqrt(1.0 - 4.0 * determinant))
    return binary_entropy(lambda_minus)


def normalization(psi: QubitSpec) -> float:
    """N = 1 + alpha_a^2 + alpha_b^2 + beta_b^2 - alpha_a alpha_b."""
    return _normalization_of(psi.alpha_a, psi.alpha_b, psi.beta_b)


def normalization_complex(psi: QubitSpec) -> float:
    """N = 2 + ((a - a*)^2 - (a + a*)(b + b*)) / 4, which is real."""
    a, b = psi.a, psi.b
    value = 2.0 + ((a - a.conjugate()) ** 2 - (a + a.conjugate()) * (b + b.conjugate())) / 4.0
    return value.real


def closed_form_rho_after_locc(psi: QubitSpec) -> NDArray[np.complex128]:
    """Alice's state after the machine, in real components."""
    n = normalization(psi)
    off_diagonal = (psi.alpha_a + psi.alpha_b) / 2.0
    lower = n - 1.0
    return np.array([[1.0, off_diagonal], [off_diagonal, lower]], dtype=np.complex128) / n


def closed_form_rho_after_locc_complex(psi: QubitSpec) -> NDArray[np.complex128]:
    """Alice's state after the machine, in the complex amplitudes."""
    a, b = psi.a, psi.b
    n = normalization_complex(psi)
    ac, bc = a.conjugate(), b.conjugate()
    off_diagonal = a + ac + b + bc
    lower = 4.0 + (a - ac) ** 2 - (a + ac) * (b + bc)
    return np.array([[4.0, off_diagonal], [off_diagonal, lower]], dtype=np.complex128) / (4.0 * n)


def closed_form_eigenvalues(psi: QubitSpec) -> Tuple[float, float]:
    """(lambda_plus, lambda_minus) of Alice's state after the machine."""
    n = normalization(psi)
    if n <= NORM_TOLERANCE:
        raise DegenerateResourceError(f"Normalization N = {n!r} vanishes")
    spread = math.hypot(n - 2.0, psi.alpha_a + psi.alpha_b) / (2.0 * n)
    return 0.5 + spread, 0.5 - spread


def constraint_residual(psi: QubitSpec) -> float:
    """beta_b^2 + 3/4 (alpha_a - alpha_b)^2; zero only on the consistent ensemble."""
    return _residual_of(psi.alpha_a, psi.alpha_b, psi.beta_b)


def residual_entropy(psi: QubitSpec) -> float:
    """
    Entropy of Alice's post-machine state implied by the constraint residual.

    Uses lambda_minus = residual / (N^2 lambda_plus) in a cancellation-free
    form, so it stays accurate where the numeric spectrum bottoms out.
    """
    return float(_residual_entropy_of(psi.alpha_a, psi.alpha_b, psi.beta_b))


def constraint_residuals(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    return _residual_of(np.real(a), np.real(b), np.imag(b))


def residual_entropies(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    return _residual_entropy_of(np.real(a), np.real(b), np.imag(b))


def lambda_plus_gap(psi: QubitSpec) -> float:
    """
    4(N - 1) - (alpha_a + alpha_b)^2.

    lambda_plus = 1 holds exactly when this vanishes, and it always equals
    four times the constraint residual.
    """
    return 4.0 * (normalization(psi) - 1.0) - (psi.alpha_a + psi.alpha_b) ** 2


@dataclass(frozen=True, eq=False)
class LoccVerdict:
    """
    Outcome of the entanglement check.

    `violation` compares the numeric entropy of Alice's post-machine state
    with `tolerance`. `constraint_violated` compares the entropy implied by
    the constraint residual with `constraint_tolerance`, so both flags live
    on the same entropy scale and agree whenever the tolerances do.
    """

    qubit: QubitSpec
    rho_before: DensityMatrix
    rho_after: DensityMatrix
    entropy_before: float
    entropy_after: float
    normalization: float
    lambda_plus: float
    lambda_minus: float
    constraint_residual: float
    residual_entropy: float
    violation: bool
    constraint_violated: bool
    degenerate: bool
    resource_renormalized: bool
    tolerance: float
    constraint_tolerance: float


def _replay_constraint(psi: QubitSpec, residual: float) -> None:
    real_form = normalization(psi)
    complex_form = normalization_complex(psi)
    if abs(real_form - complex_form) > MATRIX_TOLERANCE:
        raise InconsistentAlgebraError(
            f"Normalization forms disagree: {real_form!r} vs {complex_form!r}"
        )
    gap = lambda_plus_gap(psi)
    if abs(gap - 4.0 * residual) > MATRIX_TOLERANCE:
        raise InconsistentAlgebraError(
            f"lambda_plus gap {gap!r} does not equal 4 x residual {4.0 * residual!r}"
        )


def locc_verdict(
    psi: QubitSpec,
    tol: Optional[float] = None,
    constraint_tol: Optional[float] = None,
    allow_degenerate: bool = False,
) -> LoccVerdict:
    """Entropy of Alice's state before and after Bob runs the machine on B2."""
    tolerance = VIOLATION_TOLERANCE if tol is None else tol
    constraint_tolerance = CONSTRAINT_TOLERANCE if constraint_tol is None else constraint_tol
    _require_non_degenerate(psi, allow_degenerate)
    if is_degenerate(psi):
        logger.warning("Evaluating degenerate resource for b = %r", psi.b)

    resource = concretize(build_locc_resource(psi))
    before = partial_trace(resource, keep=[ALICE])
    after = rdm_after_locc(psi, allow_degenerate=True)
    residual = constraint_residual(psi)
    _replay_constraint(psi, residual)
    lambda_plus, lambda_minus = closed_form_eigenvalues(psi)
    entropy_after = von_neumann_entropy(after)
    implied_entropy = residual_entropy(psi)

    return LoccVerdict(
        qubit=psi,
        rho_before=before,
        rho_after=after,
        entropy_before=von_neumann_entropy(before),
        entropy_after=entropy_after,
        normalization=normalization(psi),
        lambda_plus=lambda_plus,
        lambda_minus=lambda_minus,
        constraint_residual=residual,
        residual_entropy=implied_entropy,
        violation=entropy_after > tolerance,
        constraint_violated=implied_entropy > constraint_tolerance,
        degenerate=is_degenerate(psi),
        resource_renormalized=resource.renormalized,
        tolerance=tolerance,
        constraint_tolerance=constraint_tolerance,
    )
