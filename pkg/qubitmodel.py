"""
The arbitrary qubit, its orthogonal complement, the Hadamard matrix and the
hypothetical universal Hadamard machine.

The machine is only defined on four labelled inputs (|0>, |1>, |psi>,
|psi_bar>). States are carried symbolically as `FormalState` sums of
labelled branches so the machine can be applied branch by branch, exactly
as a non-linear device would have to act, and only then evaluated to
numbers by `concretize`.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from constants import NORM_TOLERANCE
from numericcore import NumericError, StateVector, ensure_finite, tensor_product

logger = logging.getLogger(__name__)

SQRT_HALF = 1.0 / math.sqrt(2.0)


class InvalidQubitError(NumericError):
    """Raised for amplitudes that do not describe a normalized qubit."""


class FormalStateError(ValueError):
    """Raised for formal states that cannot be evaluated."""


class UnlabeledSubsystemError(FormalStateError):
    """Raised when the machine is asked to act on a subsystem without a qubit label."""


@dataclass(frozen=True)
class QubitSpec:
    """The qubit a|0> + b|1>."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = (complex(v) for v in ensure_finite([self.a, self.b], "Qubit amplitudes"))
        norm_squared = abs(a) ** 2 + abs(b) ** 2
        if abs(norm_squared - 1.0) > NORM_TOLERANCE:
            raise InvalidQubitError(f"|a|^2 + |b|^2 = {norm_squared!r}, expected 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def normalized(cls, a: complex, b: complex) -> "QubitSpec":
        norm = math.hypot(abs(complex(a)), abs(complex(b)))
        if not math.isfinite(norm) or norm <= NORM_TOLERANCE:
            raise InvalidQubitError("Cannot normalize a zero or non-finite qubit")
        return cls(complex(a) / norm, complex(b) / norm)

    @property
    def alpha_a(self) -> float:
        return self.a.real

    @property
    def beta_a(self) -> float:
        return self.a.imag

    @property
    def alpha_b(self) -> float:
        return self.b.real

    @property
    def beta_b(self) -> float:
        return self.b.imag

    @property
    def is_generic(self) -> bool:
        """Both amplitudes non-zero; |0> and |1> up to phase are admitted but not generic."""
        return abs(self.a) > NORM_TOLERANCE and abs(self.b) > NORM_TOLERANCE

    @property
    def vector(self) -> NDArray[np.complex128]:
        return np.array([self.a, self.b], dtype=np.complex128)

    def as_state(self) -> StateVector:
        return StateVector(self.vector, (2,))


class Branch(Enum):
    ZERO = "0"
    ONE = "1"
    PSI = "psi"
    PSI_BAR = "psi_bar"


@dataclass(frozen=True)
class BranchLabel:
    """A qubit input of the machine. PSI and PSI_BAR carry their qubit."""

    branch: Branch
    qubit: Optional[QubitSpec] = None

    dim = 2

    def __post_init__(self):
        if self.branch in (Branch.PSI, Branch.PSI_BAR):
            if self.qubit is None:
                raise FormalStateError(f"Branch {self.branch.name} needs a qubit")
        else:
            object.__setattr__(self, "qubit", None)

    def ket(self) -> StateVector:
        if self.branch is Branch.ZERO:
            return StateVector.basis(0, 2)
        if self.branch is Branch.ONE:
            return StateVector.basis(1, 2)
        if self.branch is Branch.PSI:
            return self.qubit.as_state()
        return orthogonal_complement(self.qubit).as_state()

    def kets(self, a: NDArray, b: NDArray) -> NDArray[np.complex128]:
        """One ket per row, with (a, b) standing in for the carried qubit."""
        if self.branch is Branch.ZERO:
            return _basis_rows(0, 2, a.shape[0])
        if self.branch is Branch.ONE:
            return _basis_rows(1, 2, a.shape[0])
        if self.branch is Branch.PSI:
            return np.stack([a, b], axis=1)
        return np.stack([b.conj(), -a.conj()], axis=1)


@dataclass(frozen=True)
class BasisLabel:
    """Computational basis ket |index> of a `dim`-dimensional subsystem."""

    index: int
    dim: int

    def ket(self) -> StateVector:
        return StateVector.basis(self.index, self.dim)

    def kets(self, a: NDArray, b: NDArray) -> NDArray[np.complex128]:
        return _basis_rows(self.index, self.dim, a.shape[0])


Label = Union[BranchLabel, BasisLabel]


@dataclass(frozen=True)
class FormalTerm:
    coefficient: complex
    labels: Tuple[Label, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise FormalStateError("A formal term needs at least one subsystem label")

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(label.dim for label in self.labels)


@dataclass(frozen=True)
class FormalState:
    """Symbolic superposition of labelled product branches."""

    terms: Tuple[FormalTerm, ...]

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if len({term.dims for term in terms}) > 1:
            raise FormalStateError("All branches must share the same subsystem dimensions")
        self._shared_qubit()

    @classmethod
    def of(cls, *pairs: Tuple[complex, Sequence[Label]]) -> "FormalState":
        return cls(tuple(FormalTerm(coefficient, tuple(labels)) for coefficient, labels in pairs))

    @property
    def dims(self) -> Tuple[int, ...]:
        if not self.terms:
            raise FormalStateError("An empty formal state has no dimensions")
        return self.terms[0].dims

    @property
    def qubit(self) -> Optional[QubitSpec]:
        """The qubit shared by every PSI/PSI_BAR label, or None if there are none."""
        return self._shared_qubit()

    def _shared_qubit(self) -> Optional[QubitSpec]:
        qubits = {
            label.qubit
            for term in self.terms
            for label in term.labels
            if isinstance(label, BranchLabel) and label.qubit is not None
        }
        if len(qubits) > 1:
            raise FormalStateError("Branch labels refer to different qubits")
        return next(iter(qubits), None)

    def scaled(self, factor: complex) -> "FormalState":
        return FormalState(tuple(FormalTerm(term.coefficient * factor, term.labels) for term in self.terms))


def orthogonal_complement(psi: QubitSpec) -> QubitSpec:
    """b*|0> - a*|1>"""
    return QubitSpec(psi.b.conjugate(), -psi.a.conjugate())


def hadamard_matrix() -> NDArray[np.complex128]:
    matrix = SQRT_HALF * np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128)
    matrix.setflags(write=False)
    return matrix


# Each input maps to (|first> + sign |second>) / sqrt(2).
_MACHINE_TABLE = {
    Branch.ZERO: (Branch.ZERO, Branch.ONE, 1.0),
    Branch.ONE: (Branch.ZERO, Branch.ONE, -1.0),
    Branch.PSI: (Branch.PSI, Branch.PSI_BAR, 1.0),
    Branch.PSI_BAR: (Branch.PSI, Branch.PSI_BAR, -1.0),
}


def machine_expansion(label: BranchLabel) -> Tuple[Tuple[float, BranchLabel], ...]:
    """The machine's output for `label` as weighted labels."""
    first, second, sign = _MACHINE_TABLE[label.branch]
    return (
        (SQRT_HALF, BranchLabel(first, label.qubit)),
        (sign * SQRT_HALF, BranchLabel(second, label.qubit)),
    )


def desired_action(label: BranchLabel) -> StateVector:
    """Evaluate the machine's output on one labelled input."""
    return concretize(FormalState.of(*((weight, (out,)) for weight, out in machine_expansion(label))))


def apply_machine(formal: FormalState, subsystem: int) -> FormalState:
    """Replace the label of `subsystem` in every branch by the machine's output."""
    terms = []
    for term in formal.terms:
        if not 0 <= subsystem < len(term.labels):
            raise UnlabeledSubsystemError(f"Subsystem {subsystem} does not exist")
        label = term.labels[subsystem]
        if not isinstance(label, BranchLabel):
            raise UnlabeledSubsystemError(f"Subsystem {subsystem} carries no machine input label")
        for weight, output in machine_expansion(label):
            labels = term.labels[:subsystem] + (output,) + term.labels[subsystem + 1:]
            terms.append(FormalTerm(term.coefficient * weight, labels))
    return FormalState(tuple(terms))


def concretize(formal: FormalState) -> StateVector:
    """
    Evaluate a formal state to amplitudes.

    The sum is renormalized only if its norm deviates from 1; the
    resulting state records the deviation.
    """
    if not formal.terms:
        raise FormalStateError("Cannot concretize an empty formal state")
    dims = formal.dims
    total = np.zeros(math.prod(dims), dtype=np.complex128)
    for term in formal.terms:
        ket = term.labels[0].ket()
        for label in term.labels[1:]:
            ket = tensor_product(ket, label.ket())
        total += term.coefficient * ket.amplitudes
    state = StateVector.from_amplitudes(total, dims)
    if state.renormalized:
        logger.info("Renormalized formal state with norm %.12g", state.formal_norm)
    return state


def _basis_rows(index: int, dim: int, count: int) -> NDArray[np.complex128]:
    rows = np.zeros((count, dim), dtype=np.complex128)
    rows[:, index] = 1.0
    return rows


def concretize_many(formal: FormalState, a: NDArray, b: NDArray) -> NDArray[np.complex128]:
    """
    Evaluate the branches of `formal` once per qubit (a[i], b[i]).

    The qubit carried by the PSI and PSI_BAR labels is replaced row by row;
    coefficients are used as written, so any qubit-dependent factor common
    to all branches drops out in the per-row normalization.
    """
    if not formal.terms:
        raise FormalStateError("Cannot concretize an empty formal state")
    a = ensure_finite(a, "Qubit amplitudes").ravel()
    b = ensure_finite(b, "Qubit amplitudes").ravel()
    if a.shape != b.shape:
        raise FormalStateError(f"Amplitude columns differ in length: {a.size} and {b.size}")
    count = a.size
    total = np.zeros((count, math.prod(formal.dims)), dtype=np.complex128)
    for term in formal.terms:
        kets = term.labels[0].kets(a, b)
        for label in term.labels[1:]:
            kets = (kets[:, :, np.newaxis] * label.kets(a, b)[:, np.newaxis, :]).reshape(count, -1)
        total += term.coefficient * kets
    norms = np.linalg.norm(total, axis=1)
    if np.any(norms <= NORM_TOLERANCE):
        raise NumericError("Cannot normalize a zero vector")
    return total / norms[:, np.newaxis]


def universality_defect(psi: QubitSpec) -> float:
    """Distance between the linear Hadamard image of psi and the machine's output."""
    linear = hadamard_matrix() @ psi.vector
    desired = desired_action(BranchLabel(Branch.PSI, psi)).amplitudes
    return float(np.linalg.norm(linear - desired))


def ray_defect(psi: QubitSpec) -> float:
    """Like `universality_defect` but minimized over a global phase; diagnostics only."""
    linear = hadamard_matrix() @ psi.vector
    desired = desired_action(BranchLabel(Branch.PSI, psi)).amplitudes
    overlap = abs(np.vdot(linear, desired))
    return math.sqrt(max(0.0, 2.0 - 2.0 * overlap))


@dataclass(frozen=True)
class EnsembleParam:
    """Chart of the consistent ensemble: a = alpha + i beta, b = alpha, 2 alpha^2 + beta^2 = 1."""

    beta: float
    sign: int = 1

    def __post_init__(self):
        if not math.isfinite(self.beta) or abs(self.beta) > 1.0:
            raise InvalidQubitError(f"Ensemble beta must lie in [-1, 1], got {self.beta!r}")
        if self.sign not in (1, -1):
            raise InvalidQubitError(f"Ensemble sign must be +1 or -1, got {self.sign!r}")
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def alpha(self) -> float:
        return self.sign * math.sqrt((1.0 - self.beta ** 2) / 2.0)


def ensemble_state(param: EnsembleParam) -> QubitSpec:
    alpha = param.alpha
    return QubitSpec(complex(alpha, param.beta), complex(alpha, 0.0))


def ensemble_deviations(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    """max(|beta_b|, |alpha_a - alpha_b|) per row; zero exactly on the consistent ensemble."""
    return np.maximum(np.abs(np.imag(b)), np.abs(np.real(a) - np.real(b)))


def ensemble_deviation(psi: QubitSpec) -> float:
    return float(ensemble_deviations(np.array([psi.a]), np.array([psi.b]))[0])


def in_ensemble(psi: QubitSpec, tol: float = NORM_TOLERANCE) -> bool:
    return ensemble_deviation(psi) <= tol


def bloch_vectors(a: NDArray, b: NDArray) -> NDArray[np.float64]:
    """Rows of (x, y, z) for the qubits (a[i], b[i])."""
    overlap = np.conj(a) * b
    z = np.abs(a) ** 2 - np.abs(b) ** 2
    return np.stack([2.0 * overlap.real, 2.0 * overlap.imag, z], axis=-1)


def bloch_coordinates(psi: QubitSpec) -> Tuple[float, float, float]:
    x, y, z = bloch_vectors(np.array([psi.a]), np.array([psi.b]))[0]
    return float(x), float(y), float(z)
