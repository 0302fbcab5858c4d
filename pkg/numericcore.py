"""
Dense complex linear algebra over small Hilbert spaces.

States and density matrices are immutable values. Every constructor
validates its input before the value escapes, so downstream code can
rely on unit norm, Hermiticity and positivity without re-checking.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from constants import (
    EIGEN_TOLERANCE,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFF_DIAGONAL_LIMIT,
    MATRIX_TOLERANCE,
    MAX_TOTAL_DIMENSION,
    NORM_TOLERANCE,
)

logger = logging.getLogger(__name__)

_TINY = np.finfo(np.float64).tiny


class NumericError(ValueError):
    """Raised when an operation receives input outside its numeric domain."""


class DimensionError(NumericError):
    """Raised for inconsistent, invalid or oversized subsystem dimensions."""


class NotHermitianError(NumericError):
    """Raised when a matrix that must be Hermitian is not."""


def ensure_finite(values: ArrayLike, what: str) -> NDArray[np.complex128]:
    """Return `values` as a complex array, rejecting NaN and infinities."""
    array = np.asarray(values, dtype=np.complex128)
    if not np.all(np.isfinite(array)):
        raise NumericError(f"{what} contains NaN or infinite components")
    return array


def _read_only(array: ArrayLike) -> NDArray[np.complex128]:
    frozen = np.array(array, dtype=np.complex128)
    frozen.setflags(write=False)
    return frozen


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues of a Hermitian operator, sorted descending."""

    eigenvalues: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(sorted((float(v) for v in self.eigenvalues), reverse=True))
        object.__setattr__(self, "eigenvalues", values)

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def largest(self) -> float:
        return self.eigenvalues[0]

    @property
    def smallest(self) -> float:
        return self.eigenvalues[-1]

    def matches(self, other: Union["Spectrum", Sequence[float]], tol: float = EIGEN_TOLERANCE) -> bool:
        """True when both spectra have equal length and agree elementwise within `tol`."""
        theirs = other.eigenvalues if isinstance(other, Spectrum) else tuple(sorted(other, reverse=True))
        if len(theirs) != len(self.eigenvalues):
            return False
        return all(abs(x - y) <= tol for x, y in zip(self.eigenvalues, theirs))


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Normalized pure state of a composite system.

    `dims` lists the subsystem dimensions in tensor order. `formal_norm`
    is the norm of the amplitudes before normalization and `renormalized`
    records whether it deviated from 1 beyond the norm tolerance.
    """

    amplitudes: NDArray[np.complex128]
    dims: Tuple[int, ...]
    renormalized: bool = False
    formal_norm: float = 1.0

    def __post_init__(self):
        amplitudes = _read_only(ensure_finite(self.amplitudes, "State amplitudes").ravel())
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionError(f"Subsystem dimensions must be positive, got {dims}")
        if math.prod(dims) != amplitudes.size:
            raise DimensionError(
                f"Dimensions {dims} do not match {amplitudes.size} amplitudes"
            )
        norm_squared = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_squared - 1.0) > NORM_TOLERANCE:
            raise NumericError(f"State is not normalized (squared norm {norm_squared!r})")
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_amplitudes(cls, amplitudes: ArrayLike, dims: Iterable[int]) -> "StateVector":
        """Normalize `amplitudes` and build a state, flagging any real renormalization."""
        array = ensure_finite(amplitudes, "State amplitudes").ravel()
        norm = float(np.linalg.norm(array))
        if norm <= NORM_TOLERANCE:
            raise NumericError("Cannot normalize a zero vector")
        renormalized = abs(norm - 1.0) > NORM_TOLERANCE
        if renormalized:
            logger.debug("Renormalized state with formal norm %r", norm)
        return cls(array / norm, tuple(dims), renormalized, norm)

    @classmethod
    def basis(cls, index: int, dim: int) -> "StateVector":
        if not 0 <= index < dim:
            raise DimensionError(f"Basis index {index} outside dimension {dim}")
        amplitudes = np.zeros(dim, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes, (dim,))

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def inner(self, other: "StateVector") -> complex:
        """<self|other>"""
        if self.dims != other.dims:
            raise DimensionError(f"Cannot take inner product of {self.dims} and {other.dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, unit-trace, positive-semidefinite matrix.

    Positivity is checked on construction by factorizing the matrix shifted
    by the eigenvalue tolerance; the spectrum itself is computed on first use.
    """

    entries: NDArray[np.complex128]

    def __post_init__(self):
        entries = _read_only(ensure_finite(self.entries, "Density matrix"))
        _check_square(entries)
        _check_hermitian(entries)
        trace = complex(entries.trace())
        if abs(trace - 1.0) > MATRIX_TOLERANCE:
            raise NumericError(f"Density matrix trace is {trace!r}, expected 1")
        shifted = entries + EIGEN_TOLERANCE * np.eye(entries.shape[0])
        try:
            np.linalg.cholesky(shifted)
        except np.linalg.LinAlgError:
            smallest = _spectrum_of(entries).smallest
            raise NumericError(
                f"Density matrix is not positive semidefinite (eigenvalue {smallest!r})"
            ) from None
        object.__setattr__(self, "entries", entries)

    @cached_property
    def spectrum(self) -> Spectrum:
        return _spectrum_of(self.entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def entry(self, row: int, col: int) -> complex:
        return complex(self.entries[row, col])

    def purity(self) -> float:
        return float(np.vdot(self.entries, self.entries).real)

    def allclose(self, other: Union["DensityMatrix", ArrayLike], tol: float = MATRIX_TOLERANCE) -> bool:
        theirs = other.entries if isinstance(other, DensityMatrix) else np.asarray(other)
        return theirs.shape == self.entries.shape and bool(np.max(np.abs(self.entries - theirs)) <= tol)


def _check_square(entries: NDArray) -> None:
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
        raise DimensionError(f"Expected a non-empty square matrix, got shape {entries.shape}")


def _check_hermitian(entries: NDArray) -> None:
    deviation = float(np.max(np.abs(entries - entries.conj().T)))
    if deviation > MATRIX_TOLERANCE:
        raise NotHermitianError(f"Matrix deviates from Hermitian by {deviation:.3e}")


def _quadratic_roots(stack: NDArray) -> NDArray[np.float64]:
    top, bottom = stack[:, 0, 0].real, stack[:, 1, 1].real
    mean = 0.5 * (top + bottom)
    radius = np.hypot(0.5 * (top - bottom), np.abs(stack[:, 0, 1]))
    return np.stack([mean + radius, mean - radius], axis=1)


def quadratic_eigenvalues(entries: ArrayLike) -> Tuple[float, float]:
    """Closed-form roots of the characteristic polynomial of a 2x2 Hermitian matrix."""
    m = np.asarray(entries, dtype=np.complex128)
    larger, smaller = _quadratic_roots(m[np.newaxis])[0]
    return float(larger), float(smaller)


def _off_diagonal_norms(work: NDArray) -> NDArray[np.float64]:
    off = work.copy()
    diagonal = np.arange(work.shape[1])
    off[:, diagonal, diagonal] = 0.0
    return np.linalg.norm(off.reshape(off.shape[0], off.shape[1] * off.shape[2]), axis=1)


def _rotate(work: NDArray, p: int, q: int) -> None:
    # Phase-align work[:, p, q] onto the positive reals, then apply the real
    # symmetric Jacobi rotation that zeroes it. Pivots at or below the
    # smallest normal float are zeroed without rotating.
    pivot = work[:, p, q]
    magnitude = np.abs(pivot)
    active = magnitude > _TINY
    safe = np.where(active, magnitude, 1.0)
    phase = np.where(active, pivot.real / safe - 1j * (pivot.imag / safe), 1.0)
    with np.errstate(over="ignore"):
        theta = (work[:, q, q].real - work[:, p, p].real) / (2.0 * safe)
        t = 1.0 / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(active, np.where(theta < 0.0, -t, t), 0.0)
    c = 1.0 / np.hypot(t, 1.0)
    s = t * c

    col_p, col_q = work[:, :, p].copy(), work[:, :, q].copy()
    work[:, :, p] = c[:, None] * col_p - (s * phase)[:, None] * col_q
    work[:, :, q] = s[:, None] * col_p + (c * phase)[:, None] * col_q
    row_p, row_q = work[:, p, :].copy(), work[:, q, :].copy()
    work[:, p, :] = c[:, None] * row_p - (s * phase.conj())[:, None] * row_q
    work[:, q, :] = s[:, None] * row_p + (c * phase.conj())[:, None] * row_q
    work[:, p, q] = 0.0
    work[:, q, p] = 0.0


def _jacobi_diagonals(stack: NDArray, limit: float, sweeps: int) -> NDArray[np.float64]:
    work = 0.5 * (stack + stack.conj().transpose(0, 2, 1))
    n = work.shape[1]
    for _ in range(sweeps):
        pending = _off_diagonal_norms(work) >= limit
        if not pending.any():
            break
        # Converged matrices are left alone so each result is independent of its batch.
        chunk = work[pending]
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(chunk, p, q)
        work[pending] = chunk
    else:
        residual = float(_off_diagonal_norms(work).max())
        if residual >= limit:
            logger.warning(
                "Jacobi eigensolver stopped after %d sweeps with off-diagonal norm %.3e",
                sweeps,
                residual,
            )
    return np.sort(np.diagonal(work, axis1=1, axis2=2).real, axis=1)[:, ::-1]


def jacobi_eigenvalues(
    entries: ArrayLike,
    off_diagonal_limit: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> Tuple[float, ...]:
    """
    Eigenvalues of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    `off_diagonal_limit` or after `max_sweeps` sweeps.
    """
    limit = JACOBI_OFF_DIAGONAL_LIMIT if off_diagonal_limit is None else off_diagonal_limit
    sweeps = JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps
    work = np.array(entries, dtype=np.complex128)[np.newaxis]
    return tuple(_jacobi_diagonals(work, limit, sweeps)[0].tolist())


def eigenvalues_many(stack: ArrayLike) -> NDArray[np.float64]:
    """
    Descending eigenvalues of a stack of Hermitian matrices, one row per matrix.

    Closed form for dimension 2, cyclic Jacobi rotations above. The stack
    is assumed Hermitian; only its Hermitian part is used.
    """
    matrices = np.asarray(stack, dtype=np.complex128)
    if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2] or matrices.shape[1] == 0:
        raise DimensionError(f"Expected a stack of square matrices, got shape {matrices.shape}")
    dim = matrices.shape[1]
    if dim == 1:
        return matrices[:, :, 0].real.copy()
    if dim == 2:
        return _quadratic_roots(matrices)
    return _jacobi_diagonals(matrices, JACOBI_OFF_DIAGONAL_LIMIT, JACOBI_MAX_SWEEPS)


def _spectrum_of(entries: NDArray) -> Spectrum:
    return Spectrum(tuple(eigenvalues_many(entries[np.newaxis])[0].tolist()))


def hermitian_eigenvalues(operator: Union[DensityMatrix, ArrayLike]) -> Spectrum:
    """
    Spectrum of a density matrix or of any Hermitian operator.

    Closed form for dimension 2, cyclic Jacobi rotations above.
    """
    if isinstance(operator, DensityMatrix):
        return operator.spectrum
    entries = ensure_finite(operator, "Operator")
    _check_square(entries)
    _check_hermitian(entries)
    return _spectrum_of(entries)


def tensor_product(lhs: StateVector, rhs: StateVector, max_dimension: Optional[int] = None) -> StateVector:
    limit = MAX_TOTAL_DIMENSION if max_dimension is None else max_dimension
    total = lhs.dimension * rhs.dimension
    if total > limit:
        raise DimensionError(f"Tensor product dimension {total} exceeds the limit of {limit}")
    return StateVector.from_amplitudes(np.kron(lhs.amplitudes, rhs.amplitudes), lhs.dims + rhs.dims)


def _kept_subsystems(dims: Tuple[int, ...], keep: Iterable[int]) -> Tuple[int, ...]:
    kept = tuple(sorted(set(int(k) for k in keep)))
    if not kept:
        raise DimensionError("At least one subsystem must be kept")
    if kept[0] < 0 or kept[-1] >= len(dims):
        raise DimensionError(f"Subsystems {kept} out of range for dimensions {dims}")
    return kept


def _reduce(amplitudes: NDArray, dims: Tuple[int, ...], kept: Tuple[int, ...]) -> NDArray[np.complex128]:
    # amplitudes has one state per row; subsystem i lives on axis i + 1.
    count = amplitudes.shape[0]
    traced = [i for i in range(len(dims)) if i not in kept]
    order = [0] + [i + 1 for i in kept] + [i + 1 for i in traced]
    kept_dim = math.prod(dims[i] for i in kept)
    tensor = amplitudes.reshape((count,) + dims).transpose(order).reshape(count, kept_dim, -1)
    return np.einsum("nik,njk->nij", tensor, tensor.conj())


def partial_trace(state: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of the `keep` subsystems of a pure state."""
    kept = _kept_subsystems(state.dims, keep)
    return DensityMatrix(_reduce(state.amplitudes[np.newaxis], state.dims, kept)[0])


def partial_trace_many(amplitudes: ArrayLike, dims: Sequence[int], keep: Iterable[int]) -> NDArray[np.complex128]:
    """
    Reduced density matrices of many pure states at once.

    `amplitudes` holds one normalized state per row. The result is a raw
    stack of shape (rows, k, k); no DensityMatrix is built per row.
    """
    dims = tuple(int(d) for d in dims)
    array = ensure_finite(amplitudes, "State amplitudes")
    if array.ndim != 2 or array.shape[1] != math.prod(dims):
        raise DimensionError(f"Amplitude block of shape {array.shape} does not match dimensions {dims}")
    return _reduce(array, dims, _kept_subsystems(dims, keep))


def schmidt_rank(state: StateVector, keep: Iterable[int], tol: float = EIGEN_TOLERANCE) -> int:
    """Number of Schmidt coefficients above `tol` across the cut `keep` | rest."""
    kept = _kept_subsystems(state.dims, keep)
    traced = [i for i in range(len(state.dims)) if i not in kept]
    tensor = state.amplitudes.reshape(state.dims).transpose(list(kept) + traced)
    rows = math.prod(state.dims[i] for i in kept)
    singular_values = np.linalg.svd(tensor.reshape(rows, -1), compute_uv=False)
    return int(np.sum(singular_values > tol))


def trace_distance(p: DensityMatrix, q: DensityMatrix) -> float:
    """Half the trace norm of p - q."""
    if p.dim != q.dim:
        raise DimensionError(f"Cannot compare density matrices of dimension {p.dim} and {q.dim}")
    # Fixed operand order keeps the result exactly symmetric.
    if p.entries.tobytes() > q.entries.tobytes():
        p, q = q, p
    return float(trace_distances(p.entries[np.newaxis], q.entries[np.newaxis])[0])


def trace_distances(p: ArrayLike, q: ArrayLike) -> NDArray[np.float64]:
    """Row-wise trace distance between two equally shaped stacks of density matrices."""
    lhs, rhs = np.asarray(p, dtype=np.complex128), np.asarray(q, dtype=np.complex128)
    if lhs.shape != rhs.shape:
        raise DimensionError(f"Cannot compare stacks of shape {lhs.shape} and {rhs.shape}")
    eigenvalues = eigenvalues_many(lhs - rhs)
    return np.minimum(1.0, 0.5 * np.abs(eigenvalues).sum(axis=1))


def _entropy_bits(eigenvalues: NDArray) -> NDArray[np.float64]:
    clipped = np.clip(eigenvalues, 0.0, 1.0)
    safe = np.where(clipped > 0.0, clipped, 1.0)
    return np.maximum(0.0, -np.sum(clipped * np.log2(safe), axis=-1))


def von_neumann_entropy(p: DensityMatrix) -> float:
    """Entropy in bits, with eigenvalues clamped to [0, 1] and 0 log 0 = 0."""
    return float(_entropy_bits(np.array(p.spectrum.eigenvalues)))


def entropies(stack: ArrayLike) -> NDArray[np.float64]:
    """von Neumann entropy in bits of every matrix in a stack of density matrices."""
    return _entropy_bits(eigenvalues_many(stack))


def binary_entropy(p: ArrayLike) -> Union[float, NDArray[np.float64]]:
    """Entropy in bits of the two-outcome distribution (p, 1 - p), for p in [0, 1]."""
    probabilities = np.clip(np.asarray(p, dtype=np.float64), 0.0, 1.0)
    pairs = np.stack([probabilities, 1.0 - probabilities], axis=-1)
    result = _entropy_bits(pairs)
    return float(result) if result.ndim == 0 else result


def inverse_binary_entropy(h: float, iterations: int = 200) -> float:
    """
    The p in [0, 1/2] with binary_entropy(p) = h, by bisection.

    Values of h at or above one bit map to 1/2.
    """
    if not math.isfinite(h) or h < 0.0:
        raise NumericError(f"Binary entropy must be a finite non-negative number, got {h!r}")
    if h >= 1.0:
        return 0.5
    low, high = 0.0, 0.5
    for _ in range(iterations):
        middle = 0.5 * (low + high)
        if middle == low or middle == high:
            break
        if binary_entropy(middle) < h:
            low = middle
        else:
            high = middle
    return high
