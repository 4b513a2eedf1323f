"""Truncated Fock-space operators and bipartite states.

Mode ``a`` is always the slow (leftmost) tensor factor: the flat basis index
of |n_a, n_b> is ``n_a * d_b + n_b``.  Qubits live in the d = 2 corner of the
Fock ladder (|0>, |1>); helpers below embed them into larger truncations when
operator products need headroom.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NormError, TruncationTooLossyError
from .numerics import as_matrix, hermiticity_defect

# Keep at least this much squared norm when truncating a coherent state.
COHERENT_NORM_FLOOR = 0.999

STATE_HERM_TOL = 1e-10
STATE_TRACE_TOL = 1e-10
QUBIT_NORM_TOL = 1e-12


class Mode(str, enum.Enum):
    A = "a"
    B = "b"


@dataclass(frozen=True)
class ModeDims:
    """Fock truncations of the two modes: states |0> ... |d-1| each."""

    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1:
            raise DimensionMismatchError(f"dims must be >= 1, got {self}")

    @property
    def total(self) -> int:
        return self.d_a * self.d_b

    def dim(self, mode: Mode) -> int:
        return self.d_a if mode == Mode.A else self.d_b


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on a two-mode truncated Fock space.

    Hermiticity and unit trace are enforced at construction.  Positivity is
    deliberately *not* an invariant: the inverse damping map can produce
    Hermitian unit-trace matrices with negative eigenvalues, and those are
    legitimate values of this type (checked separately by
    ``channels.is_physical``).
    """

    rho: np.ndarray
    dims: ModeDims

    def __post_init__(self):
        rho = as_matrix(self.rho)
        n = self.dims.total
        if rho.shape != (n, n):
            raise DimensionMismatchError(
                f"rho shape {rho.shape} does not match dims {self.dims}"
            )
        defect = hermiticity_defect(rho)
        if defect > STATE_HERM_TOL:
            raise NormError(f"state hermiticity defect {defect:.3e}")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > STATE_TRACE_TOL:
            raise NormError(f"state trace {tr} is not 1")
        rho = rho.copy()
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def d_a(self) -> int:
        return self.dims.d_a

    @property
    def d_b(self) -> int:
        return self.dims.d_b


@dataclass(frozen=True)
class QubitPure:
    """Amplitudes of a pure two-qubit state a|00> + b|01> + g|10> + d|11>."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self):
        norm_sq = sum(abs(c) ** 2 for c in self.amplitudes())
        if abs(norm_sq - 1.0) > QUBIT_NORM_TOL:
            raise NormError(f"|amplitudes|^2 = {norm_sq} is not 1")

    def amplitudes(self) -> tuple[complex, complex, complex, complex]:
        return (
            complex(self.alpha),
            complex(self.beta),
            complex(self.gamma),
            complex(self.delta),
        )

    def as_vector(self) -> np.ndarray:
        return np.array(self.amplitudes(), dtype=np.complex128)


def annihilation_op(d: int) -> np.ndarray:
    """Truncated lowering operator: a|n> = sqrt(n)|n-1>, zero on |0>."""
    if d < 1:
        raise DimensionMismatchError(f"dimension must be >= 1, got {d}")
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), k=1).astype(np.complex128)


def creation_op(d: int) -> np.ndarray:
    return annihilation_op(d).conj().T


def number_op(d: int) -> np.ndarray:
    return np.diag(np.arange(d, dtype=float)).astype(np.complex128)


def embed_op(op, mode: Mode, dims: ModeDims) -> np.ndarray:
    """Lift a single-mode operator to the two-mode space (identity elsewhere)."""
    m = as_matrix(op)
    d = dims.dim(Mode(mode))
    if m.shape != (d, d):
        raise DimensionMismatchError(
            f"operator shape {m.shape} does not match mode {mode} dim {d}"
        )
    if Mode(mode) == Mode.A:
        return np.kron(m, np.eye(dims.d_b, dtype=np.complex128))
    return np.kron(np.eye(dims.d_a, dtype=np.complex128), m)


def coherent_state(alpha: complex, d: int) -> np.ndarray:
    """Truncated coherent state |alpha>, renormalized to unit norm.

    Raises ``TruncationTooLossyError`` when the truncation would keep less
    than ``COHERENT_NORM_FLOOR`` of the squared norm.
    """
    if d < 1:
        raise DimensionMismatchError(f"dimension must be >= 1, got {d}")
    alpha = complex(alpha)
    c = np.zeros(d, dtype=np.complex128)
    c[0] = 1.0
    for n in range(1, d):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    c *= math.exp(-abs(alpha) ** 2 / 2)
    kept = float(np.sum(np.abs(c) ** 2))
    if kept < COHERENT_NORM_FLOOR:
        raise TruncationTooLossyError(
            f"truncation at d={d} keeps only {kept:.6f} of |alpha={alpha}|'s norm"
        )
    return c / math.sqrt(kept)


def pure_to_state(psi, dims: ModeDims) -> BipartiteState:
    """Density matrix |psi><psi| of a unit-norm state vector."""
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.size != dims.total:
        raise DimensionMismatchError(
            f"vector length {v.size} does not match dims {dims}"
        )
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-10:
        raise NormError(f"vector norm {norm} is not 1")
    v = v / norm
    return BipartiteState(np.outer(v, v.conj()), dims)


def qubit_vector(psi: QubitPure, dims: ModeDims = ModeDims(2, 2)) -> np.ndarray:
    """Embed two-qubit amplitudes into the corner of a larger Fock space."""
    if dims.d_a < 2 or dims.d_b < 2:
        raise DimensionMismatchError("qubit embedding needs d_a, d_b >= 2")
    v = np.zeros(dims.total, dtype=np.complex128)
    a, b, g, d = psi.amplitudes()
    v[0 * dims.d_b + 0] = a
    v[0 * dims.d_b + 1] = b
    v[1 * dims.d_b + 0] = g
    v[1 * dims.d_b + 1] = d
    return v


def qubit_state(psi: QubitPure, dims: ModeDims = ModeDims(2, 2)) -> BipartiteState:
    return pure_to_state(qubit_vector(psi, dims), dims)


def embed_state(state: BipartiteState, dims: ModeDims) -> BipartiteState:
    """Place a state into the low-photon-number corner of larger truncations."""
    old = state.dims
    if dims.d_a < old.d_a or dims.d_b < old.d_b:
        raise DimensionMismatchError(f"cannot shrink {old} to {dims}")
    idx = np.array(
        [ia * dims.d_b + ib for ia in range(old.d_a) for ib in range(old.d_b)]
    )
    rho = np.zeros((dims.total, dims.total), dtype=np.complex128)
    rho[np.ix_(idx, idx)] = state.rho
    return BipartiteState(rho, dims)


def partial_trace(state: BipartiteState, keep: Mode) -> np.ndarray:
    """Reduced density matrix of the kept mode."""
    d_a, d_b = state.d_a, state.d_b
    r4 = state.rho.reshape(d_a, d_b, d_a, d_b)
    if Mode(keep) == Mode.A:
        return np.einsum("ijkj->ik", r4)
    return np.einsum("ijil->jl", r4)
