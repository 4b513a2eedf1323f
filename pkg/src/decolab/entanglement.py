"""Spectrum-based entanglement quantifiers and two-qubit closed forms.

Partial transposition and logarithmic negativity work on any truncation;
Wootters concurrence is specific to the (2, 2) corner.  The closed-form
concurrences under damping return the *raw* value, which may be negative:
the sign change carries the disentanglement threshold, and clamping to the
physical concurrence max(0, raw) is the caller's explicit step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import DEFAULT_PHYSICALITY_EPS, is_physical
from .errors import (
    EtaOutOfRangeError,
    NotTwoQubitError,
    SeparableInputError,
    UnphysicalError,
)
from .fock import BipartiteState, Mode, QubitPure
from .numerics import herm_eigvals, kron, sqrtm_psd, trace_norm

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)

LOG_NEG_CLAMP = 1e-12


def partial_transpose(state: BipartiteState, mode: Mode = Mode.B) -> np.ndarray:
    """Transpose the chosen mode's indices; Hermitian and unit trace."""
    d_a, d_b = state.d_a, state.d_b
    r4 = state.rho.reshape(d_a, d_b, d_a, d_b)
    if Mode(mode) == Mode.A:
        pt = r4.transpose(2, 1, 0, 3)
    else:
        pt = r4.transpose(0, 3, 2, 1)
    return pt.reshape(d_a * d_b, d_a * d_b)


@dataclass(frozen=True)
class NegativityResult:
    log_negativity: float
    min_pt_eig: float


def log_negativity(
    state: BipartiteState, eps: float = DEFAULT_PHYSICALITY_EPS
) -> NegativityResult:
    """E_N = log2 of the trace norm of the partial transpose, clamped to >= 0.

    Raises ``UnphysicalError`` when the input itself is not PSD within eps;
    negativity is only meaningful for actual states.
    """
    physical, min_eig = is_physical(state, eps)
    if not physical:
        raise UnphysicalError(
            f"state has eigenvalue {min_eig:.3e}; gate with is_physical first"
        )
    pt = partial_transpose(state, Mode.B)
    value = math.log2(trace_norm(pt))
    if abs(value) < LOG_NEG_CLAMP:
        value = 0.0
    value = max(0.0, value)
    min_pt = float(herm_eigvals(pt)[0])
    return NegativityResult(log_negativity=value, min_pt_eig=min_pt)


@dataclass(frozen=True)
class ConcurrenceResult:
    """raw = sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4); value = max(0, raw)."""

    raw: float
    value: float
    lambdas: tuple[float, float, float, float]


def wootters_concurrence(state: BipartiteState) -> ConcurrenceResult:
    """Two-qubit concurrence from the spectrum of sqrt(rho) Y rho* Y sqrt(rho).

    That matrix factors as W W^dag with W = sqrt(rho) Y sqrt(rho)*, so its
    eigenvalue square roots are exactly the singular values of W.  Computing
    them by SVD keeps absolute accuracy O(eps) where an eigensolve on the
    squared matrix would only reach O(sqrt(eps)) near degenerate zeros.
    """
    if (state.d_a, state.d_b) != (2, 2):
        raise NotTwoQubitError(f"concurrence needs dims (2, 2), got {state.dims}")
    yy = kron(SIGMA_Y, SIGMA_Y)
    root = sqrtm_psd(state.rho)
    w = root @ yy @ root.conj()
    sqrts = np.linalg.svd(w, compute_uv=False)
    raw = float(sqrts[0] - sqrts[1] - sqrts[2] - sqrts[3])
    lam = sqrts**2
    return ConcurrenceResult(
        raw=raw, value=max(0.0, raw), lambdas=tuple(float(x) for x in lam)
    )


def _check_eta(eta: float):
    if not (0.0 <= eta <= 1.0):
        raise EtaOutOfRangeError(f"eta must lie in [0, 1], got {eta}")


def _invariants(psi: QubitPure) -> tuple[float, float]:
    a, b, g, d = psi.amplitudes()
    return abs(a * d - b * g), abs(d) ** 2


def c2_closed(psi: QubitPure, eta: float) -> float:
    """Raw concurrence 2 eta (|ad - bg| - (1 - eta)|d|^2) after damping both qubits."""
    _check_eta(eta)
    x, d2 = _invariants(psi)
    return 2.0 * eta * (x - (1.0 - eta) * d2)


def c1_closed(psi: QubitPure, eta: float) -> float:
    """Concurrence 2 sqrt(eta) |ad - bg| after damping a single qubit.

    Strictly positive for entangled input and eta > 0: one-sided vacuum
    damping never kills pure-state entanglement in finite time.
    """
    _check_eta(eta)
    x, _ = _invariants(psi)
    return 2.0 * math.sqrt(eta) * x


def c2_unbalanced(psi: QubitPure, eta_a: float, eta_b: float) -> float:
    """Raw concurrence under unequal couplings; reduces to the symmetric and
    one-sided forms at eta_a = eta_b and eta_b = 1."""
    _check_eta(eta_a)
    _check_eta(eta_b)
    x, d2 = _invariants(psi)
    return 2.0 * math.sqrt(eta_a * eta_b) * (
        x - math.sqrt((1.0 - eta_a) * (1.0 - eta_b)) * d2
    )


def sde_threshold(psi: QubitPure) -> float | None:
    """Symmetric-coupling eta below which the raw two-sided concurrence is <= 0.

    None when entanglement is never completely lost (|ad - bg| >= |d|^2,
    including every delta = 0 state).  Raises ``SeparableInputError`` for
    separable input, where the question is empty.
    """
    x, d2 = _invariants(psi)
    if 2.0 * x <= 1e-12:
        raise SeparableInputError("input state is separable")
    if x >= d2:
        return None
    return 1.0 - x / d2
