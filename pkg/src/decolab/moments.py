"""Operator-moment matrices and moment-based entanglement witnesses.

A Hermitian matrix M of creation/annihilation moments certifies entanglement
whenever det M < 0.  The matrices built here come in two flavors: the general
ordering (partial-transposition style on mode b) and the normally ordered
(NOM) subfamilies, whose rows scale diagonally under vacuum damping so that
sign(det) never changes while eta > 0.  First-order Hillery-Zubairy witnesses
are included for the same reason: they are built from normally ordered
moments and scale as eta * w under one-sided damping.

Moments are evaluated by explicit products of truncated mode operators; the
caller is responsible for enough Fock headroom that intermediate excursions
above the truncation do not matter for the state at hand.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    EtaOutOfRangeError,
    NotHermitianResultError,
    WrongOrderingError,
)
from .fock import BipartiteState, Mode, annihilation_op, embed_op
from .numerics import det as _det


class MultiIndex4(NamedTuple):
    """Exponents (i1, i2, i3, i4) of a general moment-matrix row."""

    i1: int
    i2: int
    i3: int
    i4: int


class MultiIndex3(NamedTuple):
    """Exponents (i1, i2, i3) of a normally ordered moment-matrix row."""

    i1: int
    i2: int
    i3: int


class Ordering(str, enum.Enum):
    GENERAL_SV = "general_sv"
    NOM_A = "nom_a"
    NOM_B = "nom_b"
    NOM_AB = "nom_ab"


class Verdict(str, enum.Enum):
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


_NOM_ORDERINGS = (Ordering.NOM_A, Ordering.NOM_B, Ordering.NOM_AB)


def _as_index(ordering: Ordering, raw) -> tuple[int, ...]:
    idx = tuple(int(c) for c in raw)
    want = 4 if ordering == Ordering.GENERAL_SV else 3
    if len(idx) != want:
        raise WrongOrderingError(
            f"{ordering.value} indices need {want} components, got {raw}"
        )
    if any(c < 0 for c in idx):
        raise WrongOrderingError(f"index components must be >= 0, got {raw}")
    if ordering == Ordering.NOM_AB and idx[2] != 0:
        raise WrongOrderingError(
            f"nom_ab uses (a-creation, b-creation, 0) indices, got {raw}"
        )
    return idx


@dataclass(frozen=True)
class MomentMatrixSpec:
    """An ordered multi-index set; list order fixes matrix row/column order."""

    ordering: Ordering
    indices: tuple

    def __post_init__(self):
        ordering = Ordering(self.ordering)
        idx = tuple(_as_index(ordering, i) for i in self.indices)
        if not idx:
            raise WrongOrderingError("index list must not be empty")
        if len(set(idx)) != len(idx):
            raise WrongOrderingError("indices must be pairwise distinct")
        object.__setattr__(self, "ordering", ordering)
        object.__setattr__(self, "indices", idx)

    @property
    def size(self) -> int:
        return len(self.indices)


def graded_indices(components: int, max_degree: int) -> list[tuple[int, ...]]:
    """All multi-indices with total degree <= max_degree, graded lexicographic."""
    out: list[tuple[int, ...]] = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for c in range(budget + 1):
            rec(prefix + [c], remaining - 1, budget - c)

    rec([], components, max_degree)
    out.sort(key=lambda t: (sum(t), t))
    return out


class _ModeOps:
    """Cached powers of the embedded mode operators for one state."""

    def __init__(self, state: BipartiteState):
        self.rho = state.rho
        dims = state.dims
        a = embed_op(annihilation_op(dims.d_a), Mode.A, dims)
        b = embed_op(annihilation_op(dims.d_b), Mode.B, dims)
        self._base = {
            "a": a,
            "ad": a.conj().T.copy(),
            "b": b,
            "bd": b.conj().T.copy(),
        }
        self._cache: dict[tuple[str, int], np.ndarray] = {}
        self._eye = np.eye(dims.total, dtype=np.complex128)

    def power(self, name: str, p: int) -> np.ndarray:
        if p == 0:
            return self._eye
        key = (name, p)
        if key not in self._cache:
            self._cache[key] = np.linalg.matrix_power(self._base[name], p)
        return self._cache[key]

    def expect(self, factors: Iterable[tuple[str, int]]) -> complex:
        op = self._eye
        for name, p in factors:
            if p:
                op = op @ self.power(name, p)
        return complex(np.trace(op @ self.rho))


def _element(ops: _ModeOps, ordering: Ordering, i, j) -> complex:
    if ordering == Ordering.GENERAL_SV:
        i1, i2, i3, i4 = i
        j1, j2, j3, j4 = j
        return ops.expect(
            [
                ("ad", i2),
                ("a", i1),
                ("ad", j1),
                ("a", j2),
                ("bd", j4),
                ("b", j3),
                ("bd", i3),
                ("b", i4),
            ]
        )
    if ordering == Ordering.NOM_A:
        i1, i2, i3 = i
        j1, j2, j3 = j
        return ops.expect(
            [
                ("ad", i1),
                ("a", j1),
                ("bd", j3),
                ("b", j2),
                ("bd", i2),
                ("b", i3),
            ]
        )
    if ordering == Ordering.NOM_B:
        i1, i2, i3 = i
        j1, j2, j3 = j
        return ops.expect(
            [
                ("bd", i1),
                ("b", j1),
                ("ad", j3),
                ("a", j2),
                ("ad", i2),
                ("a", i3),
            ]
        )
    if ordering == Ordering.NOM_AB:
        i1, i2, _ = i
        j1, j2, _ = j
        return ops.expect([("ad", i1), ("a", j1), ("bd", i2), ("b", j2)])
    raise WrongOrderingError(f"unknown ordering {ordering}")


def sv_element(state: BipartiteState, i, j) -> complex:
    """General moment-matrix element Tr[a^dag^i2 a^i1 a^dag^j1 a^j2 b^dag^j4 b^j3 b^dag^i3 b^i4 rho]."""
    i = _as_index(Ordering.GENERAL_SV, i)
    j = _as_index(Ordering.GENERAL_SV, j)
    return _element(_ModeOps(state), Ordering.GENERAL_SV, i, j)


def nom_element(state: BipartiteState, i, j, which: Ordering) -> complex:
    """Normally ordered moment-matrix element for the chosen NOM family."""
    which = Ordering(which)
    if which not in _NOM_ORDERINGS:
        raise WrongOrderingError(f"{which.value} is not a NOM ordering")
    i = _as_index(which, i)
    j = _as_index(which, j)
    return _element(_ModeOps(state), which, i, j)


def build_matrix(state: BipartiteState, spec: MomentMatrixSpec) -> np.ndarray:
    """Moment matrix M[r, c] over the spec's index list; asserted Hermitian."""
    ops = _ModeOps(state)
    n = spec.size
    m = np.empty((n, n), dtype=np.complex128)
    for r in range(n):
        for c in range(n):
            m[r, c] = _element(ops, spec.ordering, spec.indices[r], spec.indices[c])
    defect = float(np.max(np.abs(m - m.conj().T)))
    if defect > 1e-10:
        raise NotHermitianResultError(
            f"moment matrix defect {defect:.3e}; ordering bug suspected"
        )
    return m


def _scaling_powers(ordering: Ordering, idx) -> tuple[int, int]:
    """Normally ordered (a-power, b-power) of one row index."""
    if ordering == Ordering.NOM_A:
        return idx[0], 0
    if ordering == Ordering.NOM_B:
        return 0, idx[0]
    if ordering == Ordering.NOM_AB:
        return idx[0], idx[1]
    raise WrongOrderingError(f"scaling matrix undefined for {ordering.value}")


def scaling_matrix(spec: MomentMatrixSpec, eta_a: float, eta_b: float) -> np.ndarray:
    """Diagonal H with H[r, r] = eta_a^(p_a/2) * eta_b^(p_b/2).

    Under vacuum damping of the normally ordered mode(s), M(t) = H M(0) H
    holds entrywise, so det M(t) = det(H) det(M(0)) det(H).
    """
    if Ordering(spec.ordering) not in _NOM_ORDERINGS:
        raise WrongOrderingError(
            f"scaling matrix needs a NOM ordering, got {spec.ordering}"
        )
    for eta in (eta_a, eta_b):
        if not (0.0 <= eta <= 1.0):
            raise EtaOutOfRangeError(f"eta must lie in [0, 1], got {eta}")
    diag = []
    for idx in spec.indices:
        p_a, p_b = _scaling_powers(spec.ordering, idx)
        diag.append(eta_a ** (p_a / 2) * eta_b ** (p_b / 2))
    return np.diag(np.asarray(diag, dtype=np.complex128))


def hz_first_order(state: BipartiteState) -> tuple[float, float]:
    """First-order witnesses (w1, w2); w > 0 certifies entanglement.

    w1 = |<a b^dag>|^2 - <a^dag a b^dag b>
    w2 = |<a b>|^2 - <a^dag a><b^dag b>
    """
    ops = _ModeOps(state)
    ab_dag = ops.expect([("a", 1), ("bd", 1)])
    ab = ops.expect([("a", 1), ("b", 1)])
    na_nb = ops.expect([("ad", 1), ("a", 1), ("bd", 1), ("b", 1)]).real
    na = ops.expect([("ad", 1), ("a", 1)]).real
    nb = ops.expect([("bd", 1), ("b", 1)]).real
    w1 = abs(ab_dag) ** 2 - na_nb
    w2 = abs(ab) ** 2 - na * nb
    return float(w1), float(w2)


@dataclass(frozen=True)
class WitnessReport:
    """Determinant-witness outcome: entangled iff value < -tolerance."""

    value: float
    verdict: Verdict
    tolerance: float


def default_det_tolerance(size: int) -> float:
    return 1e-12 * size


def witness_from_det(
    state: BipartiteState, spec: MomentMatrixSpec, tol: float | None = None
) -> WitnessReport:
    """Evaluate det of the spec's moment matrix and classify its sign."""
    if tol is None:
        tol = default_det_tolerance(spec.size)
    d = _det(build_matrix(state, spec))
    if abs(d.imag) > tol:
        raise NotHermitianResultError(
            f"determinant imaginary residue {d.imag:.3e} exceeds {tol:.1e}"
        )
    value = float(d.real)
    verdict = Verdict.ENTANGLED if value < -tol else Verdict.INCONCLUSIVE
    return WitnessReport(value=value, verdict=verdict, tolerance=float(tol))
