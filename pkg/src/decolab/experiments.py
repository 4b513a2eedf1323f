"""Reproducible experiment drivers: eta sweeps, separable-state sampling, and
the search for finite-strength disentanglement via the inverse damping map.

Every driver is deterministic under its seed and grid, and the CSV / JSON
writers below are byte-stable so that identical runs produce identical files.

A preimage found by ``sde_search`` witnesses sudden death of entanglement:
it is a physical NPT state that damps *exactly* into the separable seed at
the recorded eta, so its entanglement is completely gone at finite coupling.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import os
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .channels import (
    DEFAULT_PHYSICALITY_EPS,
    DampingChannel,
    apply_channel,
    inverse_damping,
    is_physical,
)
from .entanglement import log_negativity, wootters_concurrence
from .errors import (
    DimensionMismatchError,
    EtaOutOfRangeError,
    EtaZeroError,
    ValidationFailure,
)
from .fock import BipartiteState, Mode, ModeDims
from .moments import MomentMatrixSpec, witness_from_det

ENV_EPS_VAR = "DECOLAB_EPS"

SDE_LOG_NEG_THRESHOLD = 0.01

# Inverse sweeps blow up toward eta = 0; this grid brackets the regime where
# physical entangled preimages of well-mixed separable states actually occur.
DEFAULT_INVERSE_GRID = tuple(np.linspace(0.5, 1.0, 101))

CSV_COLUMNS = ("eta", "min_eig", "log_negativity", "concurrence")


def physicality_eps() -> float:
    """Positivity tolerance; the DECOLAB_EPS env var overrides the default."""
    raw = os.environ.get(ENV_EPS_VAR)
    if raw is None:
        return DEFAULT_PHYSICALITY_EPS
    try:
        eps = float(raw)
    except ValueError as exc:
        raise ValidationFailure(f"{ENV_EPS_VAR}={raw!r} is not a float") from exc
    if eps < 0:
        raise ValidationFailure(f"{ENV_EPS_VAR} must be >= 0, got {eps}")
    return eps


@dataclass(frozen=True)
class SeparableSpec:
    """Ensemble of random separable states: mixtures of ``num_terms`` products
    of Haar-random local pure states with flat-Dirichlet weights."""

    num_terms: int
    local_dim: int
    seed: int

    def __post_init__(self):
        if self.num_terms < 1:
            raise ValidationFailure(f"num_terms must be >= 1, got {self.num_terms}")
        if self.local_dim < 2:
            raise ValidationFailure(f"local_dim must be >= 2, got {self.local_dim}")
        if self.seed < 0:
            raise ValidationFailure(f"seed must be >= 0, got {self.seed}")


def _haar_ket(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_separable(spec: SeparableSpec) -> BipartiteState:
    """Draw one separable state; bit-identical for identical specs."""
    rng = np.random.default_rng(spec.seed)
    d = spec.local_dim
    weights = rng.dirichlet(np.ones(spec.num_terms))
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    for k in range(spec.num_terms):
        u = _haar_ket(rng, d)
        v = _haar_ket(rng, d)
        rho += weights[k] * np.kron(np.outer(u, u.conj()), np.outer(v, v.conj()))
    return BipartiteState(rho, ModeDims(d, d))


@dataclass(frozen=True)
class SweepRecord:
    """One grid point.  ``log_negativity`` and ``concurrence`` are None when
    undefined (unphysical preimage, or not a two-qubit state)."""

    eta: float
    min_eig: float
    log_negativity: float | None
    det_values: dict[str, float] = field(default_factory=dict)
    concurrence: float | None = None


def _record(
    state: BipartiteState,
    eta: float,
    eps: float,
    witnesses: dict[str, MomentMatrixSpec] | None,
) -> SweepRecord:
    physical, min_eig = is_physical(state, eps)
    log_neg = log_negativity(state, eps).log_negativity if physical else None
    dets = {}
    if witnesses:
        for name, spec in witnesses.items():
            dets[name] = witness_from_det(state, spec).value
    conc = None
    if physical and (state.d_a, state.d_b) == (2, 2):
        conc = wootters_concurrence(state).value
    return SweepRecord(
        eta=float(eta),
        min_eig=min_eig,
        log_negativity=log_neg,
        det_values=dets,
        concurrence=conc,
    )


def _check_grid(eta_grid, positive: bool):
    grid = [float(e) for e in eta_grid]
    if not grid:
        raise ValidationFailure("eta grid must not be empty")
    for eta in grid:
        if not (0.0 <= eta <= 1.0):
            raise EtaOutOfRangeError(f"grid value {eta} outside [0, 1]")
        if positive and eta == 0.0:
            raise EtaZeroError("inverse sweeps need eta > 0")
    return grid


def inverse_sweep(
    state: BipartiteState,
    eta_grid,
    phi: float = 0.0,
    two_sided: bool = True,
    eps: float | None = None,
    witnesses: dict[str, MomentMatrixSpec] | None = None,
) -> list[SweepRecord]:
    """Apply the inverse damping map at each eta and record the preimage's
    minimal eigenvalue plus (when physical) its log-negativity."""
    grid = _check_grid(eta_grid, positive=True)
    if eps is None:
        eps = physicality_eps()
    records = []
    for eta in grid:
        pre = inverse_damping(state, eta, phi, Mode.A)
        if two_sided:
            pre = inverse_damping(pre, eta, phi, Mode.B)
        records.append(_record(pre, eta, eps, witnesses))
    return records


class ModePlan(str, enum.Enum):
    A_ONLY = "a_only"
    B_ONLY = "b_only"
    BOTH = "both"
    UNBALANCED = "unbalanced"


def _evolve_plan(
    state: BipartiteState, eta: float, plan: ModePlan, phi: float, eta_b_fixed: float | None
) -> BipartiteState:
    if plan == ModePlan.A_ONLY:
        return apply_channel(state, DampingChannel(eta=eta, phi=phi, mode=Mode.A))
    if plan == ModePlan.B_ONLY:
        return apply_channel(state, DampingChannel(eta=eta, phi=phi, mode=Mode.B))
    if plan == ModePlan.BOTH:
        out = apply_channel(state, DampingChannel(eta=eta, phi=phi, mode=Mode.A))
        return apply_channel(out, DampingChannel(eta=eta, phi=phi, mode=Mode.B))
    if plan == ModePlan.UNBALANCED:
        if eta_b_fixed is None:
            raise ValidationFailure("unbalanced plan needs eta_b_fixed")
        out = apply_channel(state, DampingChannel(eta=eta, phi=phi, mode=Mode.A))
        return apply_channel(out, DampingChannel(eta=eta_b_fixed, phi=phi, mode=Mode.B))
    raise ValidationFailure(f"unknown plan {plan}")


def forward_sweep(
    state: BipartiteState,
    eta_grid,
    plan: ModePlan = ModePlan.BOTH,
    phi: float = 0.0,
    eta_b_fixed: float | None = None,
    eps: float | None = None,
    witnesses: dict[str, MomentMatrixSpec] | None = None,
) -> list[SweepRecord]:
    """Damp the state at each grid eta per the mode plan and record
    log-negativity, concurrence (two-qubit states), and witness determinants."""
    grid = _check_grid(eta_grid, positive=False)
    plan = ModePlan(plan)
    if eps is None:
        eps = physicality_eps()
    if eta_b_fixed is not None and not (0.0 <= eta_b_fixed <= 1.0):
        raise EtaOutOfRangeError(f"eta_b_fixed {eta_b_fixed} outside [0, 1]")
    records = []
    for eta in grid:
        evolved = _evolve_plan(state, eta, plan, phi, eta_b_fixed)
        records.append(_record(evolved, eta, eps, witnesses))
    return records


@dataclass(frozen=True)
class SdeHit:
    """A separable seed whose inverse-map preimage at ``eta`` is a physical
    entangled state (so the preimage disentangles completely at that eta)."""

    state: BipartiteState
    eta: float
    preimage_min_eig: float
    preimage_log_neg: float


def sde_search(
    spec: SeparableSpec,
    eta_grid=DEFAULT_INVERSE_GRID,
    trials: int = 100,
    two_sided: bool = True,
    phi: float = 0.0,
    eps: float | None = None,
    threshold: float = SDE_LOG_NEG_THRESHOLD,
) -> list[SdeHit]:
    """Scan seeded random separable states for physical entangled preimages.

    Trial t uses seed ``spec.seed + t``, so a search can be continued by
    offsetting the seed.  Returns every (state, eta) pair whose preimage is
    physical and has log-negativity above the threshold; an empty list just
    means the ensemble produced no witness in this many trials.
    """
    if trials < 1:
        raise ValidationFailure(f"trials must be >= 1, got {trials}")
    grid = _check_grid(eta_grid, positive=True)
    if eps is None:
        eps = physicality_eps()
    hits = []
    for t in range(trials):
        seed_spec = dataclasses.replace(spec, seed=spec.seed + t)
        state = random_separable(seed_spec)
        for eta in grid:
            pre = inverse_damping(state, eta, phi, Mode.A)
            if two_sided:
                pre = inverse_damping(pre, eta, phi, Mode.B)
            physical, min_eig = is_physical(pre, eps)
            if not physical:
                continue
            log_neg = log_negativity(pre, eps).log_negativity
            if log_neg > threshold:
                hits.append(
                    SdeHit(
                        state=state,
                        eta=eta,
                        preimage_min_eig=min_eig,
                        preimage_log_neg=log_neg,
                    )
                )
    return hits


# ---------------------------------------------------------------------------
# File interchange: state JSON and sweep CSV.
# ---------------------------------------------------------------------------


def state_to_dict(state: BipartiteState) -> dict:
    flat = state.rho.reshape(-1)
    return {
        "dims": [state.d_a, state.d_b],
        "rho": [[float(z.real), float(z.imag)] for z in flat],
    }


def state_from_dict(payload: dict) -> BipartiteState:
    try:
        d_a, d_b = (int(x) for x in payload["dims"])
        entries = payload["rho"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationFailure(f"malformed state payload: {exc}") from exc
    n = d_a * d_b
    if len(entries) != n * n:
        raise DimensionMismatchError(
            f"rho has {len(entries)} entries, expected {n * n}"
        )
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return BipartiteState(flat.reshape(n, n), ModeDims(d_a, d_b))


def save_state(state: BipartiteState, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh)
        fh.write("\n")


def load_state(path) -> BipartiteState:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationFailure(f"{path} is not valid JSON: {exc}") from exc
    return state_from_dict(payload)


def _fmt(x: float | None) -> str:
    return "" if x is None else format(x, ".17g")


def sweep_to_csv(records: list[SweepRecord], path):
    """Write sweep records with 17 significant digits; None becomes an empty
    field so downstream plots show gaps instead of fabricated zeros."""
    det_names = sorted({name for r in records for name in r.det_values})
    header = list(CSV_COLUMNS) + [f"det_{name}" for name in det_names]
    lines = [",".join(header)]
    for r in records:
        row = [_fmt(r.eta), _fmt(r.min_eig), _fmt(r.log_negativity), _fmt(r.concurrence)]
        row += [_fmt(r.det_values.get(name)) for name in det_names]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Frozen regression case for the disentanglement search.
# ---------------------------------------------------------------------------

REGRESSION_RESOURCE = "sde_regression_state.json"


@dataclass(frozen=True)
class RegressionCase:
    """A committed search hit: seed state plus its recorded preimage window."""

    state: BipartiteState
    eta: float
    preimage_min_eig: float
    preimage_log_neg: float
    grid: tuple[float, ...]
    window: tuple[float, float]
    spec: SeparableSpec


def load_regression_case() -> RegressionCase:
    ref = resources.files("decolab.data").joinpath(REGRESSION_RESOURCE)
    payload = json.loads(ref.read_text(encoding="utf-8"))
    return RegressionCase(
        state=state_from_dict(payload["state"]),
        eta=float(payload["eta"]),
        preimage_min_eig=float(payload["preimage_min_eig"]),
        preimage_log_neg=float(payload["preimage_log_neg"]),
        grid=tuple(float(x) for x in payload["grid"]),
        window=(float(payload["window"][0]), float(payload["window"][1])),
        spec=SeparableSpec(**payload["spec"]),
    )
