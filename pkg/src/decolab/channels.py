"""Amplitude damping by passive coupling to a bath mode.

The coupling strength is parameterized directly by eta: eta = 1 leaves the
state untouched, eta = 0 assimilates it completely into the bath.  Three
equivalent forwards are provided (Kraus sum, beam-splitter dilation with a
vacuum bath, dilation with a coherent bath) plus the formal inverse map,
which is linear and trace-preserving but *not* positive: applying it may
produce a Hermitian unit-trace matrix with negative eigenvalues.  A physical
output of the inverse map is exactly the state that damps into the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    EtaOutOfRangeError,
    EtaZeroError,
    ValidationFailure,
)
from .fock import BipartiteState, Mode, annihilation_op, coherent_state, embed_op
from .numerics import herm_eigvals, matrix_exp

DEFAULT_PHYSICALITY_EPS = 1e-10

# The coherent-bath dilation needs the environment truncation to hold a
# displaced coherent state; require headroom on |alpha| before trusting it.
ENV_HEADROOM = 1.5


@dataclass(frozen=True)
class DampingChannel:
    """One-mode damping: coupling eta, beam-splitter phase phi, target mode.

    ``n_max`` caps the Kraus series; ``None`` means d - 1 of the target mode,
    which makes the series exact (higher lowering powers vanish on the
    truncation).
    """

    eta: float
    phi: float = 0.0
    mode: Mode = Mode.A
    n_max: int | None = None

    def __post_init__(self):
        _check_eta(self.eta)
        if self.n_max is not None and self.n_max < 0:
            raise ValidationFailure(f"n_max must be >= 0, got {self.n_max}")


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of equal square dimension."""

    ops: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def completeness_defect(self) -> float:
        """Max-abs of sum(K^dag K) - I."""
        acc = sum(k.conj().T @ k for k in self.ops)
        return float(np.max(np.abs(acc - np.eye(self.dim))))


def _check_eta(eta: float, zero_error: type[Exception] | None = None):
    if not (0.0 <= eta <= 1.0):
        raise EtaOutOfRangeError(f"eta must lie in [0, 1], got {eta}")
    if zero_error is not None and eta == 0.0:
        raise zero_error("eta = 0 is not allowed here")


def damping_kraus(eta: float, phi: float, d: int, n_max: int | None = None) -> KrausSet:
    """Kraus operators K_0 ... K_n of vacuum damping on a d-level ladder.

    <m-n| K_n |m> = sqrt(C(m, n)) * eta^((m-n)/2) * (1-eta)^(n/2) * e^(i n phi),
    which satisfies the completeness relation exactly at n_max = d - 1.
    """
    _check_eta(eta)
    if n_max is None:
        n_max = d - 1
    ops = []
    for n in range(n_max + 1):
        k = np.zeros((d, d), dtype=np.complex128)
        for m in range(n, d):
            k[m - n, m] = (
                math.sqrt(math.comb(m, n))
                * eta ** ((m - n) / 2)
                * (1.0 - eta) ** (n / 2)
                * np.exp(1j * n * phi)
            )
        ops.append(k)
    return KrausSet(tuple(ops))


def _inverse_kraus(eta: float, phi: float, d: int) -> KrausSet:
    """Operators L_n of the inverse map; combined with signs (-1)^n."""
    _check_eta(eta, zero_error=EtaZeroError)
    ops = []
    for n in range(d):
        k = np.zeros((d, d), dtype=np.complex128)
        for m in range(n, d):
            k[m - n, m] = (
                math.sqrt(math.comb(m, n))
                * ((1.0 - eta) / eta) ** (n / 2)
                * eta ** (-(m - n) / 2)
                * np.exp(1j * n * phi)
            )
        ops.append(k)
    return KrausSet(tuple(ops))


def apply_channel(state: BipartiteState, ch: DampingChannel) -> BipartiteState:
    """Damp one mode of a bipartite state: rho -> sum_n K_n rho K_n^dag."""
    d = state.dims.dim(Mode(ch.mode))
    kraus = damping_kraus(ch.eta, ch.phi, d, ch.n_max)
    out = np.zeros_like(state.rho)
    for k in kraus.ops:
        full = embed_op(k, ch.mode, state.dims)
        out += full @ state.rho @ full.conj().T
    return BipartiteState(out, state.dims)


def inverse_damping(
    state: BipartiteState, eta: float, phi: float = 0.0, mode: Mode = Mode.A
) -> BipartiteState:
    """Invert vacuum damping: rho_in = sum_n (-1)^n L_n rho_out L_n^dag.

    The series terminates exactly at n = d - 1 of the target mode.  Hermitian
    and trace-preserving, but not positive; gate the result with
    ``is_physical`` before treating it as a state.
    """
    d = state.dims.dim(Mode(mode))
    ops = _inverse_kraus(eta, phi, d)
    out = np.zeros_like(state.rho)
    for n, k in enumerate(ops.ops):
        full = embed_op(k, mode, state.dims)
        out += (-1) ** n * (full @ state.rho @ full.conj().T)
    return BipartiteState(out, state.dims)


def beam_splitter_unitary(eta: float, phi: float, d_sys: int, d_env: int) -> np.ndarray:
    """Two-mode passive coupling unitary U with U^dag a U = sqrt(eta) a + sqrt(1-eta) e^(i phi) r.

    Built as exp(theta (e^(i phi) a^dag r - e^(-i phi) a r^dag)) with mixing
    angle theta = arccos(sqrt(eta)); the sign/phase convention is pinned by
    the stated Heisenberg transform, which holds exactly away from the
    truncation edge (the generator conserves total photon number, so blocks
    with n_sys + n_env below both truncations are exact).
    """
    _check_eta(eta, zero_error=EtaOutOfRangeError)
    theta = math.acos(math.sqrt(eta))
    a = np.kron(annihilation_op(d_sys), np.eye(d_env, dtype=np.complex128))
    r = np.kron(np.eye(d_sys, dtype=np.complex128), annihilation_op(d_env))
    gen = theta * (
        np.exp(1j * phi) * a.conj().T @ r - np.exp(-1j * phi) * a @ r.conj().T
    )
    return matrix_exp(gen)


def displacement_op(alpha: complex, d: int) -> np.ndarray:
    """D(alpha) = exp(alpha a^dag - alpha* a) on a d-level ladder."""
    a = annihilation_op(d)
    alpha = complex(alpha)
    return matrix_exp(alpha * a.conj().T - np.conj(alpha) * a)


def _dilation_kraus(
    eta: float, phi: float, d_sys: int, d_env: int, env_ket: np.ndarray
) -> KrausSet:
    """Kraus operators K_n = <n| U (I (x) |env>) of the dilated channel."""
    u = beam_splitter_unitary(eta, phi, d_sys, d_env)
    u4 = u.reshape(d_sys, d_env, d_sys, d_env)
    # K_n[s, s'] = sum_e U[(s, n), (s', e)] env[e]
    ks = np.einsum("snte,e->nst", u4, env_ket)
    return KrausSet(tuple(ks[n] for n in range(d_env)))


def coherent_bath_evolve(
    state: BipartiteState,
    eta: float,
    phi: float,
    alpha: complex,
    d_env: int,
    mode: Mode = Mode.A,
) -> BipartiteState:
    """Damp one mode through a beam splitter whose bath port carries |alpha>.

    alpha = 0 reproduces the vacuum channel.  The environment truncation must
    pass the coherent-state loss check with headroom ENV_HEADROOM, since the
    bath state gets displaced during the interaction.
    """
    _check_eta(eta, zero_error=EtaOutOfRangeError)
    coherent_state(complex(alpha) * ENV_HEADROOM, d_env)  # truncation guard
    env = coherent_state(alpha, d_env)
    d = state.dims.dim(Mode(mode))
    kraus = _dilation_kraus(eta, phi, d, d_env, env)
    out = np.zeros_like(state.rho)
    for k in kraus.ops:
        full = embed_op(k, mode, state.dims)
        out += full @ state.rho @ full.conj().T
    return BipartiteState(out, state.dims)


def is_physical(
    state: BipartiteState, eps: float = DEFAULT_PHYSICALITY_EPS
) -> tuple[bool, float]:
    """(state is PSD within eps, minimal eigenvalue)."""
    if eps < 0:
        raise EtaOutOfRangeError(f"eps must be >= 0, got {eps}")
    min_eig = float(herm_eigvals(state.rho)[0])
    return min_eig >= -eps, min_eig
