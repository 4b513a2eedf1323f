import numpy as np
import pytest

from decolab import (
    BipartiteState,
    DampingChannel,
    Mode,
    ModeDims,
    MomentMatrixSpec,
    Ordering,
    QubitPure,
    apply_channel,
    build_matrix,
    c1_closed,
    c2_closed,
    c2_unbalanced,
    log_negativity,
    partial_transpose,
    qubit_state,
    sde_threshold,
    wootters_concurrence,
)
from decolab.errors import (
    EtaOutOfRangeError,
    NotTwoQubitError,
    SeparableInputError,
    UnphysicalError,
)
from decolab.numerics import det, herm_eigvals, kron
from conftest import bell_pure, random_qubit_pure, random_state


def lopsided_pure() -> QubitPure:
    """(|00> + 2|11>) / sqrt(5): loses its entanglement at eta = 1/2."""
    return QubitPure(1.0 / np.sqrt(5.0), 0.0, 0.0, 2.0 / np.sqrt(5.0))


def damp_both(state, eta_a, eta_b, phi=0.0):
    out = apply_channel(state, DampingChannel(eta=eta_a, phi=phi, mode=Mode.A))
    return apply_channel(out, DampingChannel(eta=eta_b, phi=phi, mode=Mode.B))


class TestPartialTranspose:
    def test_product_spectrum_unchanged(self, rng):
        rho_a = np.diag([0.2, 0.8]).astype(complex)
        rho_b = np.diag([0.5, 0.3, 0.2]).astype(complex)
        state = BipartiteState(kron(rho_a, rho_b), ModeDims(2, 3))
        pt = partial_transpose(state, Mode.B)
        assert np.allclose(
            herm_eigvals(pt), herm_eigvals(state.rho), atol=1e-12
        )
        assert herm_eigvals(pt)[0] >= -1e-12

    def test_bell_spectrum(self):
        state = qubit_state(bell_pure())
        for mode in (Mode.A, Mode.B):
            assert np.allclose(
                herm_eigvals(partial_transpose(state, mode)), [-0.5, 0.5, 0.5, 0.5]
            )

    def test_modes_related_by_full_transpose(self, rng):
        state = random_state(rng, 3, 2)
        pt_a = partial_transpose(state, Mode.A)
        pt_b = partial_transpose(state, Mode.B)
        assert np.allclose(pt_a, pt_b.T)
        assert np.allclose(herm_eigvals(pt_a), herm_eigvals(pt_b), atol=1e-12)

    def test_hermitian_unit_trace(self, rng):
        state = random_state(rng, 2, 4)
        pt = partial_transpose(state, Mode.A)
        assert np.max(np.abs(pt - pt.conj().T)) <= 1e-14
        assert np.trace(pt).real == pytest.approx(1.0)


class TestLogNegativity:
    def test_separable_is_zero(self, rng):
        rho_a = np.diag([0.35, 0.65]).astype(complex)
        rho_b = np.diag([0.9, 0.1]).astype(complex)
        state = BipartiteState(kron(rho_a, rho_b), ModeDims(2, 2))
        result = log_negativity(state)
        assert result.log_negativity == 0.0
        assert result.min_pt_eig >= -1e-12

    def test_bell_is_one(self):
        result = log_negativity(qubit_state(bell_pure()))
        assert result.log_negativity == pytest.approx(1.0, abs=1e-12)
        assert result.min_pt_eig == pytest.approx(-0.5, abs=1e-12)

    def test_rejects_unphysical(self):
        state = BipartiteState(np.diag([1.5, -0.5]).astype(complex), ModeDims(2, 1))
        with pytest.raises(UnphysicalError):
            log_negativity(state)

    def test_ppt_iff_zero_on_small_dims(self, rng):
        # NPT is conclusive for 2x2 and 2x3: positive partial transpose
        # must give exactly zero, a negative one strictly positive E_N.
        for d_a, d_b in ((2, 2), (2, 3)):
            for _ in range(60):
                state = random_state(rng, d_a, d_b)
                result = log_negativity(state)
                pt_min = result.min_pt_eig
                if pt_min >= -1e-12:
                    assert result.log_negativity <= 1e-10
                else:
                    assert result.log_negativity > 0.0


class TestWoottersConcurrence:
    def test_bell_is_maximal(self):
        result = wootters_concurrence(qubit_state(bell_pure()))
        assert result.value == pytest.approx(1.0, abs=1e-10)
        assert result.lambdas[0] == pytest.approx(1.0, abs=1e-10)

    def test_product_is_zero(self):
        psi = QubitPure(1.0, 0.0, 0.0, 0.0)
        assert wootters_concurrence(qubit_state(psi)).value == pytest.approx(
            0.0, abs=1e-10
        )

    def test_pure_state_closed_form(self, rng):
        for _ in range(50):
            psi = random_qubit_pure(rng)
            a, b, g, d = psi.amplitudes()
            expected = 2.0 * abs(a * d - b * g)
            result = wootters_concurrence(qubit_state(psi))
            assert result.value == pytest.approx(expected, abs=1e-9)

    def test_lambdas_sorted_descending(self, rng):
        state = random_state(rng, 2, 2)
        lam = wootters_concurrence(state).lambdas
        assert all(x >= y - 1e-12 for x, y in zip(lam, lam[1:]))

    def test_rejects_other_dims(self, rng):
        with pytest.raises(NotTwoQubitError):
            wootters_concurrence(random_state(rng, 2, 3))


class TestClosedForms:
    def test_no_damping_reproduces_concurrence(self, rng):
        psi = random_qubit_pure(rng)
        a, b, g, d = psi.amplitudes()
        c0 = 2.0 * abs(a * d - b * g)
        assert c2_closed(psi, 1.0) == pytest.approx(c0)
        assert c1_closed(psi, 1.0) == pytest.approx(c0)
        assert c2_unbalanced(psi, 1.0, 1.0) == pytest.approx(c0)

    def test_bell_midpoint(self):
        assert c2_closed(bell_pure(), 0.5) == pytest.approx(0.25)

    def test_lopsided_threshold_value(self):
        psi = lopsided_pure()
        assert c2_closed(psi, 0.5) == pytest.approx(0.0, abs=1e-15)
        assert c1_closed(psi, 0.5) == pytest.approx(0.8 * np.sqrt(0.5))
        assert c1_closed(psi, 0.0) == 0.0

    def test_unbalanced_reductions(self, rng):
        psi = random_qubit_pure(rng)
        for eta in (0.0, 0.4, 1.0):
            assert c2_unbalanced(psi, eta, eta) == pytest.approx(c2_closed(psi, eta))
            assert c2_unbalanced(psi, eta, 1.0) == pytest.approx(c1_closed(psi, eta))

    def test_unbalanced_minimized_at_equal_couplings(self):
        psi = lopsided_pure()
        product = 0.36
        grid = np.linspace(product, 1.0, 401)
        values = [c2_unbalanced(psi, ea, product / ea) for ea in grid]
        best = grid[int(np.argmin(values))]
        assert abs(best - 0.6) <= 2e-3

    def test_matches_channel_oracle(self, rng):
        for _ in range(20):
            psi = random_qubit_pure(rng)
            state = qubit_state(psi)
            for eta_a, eta_b in ((0.5, 0.5), (0.3, 1.0), (0.9, 0.4)):
                evolved = damp_both(state, eta_a, eta_b)
                numeric = wootters_concurrence(evolved).value
                closed = max(0.0, c2_unbalanced(psi, eta_a, eta_b))
                assert numeric == pytest.approx(closed, abs=1e-9)

    def test_rejects_bad_eta(self, rng):
        psi = random_qubit_pure(rng)
        with pytest.raises(EtaOutOfRangeError):
            c2_closed(psi, -0.1)
        with pytest.raises(EtaOutOfRangeError):
            c2_unbalanced(psi, 0.5, 1.1)


class TestSdeThreshold:
    def test_bell_never_dies(self):
        assert sde_threshold(bell_pure()) is None

    def test_lopsided_dies_at_half(self):
        assert sde_threshold(lopsided_pure()) == pytest.approx(0.5)

    def test_delta_zero_never_dies(self):
        psi = QubitPure(0.0, 1.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0), 0.0)
        assert sde_threshold(psi) is None

    def test_rejects_separable(self):
        with pytest.raises(SeparableInputError):
            sde_threshold(QubitPure(1.0, 0.0, 0.0, 0.0))

    def test_threshold_matches_channel_oracle(self, rng):
        # Just above the threshold the damped state is still entangled;
        # just below, its clamped concurrence is zero.
        for _ in range(10):
            psi = random_qubit_pure(rng, min_concurrence=0.05)
            threshold = None
            try:
                threshold = sde_threshold(psi)
            except SeparableInputError:
                continue
            if threshold is None or not (0.02 < threshold < 0.98):
                continue
            state = qubit_state(psi)
            above = wootters_concurrence(
                damp_both(state, threshold + 0.01, threshold + 0.01)
            ).value
            below = wootters_concurrence(
                damp_both(state, threshold - 0.01, threshold - 0.01)
            ).value
            assert above > 0.0
            assert below == pytest.approx(0.0, abs=1e-10)


class TestCrossModuleConsistency:
    def test_d3_sign_tracks_concurrence(self, rng):
        # det over the 4x4 normally ordered set is negative exactly when the
        # pure state with delta != 0 is entangled.
        spec = MomentMatrixSpec(
            Ordering.NOM_A, ((1, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1))
        )
        for _ in range(40):
            psi = random_qubit_pure(rng)
            if abs(psi.delta) < 0.05:
                continue
            state = qubit_state(psi, ModeDims(3, 3))
            d3 = det(build_matrix(state, spec)).real
            conc = wootters_concurrence(qubit_state(psi)).value
            if conc > 1e-6:
                assert d3 < 0.0
            if d3 < -1e-12:
                assert conc > 0.0

    def test_one_sided_damping_never_kills_pure_entanglement(self, rng):
        for _ in range(25):
            psi = random_qubit_pure(rng, min_concurrence=1e-3)
            state = qubit_state(psi)
            for eta in (0.05, 0.4, 0.95):
                evolved = apply_channel(state, DampingChannel(eta=eta))
                assert wootters_concurrence(evolved).value > 0.0
