import numpy as np
import pytest

from decolab import (
    BipartiteState,
    DampingChannel,
    Mode,
    ModeDims,
    apply_channel,
    beam_splitter_unitary,
    coherent_bath_evolve,
    damping_kraus,
    displacement_op,
    embed_op,
    inverse_damping,
    is_physical,
    log_negativity,
    qubit_state,
)
from decolab.errors import EtaOutOfRangeError, EtaZeroError, TruncationTooLossyError
from conftest import bell_pure, random_qubit_pure, random_state


def single_mode_state(rho) -> BipartiteState:
    """Wrap a one-mode density matrix as a (d, 1) bipartite state."""
    rho = np.asarray(rho, dtype=complex)
    return BipartiteState(rho, ModeDims(rho.shape[0], 1))


class TestDampingKraus:
    def test_eta_one_is_identity_channel(self):
        ks = damping_kraus(1.0, 0.3, 5)
        assert np.allclose(ks.ops[0], np.eye(5))
        for k in ks.ops[1:]:
            assert np.allclose(k, 0.0)

    def test_eta_zero_maps_everything_to_vacuum(self):
        ks = damping_kraus(0.0, 0.0, 2)
        k0 = np.zeros((2, 2))
        k0[0, 0] = 1.0
        k1 = np.zeros((2, 2))
        k1[0, 1] = 1.0
        assert np.allclose(ks.ops[0], k0)
        assert np.allclose(ks.ops[1], k1)

    def test_qubit_matrices(self):
        eta, phi = 0.37, 0.9
        ks = damping_kraus(eta, phi, 2)
        assert np.allclose(ks.ops[0], np.diag([1.0, np.sqrt(eta)]))
        expected = np.zeros((2, 2), dtype=complex)
        expected[0, 1] = np.sqrt(1.0 - eta) * np.exp(1j * phi)
        assert np.allclose(ks.ops[1], expected)

    def test_completeness_over_grid(self):
        for d in range(2, 21):
            for eta in np.linspace(0.0, 1.0, 21):
                assert damping_kraus(eta, 0.4, d).completeness_defect() <= 1e-12

    def test_rejects_bad_eta(self):
        with pytest.raises(EtaOutOfRangeError):
            damping_kraus(1.2, 0.0, 3)


class TestApplyChannel:
    def test_one_photon_populations(self):
        eta = 0.35
        state = single_mode_state(np.diag([0.0, 1.0]))
        out = apply_channel(state, DampingChannel(eta=eta))
        assert np.allclose(out.rho, np.diag([1.0 - eta, eta]), atol=1e-14)

    def test_eta_one_leaves_state_alone(self, rng):
        state = random_state(rng, 3, 2)
        out = apply_channel(state, DampingChannel(eta=1.0, mode=Mode.B))
        assert np.allclose(out.rho, state.rho, atol=1e-14)

    def test_semigroup_composition(self, rng):
        state = random_state(rng, 4, 2)
        eta1, eta2 = 0.8, 0.55
        twice = apply_channel(
            apply_channel(state, DampingChannel(eta=eta1)), DampingChannel(eta=eta2)
        )
        once = apply_channel(state, DampingChannel(eta=eta1 * eta2))
        assert np.max(np.abs(twice.rho - once.rho)) <= 1e-12

    def test_trace_and_hermiticity_preserved(self, rng):
        state = random_state(rng, 3, 3)
        for eta in (0.0, 0.21, 0.77, 1.0):
            out = apply_channel(state, DampingChannel(eta=eta, phi=1.1, mode=Mode.B))
            assert abs(np.trace(out.rho) - 1.0) <= 1e-12
            assert np.max(np.abs(out.rho - out.rho.conj().T)) <= 1e-12

    def test_phase_does_not_matter_for_vacuum_bath(self, rng):
        state = random_state(rng, 3, 2)
        out0 = apply_channel(state, DampingChannel(eta=0.6, phi=0.0))
        out1 = apply_channel(state, DampingChannel(eta=0.6, phi=2.2))
        assert np.allclose(out0.rho, out1.rho, atol=1e-14)

    def test_partial_kraus_cutoff_loses_trace(self, rng):
        # Truncating the series below d - 1 drops completeness; the resulting
        # matrix is no longer a state and the constructor says so.
        from decolab.errors import NormError

        state = random_state(rng, 4, 1)
        with pytest.raises(NormError):
            apply_channel(state, DampingChannel(eta=0.4, n_max=1))
        # ...unless the state has no population above the cutoff anyway
        low = qubit_state(bell_pure(), ModeDims(4, 2))
        out = apply_channel(low, DampingChannel(eta=0.4, n_max=1))
        full = apply_channel(low, DampingChannel(eta=0.4))
        assert np.allclose(out.rho, full.rho, atol=1e-14)


class TestBeamSplitterUnitary:
    def test_eta_one_is_identity_up_to_phase(self):
        u = beam_splitter_unitary(1.0, 0.5, 3, 3)
        assert np.allclose(np.abs(np.diag(u)), 1.0)
        assert np.allclose(u - np.diag(np.diag(u)), 0.0, atol=1e-14)

    def test_unitary(self):
        u = beam_splitter_unitary(0.42, 1.3, 4, 5)
        assert np.allclose(u.conj().T @ u, np.eye(20), atol=1e-12)

    def test_heisenberg_transform_below_edge(self):
        eta, phi, d_s, d_e = 0.6, 0.7, 7, 8
        u = beam_splitter_unitary(eta, phi, d_s, d_e)
        a = np.kron(np.diag(np.sqrt(np.arange(1, d_s)), k=1), np.eye(d_e))
        r = np.kron(np.eye(d_s), np.diag(np.sqrt(np.arange(1, d_e)), k=1))
        lhs = u.conj().T @ a @ u
        rhs = np.sqrt(eta) * a + np.sqrt(1 - eta) * np.exp(1j * phi) * r
        for n_s in range(d_s):
            for n_e in range(d_e):
                if n_s + n_e <= 4:
                    col = n_s * d_e + n_e
                    assert np.max(np.abs(lhs[:, col] - rhs[:, col])) <= 1e-12

    def test_vacuum_stays_vacuum(self):
        u = beam_splitter_unitary(0.3, 0.2, 4, 4)
        vac = np.zeros(16)
        vac[0] = 1.0
        out = u @ vac
        assert abs(abs(out[0]) - 1.0) <= 1e-14

    def test_dilation_matches_kraus(self, rng):
        eta = 0.58
        state = single_mode_state(np.asarray(random_state(rng, 4, 1).rho))
        dilated = coherent_bath_evolve(state, eta, 0.9, 0.0, d_env=6)
        kraus = apply_channel(state, DampingChannel(eta=eta, phi=0.9))
        assert np.max(np.abs(dilated.rho - kraus.rho)) <= 1e-10

    def test_rejects_eta_zero(self):
        with pytest.raises(EtaOutOfRangeError):
            beam_splitter_unitary(0.0, 0.0, 3, 3)


class TestCoherentBath:
    def test_vacuum_limit(self, rng):
        state = random_state(rng, 2, 2)
        out_coh = coherent_bath_evolve(state, 0.7, 0.4, 0.0, d_env=6, mode=Mode.B)
        out_kraus = apply_channel(state, DampingChannel(eta=0.7, phi=0.4, mode=Mode.B))
        assert np.max(np.abs(out_coh.rho - out_kraus.rho)) <= 1e-10

    def test_entanglement_invariance(self, rng):
        psi = random_qubit_pure(rng, min_concurrence=0.3)
        state = qubit_state(psi, ModeDims(8, 8))
        eta, alpha = 0.6, 0.5
        vac = apply_channel(state, DampingChannel(eta=eta))
        coh = coherent_bath_evolve(state, eta, 0.0, alpha, d_env=10)
        e_vac = log_negativity(vac).log_negativity
        e_coh = log_negativity(coh).log_negativity
        assert abs(e_vac - e_coh) <= 1e-6

    def test_equals_displaced_vacuum_output(self, rng):
        # With the convention U^dag a U = sqrt(eta) a + sqrt(1-eta) e^(i phi) r,
        # a coherent bath acts as the vacuum bath followed by a local
        # displacement of amplitude +alpha e^(i phi) sqrt(1-eta).
        eta, phi, alpha = 0.55, 0.8, 0.4
        psi = random_qubit_pure(rng)
        state = qubit_state(psi, ModeDims(10, 2))
        coh = coherent_bath_evolve(state, eta, phi, alpha, d_env=12, mode=Mode.A)
        vac = apply_channel(state, DampingChannel(eta=eta, phi=phi, mode=Mode.A))
        shift = alpha * np.exp(1j * phi) * np.sqrt(1.0 - eta)
        d_op = embed_op(displacement_op(shift, 10), Mode.A, state.dims)
        displaced = d_op @ vac.rho @ d_op.conj().T
        assert np.max(np.abs(displaced - coh.rho)) <= 1e-6

    def test_truncation_guard(self, rng):
        state = random_state(rng, 2, 2)
        with pytest.raises(TruncationTooLossyError):
            coherent_bath_evolve(state, 0.7, 0.0, 2.0, d_env=4)


class TestInverseDamping:
    def test_vacuum_fixed_point(self):
        vac = np.zeros((4, 4), dtype=complex)
        vac[0, 0] = 1.0
        state = BipartiteState(vac, ModeDims(2, 2))
        out = inverse_damping(state, 0.4)
        assert np.allclose(out.rho, vac, atol=1e-14)

    def test_eta_one_is_identity(self, rng):
        state = random_state(rng, 3, 2)
        out = inverse_damping(state, 1.0, 0.7, Mode.B)
        assert np.allclose(out.rho, state.rho, atol=1e-14)

    def test_round_trips(self, rng):
        for eta in (0.3, 0.7, 0.95):
            state = random_state(rng, 3, 3)
            for mode in (Mode.A, Mode.B):
                ch = DampingChannel(eta=eta, phi=0.25, mode=mode)
                there = apply_channel(inverse_damping(state, eta, 0.25, mode), ch)
                assert np.max(np.abs(there.rho - state.rho)) <= 1e-10
                back = inverse_damping(apply_channel(state, ch), eta, 0.25, mode)
                assert np.max(np.abs(back.rho - state.rho)) <= 1e-10

    def test_trace_and_hermiticity(self, rng):
        state = random_state(rng, 3, 3)
        out = inverse_damping(state, 0.45)
        assert abs(np.trace(out.rho) - 1.0) <= 1e-12
        assert np.max(np.abs(out.rho - out.rho.conj().T)) <= 1e-12

    def test_rejects_eta_zero(self, rng):
        with pytest.raises(EtaZeroError):
            inverse_damping(random_state(rng, 2, 2), 0.0)


class TestIsPhysical:
    def test_channel_outputs_are_physical(self, rng):
        state = random_state(rng, 3, 2)
        out = apply_channel(state, DampingChannel(eta=0.5))
        ok, min_eig = is_physical(out)
        assert ok
        assert min_eig >= -1e-10

    def test_explicit_negative_eigenvalue(self):
        state = BipartiteState(np.diag([1.5, -0.5]).astype(complex), ModeDims(2, 1))
        ok, min_eig = is_physical(state)
        assert not ok
        assert min_eig == pytest.approx(-0.5)

    def test_inverse_map_goes_unphysical_at_small_eta(self, rng):
        # A rank-deficient separable state loses positivity immediately
        # under the inverse map.
        v = np.zeros(9)
        v[0 * 3 + 1] = 1.0  # |0>|1>
        rho = np.outer(v, v)
        state = BipartiteState(rho.astype(complex), ModeDims(3, 3))
        pre = inverse_damping(inverse_damping(state, 0.6, 0.0, Mode.A), 0.6, 0.0, Mode.B)
        ok, min_eig = is_physical(pre)
        assert not ok
        assert min_eig < -1e-10
