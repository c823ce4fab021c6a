import numpy as np
import pytest

from syncreset import automata as au
from syncreset import kraus
from syncreset import qcore as qc
from syncreset.automata import PermutationSpec, Word
from syncreset.kraus import ChannelPair, RotationSpec


def random_density(rng, n):
    mat = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = mat @ mat.conj().T
    return rho / np.trace(rho)


class TestRotation:
    def test_phi_zero(self):
        spec = RotationSpec(1, 2, 0, 0.0, 5)
        expected = np.eye(5)
        expected[0, 0] = 0
        assert np.allclose(kraus.rotation(spec), expected)

    def test_half_turn_is_signed_not(self):
        mat = kraus.rotation(RotationSpec(1, 2, 0, np.pi / 2, 4))
        assert np.allclose(mat @ qc.basis_state(4, 1), qc.basis_state(4, 2))
        assert np.allclose(mat @ qc.basis_state(4, 2), -qc.basis_state(4, 1))

    def test_annihilates_excluded_state(self):
        mat = kraus.rotation(RotationSpec(1, 2, 0, 0.7, 5))
        assert np.allclose(mat @ qc.basis_state(5, 0), 0)

    def test_rejects_index_collision(self):
        with pytest.raises(ValueError):
            RotationSpec(1, 1, 0, 0.5, 4)


class TestBuildChannels:
    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            kraus.build_channels(2, 0.1, 0.1)

    def test_a_channel_classical_shadow_n5(self):
        pair = kraus.build_channels(5, np.pi / 2, np.pi / 2)
        for k in (1, 2, 3):
            out = pair.A1 @ qc.basis_state(5, k)
            assert np.allclose(np.abs(out), np.abs(qc.basis_state(5, k + 1)))
        out = pair.A1 @ qc.basis_state(5, 4)
        assert np.allclose(np.abs(out), np.abs(qc.basis_state(5, 1)))

    def test_b_channel_classical_shadow_n5(self):
        pair = kraus.build_channels(5, np.pi / 2, np.pi / 2)
        assert np.allclose(np.abs(pair.B1 @ qc.basis_state(5, 0)),
                           np.abs(qc.basis_state(5, 2)))
        assert np.allclose(np.abs(pair.B1 @ qc.basis_state(5, 4)),
                           np.abs(qc.basis_state(5, 0)))

    @pytest.mark.parametrize("n", [3, 4, 5, 8])
    def test_completeness_grid(self, n):
        for phi_a in np.linspace(0, np.pi, 9):
            for phi_b in np.linspace(0, np.pi, 9):
                pair = kraus.build_channels(n, phi_a, phi_b)
                eye = np.eye(n)
                a_sum = pair.A1.conj().T @ pair.A1 + pair.A2.conj().T @ pair.A2
                b_sum = pair.B1.conj().T @ pair.B1 + pair.B2.conj().T @ pair.B2
                assert np.max(np.abs(a_sum - eye)) <= 1e-10
                assert np.max(np.abs(b_sum - eye)) <= 1e-10

    def test_a1_gram_drops_zero_state(self):
        pair = kraus.build_channels(6, 0.37, 0.91)
        expected = np.eye(6)
        expected[0, 0] = 0
        assert np.allclose(pair.A1.conj().T @ pair.A1, expected, atol=1e-10)


class TestApplyChannel:
    def test_a_at_phi_zero_moves_contraction(self):
        pair = kraus.build_channels(5, 0.0, 0.0)
        out = kraus.apply_channel(qc.density(qc.basis_state(5, 0)), "a", pair)
        assert np.allclose(out, qc.density(qc.basis_state(5, 1)))

    def test_b_half_turn(self):
        pair = kraus.build_channels(5, np.pi / 2, np.pi / 2)
        out = kraus.apply_channel(qc.density(qc.basis_state(5, 1)), "b", pair)
        assert np.allclose(out, qc.density(qc.basis_state(5, 0)))

    def test_cptp_properties_on_random_inputs(self):
        rng = np.random.default_rng(9)
        pair = kraus.build_channels(5, 0.8, 1.9)
        for which in "ab":
            for _ in range(5):
                rho = random_density(rng, 5)
                out = kraus.apply_channel(rho, which, pair)
                assert abs(np.trace(out) - 1) < 1e-10
                assert np.max(np.abs(out - out.conj().T)) < 1e-10
                assert np.linalg.eigvalsh(out).min() > -1e-9

    @pytest.mark.parametrize("n", range(3, 9))
    def test_classical_shadow_equivalence(self, n):
        pair = kraus.build_channels(n, np.pi / 2, np.pi / 2)
        dfa = au.build_family(PermutationSpec.basic(n))
        for q in range(n):
            rho = qc.density(qc.basis_state(n, q))
            for which, table in (("a", dfa.delta_a), ("b", dfa.delta_b)):
                out = kraus.apply_channel(rho, which, pair)
                assert np.allclose(out, qc.density(qc.basis_state(n, table[q])),
                                   atol=1e-12)

    def test_dimension_mismatch(self):
        pair = kraus.build_channels(5, 0.1, 0.1)
        with pytest.raises(ValueError):
            kraus.apply_channel(np.eye(4) / 4, "a", pair)


class TestRunChannelWord:
    def test_fig7_extreme_from_mixed(self):
        word = Word("abab", "application")
        out = kraus.run_channel_word(qc.maximally_mixed(5), word,
                                     np.pi / 2, np.pi / 2, 5)
        assert qc.basis_fidelity(out, 0) == pytest.approx(1.0, abs=1e-9)
        assert qc.purity(out) == pytest.approx(1.0, abs=1e-9)

    def test_b_first_reaches_one(self):
        word = Word("baba", "application")
        out = kraus.run_channel_word(qc.maximally_mixed(5), word,
                                     np.pi / 2, np.pi / 2, 5)
        assert qc.basis_fidelity(out, 1) == pytest.approx(1.0, abs=1e-9)

    def test_empty_word_identity(self):
        rho = qc.maximally_mixed(5)
        out = kraus.run_channel_word(rho, Word(""), 0.3, 0.4, 5)
        assert np.array_equal(out, rho)

    def test_resets_arbitrary_density_matrices(self):
        rng = np.random.default_rng(13)
        n = 5
        dfa = au.build_family(PermutationSpec.basic(n))
        word = au.shortest_sync_word(dfa)
        target = au.is_synchronizing(dfa, word)
        projector = qc.density(qc.basis_state(n, target))
        for _ in range(20):
            out = kraus.run_channel_word(random_density(rng, n), word,
                                         np.pi / 2, np.pi / 2, n)
            assert np.max(np.abs(out - projector)) < 1e-9

    def test_phi_zero_matches_independent_composition(self):
        # Independent oracle: compose the full 25x25 superoperators densely.
        n = 5
        pair = kraus.build_channels(n, 0.0, 0.0)
        supers = {}
        for which in "ab":
            k1, k2 = pair.kraus(which)
            supers[which] = np.kron(k1, k1.conj()) + np.kron(k2, k2.conj())
        word = Word("abab", "application")
        total = np.eye(n * n)
        for letter in word.application_letters():
            total = supers[letter] @ total
        rho0 = qc.maximally_mixed(n)
        expected = (total @ rho0.reshape(-1)).reshape(n, n)
        out = kraus.run_channel_word(rho0, word, 0.0, 0.0, n)
        assert np.max(np.abs(out - expected)) < 1e-12


class TestSweep:
    def test_corner_values(self):
        word = kraus.default_word(5)
        for init in ("mixed", "uniform"):
            rows = kraus.sweep(5, [np.pi / 2], init, word)
            (_, _, fid, pur) = rows[0]
            assert fid == pytest.approx(1.0, abs=1e-9)
            assert pur == pytest.approx(1.0, abs=1e-9)

    def test_purity_bounded_for_pure_init(self):
        word = kraus.default_word(5)
        rows = kraus.sweep(5, np.linspace(0, np.pi, 7), "uniform", word)
        assert all(pur <= 1 + 1e-10 for _, _, _, pur in rows)

    def test_grid_order_and_determinism(self):
        word = kraus.default_word(5)
        phis = np.linspace(0, np.pi, 5)
        rows = kraus.sweep(5, phis, "mixed", word)
        assert len(rows) == 25
        assert rows[0][:2] == (0.0, 0.0)
        assert rows[1][1] > 0.0  # phi_b varies fastest
        assert rows == kraus.sweep(5, phis, "mixed", word)

    def test_continuity_at_fine_resolution(self):
        # Smoothness regression at pi/100 steps guards against index bugs.
        word = kraus.default_word(5)
        phis = np.linspace(0, np.pi, 101)
        rows = kraus.sweep(5, phis, "mixed", word)
        grid_f = np.array([r[2] for r in rows]).reshape(101, 101)
        grid_p = np.array([r[3] for r in rows]).reshape(101, 101)
        for grid in (grid_f, grid_p):
            assert np.max(np.abs(np.diff(grid, axis=0))) < 0.2
            assert np.max(np.abs(np.diff(grid, axis=1))) < 0.2

    def test_rejects_unknown_init(self):
        with pytest.raises(ValueError):
            kraus.sweep(5, [0.0], "thermal", kraus.default_word(5))
