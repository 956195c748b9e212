import numpy as np
import pytest
from numpy.testing import assert_allclose

from swapqrn.channel import ground_state, outcome_distribution, trajectory_step
from swapqrn.embedding import (
    EmbeddingWeights, init_weights, context_window, compute_angles,
    embedding_unitary,
)
from swapqrn.reservoir import (
    ReservoirConfig, step, run_exact, run_sampled, run_trajectories,
    bitstring_labels, features_to_csv, features_from_csv,
    features_to_json, features_from_json,
)

import oracles


def zero_weights(c, n_mem):
    return EmbeddingWeights(w_in=np.zeros((c, n_mem, 3)),
                            w_bias=np.zeros((n_mem, 3)),
                            w_hidden=np.zeros(n_mem), seed=0)


class TestReservoirConfig:

    def test_n_mem_is_half(self):
        assert ReservoirConfig(n_qubits=12, gamma=0.5).n_mem == 6

    def test_rejects_odd_or_small(self):
        for nq in (0, 1, 3, 7):
            with pytest.raises(ValueError):
                ReservoirConfig(n_qubits=nq, gamma=0.5)

    def test_rejects_bad_gamma(self):
        for g in (0.0, -1.0, 1.2):
            with pytest.raises(ValueError):
                ReservoirConfig(n_qubits=4, gamma=g)

    def test_stochastic_backends_need_shots(self):
        with pytest.raises(ValueError):
            ReservoirConfig(n_qubits=4, gamma=0.5, backend="sampled")
        with pytest.raises(ValueError):
            ReservoirConfig(n_qubits=4, gamma=0.5, backend="trajectory",
                            n_shots=0)
        ReservoirConfig(n_qubits=4, gamma=0.5, backend="sampled", n_shots=100)

    def test_rejects_unknown_backend(self):
        with pytest.raises(ValueError):
            ReservoirConfig(n_qubits=4, gamma=0.5, backend="magic")


class TestStep:

    def test_full_swap_bitflip_round(self):
        """gamma=1, one qubit, rx(pi) embedding: outcome (0, 1), state resets."""
        w = EmbeddingWeights(w_in=np.zeros((1, 1, 3)),
                             w_bias=np.array([[np.pi, 0.0, 0.0]]),
                             w_hidden=np.zeros(1), seed=0)
        cfg = ReservoirConfig(n_qubits=2, gamma=1.0)
        rho, dist = step(ground_state(1), np.array([0.0]), w, cfg)
        assert_allclose(dist, [0.0, 1.0], atol=1e-12)
        assert_allclose(rho, ground_state(1), atol=1e-12)

    def test_distribution_is_pre_channel(self):
        """The returned row is the readout law of the post-embedding state."""
        rng = np.random.default_rng(3)
        w = init_weights(5, c=1, n_mem=2)
        cfg = ReservoirConfig(n_qubits=4, gamma=0.4)
        rho0 = oracles.random_density(rng, 4)
        theta = compute_angles(np.array([0.3]), w)
        u = embedding_unitary(theta, w.w_hidden, 1)
        rho1 = u @ rho0 @ u.conj().T
        _, dist = step(rho0, np.array([0.3]), w, cfg)
        assert_allclose(dist, outcome_distribution(rho1, 0.4), atol=1e-13)


class TestRunExactAgainstJointRegister:

    def test_matches_brute_force(self):
        """Reduced recursion = full joint-register evolution, 3 random embeddings."""
        for seed in (1, 2, 3):
            for n_qubits in (2, 4, 6):
                n_mem = n_qubits // 2
                cfg = ReservoirConfig(n_qubits=n_qubits, gamma=0.45, c=2,
                                      n_repeats=2, seed=seed)
                w = init_weights(seed, c=2, n_mem=n_mem)
                u = np.random.default_rng(seed).random(10)
                rows = run_exact(u, w, cfg)

                rho_mem = ground_state(n_mem)
                for t in range(10):
                    theta = compute_angles(context_window(u, t, 2), w)
                    emb = embedding_unitary(theta, w.w_hidden, 2)
                    rho_mem = emb @ rho_mem @ emb.conj().T
                    probs, rho_mem = oracles.joint_measure_and_reset(rho_mem, 0.45)
                    assert np.max(np.abs(rows[t] - probs)) <= 1e-10

    def test_rows_are_distributions(self):
        cfg = ReservoirConfig(n_qubits=6, gamma=0.35)
        w = init_weights(42, c=1, n_mem=3)
        rows = run_exact(np.random.default_rng(0).random(100), w, cfg)
        assert rows.shape == (100, 8)
        assert rows.min() >= 0.0
        assert np.max(np.abs(rows.sum(axis=1) - 1.0)) <= 1e-9

    def test_deterministic(self):
        cfg = ReservoirConfig(n_qubits=4, gamma=0.7, n_repeats=3)
        w = init_weights(7, c=1, n_mem=2)
        u = np.random.default_rng(1).random(30)
        assert_allclose(run_exact(u, w, cfg), run_exact(u, w, cfg),
                        rtol=0, atol=0)

    def test_weight_config_mismatch_rejected(self):
        cfg = ReservoirConfig(n_qubits=4, gamma=0.5, c=2)
        with pytest.raises(ValueError):
            run_exact(np.zeros(5), init_weights(1, c=1, n_mem=2), cfg)
        with pytest.raises(ValueError):
            run_exact(np.zeros(5), init_weights(1, c=2, n_mem=3), cfg)


class TestFadingMemory:

    def test_contraction_at_stated_rate_identity_embedding(self):
        """With an identity embedding the row gap scales as (1-p)^t exactly."""
        cfg = ReservoirConfig(n_qubits=4, gamma=0.5)
        w = zero_weights(1, 2)
        u = np.zeros(30)
        rho_a = ground_state(2)
        rho_b = np.zeros((4, 4), dtype=complex)
        rho_b[3, 3] = 1.0  # |11><11|
        gaps = []
        for t in range(30):
            x = context_window(u, t, 1)
            rho_a, row_a = step(rho_a, x, w, cfg)
            rho_b, row_b = step(rho_b, x, w, cfg)
            gaps.append(np.max(np.abs(row_a - row_b)))
        # ceil(log 1e-6 / log(1-p)) = 20 steps at p = 1/2
        assert all(g <= 1e-6 for g in gaps[20:])
        for a, b in zip(gaps[5:24], gaps[6:25]):
            assert abs(b / a - 0.5) <= 0.05

    def test_initial_state_forgotten_generic_embedding(self):
        """Random embedding: coherences halve the rate, gap < 1e-6 within 40 steps."""
        rng = np.random.default_rng(11)
        cfg = ReservoirConfig(n_qubits=4, gamma=0.5)
        w = init_weights(11, c=1, n_mem=2)
        u = rng.random(45)
        rho_a = ground_state(2)
        rho_b = oracles.random_density(rng, 4)
        gap = None
        for t in range(45):
            x = context_window(u, t, 1)
            rho_a, row_a = step(rho_a, x, w, cfg)
            rho_b, row_b = step(rho_b, x, w, cfg)
            if t >= 40:
                assert np.max(np.abs(row_a - row_b)) <= 1e-6


class TestRunSampled:

    def test_total_variation_against_exact(self):
        """1e6 shots keep every row within TV < 0.01 of the exact backend."""
        w = init_weights(42, c=1, n_mem=2)
        u = np.random.default_rng(5).random(50)
        exact = run_exact(u, w, ReservoirConfig(n_qubits=4, gamma=0.6))
        cfg = ReservoirConfig(n_qubits=4, gamma=0.6, backend="sampled",
                              n_shots=1_000_000)
        sampled = run_sampled(u, w, cfg, np.random.default_rng(123))
        tv = 0.5 * np.abs(sampled - exact).sum(axis=1)
        assert tv.max() < 0.01

    def test_deterministic_given_stream(self):
        w = init_weights(1, c=1, n_mem=1)
        cfg = ReservoirConfig(n_qubits=2, gamma=0.5, backend="sampled",
                              n_shots=300)
        u = np.random.default_rng(2).random(20)
        a = run_sampled(u, w, cfg, np.random.default_rng(99))
        b = run_sampled(u, w, cfg, np.random.default_rng(99))
        assert_allclose(a, b, rtol=0, atol=0)

    def test_rows_are_frequencies(self):
        w = init_weights(3, c=1, n_mem=2)
        cfg = ReservoirConfig(n_qubits=4, gamma=0.3, backend="sampled",
                              n_shots=640)
        rows = run_sampled(np.random.default_rng(0).random(15), w, cfg,
                           np.random.default_rng(1))
        assert np.all(rows >= 0)
        assert_allclose(rows.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(np.abs(np.round(rows * 640) - rows * 640) < 1e-9)


class TestRunTrajectories:

    def test_marginals_match_exact(self):
        """Per-timestep trajectory frequencies approach the exact rows."""
        w = init_weights(42, c=1, n_mem=2)
        u = np.random.default_rng(7).random(20)
        exact = run_exact(u, w, ReservoirConfig(n_qubits=4, gamma=0.55))
        cfg = ReservoirConfig(n_qubits=4, gamma=0.55, backend="trajectory",
                              n_shots=10_000)
        freq = run_trajectories(u, w, cfg, np.random.default_rng(17))
        tv = 0.5 * np.abs(freq - exact).sum(axis=1)
        assert tv.max() < 0.05

    def test_equals_per_shot_collapse_loop(self):
        """The batched kernel reproduces shot-by-shot trajectory_step streams."""
        n_shots, t_len = 12, 6
        w = init_weights(3, c=1, n_mem=2)
        u = np.random.default_rng(4).random(t_len)
        cfg = ReservoirConfig(n_qubits=4, gamma=0.5, backend="trajectory",
                              n_shots=n_shots)
        freq = run_trajectories(u, w, cfg, np.random.default_rng(31))

        unitaries = [embedding_unitary(compute_angles(context_window(u, t, 1), w),
                                       w.w_hidden, 1) for t in range(t_len)]
        counts = np.zeros((t_len, 4))
        for child in np.random.default_rng(31).spawn(n_shots):
            psi = np.zeros(4, dtype=complex)
            psi[0] = 1.0
            for t in range(t_len):
                psi, bits = trajectory_step(unitaries[t] @ psi, 0.5, child)
                counts[t, bits] += 1
        assert_allclose(freq, counts / n_shots, rtol=0, atol=0)

    def test_chunking_does_not_change_results(self):
        w = init_weights(2, c=1, n_mem=1)
        u = np.random.default_rng(9).random(8)
        cfg = ReservoirConfig(n_qubits=2, gamma=0.7, backend="trajectory",
                              n_shots=50)
        a = run_trajectories(u, w, cfg, np.random.default_rng(5), chunk=7)
        b = run_trajectories(u, w, cfg, np.random.default_rng(5), chunk=50)
        assert_allclose(a, b, rtol=0, atol=0)


class TestFeatureSerialization:

    def test_labels_lexicographic(self):
        assert bitstring_labels(2) == ["00", "01", "10", "11"]
        assert bitstring_labels(1) == ["0", "1"]

    def test_csv_round_trip_bit_exact(self, tmp_path):
        rows = np.random.default_rng(0).random((7, 4))
        path = tmp_path / "features.csv"
        features_to_csv(path, rows)
        header = path.read_text().splitlines()[0]
        assert header == "t,00,01,10,11"
        back = features_from_csv(path)
        assert_allclose(back, rows, rtol=0, atol=0)

    def test_json_round_trip_with_config_echo(self, tmp_path):
        cfg = ReservoirConfig(n_qubits=4, gamma=0.25, n_repeats=2, c=3,
                              n_shots=500, backend="sampled", seed=9)
        rows = np.random.default_rng(1).random((5, 4))
        path = tmp_path / "features.json"
        features_to_json(path, rows, cfg)
        back, echo = features_from_json(path)
        assert_allclose(back, rows, rtol=0, atol=0)
        assert echo["n_qubits"] == 4
        assert echo["gamma"] == 0.25
        assert echo["backend"] == "sampled"
