"""Alternating-maximization solver and the grid oracle."""

import math

import numpy as np
import pytest

from genmi import (
    DomainError,
    SolverConfig,
    TooLarge,
    arimoto_a1_spec,
    arimoto_a2_spec,
    brute_force_capacity,
    brute_force_search,
    convergence_trace,
    fb_spec,
    hayashi_spec,
    make_channel,
    make_pmf,
    mutual_information,
    shannon_spec,
    solve,
    uniform,
)

from conftest import binary_entropy, rand_channel

ALPHAS = (0.5, 2.0, 5.0)


def bsc(eps):
    return make_channel([[1 - eps, eps], [eps, 1 - eps]])


class TestSolveShannon:
    def test_bsc_closed_form(self):
        result = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-12), bsc(0.1))
        assert result.capacity == pytest.approx(math.log(2) - binary_entropy(0.1), abs=1e-10)
        assert result.capacity == pytest.approx(0.368064, abs=1e-6)
        np.testing.assert_allclose(result.argmax_p.probs, [0.5, 0.5], atol=1e-9)
        assert result.converged

    def test_identity_channel(self):
        for m in (2, 3, 4):
            result = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-12),
                           make_channel(np.eye(m)))
            assert result.capacity == pytest.approx(math.log(m), abs=1e-10)
            np.testing.assert_allclose(result.argmax_p.probs, 1 / m, atol=1e-9)

    def test_matches_oracle_on_random_channels(self):
        rng = np.random.default_rng(37)
        spec = shannon_spec()
        for _ in range(10):
            m, n = int(rng.integers(2, 4)), int(rng.integers(2, 4))
            w = rand_channel(rng, m, n)
            got = solve(SolverConfig(spec=spec, epsilon=1e-12), w).capacity
            oracle = brute_force_capacity(spec, w, 2e-3 if m == 3 else 1e-3)
            assert got == pytest.approx(oracle, abs=1e-4)


class TestSolveArimoto:
    def test_a1_a2_agree(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            w = rand_channel(rng, 3, 3)
            for a in ALPHAS:
                c1 = solve(SolverConfig(spec=arimoto_a1_spec(a), epsilon=1e-12), w).capacity
                c2 = solve(SolverConfig(spec=arimoto_a2_spec(a), epsilon=1e-12), w).capacity
                assert c1 == pytest.approx(c2, abs=1e-6)

    def test_identity_channel(self):
        result = solve(SolverConfig(spec=arimoto_a2_spec(2.0), epsilon=1e-12),
                       make_channel(np.eye(2)))
        assert result.capacity == pytest.approx(math.log(2), abs=1e-10)
        np.testing.assert_allclose(result.argmax_p.probs, [0.5, 0.5], atol=1e-9)

    def test_symmetric_channel_uniform_argmax(self):
        w = make_channel([[0.7, 0.2, 0.1], [0.1, 0.7, 0.2], [0.2, 0.1, 0.7]])
        for spec in (shannon_spec(), arimoto_a2_spec(0.5), arimoto_a2_spec(2.0),
                     arimoto_a1_spec(2.0)):
            result = solve(SolverConfig(spec=spec, epsilon=1e-12), w)
            assert np.max(np.abs(result.argmax_p.probs - 1 / 3)) < 1e-4


class TestSolveNumeric:
    def test_hayashi_fb_track_oracle(self):
        rng = np.random.default_rng(43)
        for _ in range(4):
            w = rand_channel(rng, 2, 2, floor=0.02)
            for spec in (hayashi_spec(2.0), fb_spec(2.0)):
                result = solve(SolverConfig(spec=spec, epsilon=1e-10, max_iter=5000), w)
                oracle = brute_force_capacity(spec, w, 1e-3)
                start = mutual_information(spec.pair, uniform(2), w).mi
                assert result.capacity >= start - 1e-10
                assert result.capacity <= oracle + 1e-4
                if result.converged:
                    assert result.capacity == pytest.approx(oracle, abs=1e-3)

    def test_forced_numeric_matches_closed_shannon(self):
        rng = np.random.default_rng(47)
        w = rand_channel(rng, 2, 3)
        closed = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-11), w)
        numeric = solve(
            SolverConfig(spec=shannon_spec(), epsilon=1e-11, force_numeric=True,
                         numeric_iters=400),
            w,
        )
        assert numeric.capacity == pytest.approx(closed.capacity, abs=1e-6)


class TestTraceAndConfig:
    def test_trace_monotone_everywhere(self):
        rng = np.random.default_rng(53)
        specs = [shannon_spec(), arimoto_a1_spec(0.5), arimoto_a2_spec(2.0),
                 hayashi_spec(2.0), fb_spec(2.0)]
        for spec in specs:
            slack = 1e-10 if spec.has_closed_p_step else 1e-8
            for _ in range(5):
                w = rand_channel(rng, 2, 2, floor=0.01)
                result = solve(SolverConfig(spec=spec, epsilon=1e-10, max_iter=2000), w)
                diffs = np.diff(result.trace)
                assert np.all(diffs >= -slack)

    def test_trace_rows(self):
        result = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-10),
                       make_channel([[0.9, 0.1], [0.3, 0.7]]))
        rows = convergence_trace(result)
        assert rows[0][0] == 0 and rows[0][2] is None
        assert all(rows[k][0] == k for k in range(len(rows)))
        assert all(r[2] >= -1e-10 for r in rows[1:])
        assert abs(rows[-1][2]) < 1e-10  # converged: final gain under threshold
        assert len(rows) == result.iterations + 1

    def test_epsilon_validation(self):
        for bad in (0.0, 1.0, -1e-3, 2.0):
            with pytest.raises(DomainError):
                SolverConfig(spec=shannon_spec(), epsilon=bad)

    def test_interior_start_required(self):
        cfg = SolverConfig(spec=shannon_spec(), p0=make_pmf([1.0, 0.0]))
        with pytest.raises(DomainError):
            solve(cfg, bsc(0.1))

    def test_nonconvergence_flagged(self):
        w = make_channel([[0.9, 0.1], [0.3, 0.7]])
        result = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-15, max_iter=2), w)
        assert not result.converged
        assert result.iterations == 2

    def test_relative_stopping(self):
        w = make_channel([[0.9, 0.1], [0.3, 0.7]])
        absolute = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-9), w)
        relative = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-9, relative=True), w)
        assert relative.converged
        assert relative.capacity == pytest.approx(absolute.capacity, abs=1e-7)


class TestOracle:
    def test_bsc_closed_form(self):
        val = brute_force_capacity(shannon_spec(), bsc(0.1), 1e-3)
        assert val == pytest.approx(math.log(2) - binary_entropy(0.1), abs=1e-5)

    def test_independent_channel_zero(self):
        w = make_channel([[0.4, 0.6], [0.4, 0.6]])
        for spec in (shannon_spec(), arimoto_a2_spec(2.0), hayashi_spec(0.5)):
            assert brute_force_capacity(spec, w, 1e-2) == pytest.approx(0.0, abs=1e-9)

    def test_matches_solver_for_arimoto(self):
        val = brute_force_capacity(arimoto_a2_spec(2.0), bsc(0.1), 1e-3)
        sol = solve(SolverConfig(spec=arimoto_a2_spec(2.0), epsilon=1e-12), bsc(0.1))
        assert val == pytest.approx(sol.capacity, abs=1e-4)

    def test_best_point_returned(self):
        val, best = brute_force_search(shannon_spec(), bsc(0.25), 1e-3)
        np.testing.assert_allclose(best.probs, [0.5, 0.5], atol=1e-6)
        assert val == pytest.approx(math.log(2) - binary_entropy(0.25), abs=1e-8)

    def test_size_and_resolution_guards(self):
        w5 = make_channel(np.full((5, 2), 0.5))
        with pytest.raises(TooLarge):
            brute_force_capacity(shannon_spec(), w5, 1e-2)
        with pytest.raises(DomainError):
            brute_force_capacity(shannon_spec(), bsc(0.1), 1e-5)
        with pytest.raises(DomainError):
            brute_force_capacity(shannon_spec(), bsc(0.1), 0.5)

    def test_three_input_grid(self):
        w = make_channel([[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]])
        val = brute_force_capacity(shannon_spec(), w, 1e-2)
        sol = solve(SolverConfig(spec=shannon_spec(), epsilon=1e-12), w)
        assert val == pytest.approx(sol.capacity, abs=1e-4)
