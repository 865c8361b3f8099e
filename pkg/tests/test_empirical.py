import math

import numpy as np
import pytest

from psrates import (
    Alphabet,
    Dmc,
    Metric,
    Pmf,
    SequencePair,
    achievable_transmission_rate,
    bsc,
    composition_sorted_rate,
    divergence,
    empirical_code_rate,
    exact_composition_sequence,
    likelihood_metric,
    monte_carlo_t_c,
    posterior_metric,
    sample_channel_outputs,
    uniform_pmf,
)


class TestSequencePair:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            SequencePair((0, 1), (0,))

    def test_empty(self):
        with pytest.raises(ValueError):
            SequencePair((), ())

    def test_unknown_symbol(self):
        q = likelihood_metric(bsc(0.11))
        with pytest.raises(ValueError):
            empirical_code_rate(SequencePair((0, 7), (0, 1)), q)


class TestEmpiricalCodeRate:
    def test_two_term_hand_oracle(self):
        # frozen value from a by-hand two-term evaluation on a BSC(0.11)
        q = likelihood_metric(bsc(0.11))
        pair = SequencePair((0, 1), (0, 0))
        assert empirical_code_rate(pair, q) == pytest.approx(
            -0.6762736649728772, abs=1e-12
        )

    def test_all_agree_positions(self):
        q = likelihood_metric(bsc(0.11))
        pair = SequencePair((0, 0, 1, 1), (0, 0, 1, 1))
        expected = 1 + math.log2(0.89)
        assert empirical_code_rate(pair, q) == pytest.approx(expected, abs=1e-12)

    def test_metric_zero_gives_minus_inf(self):
        q = Metric(
            Alphabet((0, 1)), Alphabet((0, 1)), np.array([[1.0, 0.0], [1.0, 1.0]])
        )
        assert empirical_code_rate(SequencePair((0,), (1,)), q) == -math.inf

    def test_position_order_invariant(self):
        rng = np.random.default_rng(50)
        ch = bsc(0.2)
        q = likelihood_metric(ch)
        x = tuple(rng.integers(0, 2, 12))
        y = tuple(rng.integers(0, 2, 12))
        perm = rng.permutation(12)
        xp = tuple(x[i] for i in perm)
        yp = tuple(y[i] for i in perm)
        assert empirical_code_rate(SequencePair(x, y), q) == pytest.approx(
            empirical_code_rate(SequencePair(xp, yp), q), abs=1e-12
        )


class TestCompositionSortedRate:
    def test_recombination_identity(self):
        rng = np.random.default_rng(51)
        ch = bsc(0.2)
        q = likelihood_metric(ch)
        for _ in range(20):
            x = tuple(rng.integers(0, 2, 16))
            y = tuple(rng.integers(0, 2, 16))
            pair = SequencePair(x, y)
            breakdown = composition_sorted_rate(pair, q)
            recombined = sum(f * inner for f, inner in breakdown.values())
            assert recombined == pytest.approx(empirical_code_rate(pair, q), abs=1e-10)

    def test_frequencies_sum_to_one(self):
        q = likelihood_metric(bsc(0.3))
        pair = SequencePair((0, 0, 0, 1), (0, 1, 0, 1))
        breakdown = composition_sorted_rate(pair, q)
        assert sum(f for f, _ in breakdown.values()) == pytest.approx(1.0)
        assert breakdown[0][0] == pytest.approx(0.75)

    def test_absent_symbols_omitted(self):
        q = likelihood_metric(bsc(0.3))
        breakdown = composition_sorted_rate(SequencePair((0, 0), (0, 1)), q)
        assert set(breakdown) == {0}


class TestExactComposition:
    def test_counts_match_rounding(self):
        rng = np.random.default_rng(52)
        p = Pmf(Alphabet((0, 1, 2)), np.array([0.2, 0.3, 0.5]))
        seq = exact_composition_sequence(p, 10, rng)
        assert sorted(np.bincount(seq, minlength=3)) == [2, 3, 5]

    def test_largest_remainder(self):
        rng = np.random.default_rng(53)
        p = Pmf(Alphabet((0, 1)), np.array([0.26, 0.74]))
        seq = exact_composition_sequence(p, 10, rng)
        counts = np.bincount(seq, minlength=2)
        # 2.6 and 7.4 -> the larger remainder gets the extra slot
        assert list(counts) == [3, 7]

    def test_length(self):
        rng = np.random.default_rng(54)
        p = Pmf(Alphabet((0, 1, 2, 3)), np.array([0.1, 0.2, 0.3, 0.4]))
        for n in (1, 7, 23):
            assert len(exact_composition_sequence(p, n, rng)) == n


class TestSampleChannelOutputs:
    def test_deterministic_channel(self):
        ch = Dmc(Alphabet((0, 1)), Alphabet((0, 1)), np.eye(2))
        rng = np.random.default_rng(55)
        x = np.array([0, 1, 1, 0])
        assert list(sample_channel_outputs(ch, x, rng)) == [0, 1, 1, 0]

    def test_empirical_law(self):
        ch = bsc(0.2)
        rng = np.random.default_rng(56)
        x = np.zeros(200000, dtype=int)
        y = sample_channel_outputs(ch, x, rng)
        assert y.mean() == pytest.approx(0.2, abs=0.01)


class TestMonteCarloTc:
    def test_converges_to_t_c(self):
        ch = bsc(0.05)
        p = uniform_pmf(ch.input)
        q = likelihood_metric(ch)
        rep = achievable_transmission_rate(p, ch, q)
        res = monte_carlo_t_c(p, ch, q, n=200, trials=400, rng_seed=7)
        assert abs(res.mean - rep.t_c) < 4 * res.std_error + 1e-9

    def test_shaped_exact_composition(self):
        ch = bsc(0.1)
        p = Pmf(ch.input, np.array([0.75, 0.25]))
        q = posterior_metric(p, ch)
        rep = achievable_transmission_rate(p, ch, q)
        res = monte_carlo_t_c(
            p, ch, q, n=400, trials=300, rng_seed=11, composition="exact"
        )
        # exact-composition estimate targets T_c up to the divergence penalty
        # vanishing variance in composition keeps it near the iid mean
        assert abs(res.mean - rep.t_c) < 5 * res.std_error + 5e-3

    def test_reproducible(self):
        ch = bsc(0.11)
        p = uniform_pmf(ch.input)
        q = likelihood_metric(ch)
        a = monte_carlo_t_c(p, ch, q, n=50, trials=20, rng_seed=3)
        b = monte_carlo_t_c(p, ch, q, n=50, trials=20, rng_seed=3)
        assert a == b

    def test_single_trial_has_infinite_std_error(self):
        ch = bsc(0.11)
        res = monte_carlo_t_c(
            uniform_pmf(ch.input), ch, likelihood_metric(ch), 20, 1, 0
        )
        assert res.std_error == math.inf

    def test_validation(self):
        ch = bsc(0.11)
        p = uniform_pmf(ch.input)
        q = likelihood_metric(ch)
        with pytest.raises(ValueError):
            monte_carlo_t_c(p, ch, q, 10, 0, 0)
        with pytest.raises(ValueError):
            monte_carlo_t_c(p, ch, q, 10, 5, 0, composition="typical")
