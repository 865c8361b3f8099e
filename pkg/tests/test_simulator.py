import math

import numpy as np
import pytest

from psrates import (
    Pmf,
    SequencePair,
    SimConfig,
    TypicalSpec,
    bsc,
    encoding_failure_bound,
    is_typical,
    likelihood_metric,
    mary_symmetric,
    pairwise_union_bound,
    posterior_metric,
    run,
    run_classical,
    run_layered_ps,
    uniform_pmf,
)


def layered_config(**overrides):
    ch = bsc(0.05)
    p = uniform_pmf(ch.input)
    defaults = dict(
        p_x=p,
        ch=ch,
        q=likelihood_metric(ch),
        n=16,
        r_c=0.75,
        r_tx=0.5,
        eps_typ=0.25,
        trials=60,
        rng_seed=100,
        mode="layered-ps",
    )
    defaults.update(overrides)
    return SimConfig(**defaults)


class TestSimConfig:
    def test_rate_ordering_enforced(self):
        with pytest.raises(ValueError):
            layered_config(r_tx=0.9)

    def test_feasibility_cap(self):
        with pytest.raises(ValueError):
            layered_config(n=40, r_c=1.0, r_tx=0.5)

    def test_trials_positive(self):
        with pytest.raises(ValueError):
            layered_config(trials=0)

    def test_codebook_sizes(self):
        cfg = layered_config(n=16, r_c=0.75, r_tx=0.5)
        n_c, n_u, n_v = cfg.codebook_sizes()
        assert n_u == 2 ** 8
        assert n_v == 2 ** 12 // 2 ** 8
        assert n_c == n_u * n_v

    def test_classical_sizes(self):
        cfg = layered_config(mode="classical")
        n_c, n_u, n_v = cfg.codebook_sizes()
        assert n_v == 1
        assert n_c == n_u


class TestPairwiseUnionBound:
    def test_formula(self):
        q = likelihood_metric(bsc(0.11))
        pair = SequencePair((0, 0, 1, 1), (0, 0, 1, 1))
        t_hat = 1 + math.log2(0.89)
        expected = min(1.0, 2.0 ** (-4 * (t_hat - 0.5)))
        assert pairwise_union_bound(pair, q, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_clipped_to_one(self):
        q = likelihood_metric(bsc(0.11))
        pair = SequencePair((0, 1), (1, 0))  # all positions flipped
        assert pairwise_union_bound(pair, q, 1.0) == 1.0


class TestLayeredPs:
    def test_reproducible(self):
        a = run_layered_ps(layered_config())
        b = run_layered_ps(layered_config())
        assert a == b

    def test_mode_dispatch_checks(self):
        with pytest.raises(ValueError):
            run_layered_ps(layered_config(mode="classical"))
        with pytest.raises(ValueError):
            run_classical(layered_config())
        assert run(layered_config()) == run_layered_ps(layered_config())

    def test_counts_consistent(self):
        res = run_layered_ps(layered_config())
        assert res.trials == 60
        assert res.encoding_failures + res.decode_trials == res.trials
        assert res.encoding_failure_rate == res.encoding_failures / res.trials
        if res.decode_trials:
            assert res.decode_error_rate == res.decode_errors / res.decode_trials
        assert res.message_error_rate == res.message_errors / res.trials
        assert res.t_hat_min <= res.t_hat_mean <= res.t_hat_max
        assert len(res.per_trial) == res.trials

    def test_realized_rates(self):
        res = run_layered_ps(layered_config())
        n_c, n_u, _ = layered_config().codebook_sizes()
        assert res.realized_r_c == pytest.approx(math.log2(n_c) / 16)
        assert res.realized_r_tx == pytest.approx(math.log2(n_u) / 16)

    def test_encoding_failures_match_analytic_bound(self):
        cfg = layered_config(n=16, r_c=1.0, r_tx=0.25, trials=150, eps_typ=0.25)
        res = run_layered_ps(cfg)
        spec = TypicalSpec(cfg.p_x, cfg.n, cfg.eps_typ)
        bound = encoding_failure_bound(spec, res.realized_r_c - res.realized_r_tx)
        # observed frequency may exceed the bound only by sampling noise
        sigma = math.sqrt(max(bound, 1e-6) / cfg.trials)
        assert res.encoding_failure_rate <= bound + 5 * sigma + 0.02

    def test_transmitted_words_are_typical(self):
        # replay the trial RNG and confirm the encoder picks typical words
        cfg = layered_config(trials=30)
        res = run_layered_ps(cfg)
        spec = TypicalSpec(cfg.p_x, cfg.n, cfg.eps_typ)
        n_c, n_u, n_v = cfg.codebook_sizes()
        for t, rec in enumerate(res.per_trial):
            rng = np.random.default_rng([cfg.rng_seed, t])
            cb = rng.integers(2, size=(n_c, cfg.n))
            u = int(rng.integers(n_u))
            block = cb[u * n_v:(u + 1) * n_v]
            has_typical = any(is_typical(row, spec) for row in block)
            assert rec.encoding_failed == (not has_typical)

    def test_error_rate_below_union_bound(self):
        cfg = layered_config(n=16, r_c=0.5, r_tx=0.25, trials=200)
        res = run_layered_ps(cfg)
        sigma = math.sqrt(0.25 / res.decode_trials)
        assert res.decode_error_rate <= res.bound_2exp + 4 * sigma

    def test_low_rate_low_noise_decodes(self):
        cfg = layered_config(n=20, r_c=0.4, r_tx=0.2, trials=60)
        res = run_layered_ps(cfg)
        assert res.message_error_rate < 0.2

    def test_noiseless_errors_only_from_duplicates(self):
        # on a noiseless channel the decoder can only fail when the
        # transmitted codeword appears more than once in the codebook
        ch = mary_symmetric(2, 0.0)
        cfg = layered_config(ch=ch, q=likelihood_metric(ch), trials=40)
        res = run_layered_ps(cfg)
        n_c, n_u, n_v = cfg.codebook_sizes()
        for t, rec in enumerate(res.per_trial):
            rng = np.random.default_rng([cfg.rng_seed, t])
            cb = rng.integers(2, size=(n_c, cfg.n))
            u = int(rng.integers(n_u))
            block = cb[u * n_v:(u + 1) * n_v]
            spec = TypicalSpec(cfg.p_x, cfg.n, cfg.eps_typ)
            v = next(
                (k for k in range(n_v) if is_typical(block[k], spec)), 0
            )
            x = cb[u * n_v + v]
            dup = (cb == x).all(axis=1).sum() > 1
            assert rec.w_error == dup


class TestClassical:
    def test_counts_and_sizes(self):
        ch = bsc(0.05)
        p = Pmf(ch.input, np.array([0.8, 0.2]))
        cfg = layered_config(
            p_x=p, q=posterior_metric(p, ch), mode="classical", trials=50
        )
        res = run_classical(cfg)
        assert res.codebook_size == res.message_count
        assert res.encoding_failures == 0
        assert res.trials == 50

    def test_shaped_codebook_composition(self):
        # classical mode draws codewords iid from P_X, not uniformly
        ch = bsc(0.05)
        p = Pmf(ch.input, np.array([0.9, 0.1]))
        cfg = layered_config(
            p_x=p, q=posterior_metric(p, ch), mode="classical", trials=40
        )
        n_c, _, _ = cfg.codebook_sizes()
        rng = np.random.default_rng([cfg.rng_seed, 0])
        cb = rng.choice(2, size=(n_c, cfg.n), p=p.probs)
        ones = cb.mean()
        assert abs(ones - 0.1) < 0.02

    def test_json_dict_round_trips_scalars(self):
        res = run_classical(layered_config(mode="classical", trials=10))
        d = res.to_json_dict()
        assert d["trials"] == 10
        assert d["codebook_size"] == res.codebook_size
        assert "per_trial" not in d
