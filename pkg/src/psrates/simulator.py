"""Exhaustive desk-scale random-coding experiment for layered shaping.

Each trial draws a fresh codebook, encodes one message, transmits it through
the channel and decodes by exhaustive metric-product maximization over the
whole codebook. The feasibility cap n * r_c <= 22 keeps full fixture suites
in the minutes range.

Decoder ties: the transmitted index counts as correctly decoded only when it
is the unique maximizer; ties are conservative errors, which keeps the
pairwise union bound valid.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .empirical import SequencePair, empirical_code_rate, sample_channel_outputs
from .typicality import TypicalSpec, is_typical_counts

FEASIBILITY_CAP = 22


@dataclass(frozen=True)
class SimConfig:
    p_x: object
    ch: object
    q: object
    n: int
    r_c: float
    r_tx: float
    eps_typ: float
    trials: int
    rng_seed: int
    mode: str = "layered-ps"

    def __post_init__(self):
        if not 0 <= self.r_tx <= self.r_c:
            raise ValueError("need 0 <= r_tx <= r_c")
        if self.n * self.r_c > FEASIBILITY_CAP:
            raise ValueError(
                f"n * r_c = {self.n * self.r_c} exceeds the exhaustive cap {FEASIBILITY_CAP}"
            )
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.mode not in ("layered-ps", "classical"):
            raise ValueError(f"unknown mode {self.mode!r}")

    def codebook_sizes(self):
        """(|C|, |U|, |V|): messages times shaping indices.

        Sizes are floor(2^(n*r)) with |V| adjusted so the double indexing is
        exact; realized rates are reported from the integer sizes.
        """
        n_u = max(1, int(2.0 ** (self.n * self.r_tx)))
        if self.mode == "classical":
            return n_u, n_u, 1
        n_c = max(1, int(2.0 ** (self.n * self.r_c)))
        n_v = max(1, n_c // n_u)
        return n_u * n_v, n_u, n_v


@dataclass(frozen=True)
class SimResult:
    trials: int
    encoding_failure_rate: float
    decode_error_rate: float
    message_error_rate: float
    bound_2exp: float
    t_hat_mean: float
    t_hat_min: float
    t_hat_max: float
    realized_r_c: float
    realized_r_tx: float
    codebook_size: int
    message_count: int
    encoding_failures: int
    decode_errors: int
    decode_trials: int
    message_errors: int
    per_trial: tuple = field(repr=False, default=())

    def to_json_dict(self):
        return {
            "trials": self.trials,
            "encoding_failure_rate": self.encoding_failure_rate,
            "decode_error_rate": self.decode_error_rate,
            "message_error_rate": self.message_error_rate,
            "bound_2exp": self.bound_2exp,
            "t_hat_mean": self.t_hat_mean,
            "t_hat_min": self.t_hat_min,
            "t_hat_max": self.t_hat_max,
            "realized_r_c": self.realized_r_c,
            "realized_r_tx": self.realized_r_tx,
            "codebook_size": self.codebook_size,
            "message_count": self.message_count,
        }


@dataclass(frozen=True)
class TrialRecord:
    encoding_failed: bool
    w_error: bool
    u_error: bool
    t_hat: float
    union_bound: float


def pairwise_union_bound(pair, q, r_c):
    """Union bound 2^(-n (T-hat - r_c)) on the conditional error, in [0,1]."""
    t_hat = empirical_code_rate(pair, q)
    n = len(pair.x_seq)
    if math.isinf(t_hat):
        return 1.0
    return min(1.0, 2.0 ** (-n * (t_hat - r_c)))


def run_layered_ps(cfg):
    if cfg.mode != "layered-ps":
        raise ValueError("config mode is not layered-ps")
    return _run(cfg)


def run_classical(cfg):
    if cfg.mode != "classical":
        raise ValueError("config mode is not classical")
    return _run(cfg)


def _run(cfg):
    nx = len(cfg.p_x.alphabet)
    n_c, n_u, n_v = cfg.codebook_sizes()
    realized_r_c = math.log2(n_c) / cfg.n
    realized_r_tx = math.log2(n_u) / cfg.n
    logq = cfg.q.log2_q()
    spec = TypicalSpec(cfg.p_x, cfg.n, cfg.eps_typ)
    records = []
    for t in range(cfg.trials):
        rng = np.random.default_rng([cfg.rng_seed, t])
        if cfg.mode == "layered-ps":
            cb = rng.integers(nx, size=(n_c, cfg.n))
        else:
            cb = rng.choice(nx, size=(n_c, cfg.n), p=cfg.p_x.probs)
        u = int(rng.integers(n_u))
        if cfg.mode == "layered-ps":
            block = cb[u * n_v:(u + 1) * n_v]
            v = 0
            failed = True
            for k in range(n_v):
                counts = np.bincount(block[k], minlength=nx)
                if is_typical_counts(counts, spec):
                    v = k
                    failed = False
                    break
            w = u * n_v + v
        else:
            failed = False
            w = u
        x = cb[w]
        y = sample_channel_outputs(cfg.ch, x, rng)
        scores = logq[cb, y[None, :]].sum(axis=1)
        best = scores.max()
        winners = np.flatnonzero(scores == best)
        w_hat = int(winners[0])
        w_error = not (winners.size == 1 and w_hat == w)
        u_error = (w_hat // n_v) != u
        pair = SequencePair(tuple(x.tolist()), tuple(y.tolist()))
        t_hat = empirical_code_rate(pair, cfg.q)
        bound = pairwise_union_bound(pair, cfg.q, realized_r_c)
        records.append(TrialRecord(failed, w_error, u_error, t_hat, bound))
    return _summarize(cfg, records, realized_r_c, realized_r_tx, n_c, n_u)


def _summarize(cfg, records, r_c, r_tx, n_c, n_u):
    trials = len(records)
    fails = sum(r.encoding_failed for r in records)
    ok = [r for r in records if not r.encoding_failed]
    decode_errors = sum(r.w_error for r in ok)
    msg_errors = sum(r.u_error for r in records)
    t_hats = [r.t_hat for r in records]
    return SimResult(
        trials=trials,
        encoding_failure_rate=fails / trials,
        decode_error_rate=decode_errors / len(ok) if ok else 0.0,
        message_error_rate=msg_errors / trials,
        bound_2exp=sum(r.union_bound for r in records) / trials,
        t_hat_mean=sum(t_hats) / trials,
        t_hat_min=min(t_hats),
        t_hat_max=max(t_hats),
        realized_r_c=r_c,
        realized_r_tx=r_tx,
        codebook_size=n_c,
        message_count=n_u,
        encoding_failures=fails,
        decode_errors=decode_errors,
        decode_trials=len(ok),
        message_errors=msg_errors,
        per_trial=tuple(records),
    )


def run(cfg):
    """Dispatch on the configured mode."""
    if cfg.mode == "layered-ps":
        return run_layered_ps(cfg)
    return run_classical(cfg)
