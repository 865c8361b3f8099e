"""Per-sequence empirical achievable code rate and its Monte-Carlo estimate.

All randomness is drawn from numpy's default PCG64 generator; trial streams
are derived from (seed, trial index) so runs are reproducible and the result
does not depend on execution order.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import Pmf


@dataclass(frozen=True)
class SequencePair:
    """Transmitted input sequence and observed output sequence."""

    x_seq: tuple
    y_seq: tuple

    def __post_init__(self):
        object.__setattr__(self, "x_seq", tuple(self.x_seq))
        object.__setattr__(self, "y_seq", tuple(self.y_seq))
        if len(self.x_seq) != len(self.y_seq):
            raise ValueError("input and output sequences must have equal length")
        if len(self.x_seq) == 0:
            raise ValueError("sequences must be non-empty")


def _indices(seq, alphabet):
    lookup = {s: i for i, s in enumerate(alphabet.symbols)}
    try:
        return np.array([lookup[s] for s in seq])
    except KeyError as e:
        raise ValueError(f"symbol {e.args[0]!r} not in alphabet") from None


def _per_term_rates(pair, q):
    """log2 q(x_i,y_i) / (sum_a q(a,y_i)/|X|) for each position i."""
    xi = _indices(pair.x_seq, q.input)
    yi = _indices(pair.y_seq, q.output)
    denom = q.q.sum(axis=0) / len(q.input)
    num = q.q[xi, yi]
    with np.errstate(divide="ignore"):
        return np.log2(num) - np.log2(denom[yi])


def empirical_code_rate(pair, q):
    """Empirical achievable code rate of one (x, y) pair in bits per symbol.

    -inf when the metric vanishes at some transmitted position. The second
    form log2|X| minus the empirical uncertainty is computed as a
    cross-check.
    """
    terms = _per_term_rates(pair, q)
    t_hat = float(terms.mean())
    if math.isinf(t_hat):
        return t_hat
    # alternative form: log2|X| - mean(-log2 q / sum_a q)
    xi = _indices(pair.x_seq, q.input)
    yi = _indices(pair.y_seq, q.output)
    full = q.q.sum(axis=0)
    alt = math.log2(len(q.input)) - float(
        (-np.log2(q.q[xi, yi] / full[yi])).mean()
    )
    if abs(alt - t_hat) > 1e-10 * max(1.0, abs(t_hat)):
        raise AssertionError("empirical code rate forms disagree")
    return t_hat


def composition_sorted_rate(pair, q):
    """Per-input-symbol breakdown {symbol: (frequency, inner average)}.

    The frequency-weighted recombination of the inner averages equals the
    empirical code rate (algebraic identity).
    """
    terms = _per_term_rates(pair, q)
    xi = _indices(pair.x_seq, q.input)
    n = len(pair.x_seq)
    out = {}
    for a, symbol in enumerate(q.input.symbols):
        sel = xi == a
        cnt = int(sel.sum())
        if cnt:
            out[symbol] = (cnt / n, float(terms[sel].mean()))
    return out


def exact_composition_sequence(p_x, n, rng):
    """Random permutation of the largest-remainder rounding of n * P_X."""
    target = p_x.probs * n
    base = np.floor(target).astype(int)
    short = n - base.sum()
    if short:
        order = np.argsort(-(target - base), kind="stable")
        base[order[:short]] += 1
    seq = np.repeat(np.arange(len(p_x.alphabet)), base)
    return rng.permutation(seq)


def sample_channel_outputs(ch, x_idx, rng):
    """Sample output indices for given input indices through the channel."""
    cum = np.cumsum(ch.w, axis=1)
    u = rng.random(len(x_idx))
    rows = cum[x_idx]
    return np.minimum(
        (u[:, None] >= rows).sum(axis=1), len(ch.output) - 1
    )


@dataclass(frozen=True)
class MonteCarloResult:
    mean: float
    std_error: float
    trials: int
    n: int


def monte_carlo_t_c(p_x, ch, q, n, trials, rng_seed, composition="iid"):
    """Monte-Carlo estimate of the achievable code rate.

    composition is "iid" (entries drawn from P_X) or "exact" (each codeword
    has the largest-remainder composition of n * P_X, randomly permuted).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if composition not in ("iid", "exact"):
        raise ValueError(f"unknown composition mode {composition!r}")
    nx = len(p_x.alphabet)
    denom = q.q.sum(axis=0) / nx
    with np.errstate(divide="ignore"):
        ratio = np.log2(q.q) - np.log2(denom)[None, :]
    values = np.empty(trials)
    for t in range(trials):
        rng = np.random.default_rng([rng_seed, t])
        if composition == "iid":
            x = rng.choice(nx, size=n, p=p_x.probs)
        else:
            x = exact_composition_sequence(p_x, n, rng)
        y = sample_channel_outputs(ch, x, rng)
        values[t] = ratio[x, y].mean()
    mean = float(values.mean())
    if trials < 2:
        return MonteCarloResult(mean, math.inf, trials, n)
    se = float(values.std(ddof=1) / math.sqrt(trials))
    return MonteCarloResult(mean, se, trials, n)
