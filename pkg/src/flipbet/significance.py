"""Significance of betting records: how hard are they to reproduce by chance?

Three complementary instruments:

* exact binomial tails, for questions like "what is the probability that a
  rigged coin with a 60% edge still loses out after n tosses";
* the random-reproduction p-value, the chance a fair guesser matches or
  beats a record, counted over *effective* events (occupied epochs), not
  raw bets;
* the bet-time randomization test: re-place one bet uniformly at random in
  an interval and measure how often its outcome changes. If no flip falls
  in the interval, the outcome never changes, which shows the bet carried
  no forecasting information of its own.

A vectorized Monte Carlo driver doubles as the independent oracle for the
analytic compound probabilities.
"""

from __future__ import annotations

import math
import operator
import random
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ValidationError
from .game import Bet, Face, GameConfig, GameTrace, _schedule_problems, coin_state_at

__all__ = [
    "SignificanceQuery",
    "RandomizationResult",
    "MonteCarloEstimate",
    "binomial_pmf",
    "losing_probability",
    "random_reproduction_pvalue",
    "randomization_test",
    "monte_carlo_compound",
    "derive_seed",
]

# Above this, C(n, k) no longer fits a double and the evaluation switches
# to log-gamma.
_EXACT_COMB_LIMIT = 1000

# Smallest exponent at which p**k keeps full precision (normal floats only,
# with a one-unit margin against the subnormal boundary).
_LOG_MIN_NORMAL = math.log(2.2250738585072014e-308) + 1.0

_MASK64 = 2**64 - 1


def derive_seed(base_seed: int, index: int) -> int:
    """Deterministic per-stream seed for parallel or indexed runs.

    SplitMix64 finalizer over ``(base_seed, index)``. Streams derived for
    distinct indices are statistically independent, and the mapping never
    depends on evaluation order, so serial and parallel runs agree.
    """
    z = (operator.index(base_seed) ^ _mix64(operator.index(index))) & _MASK64
    return _mix64(z)


def _mix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _check_probability(p: float, name: str = "p") -> float:
    if not (isinstance(p, (int, float)) and 0.0 <= p <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return float(p)


@dataclass(frozen=True)
class SignificanceQuery:
    """A binomial-tail question: n trials, success probability p, observed k.

    Attributes:
        n: Number of trials (positive).
        p: Per-trial success probability.
        k: Observed success count, used by p-value style tails.
    """

    n: int
    p: float
    k: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n!r}")
        _check_probability(self.p)
        if not (0 <= self.k <= self.n):
            raise DomainError(f"k must lie in [0, n], got k={self.k!r}, n={self.n!r}")

    def losing_probability(self) -> float:
        """See :func:`losing_probability`."""
        return losing_probability(self.n, self.p)

    def upper_tail_pvalue(self) -> float:
        """P(at least k successes in n trials at probability p)."""
        if self.k == 0:
            return 1.0
        return _binomial_tail(self.k, self.n, self.n, self.p)


@dataclass(frozen=True)
class RandomizationResult:
    """Outcome counts of a bet-time randomization test.

    ``change_fraction`` is exactly ``changed / trials``.
    """

    trials: int
    changed: int
    change_fraction: float

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials!r}")
        if not (0 <= self.changed <= self.trials):
            raise DomainError(
                f"changed must lie in [0, trials], got changed={self.changed!r}, trials={self.trials!r}"
            )

    @classmethod
    def from_counts(cls, trials: int, changed: int) -> "RandomizationResult":
        return cls(trials=trials, changed=changed, change_fraction=changed / trials)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A Monte Carlo probability estimate with its normal-approximation error.

    ``standard_error`` is ``sqrt(estimate * (1 - estimate) / trials)``.
    """

    trials: int
    successes: int
    estimate: float
    standard_error: float


def binomial_pmf(k: int, n: int, p: float) -> float:
    """P(exactly k successes in n independent trials of probability p).

    C(n, k) * p**k * (1-p)**(n-k), evaluated with the exact integer
    binomial coefficient whenever the coefficient and both power factors
    fit normal doubles (the coefficient is multiplied in first, so the
    product cannot underflow before it is finished), and via log-gamma
    otherwise, so the result stays accurate for any n.

    Raises:
        DomainError: If k is outside [0, n] or p outside [0, 1].
    """
    k = operator.index(k)
    n = operator.index(n)
    p = _check_probability(p)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    if not (0 <= k <= n):
        raise DomainError(f"k must lie in [0, n], got k={k!r}, n={n!r}")
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    log_p_part = k * math.log(p)
    log_q_part = (n - k) * math.log1p(-p)
    if n <= _EXACT_COMB_LIMIT and log_p_part >= _LOG_MIN_NORMAL and log_q_part >= _LOG_MIN_NORMAL:
        return math.comb(n, k) * p**k * (1.0 - p) ** (n - k)
    log_pmf = (
        math.lgamma(n + 1)
        - math.lgamma(k + 1)
        - math.lgamma(n - k + 1)
        + log_p_part
        + log_q_part
    )
    return math.exp(log_pmf)


def _binomial_tail(lo: int, hi: int, n: int, p: float) -> float:
    """Sum of the binomial pmf over lo <= k <= hi.

    Anchored at the in-range mode and extended outward by the term
    recurrence pmf(k+1) = pmf(k) * (n-k)/(k+1) * p/(1-p), with compensated
    summation. Walking away from the mode only ever multiplies by ratios
    below 1, so the recurrence cannot overflow and terms that underflow to
    zero end the walk early.
    """
    if lo > hi:
        return 0.0
    if p == 0.0:
        return 1.0 if lo == 0 else 0.0
    if p == 1.0:
        return 1.0 if lo <= n <= hi else 0.0
    anchor = min(max(int((n + 1) * p), lo), hi)
    anchor_term = binomial_pmf(anchor, n, p)
    total = anchor_term
    carry = 0.0

    def add(x: float) -> None:
        nonlocal total, carry
        y = x - carry
        t = total + y
        carry = (t - total) - y
        total = t

    term = anchor_term
    for k in range(anchor, lo, -1):  # extend down to lo
        term *= (k * (1.0 - p)) / ((n - k + 1) * p)
        if term == 0.0:
            break
        add(term)
    term = anchor_term
    for k in range(anchor, hi):  # extend up to hi
        term *= ((n - k) * p) / ((k + 1) * (1.0 - p))
        if term == 0.0:
            break
        add(term)
    return min(total, 1.0)


def losing_probability(n: int, p: float) -> float:
    """Probability that n trials at success probability p end with a losing record.

    Losing means strictly more losses than wins; an even split is not a
    loss. Equivalently the lower binomial tail P(X <= ceil(n/2) - 1).
    For an edge p > 0.5 this tail shrinks towards zero as n grows, which
    is what separates a real edge from a lucky streak.

    Raises:
        DomainError: If n < 1 or p outside [0, 1].
    """
    n = operator.index(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    p = _check_probability(p)
    return _binomial_tail(0, (n + 1) // 2 - 1, n, p)


def random_reproduction_pvalue(k_wins: int, m_effective: int) -> float:
    """Chance a fair random guesser matches or beats k wins out of m events.

    ``m_effective`` must be the number of *effective* events (occupied
    epochs), not the raw bet count: bets that share an epoch are one event
    and a fair guesser reproduces them with a single guess. The value is
    the upper binomial tail P(X >= k_wins) for X ~ Binomial(m, 0.5), and 1
    when the record holds no events at all.

    Raises:
        DomainError: If k_wins is negative or exceeds m_effective.
    """
    k_wins = operator.index(k_wins)
    m_effective = operator.index(m_effective)
    if m_effective < 0:
        raise DomainError(f"m_effective must be >= 0, got {m_effective!r}")
    if not (0 <= k_wins <= m_effective):
        raise DomainError(
            f"k_wins must lie in [0, m_effective], got k_wins={k_wins!r}, m_effective={m_effective!r}"
        )
    if k_wins == 0:
        return 1.0
    return _binomial_tail(k_wins, m_effective, m_effective, 0.5)


def randomization_test(
    trace: GameTrace,
    bet_index: int,
    interval: tuple[float, float] | None = None,
    trials: int = 1000,
    seed: int = 0,
) -> RandomizationResult:
    """Re-place one bet uniformly at random and count outcome changes.

    Each trial draws a new time in ``interval``, re-resolves the chosen
    bet (same prediction) against the fixed flip record, and compares its
    win/loss outcome with the original. A change fraction of zero means
    the bet's outcome is invariant under where it sits in the interval;
    in particular it is exactly zero whenever no flip time falls strictly
    inside the interval up to the original bet time.

    Args:
        trace: The game record; flips and other bets stay fixed.
        bet_index: Index of the bet to re-place.
        interval: ``(lo, hi)`` inside the game window. Defaults to the
            span from the preceding bet's time (or 0 for the first bet) to
            the chosen bet's time.
        trials: Number of random re-placements.
        seed: Seed for the re-placement draws.

    Raises:
        DomainError: On a bad index, interval, or trial count.
    """
    if not 0 <= bet_index < len(trace.bets):
        raise DomainError(f"bet_index {bet_index!r} outside [0, {len(trace.bets) - 1}]")
    trials = operator.index(trials)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials!r}")
    bet = trace.bets[bet_index]
    if interval is None:
        lo = trace.bets[bet_index - 1].time if bet_index > 0 else 0.0
        hi = bet.time
    else:
        lo, hi = interval
    if not (0.0 <= lo <= hi <= trace.config.horizon):
        raise DomainError(
            f"interval ({lo!r}, {hi!r}) must satisfy 0 <= lo <= hi <= horizon"
        )
    original = trace.resolutions[bet_index]
    rng = random.Random(seed)
    changed = 0
    for _ in range(trials):
        t = rng.uniform(lo, hi)
        outcome = bet.prediction is coin_state_at(trace, t)
        if outcome != original:
            changed += 1
    return RandomizationResult.from_counts(trials, changed)


def monte_carlo_compound(
    config: GameConfig,
    flip_times: Sequence[float],
    bet_plan: Iterable[Bet],
    trials: int,
    base_seed: int,
    *,
    chunk_trials: int = 1 << 16,
) -> MonteCarloEstimate:
    """Estimate the probability that every bet wins, by repeated play.

    The fraction of independently simulated games in which all bets won,
    with its binomial standard error. Trial i consumes the i-th fixed
    block of a counter-based random stream keyed by ``base_seed``, so the
    result does not depend on chunking or evaluation order and parallel
    runs reproduce serial ones.

    Args:
        config: Game parameters; the coin bias drives each flip.
        flip_times: Same schedule contract as :func:`~flipbet.game.simulate_game`.
        bet_plan: Bets to resolve in every simulated game.
        trials: Number of simulated games (>= 1).
        base_seed: Key of the random stream.
        chunk_trials: Rows simulated per vectorized batch.

    Raises:
        DomainError: If ``trials`` < 1.
        ValidationError: Same schedule checks as the simulator.
    """
    trials = operator.index(trials)
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials!r}")
    base_seed = operator.index(base_seed)
    if not 0 <= base_seed <= _MASK64:
        raise DomainError(f"base_seed must be a 64-bit unsigned integer, got {base_seed!r}")
    bets = tuple(bet_plan)
    times = [float(t) for t in flip_times]
    problems = _schedule_problems(config.horizon, times, [b.time for b in bets])
    if problems:
        raise ValidationError(problems)

    if not bets:
        return MonteCarloEstimate(trials, trials, 1.0, 0.0)

    # One required face per occupied epoch; a conflicting epoch makes the
    # joint win impossible in every trial.
    required: dict[int, Face] = {}
    for b in bets:
        epoch = bisect_right(times, b.time) - 1
        face = required.setdefault(epoch, b.prediction)
        if face is not b.prediction:
            return MonteCarloEstimate(trials, 0, 0.0, 0.0)

    epoch_idx = np.fromiter(required, dtype=np.intp)
    need_heads = np.array([required[e] is Face.HEADS for e in required], dtype=bool)
    rng = np.random.Generator(np.random.Philox(key=base_seed))
    n_flips = len(times)
    wins = 0
    remaining = trials
    while remaining > 0:
        m = min(chunk_trials, remaining)
        heads = rng.random((m, n_flips)) < config.coin_bias
        wins += int((heads[:, epoch_idx] == need_heads).all(axis=1).sum())
        remaining -= m
    estimate = wins / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return MonteCarloEstimate(trials, wins, estimate, stderr)
