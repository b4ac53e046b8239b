"""Timed coin-flip betting game engine.

The game runs over a fixed time window ``[0, horizon]``. One player (the
flipper) tosses a coin on a schedule of their own choosing, starting with a
mandatory toss at time 0. The other player (the bettor) cannot see the
tosses and may, at any time inside the window, bet on the face the coin is
currently showing. A bet wins when its prediction matches the coin's state
at the bet's time.

Conventions, fixed once and used everywhere:

* A bet placed exactly at a flip's time resolves against the *new* flip
  (flip-first).
* Every game opens with a flip at time 0, so the coin state is defined for
  all t in the window.
* Bets may share a timestamp; their relative order is the input order and
  never affects resolution.
* Flip outcomes are drawn from one seeded generator per simulation, in
  flip-time order, so identical inputs reproduce identical traces.
"""

from __future__ import annotations

import enum
import math
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, ValidationError

__all__ = [
    "Face",
    "Flip",
    "Bet",
    "GameConfig",
    "GameTrace",
    "coin_state_at",
    "simulate_game",
    "make_trace",
]

_MAX_SEED = 2**64 - 1


class Face(enum.Enum):
    """One of the two coin faces; also the value of a bet's prediction."""

    HEADS = "H"
    TAILS = "T"

    def opposite(self) -> "Face":
        """The other face. An involution: ``f.opposite().opposite() is f``."""
        return Face.TAILS if self is Face.HEADS else Face.HEADS

    @classmethod
    def from_token(cls, token: str) -> "Face":
        """Parse the single-letter token used in CSV files ('H' or 'T')."""
        try:
            return cls(token.strip().upper())
        except ValueError:
            raise DomainError(f"unknown face token {token!r} (expected 'H' or 'T')") from None

    @property
    def token(self) -> str:
        return self.value


@dataclass(frozen=True)
class Flip:
    """A coin toss at ``time`` (game-time units) that landed ``outcome``."""

    time: float
    outcome: Face


@dataclass(frozen=True)
class Bet:
    """A bet placed at ``time`` predicting the coin's current face."""

    time: float
    prediction: Face


@dataclass(frozen=True)
class GameConfig:
    """Fixed parameters of one game.

    Attributes:
        horizon: Length of the agreed time window; all times live in
            ``[0, horizon]``.
        coin_bias: Probability that a single toss lands heads. 0.5 is the
            fair coin; other values model a rigged coin.
        seed: Seed for the deterministic random source used to draw flip
            outcomes (64-bit unsigned).
    """

    horizon: float
    coin_bias: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        problems = []
        if not (isinstance(self.horizon, (int, float)) and math.isfinite(self.horizon)) or self.horizon <= 0:
            problems.append(f"horizon must be a finite positive number, got {self.horizon!r}")
        if not (isinstance(self.coin_bias, (int, float)) and 0.0 <= self.coin_bias <= 1.0):
            problems.append(f"coin_bias must lie in [0, 1], got {self.coin_bias!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not (0 <= self.seed <= _MAX_SEED):
            problems.append(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if problems:
            raise ValidationError(problems)


def _schedule_problems(
    horizon: float,
    flip_times: Sequence[float],
    bet_times: Sequence[float],
) -> list[str]:
    """Collect every violation of the flip/bet schedule invariants."""
    problems: list[str] = []
    if not flip_times:
        problems.append("flip schedule is empty: the game must open with a flip at time 0")
    else:
        if flip_times[0] != 0.0:
            problems.append(f"first flip must be at time 0, got {flip_times[0]!r}")
        for i, t in enumerate(flip_times):
            if not (isinstance(t, (int, float)) and math.isfinite(t)):
                problems.append(f"flip[{i}] time is not a finite number: {t!r}")
            elif not (0.0 <= t <= horizon):
                problems.append(f"flip[{i}] time {t!r} outside [0, {horizon}]")
        for i in range(1, len(flip_times)):
            if flip_times[i - 1] >= flip_times[i]:
                problems.append(
                    f"flip times must be strictly increasing: "
                    f"flip[{i - 1}]={flip_times[i - 1]!r} >= flip[{i}]={flip_times[i]!r}"
                )
    for i, t in enumerate(bet_times):
        if not (isinstance(t, (int, float)) and math.isfinite(t)):
            problems.append(f"bet[{i}] time is not a finite number: {t!r}")
        elif not (0.0 <= t <= horizon):
            problems.append(f"bet[{i}] time {t!r} outside [0, {horizon}]")
    for i in range(1, len(bet_times)):
        if bet_times[i - 1] > bet_times[i]:
            problems.append(
                f"bet times must be non-decreasing: "
                f"bet[{i - 1}]={bet_times[i - 1]!r} > bet[{i}]={bet_times[i]!r}"
            )
    return problems


def _state_at(flip_times: Sequence[float], outcomes: Sequence[Face], t: float) -> Face:
    """Face shown at time t: the latest flip with time <= t (flip-first)."""
    return outcomes[bisect_right(flip_times, t) - 1]


def _resolve(flips: Sequence[Flip], bets: Sequence[Bet]) -> tuple[bool, ...]:
    times = [f.time for f in flips]
    outcomes = [f.outcome for f in flips]
    return tuple(b.prediction is _state_at(times, outcomes, b.time) for b in bets)


@dataclass(frozen=True)
class GameTrace:
    """The complete record of one game.

    Invariants (enforced at construction):

    * ``flips`` is non-empty, starts at time 0, and has strictly
      increasing times inside ``[0, horizon]``.
    * ``bets`` have non-decreasing times inside ``[0, horizon]``.
    * ``resolutions[i]`` is True exactly when ``bets[i]`` predicted the
      coin's state at its time (flip-first at shared timestamps).
    """

    config: GameConfig
    flips: tuple[Flip, ...]
    bets: tuple[Bet, ...] = field(default=())
    resolutions: tuple[bool, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "flips", tuple(self.flips))
        object.__setattr__(self, "bets", tuple(self.bets))
        object.__setattr__(self, "resolutions", tuple(self.resolutions))
        problems = _schedule_problems(
            self.config.horizon,
            [f.time for f in self.flips],
            [b.time for b in self.bets],
        )
        if not problems:
            if len(self.resolutions) != len(self.bets):
                problems.append(
                    f"expected {len(self.bets)} resolutions, got {len(self.resolutions)}"
                )
            elif self.resolutions != _resolve(self.flips, self.bets):
                problems.append("resolutions do not match bet predictions against the flip record")
        if problems:
            raise ValidationError(problems)

    @property
    def wins(self) -> int:
        """Number of winning bets."""
        return sum(self.resolutions)


def coin_state_at(trace: GameTrace, t: float) -> Face:
    """Face the coin shows at time ``t``.

    Returns the outcome of the latest flip with ``flip.time <= t``. When
    ``t`` coincides exactly with a flip time the new flip governs: a flip
    resolves before any bet sharing its timestamp.

    Args:
        trace: A validated game trace.
        t: Query time, inside ``[0, horizon]``.

    Raises:
        DomainError: If ``t`` lies outside the game window.
        ValidationError: If the trace has no flips (cannot happen for
            traces built by this module).
    """
    if not trace.flips:
        raise ValidationError("trace has no flips; coin state is undefined")
    if not (isinstance(t, (int, float)) and 0.0 <= t <= trace.config.horizon):
        raise DomainError(f"time {t!r} outside the game window [0, {trace.config.horizon}]")
    times = [f.time for f in trace.flips]
    return trace.flips[bisect_right(times, t) - 1].outcome


def simulate_game(
    config: GameConfig,
    flip_times: Sequence[float],
    bet_plan: Iterable[Bet],
) -> GameTrace:
    """Play one game: draw flip outcomes at the given times, resolve bets.

    Each flip lands heads with probability ``config.coin_bias``, drawn from
    a generator seeded with ``config.seed``; draws are consumed in
    flip-time order. The same ``(config, flip_times, bet_plan)`` therefore
    always yields an identical trace.

    Args:
        config: Game parameters, including the seed.
        flip_times: Strictly increasing times, first one 0, all within the
            horizon.
        bet_plan: Bets with non-decreasing times within the horizon.

    Returns:
        The resolved :class:`GameTrace`.

    Raises:
        ValidationError: Listing every schedule violation (unordered or
            duplicate flip times, missing time-0 flip, out-of-range times).
    """
    bets = tuple(bet_plan)
    problems = _schedule_problems(config.horizon, flip_times, [b.time for b in bets])
    if problems:
        raise ValidationError(problems)
    rng = random.Random(config.seed)
    flips = tuple(
        Flip(float(t), Face.HEADS if rng.random() < config.coin_bias else Face.TAILS)
        for t in flip_times
    )
    return GameTrace(config=config, flips=flips, bets=bets, resolutions=_resolve(flips, bets))


def make_trace(
    config: GameConfig,
    flips: Iterable[Flip],
    bet_plan: Iterable[Bet],
) -> GameTrace:
    """Build a trace from externally supplied flip outcomes, no randomness.

    Used for ingested logs and hand-written scenarios. Bets are resolved
    exactly as in :func:`simulate_game`.

    Raises:
        ValidationError: Same schedule checks as :func:`simulate_game`.
    """
    flips = tuple(flips)
    bets = tuple(bet_plan)
    problems = _schedule_problems(
        config.horizon, [f.time for f in flips], [b.time for b in bets]
    )
    if problems:
        raise ValidationError(problems)
    return GameTrace(config=config, flips=flips, bets=bets, resolutions=_resolve(flips, bets))
