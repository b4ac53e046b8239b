"""Compound-probability calculus for betting records.

Two rival estimates of the probability of a betting record:

* the *naive* estimate treats every bet as an independent event and
  multiplies per-bet marginals (the bettor's view);
* the *true* estimate conditions each bet on the flip schedule: bets that
  ride the same flip are perfectly dependent, so each occupied flip span
  contributes a single factor (the flipper's view).

The bridge between the two is the epoch grouping: each bet is governed by
the latest flip at or before its time, and the span from one flip to the
next is an *epoch*. All bets in an epoch face the same coin state, so the
number of occupied epochs, not the number of bets, is the number of
independent events in the record.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Mapping

from .errors import DomainError
from .game import Bet, Face, GameTrace

__all__ = [
    "EpochGrouping",
    "group_by_epoch",
    "pairwise_conditional_probability",
    "naive_compound_probability",
    "true_compound_probability",
    "effective_event_count",
]


@dataclass(frozen=True)
class EpochGrouping:
    """Assignment of each bet to the flip (epoch) governing it.

    Attributes:
        bets: The grouped bets, in trace order.
        epoch_of_bet: For bet index i, the index of the governing flip:
            the largest flip index whose time is <= the bet's time
            (flip-first at shared timestamps).
        bets_per_epoch: Flip index -> indices of the bets it governs.
            Only occupied epochs appear as keys.
    """

    bets: tuple[Bet, ...]
    epoch_of_bet: tuple[int, ...]
    bets_per_epoch: Mapping[int, tuple[int, ...]]

    @property
    def occupied_epochs(self) -> tuple[int, ...]:
        """Flip indices with at least one bet, in increasing order."""
        return tuple(sorted(self.bets_per_epoch))

    def epoch_of(self, bet: Bet) -> int:
        """Epoch index of a bet belonging to this grouping.

        Raises:
            DomainError: If the bet is not one of the grouped bets.
        """
        try:
            return self.epoch_of_bet[self.bets.index(bet)]
        except ValueError:
            raise DomainError(f"{bet!r} does not belong to this grouping") from None


def group_by_epoch(trace: GameTrace) -> EpochGrouping:
    """Group the trace's bets by the flip governing each of them."""
    flip_times = [f.time for f in trace.flips]
    epoch_of_bet = tuple(bisect_right(flip_times, b.time) - 1 for b in trace.bets)
    per_epoch: dict[int, list[int]] = {}
    for i, e in enumerate(epoch_of_bet):
        per_epoch.setdefault(e, []).append(i)
    return EpochGrouping(
        bets=trace.bets,
        epoch_of_bet=epoch_of_bet,
        bets_per_epoch={e: tuple(ix) for e, ix in sorted(per_epoch.items())},
    )


def pairwise_conditional_probability(
    bet_i: Bet,
    bet_j: Bet,
    grouping: EpochGrouping,
    coin_bias: float = 0.5,
) -> float:
    """P(the later bet wins | the earlier bet wins).

    Within one epoch the two bets face the same coin state, so the answer
    is 1 for matching predictions and 0 for contradictory ones. Across
    epochs the flips are independent and the conditional collapses to the
    later bet's marginal: ``coin_bias`` for a heads prediction, its
    complement for tails.

    Args:
        bet_i: The earlier bet; must belong to ``grouping``.
        bet_j: The later bet; must belong to ``grouping``.
        grouping: Epoch assignment of the betting record.
        coin_bias: Per-flip heads probability (0.5 for the fair coin).

    Raises:
        DomainError: If either bet is not in the grouping, or ``bet_i``
            comes after ``bet_j``.
    """
    if bet_i.time > bet_j.time:
        raise DomainError(
            f"bet_i must not come after bet_j: {bet_i.time!r} > {bet_j.time!r}"
        )
    epoch_i = grouping.epoch_of(bet_i)
    epoch_j = grouping.epoch_of(bet_j)
    if epoch_i == epoch_j:
        return 1.0 if bet_i.prediction is bet_j.prediction else 0.0
    return _marginal(bet_j, coin_bias)


def _marginal(bet: Bet, coin_bias: float) -> float:
    return coin_bias if bet.prediction is Face.HEADS else 1.0 - coin_bias


def naive_compound_probability(trace: GameTrace) -> float:
    """Joint win probability under the independence assumption.

    The product over bets of each bet's marginal win probability: 0.5 per
    bet for a fair coin, hence ``0.5 ** len(bets)``. An empty record gives
    the empty product, 1.
    """
    p = 1.0
    for bet in trace.bets:
        p *= _marginal(bet, trace.config.coin_bias)
    return p


def true_compound_probability(trace: GameTrace) -> float:
    """Joint win probability conditioned on the flip schedule.

    Bets are grouped by epoch. An epoch with contradictory predictions can
    never see all its bets win, so the result is 0. Otherwise each
    occupied epoch contributes one factor: the probability that its flip
    matches the epoch's unanimous prediction (0.5 for a fair coin). Bets
    sharing an epoch are fully dependent and add no factor beyond the
    first.
    """
    grouping = group_by_epoch(trace)
    bias = trace.config.coin_bias
    p = 1.0
    for indices in grouping.bets_per_epoch.values():
        predictions = {trace.bets[i].prediction for i in indices}
        if len(predictions) > 1:
            return 0.0
        p *= _marginal(trace.bets[indices[0]], bias)
    return p


def effective_event_count(trace: GameTrace) -> int:
    """Number of independent events in the record: occupied epochs.

    Bets separated by no flip share one coin state; placing several of
    them only divides one bet into pieces. The count of distinct epochs
    containing at least one bet is what a statistical evaluation may treat
    as the sample size. Zero bets give zero events.
    """
    return len(group_by_epoch(trace).bets_per_epoch)
