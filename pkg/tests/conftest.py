"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from flipbet import Bet, Face, Flip, GameConfig, GameTrace, make_trace

faces = st.sampled_from([Face.HEADS, Face.TAILS])

seeds = st.integers(min_value=0, max_value=2**64 - 1)


@st.composite
def game_inputs(draw, max_flips: int = 5, max_bets: int = 6, bias=None, min_bets: int = 0):
    """(config, flip_times, bets) triple obeying every schedule invariant."""
    horizon = draw(st.floats(min_value=0.5, max_value=50.0, allow_nan=False))
    extra = draw(
        st.lists(
            st.floats(
                min_value=0.0,
                max_value=horizon,
                exclude_min=True,
                allow_nan=False,
                allow_infinity=False,
            ),
            unique=True,
            max_size=max_flips - 1,
        )
    )
    flip_times = [0.0] + sorted(extra)
    n_bets = draw(st.integers(min_value=min_bets, max_value=max_bets))
    bets = [
        Bet(
            draw(st.floats(min_value=0.0, max_value=horizon, allow_nan=False)),
            draw(faces),
        )
        for _ in range(n_bets)
    ]
    bets.sort(key=lambda b: b.time)
    coin_bias = draw(st.floats(0.0, 1.0, allow_nan=False)) if bias is None else bias
    config = GameConfig(horizon=horizon, coin_bias=coin_bias, seed=draw(seeds))
    return config, flip_times, bets


@st.composite
def traces(draw, max_flips: int = 5, max_bets: int = 6, bias=None, min_bets: int = 0) -> GameTrace:
    """Random valid trace with externally chosen flip outcomes."""
    config, flip_times, bets = draw(game_inputs(max_flips, max_bets, bias, min_bets))
    flips = [Flip(t, draw(faces)) for t in flip_times]
    return make_trace(config, flips, bets)


@pytest.fixture
def paradox_trace() -> GameTrace:
    """One flip landing heads at t=0; two bets on heads at 0.3 and 0.7."""
    return make_trace(
        GameConfig(horizon=1.0),
        [Flip(0.0, Face.HEADS)],
        [Bet(0.3, Face.HEADS), Bet(0.7, Face.HEADS)],
    )


@pytest.fixture
def new_launch_trace() -> GameTrace:
    """Two flips with one bet in each epoch, all on the realized faces."""
    return make_trace(
        GameConfig(horizon=1.0),
        [Flip(0.0, Face.HEADS), Flip(0.5, Face.TAILS)],
        [Bet(0.3, Face.HEADS), Bet(0.7, Face.TAILS)],
    )
