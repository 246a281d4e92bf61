import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ema_loop, hysteresis_oracle, rsi_oracle
from pseudotrade import (
    MacdSpec,
    RsiStrategyConfig,
    Signal,
    SignalSeries,
    SpecError,
    ValueSeries,
    buy_and_hold_signals,
    macd_crossover_signals,
    rsi_threshold_signals,
)
from pseudotrade.strategies import signals_from_indicator

from conftest import random_walk_prices

prices_st = st.lists(st.floats(1.0, 300.0), min_size=20, max_size=120)


def test_macd_constant_is_flat():
    sig = macd_crossover_signals(np.full(120, 9.0))
    assert sig.valid_from == 50
    assert not sig.positions.any()


def test_macd_rising_line_stays_long():
    sig = macd_crossover_signals(np.arange(1000) + 100.0)
    pos = sig.positions
    t0 = int(np.argmax(pos))
    assert t0 == 50  # the seeded fast EMA leads from the first step
    assert pos[t0:].all()
    assert sig.transitions() == (1, 0)


def test_macd_v_shape_single_entry_at_crossover():
    p = [200.0 - t for t in range(150)] + [51.0 + t for t in range(250)]
    fast, slow = ema_loop(p, 9), ema_loop(p, 50)
    want = next(t for t in range(50, len(p)) if fast[t] > slow[t])
    assert want == 172
    sig = macd_crossover_signals(p, MacdSpec(9, 50))
    assert sig.transitions() == (1, 0)
    assert int(np.argmax(sig.positions)) == want


def test_rsi_never_oversold_is_flat():
    sig = rsi_threshold_signals(np.arange(1, 60, dtype=float))
    assert not sig.positions.any()
    assert sig.valid_from == 14


def test_rsi_hysteresis_path():
    path = ValueSeries([25.0, 40.0, 60.0, 75.0], valid_from=0)
    sig = signals_from_indicator(path, 30.0, 70.0)
    assert [Signal(s) for s in sig.positions] == [Signal.LONG, Signal.LONG, Signal.LONG, Signal.FLAT]


def test_rsi_matches_state_machine_replay(rng):
    p = random_walk_prices(rng, 1500)
    cfg = RsiStrategyConfig(10, 35.0, 65.0)
    want = hysteresis_oracle(rsi_oracle(list(p), 10), 10, 35.0, 65.0)
    assert list(rsi_threshold_signals(p, cfg).positions) == want


def test_rsi_config_validation():
    with pytest.raises(SpecError):
        RsiStrategyConfig(14, 70.0, 30.0)
    with pytest.raises(SpecError):
        RsiStrategyConfig(14, 0.0, 70.0)


def test_buy_and_hold():
    assert list(buy_and_hold_signals([1.0, 2.0, 3.0]).positions) == [1, 1, 1]
    assert list(buy_and_hold_signals([4.0]).positions) == [1]


def test_signal_series_rejects_long_warmup():
    with pytest.raises(Exception):
        SignalSeries([1, 0, 1], valid_from=1)


@settings(max_examples=300, deadline=None)
@given(prices_st, st.floats(0.01, 100.0))
def test_strategies_scale_invariant(values, scale):
    p = np.array(values)
    spec = MacdSpec(3, 8)
    assert macd_crossover_signals(p, spec) == macd_crossover_signals(p * scale, spec)
    cfg = RsiStrategyConfig(5)
    a = rsi_threshold_signals(p, cfg).positions
    b = rsi_threshold_signals(p * scale, cfg).positions
    assert np.array_equal(a, b)


@settings(max_examples=60, deadline=None)
@given(prices_st)
def test_transition_counts_and_warmup(values):
    p = np.array(values)
    for sig in (rsi_threshold_signals(p, RsiStrategyConfig(5)), macd_crossover_signals(p, MacdSpec(3, 8))):
        assert not sig.positions[: sig.valid_from].any()
        entries, exits = sig.transitions()
        assert exits <= entries <= exits + 1
