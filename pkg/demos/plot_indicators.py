"""
Moving averages, MACD lines and RSI
===================================

Indicators return a ``ValueSeries`` whose first ``valid_from`` entries are
undefined. Reading one of them raises instead of handing back a number.
"""
import numpy as np

from pseudotrade import (
    MacdSpec,
    UndefinedValueError,
    ValueSeries,
    ema,
    macd_crossover_signals,
    macd_lines,
    rsi,
    sma,
)

prices = 100 + np.cumsum(np.random.default_rng(0).normal(0, 1, 300))

s20 = sma(prices, 20)
print("sma_20 defined from t =", s20.valid_from)
try:
    s20.read(5)
except UndefinedValueError as exc:
    print("reading t=5:", exc)

###############################################################################
# The EMA is the recurrence ``ema[t] = ema[t-1] + alpha * (p[t] - ema[t-1])``
# seeded with the first price, with ``alpha = 2 / (N + 1)``.
e9 = ema(prices, 9)
print("ema_9 at t=0..3:", np.round(e9.values[:4], 3))

###############################################################################
# MACD here is the pair of fast and slow EMAs; the strategy is long while the
# fast line is strictly above the slow one, after a warm-up of ``slow`` steps.
fast, slow = macd_lines(prices, MacdSpec(9, 50))
signals = macd_crossover_signals(prices, MacdSpec(9, 50))
print("MACD entries/exits:", signals.transitions())

###############################################################################
# RSI uses plain means of gains and losses over the lookback window.
r14 = rsi(prices, 14)
print("RSI range:", round(float(r14.defined.min()), 1), "-", round(float(r14.defined.max()), 1))
assert isinstance(r14, ValueSeries)
