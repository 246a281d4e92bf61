"""Moving averages, the MACD line pair and RSI.

All functions are causal: the value at ``t`` uses ``prices[0..t]`` only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DataError, SpecError
from .series import ValueSeries, as_prices


def _positive_int(name: str, value) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise SpecError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class SmaSpec:
    window: int

    def __post_init__(self):
        object.__setattr__(self, "window", _positive_int("SMA window", self.window))


@dataclass(frozen=True)
class EmaSpec:
    """EMA with ``memory`` days; smoothing factor ``alpha = 2 / (memory + 1)``."""

    memory: int

    def __post_init__(self):
        object.__setattr__(self, "memory", _positive_int("EMA memory", self.memory))

    @property
    def alpha(self) -> float:
        return 2.0 / (self.memory + 1)


@dataclass(frozen=True)
class MacdSpec:
    fast: EmaSpec = EmaSpec(9)
    slow: EmaSpec = EmaSpec(50)

    def __post_init__(self):
        if isinstance(self.fast, int):
            object.__setattr__(self, "fast", EmaSpec(self.fast))
        if isinstance(self.slow, int):
            object.__setattr__(self, "slow", EmaSpec(self.slow))
        if self.fast.memory >= self.slow.memory:
            raise SpecError(
                f"MACD fast memory ({self.fast.memory}) must be below slow "
                f"memory ({self.slow.memory})"
            )


@dataclass(frozen=True)
class RsiSpec:
    lookback: int = 14

    def __post_init__(self):
        object.__setattr__(self, "lookback", _positive_int("RSI lookback", self.lookback))


def sma(prices, spec: SmaSpec | int) -> ValueSeries:
    """Arithmetic mean of the last ``window`` prices; defined from ``window - 1``."""
    if isinstance(spec, int):
        spec = SmaSpec(spec)
    p = as_prices(prices).values
    w = spec.window
    if w > p.size:
        raise DataError(f"window exceeds series: window={w}, length={p.size}")
    out = np.empty_like(p)
    out[w - 1:] = sliding_window_view(p, w).mean(axis=1)
    return ValueSeries(out, valid_from=w - 1)


def ema(prices, spec: EmaSpec | int) -> ValueSeries:
    """Exponential moving average seeded with the first price.

    ``ema[0] = p[0]`` and ``ema[t] = ema[t-1] + alpha * (p[t] - ema[t-1])``.
    """
    if isinstance(spec, int):
        spec = EmaSpec(spec)
    p = as_prices(prices).values.tolist()
    a = spec.alpha
    # written in update form so a constant input is an exact fixed point
    out = [0.0] * len(p)
    level = out[0] = p[0]
    for t in range(1, len(p)):
        level += a * (p[t] - level)
        out[t] = level
    return ValueSeries(out, valid_from=0)


def macd_lines(prices, spec: MacdSpec | None = None) -> tuple[ValueSeries, ValueSeries]:
    """Fast and slow EMA lines whose crossings drive the MACD strategy."""
    spec = spec or MacdSpec()
    prices = as_prices(prices)
    return ema(prices, spec.fast), ema(prices, spec.slow)


def rsi(prices, spec: RsiSpec | int = RsiSpec()) -> ValueSeries:
    """Relative strength index from plain means of gains and losses.

    Uses the last ``lookback`` one-step changes, so the first defined value is
    at ``t = lookback``. A window with no losses scores 100 (50 if it also
    has no gains).
    """
    if isinstance(spec, int):
        spec = RsiSpec(spec)
    p = as_prices(prices).values
    x = spec.lookback
    if p.size < x + 1:
        raise DataError(
            f"series too short for RSI: need {x + 1} prices, got {p.size}"
        )
    delta = np.diff(p)
    gains = sliding_window_view(np.maximum(delta, 0.0), x).mean(axis=1)
    losses = sliding_window_view(np.maximum(-delta, 0.0), x).mean(axis=1)
    total = gains + losses
    values = np.full(gains.shape, 50.0)
    moved = total > 0
    # 100 - 100/(1+g/l) rewritten as 100*g/(g+l): same value, no division by
    # zero when l == 0, and exact gain/loss mirror symmetry
    values[moved] = 100.0 * (gains[moved] / total[moved])
    out = np.empty_like(p)
    out[x:] = values
    return ValueSeries(out, valid_from=x)
