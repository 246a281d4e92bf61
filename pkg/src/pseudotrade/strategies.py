"""Long/flat position rules built on the indicators."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import DataError, SpecError
from .indicators import MacdSpec, RsiSpec, macd_lines, rsi
from .series import ValueSeries, as_prices


class Signal(IntEnum):
    FLAT = 0
    LONG = 1


@dataclass(frozen=True, eq=False)
class SignalSeries:
    """Desired position per step. Entries before ``valid_from`` are always flat.

    ``positions`` is a read-only int8 array of :class:`Signal` values.
    """

    positions: np.ndarray
    valid_from: int = 0
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.array(self.positions, dtype=np.int8, copy=True).reshape(-1)
        if np.any((arr != Signal.FLAT) & (arr != Signal.LONG)):
            raise DataError("signals must be 0 (flat) or 1 (long)")
        if not 0 <= self.valid_from <= arr.size:
            raise DataError(f"valid_from={self.valid_from} outside [0, {arr.size}]")
        if np.any(arr[: self.valid_from] != Signal.FLAT):
            raise DataError("signals before valid_from must be flat")
        arr.setflags(write=False)
        object.__setattr__(self, "positions", arr)

    def __len__(self) -> int:
        return self.positions.size

    def __getitem__(self, t) -> Signal:
        return Signal(int(self.positions[t]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignalSeries):
            return NotImplemented
        return self.valid_from == other.valid_from and np.array_equal(
            self.positions, other.positions
        )

    def transitions(self) -> tuple[int, int]:
        """Counts of (flat->long, long->flat) changes, treating t=-1 as flat."""
        d = np.diff(np.concatenate(([0], self.positions.astype(np.int64))))
        return int(np.sum(d == 1)), int(np.sum(d == -1))


@dataclass(frozen=True)
class RsiStrategyConfig:
    lookback: RsiSpec = RsiSpec(14)
    buy_level: float = 30.0
    sell_level: float = 70.0

    def __post_init__(self):
        if isinstance(self.lookback, int):
            object.__setattr__(self, "lookback", RsiSpec(self.lookback))
        for name in ("buy_level", "sell_level"):
            level = getattr(self, name)
            if not 0 < level < 100:
                raise SpecError(f"{name} must lie in (0, 100), got {level}")
        if self.buy_level >= self.sell_level:
            raise SpecError(
                f"buy_level ({self.buy_level}) must be below sell_level ({self.sell_level})"
            )


def macd_crossover_signals(prices, spec: MacdSpec | None = None) -> SignalSeries:
    """Long while the fast EMA is strictly above the slow EMA.

    The first ``slow.memory`` steps are forced flat: seeded EMAs are still
    pulled toward ``prices[0]`` there.
    """
    spec = spec or MacdSpec()
    prices = as_prices(prices)
    fast, slow = macd_lines(prices, spec)
    warmup = min(spec.slow.memory, len(prices))
    pos = (fast.values > slow.values).astype(np.int8)
    pos[:warmup] = Signal.FLAT
    return SignalSeries(
        pos,
        valid_from=warmup,
        name="macd",
        params={"fast": spec.fast.memory, "slow": spec.slow.memory},
    )


def threshold_positions(
    values: np.ndarray, valid_from: int, buy_level: float, sell_level: float
) -> np.ndarray:
    """Two-state hysteresis: enter below ``buy_level``, exit above ``sell_level``."""
    pos = np.zeros(len(values), dtype=np.int8)
    long = False
    for t in range(valid_from, len(values)):
        v = values[t]
        if long:
            if v > sell_level:
                long = False
        elif v < buy_level:
            long = True
        pos[t] = long
    return pos


def rsi_threshold_signals(prices, config: RsiStrategyConfig | None = None) -> SignalSeries:
    """Buy when RSI drops below ``buy_level``, sell when it rises above ``sell_level``."""
    config = config or RsiStrategyConfig()
    values = rsi(prices, config.lookback)
    pos = threshold_positions(
        values.values, values.valid_from, config.buy_level, config.sell_level
    )
    return SignalSeries(
        pos,
        valid_from=values.valid_from,
        name="rsi",
        params={
            "lookback": config.lookback.lookback,
            "buy_level": config.buy_level,
            "sell_level": config.sell_level,
        },
    )


def buy_and_hold_signals(prices) -> SignalSeries:
    n = len(as_prices(prices))
    return SignalSeries(np.ones(n, dtype=np.int8), valid_from=0, name="buyhold")


def signals_from_indicator(series: ValueSeries, buy_level: float, sell_level: float) -> SignalSeries:
    """Hysteresis rule applied to any precomputed oscillator."""
    pos = threshold_positions(series.values, series.valid_from, buy_level, sell_level)
    return SignalSeries(pos, valid_from=series.valid_from)
