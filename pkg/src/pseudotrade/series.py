"""Immutable price and value series shared by every other module.

Time is an implicit integer index ``t = 0..n-1``. Indicator outputs carry an
explicit ``valid_from`` index; positions before it are undefined and reading
them through :func:`aligned_read` raises.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DataError, UndefinedValueError

#: Lowest price any generator will emit (currency units).
MIN_PRICE = 0.01


def _frozen(values: Iterable[float]) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Strictly positive prices at unit time steps.

    ``clamped`` is set by generators that had to lift values up to
    :data:`MIN_PRICE`.
    """

    values: np.ndarray
    clamped: bool = False

    def __post_init__(self):
        arr = _frozen(self.values)
        if arr.size < 1:
            raise DataError("price series must contain at least one value")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            bad = int(np.argmax(~(np.isfinite(arr) & (arr > 0))))
            raise DataError(f"price at t={bad} is not a positive finite number")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, t):
        return self.values[t]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def scaled(self, factor: float) -> PriceSeries:
        return PriceSeries(self.values * factor)

    def head(self, n: int) -> PriceSeries:
        return PriceSeries(self.values[:n])


@dataclass(frozen=True, eq=False)
class ValueSeries:
    """Real values aligned to a price series with an undefined warm-up prefix.

    The stored array holds NaN before ``valid_from`` so accidental arithmetic
    on the prefix poisons results instead of silently using garbage; callers
    should go through :meth:`read` or :attr:`defined`.
    """

    values: np.ndarray
    valid_from: int = 0

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if not 0 <= self.valid_from <= arr.size:
            raise DataError(
                f"valid_from={self.valid_from} outside [0, {arr.size}]"
            )
        arr[: self.valid_from] = np.nan
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    @property
    def defined(self) -> np.ndarray:
        """The defined tail ``values[valid_from:]``."""
        return self.values[self.valid_from:]

    def is_defined(self, t: int) -> bool:
        return self.valid_from <= t < self.values.size

    def read(self, t: int) -> float:
        return aligned_read(self, t)


def aligned_read(series: ValueSeries, t: int) -> float:
    """Return ``series[t]``, refusing warm-up and out-of-range positions."""
    if t < 0 or t >= len(series):
        raise IndexError(f"out of range: t={t}, length={len(series)}")
    if t < series.valid_from:
        raise UndefinedValueError(
            f"undefined warm-up value: t={t} < valid_from={series.valid_from}"
        )
    return float(series.values[t])


def as_prices(prices) -> PriceSeries:
    """Accept a PriceSeries or any 1-D sequence of positive numbers."""
    if isinstance(prices, PriceSeries):
        return prices
    return PriceSeries(prices)


def simple_returns(prices) -> ValueSeries:
    """One-step simple returns ``p[t]/p[t-1] - 1``; undefined at t=0."""
    prices = as_prices(prices)
    if len(prices) < 2:
        raise DataError("series too short: simple returns need at least 2 prices")
    p = prices.values
    out = np.empty_like(p)
    out[1:] = p[1:] / p[:-1] - 1.0
    return ValueSeries(out, valid_from=1)
