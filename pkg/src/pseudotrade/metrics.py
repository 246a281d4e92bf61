"""Equity-curve summaries and ex-post exposure targeting."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .errors import DataError, InvariantError, SpecError


@dataclass(frozen=True, eq=False)
class EquityCurve:
    """Portfolio value per step, normalised to start capital 1.0."""

    equity: np.ndarray

    def __post_init__(self):
        arr = np.array(self.equity, dtype=np.float64, copy=True).reshape(-1)
        if arr.size < 1:
            raise DataError("equity curve is empty")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise InvariantError("equity must stay positive and finite")
        arr.setflags(write=False)
        object.__setattr__(self, "equity", arr)

    def __len__(self) -> int:
        return self.equity.size

    def step_returns(self) -> np.ndarray:
        e = self.equity
        return e[1:] / e[:-1] - 1.0

    @property
    def total_return_pct(self) -> float:
        return (self.equity[-1] - 1.0) * 100.0


@dataclass(frozen=True)
class MetricsSummary:
    total_return_pct: float
    per_step_volatility: float
    max_drawdown_pct: float
    steps: int
    trades_count: int

    def to_dict(self) -> dict:
        return asdict(self)


def max_drawdown(equity) -> float:
    """Largest fractional fall from a running peak, in [0, 1)."""
    e = np.asarray(equity, dtype=np.float64)
    peak = np.maximum.accumulate(e)
    return float(np.max(1.0 - e / peak))


def summarize(curve: EquityCurve, trades=()) -> MetricsSummary:
    if not isinstance(curve, EquityCurve):
        curve = EquityCurve(curve)
    if len(curve) < 2:
        raise DataError("equity curve too short: need at least 2 points")
    return MetricsSummary(
        total_return_pct=curve.total_return_pct,
        per_step_volatility=float(np.std(curve.step_returns())),
        max_drawdown_pct=max_drawdown(curve.equity) * 100.0,
        steps=len(curve),
        trades_count=len(trades),
    )


class TargetMode(str, Enum):
    RISK = "risk"
    RETURN = "return"


@dataclass(frozen=True)
class TargetSpec:
    """Exposure target.

    ``target`` is a per-step volatility in risk mode and a total-return
    fraction in return mode. ``w_max`` caps the resulting exposure.
    """

    mode: TargetMode
    target: float
    w_max: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", TargetMode(self.mode))
        if not self.target > 0:
            raise SpecError(f"target must be positive, got {self.target}")
        if not self.w_max >= 1:
            raise SpecError(f"w_max must be at least 1, got {self.w_max}")


@dataclass(frozen=True)
class TargetedExposure:
    weight: float
    curve: EquityCurve
    summary: MetricsSummary

    def __iter__(self):
        # allows ``w, scaled = target_exposure(...)``
        return iter((self.weight, self.curve))


def target_exposure(curve: EquityCurve, spec: TargetSpec) -> TargetedExposure:
    """Blend a strategy with cash so it hits a target risk or return.

    Per-step returns are scaled by the exposure ``w`` and the curve is
    rebuilt from them, so the scaled volatility is exactly ``w`` times the
    original.

    Risk mode: ``w = min(w_max, target / volatility)`` (``w_max`` for a
    flat curve). Return mode: ``w = min(w_max, target / total_return)`` for
    a profitable curve, else 0. The return-mode weight is linear in the
    total return, so after compounding the scaled curve's total return is
    generally below the target for large realized returns.
    """
    if not isinstance(curve, EquityCurve):
        curve = EquityCurve(curve)
    if len(curve) < 2:
        raise DataError("equity curve too short: need at least 2 points")
    r = curve.step_returns()
    if spec.mode is TargetMode.RISK:
        vol = float(np.std(r))
        w = spec.w_max if vol == 0 else min(spec.w_max, spec.target / vol)
    else:
        realized = curve.equity[-1] - 1.0
        w = min(spec.w_max, spec.target / realized) if realized > 0 else 0.0
    scaled = EquityCurve(np.concatenate(([1.0], np.cumprod(1.0 + w * r))))
    return TargetedExposure(float(w), scaled, summarize(scaled))
