"""Cash/shares ledger replay of a signal series."""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .errors import DataError, SpecError
from .metrics import EquityCurve, MetricsSummary, summarize
from .series import as_prices
from .strategies import SignalSeries, buy_and_hold_signals

MAX_FEE_RATE = 0.1


@dataclass(frozen=True)
class Trade:
    """One round trip. An open trade has ``exit_index=None`` and is marked at the last price."""

    entry_index: int
    entry_price: float
    exit_index: int | None
    exit_price: float
    trade_return: float

    @property
    def is_open(self) -> bool:
        return self.exit_index is None


@dataclass(frozen=True)
class BacktestReport:
    strategy: str
    params: dict
    fee_rate: float
    trades: tuple[Trade, ...]
    equity: EquityCurve
    total_return_pct: float
    metrics: MetricsSummary
    buyhold_return_pct: float | None = None
    excess_over_buyhold_pct: float | None = None

    def to_dict(self, include_equity: bool = False) -> dict:
        out = {
            "strategy": self.strategy,
            "params": dict(self.params),
            "fee_rate": self.fee_rate,
            "steps": len(self.equity),
            "total_return_pct": self.total_return_pct,
            "buyhold_return_pct": self.buyhold_return_pct,
            "excess_over_buyhold_pct": self.excess_over_buyhold_pct,
            "final_equity": float(self.equity.equity[-1]),
            "metrics": self.metrics.to_dict(),
            "trades": [asdict(t) for t in self.trades],
        }
        if include_equity:
            out["equity"] = self.equity.equity.tolist()
        return out


def run_backtest(prices, signals: SignalSeries, fee_rate: float = 0.0) -> BacktestReport:
    """Replay ``signals`` against ``prices`` starting from cash 1.0.

    Fills happen at the price of the step where the signal changes. Buys go
    all-in (fractional shares); the fee is ``fee_rate`` times the traded
    value, so a buy with cash ``C`` acquires ``C / (p * (1 + fee_rate))``
    shares and a sale yields ``shares * p * (1 - fee_rate)``. An open
    position at the end is marked to market, not closed.
    """
    prices = as_prices(prices)
    if len(signals) != len(prices):
        raise DataError(
            f"length mismatch: {len(prices)} prices vs {len(signals)} signals"
        )
    if not 0.0 <= fee_rate <= MAX_FEE_RATE:
        raise SpecError(f"fee_rate must lie in [0, {MAX_FEE_RATE}], got {fee_rate}")

    p = prices.values
    pos = signals.positions
    cash, shares = 1.0, 0.0
    equity = np.empty_like(p)
    trades: list[Trade] = []
    entry_t = entry_cash = None
    held = False
    for t in range(p.size):
        want = bool(pos[t])
        if want and not held:
            entry_t, entry_cash = t, cash
            shares = cash / (p[t] * (1.0 + fee_rate))
            cash = 0.0
            held = True
        elif held and not want:
            cash = shares * p[t] * (1.0 - fee_rate)
            shares = 0.0
            held = False
            trades.append(Trade(entry_t, float(p[entry_t]), t, float(p[t]),
                                cash / entry_cash - 1.0))
        equity[t] = cash + shares * p[t]
    if held:
        trades.append(Trade(entry_t, float(p[entry_t]), None, float(p[-1]),
                            equity[-1] / entry_cash - 1.0))

    curve = EquityCurve(equity)
    total = curve.total_return_pct
    summary = summarize(curve, trades) if len(curve) >= 2 else MetricsSummary(
        total, 0.0, 0.0, len(curve), len(trades)
    )
    return BacktestReport(
        strategy=signals.name,
        params=dict(signals.params),
        fee_rate=fee_rate,
        trades=tuple(trades),
        equity=curve,
        total_return_pct=total,
        metrics=summary,
    )


def compare_to_buyhold(prices, signals: SignalSeries, fee_rate: float = 0.0) -> BacktestReport:
    """Backtest ``signals`` and fill in the buy-and-hold comparison fields."""
    prices = as_prices(prices)
    report = run_backtest(prices, signals, fee_rate)
    baseline = run_backtest(prices, buy_and_hold_signals(prices), fee_rate)
    bh = baseline.total_return_pct
    return replace(
        report,
        buyhold_return_pct=bh,
        excess_over_buyhold_pct=report.total_return_pct - bh,
    )
