"""Strategy x pattern x noise grids over many seeded worlds.

Each run builds one world per (pattern, noise, run index) and trades every
requested strategy on it, so strategies in the same run see the same prices
and clean/noisy variants of a run share the same clean series.
"""
from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .backtest import compare_to_buyhold
from .datagen import GeneratorSpec, NoiseKind, NoiseSpec, RandomSegments, generate
from .errors import PseudotradeError, SpecError
from .indicators import MacdSpec
from .rng import check_seed, child_seed
from .strategies import (
    RsiStrategyConfig,
    buy_and_hold_signals,
    macd_crossover_signals,
    rsi_threshold_signals,
)

log = logging.getLogger(__name__)

STRATEGIES = ("macd", "rsi", "buyhold")

#: World presets. ``cycle_single_freq`` keeps periods near 28 steps so the
#: default 14-step RSI lookback sits at about half a period.
PATTERNS = {
    "trend": ("trend", RandomSegments(count=(4, 8), slope=(-0.25, 0.25), min_down_segments=1)),
    "cycle": ("cycle", RandomSegments(count=(3, 6), amplitude=(5.0, 25.0), period=(20.0, 120.0))),
    "cycle_single_freq": ("cycle", RandomSegments(count=(1, 1), amplitude=(5.0, 15.0), period=(24.0, 32.0))),
}

#: Energy noise whose deviation from the clean series settles near 10%.
TEN_PERCENT_NOISE = NoiseSpec(NoiseKind.ENERGY, alpha=0.025, k=0.4)

DEFAULT_PARAMS = {
    "macd": {"fast": 9, "slow": 50},
    "rsi": {"lookback": 14, "buy_level": 30.0, "sell_level": 70.0},
    "buyhold": {},
}


@dataclass(frozen=True)
class ExperimentGridSpec:
    strategies: tuple[str, ...] = ("macd", "rsi", "buyhold")
    patterns: tuple[str, ...] = ("trend", "cycle", "cycle_single_freq")
    noise_levels: tuple[NoiseSpec, ...] = (NoiseSpec(), TEN_PERCENT_NOISE)
    seeds: int = 10
    base_seed: int = 0
    n: int = 2000
    initial_price: float = 100.0
    fee_rate: float = 0.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("strategies", "patterns", "noise_levels"):
            value = tuple(getattr(self, name))
            if not value:
                raise SpecError(f"experiment grid axis '{name}' is empty")
            object.__setattr__(self, name, value)
        object.__setattr__(
            self,
            "noise_levels",
            tuple(NoiseSpec.parse(x) if isinstance(x, str) else x for x in self.noise_levels),
        )
        unknown = set(self.strategies) - set(STRATEGIES)
        if unknown:
            raise SpecError(f"unknown strategies: {sorted(unknown)}")
        unknown = set(self.patterns) - set(PATTERNS)
        if unknown:
            raise SpecError(f"unknown patterns: {sorted(unknown)}")
        unknown = set(self.params) - set(STRATEGIES)
        if unknown:
            raise SpecError(f"parameter overrides for unknown strategies: {sorted(unknown)}")
        if self.seeds < 1:
            raise SpecError("seeds must be at least 1")
        check_seed(self.base_seed)

    def strategy_params(self, name: str) -> dict:
        return {**DEFAULT_PARAMS[name], **self.params.get(name, {})}

    def min_segment_length(self) -> int:
        windows = [10]
        if "macd" in self.strategies:
            windows.append(int(self.strategy_params("macd")["slow"]))
        if "rsi" in self.strategies:
            windows.append(int(self.strategy_params("rsi")["lookback"]))
        return 2 * max(windows)

    def world_spec(self, pattern: str, noise: NoiseSpec, run: int) -> GeneratorSpec:
        kind, ranges = PATTERNS[pattern]
        ranges = RandomSegments(**{**asdict(ranges), "min_segment_length": self.min_segment_length()})
        return GeneratorSpec(
            kind=kind,
            n=self.n,
            initial_price=self.initial_price,
            random=ranges,
            noise=noise,
            seed=child_seed(self.base_seed, pattern, run),
        )


@dataclass(frozen=True)
class GridResultRow:
    strategy: str
    pattern: str
    noise: str
    alpha: float
    k: float
    run: int
    seed: int
    total_return_pct: float
    buyhold_return_pct: float
    excess_pct: float
    trades_count: int
    max_drawdown_pct: float

    def sort_key(self):
        return (self.strategy, self.pattern, self.noise, self.alpha, self.k, self.run)


@dataclass(frozen=True)
class GridFailure:
    pattern: str
    noise: str
    run: int
    error: str


def make_signals(name: str, prices, params: dict):
    if name == "macd":
        return macd_crossover_signals(prices, MacdSpec(int(params["fast"]), int(params["slow"])))
    if name == "rsi":
        return rsi_threshold_signals(
            prices,
            RsiStrategyConfig(
                int(params["lookback"]), float(params["buy_level"]), float(params["sell_level"])
            ),
        )
    if name == "buyhold":
        return buy_and_hold_signals(prices)
    raise SpecError(f"unknown strategy {name!r}")


def run_world(grid: ExperimentGridSpec, pattern: str, noise: NoiseSpec, run: int):
    """All strategies on one world. Returns ``(rows, failure_or_None)``."""
    try:
        spec = grid.world_spec(pattern, noise, run)
        prices = generate(spec).noisy
        rows = []
        for name in grid.strategies:
            report = compare_to_buyhold(
                prices, make_signals(name, prices, grid.strategy_params(name)), grid.fee_rate
            )
            rows.append(
                GridResultRow(
                    strategy=name,
                    pattern=pattern,
                    noise=noise.kind.value,
                    alpha=noise.alpha,
                    k=noise.k if noise.kind is NoiseKind.ENERGY else 0.0,
                    run=run,
                    seed=spec.seed,
                    total_return_pct=report.total_return_pct,
                    buyhold_return_pct=report.buyhold_return_pct,
                    excess_pct=report.excess_over_buyhold_pct,
                    trades_count=len(report.trades),
                    max_drawdown_pct=report.metrics.max_drawdown_pct,
                )
            )
        return rows, None
    except PseudotradeError as exc:
        log.error("run failed: pattern=%s noise=%s run=%d: %s", pattern, noise.label(), run, exc)
        return [], GridFailure(pattern, noise.label(), run, str(exc))


def _run_task(args):
    return run_world(*args)


def run_grid(grid: ExperimentGridSpec, jobs: int = 1) -> tuple[list[GridResultRow], list[GridFailure]]:
    """Run every (cell, seed). Output is sorted, so ``jobs`` never changes it."""
    tasks = [
        (grid, pattern, noise, run)
        for pattern in grid.patterns
        for noise in grid.noise_levels
        for run in range(grid.seeds)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_run_task(t) for t in tasks]
    rows = sorted((r for rs, _ in results for r in rs), key=GridResultRow.sort_key)
    failures = [f for _, f in results if f is not None]
    return rows, failures


def aggregate(rows: list[GridResultRow]) -> list[dict]:
    """Per-cell medians and win rate (share of runs with strictly positive excess)."""
    cells: dict[tuple, list[GridResultRow]] = {}
    for row in rows:
        cells.setdefault(row.sort_key()[:5], []).append(row)
    out = []
    for key in sorted(cells):
        group = cells[key]
        excess = np.array([r.excess_pct for r in group])
        out.append(
            {
                "strategy": key[0],
                "pattern": key[1],
                "noise": key[2],
                "alpha": key[3],
                "k": key[4],
                "runs": len(group),
                "median_return_pct": float(np.median([r.total_return_pct for r in group])),
                "median_buyhold_pct": float(np.median([r.buyhold_return_pct for r in group])),
                "median_excess_pct": float(np.median(excess)),
                "win_rate": float(np.mean(excess > 0)),
            }
        )
    return out


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def rows_to_csv(rows: list[GridResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(GridResultRow)]
    writer.writerow(names)
    for row in rows:
        writer.writerow([_fmt(getattr(row, n)) for n in names])
    return buf.getvalue()


def aggregate_to_csv(table: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if table:
        writer.writerow(list(table[0]))
        for entry in table:
            writer.writerow([_fmt(v) for v in entry.values()])
    return buf.getvalue()
