"""Synthetic price worlds, technical-indicator strategies and a backtest lab.

Generate trending or cyclical price series with known structure, trade MACD
crossover and RSI threshold rules on them, and compare every run to buy and
hold.
"""
from .backtest import BacktestReport, Trade, compare_to_buyhold, run_backtest
from .datagen import (
    CycleSegment,
    GeneratedWorld,
    GeneratorSpec,
    NoiseKind,
    NoiseSpec,
    PatternKind,
    RandomSegments,
    TrendSegment,
    apply_energy_noise,
    apply_simple_noise,
    gen_cycle,
    gen_trend,
    generate,
)
from .errors import DataError, InvariantError, PseudotradeError, SpecError, UndefinedValueError
from .experiment import ExperimentGridSpec, GridResultRow, aggregate, run_grid
from .indicators import EmaSpec, MacdSpec, RsiSpec, SmaSpec, ema, macd_lines, rsi, sma
from .metrics import EquityCurve, MetricsSummary, TargetMode, TargetSpec, summarize, target_exposure
from .series import MIN_PRICE, PriceSeries, ValueSeries, aligned_read, simple_returns
from .strategies import (
    RsiStrategyConfig,
    Signal,
    SignalSeries,
    buy_and_hold_signals,
    macd_crossover_signals,
    rsi_threshold_signals,
)

__version__ = "0.1.0"

__all__ = [
    "aggregate",
    "aligned_read",
    "apply_energy_noise",
    "apply_simple_noise",
    "BacktestReport",
    "buy_and_hold_signals",
    "compare_to_buyhold",
    "CycleSegment",
    "DataError",
    "ema",
    "EmaSpec",
    "EquityCurve",
    "ExperimentGridSpec",
    "gen_cycle",
    "gen_trend",
    "generate",
    "GeneratedWorld",
    "GeneratorSpec",
    "GridResultRow",
    "InvariantError",
    "macd_crossover_signals",
    "macd_lines",
    "MacdSpec",
    "MetricsSummary",
    "MIN_PRICE",
    "NoiseKind",
    "NoiseSpec",
    "PatternKind",
    "PriceSeries",
    "PseudotradeError",
    "RandomSegments",
    "rsi",
    "rsi_threshold_signals",
    "RsiSpec",
    "RsiStrategyConfig",
    "run_backtest",
    "run_grid",
    "Signal",
    "SignalSeries",
    "simple_returns",
    "sma",
    "SmaSpec",
    "SpecError",
    "summarize",
    "target_exposure",
    "TargetMode",
    "TargetSpec",
    "Trade",
    "TrendSegment",
    "UndefinedValueError",
    "ValueSeries",
]
