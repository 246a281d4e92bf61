"""Command-line front end: ``generate``, ``backtest``, ``indicators``, ``experiment``.

Settings resolve as flags, then ``--config`` JSON values, then built-in
defaults. Exit codes: 0 success, 2 usage or spec error, 3 data error,
4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import files
from .backtest import compare_to_buyhold
from .datagen import (
    CycleSegment,
    GeneratorSpec,
    NoiseSpec,
    RandomSegments,
    TrendSegment,
    generate,
)
from .errors import PseudotradeError, SpecError
from .experiment import (
    DEFAULT_PARAMS,
    ExperimentGridSpec,
    aggregate,
    aggregate_to_csv,
    make_signals,
    rows_to_csv,
    run_grid,
)
from .indicators import MacdSpec, ema, macd_lines, rsi, sma

log = logging.getLogger("pseudotrade")

GENERATE_DEFAULTS = {
    "kind": "trend",
    "n": 2000,
    "seed": 0,
    "initial_price": 100.0,
    "noise": "none",
    "alpha": 0.0,
    "k": 1.0,
    "segments_min": 4,
    "segments_max": 8,
    "slope_min": -0.25,
    "slope_max": 0.25,
    "amplitude_min": 5.0,
    "amplitude_max": 25.0,
    "period_min": 20.0,
    "period_max": 120.0,
    "min_segment_length": 20,
    "min_down": 0,
    "segments": None,
    "out": "world.csv",
    "report": None,
}

BACKTEST_DEFAULTS = {
    "strategy": "macd",
    "column": None,
    "fee": 0.0,
    **DEFAULT_PARAMS["macd"],
    **DEFAULT_PARAMS["rsi"],
    "report": None,
    "equity_csv": None,
    "svg": None,
}

EXPERIMENT_DEFAULTS = {
    "strategies": ["macd", "rsi", "buyhold"],
    "patterns": ["trend", "cycle", "cycle_single_freq"],
    "noise": ["none", "energy:0.025:0.4"],
    "seeds": 10,
    "base_seed": 0,
    "n": 2000,
    "fee": 0.0,
    "params": {},
    "jobs": 1,
    "out_dir": "experiment",
}


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SpecError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"config {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SpecError(f"config {path}: top level must be an object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge defaults < config file < explicitly given flags."""
    config = _load_config(getattr(args, "config", None))
    unknown = set(config) - set(defaults)
    if unknown:
        raise SpecError(f"unknown config keys: {sorted(unknown)}")
    flags = {k: v for k, v in vars(args).items() if k in defaults and v is not None}
    return {**defaults, **config, **flags}


def _generator_spec(s: dict) -> GeneratorSpec:
    noise = NoiseSpec(s["noise"], float(s["alpha"]), float(s["k"]))
    common = dict(kind=s["kind"], n=int(s["n"]), initial_price=float(s["initial_price"]),
                  noise=noise, seed=int(s["seed"]))
    if s["segments"] is not None:
        cls = TrendSegment if s["kind"] == "trend" else CycleSegment
        try:
            segments = tuple(cls(**seg) for seg in s["segments"])
        except TypeError as exc:
            raise SpecError(f"bad segment entry: {exc}") from None
        return GeneratorSpec(segments=segments, **common)
    ranges = RandomSegments(
        count=(int(s["segments_min"]), int(s["segments_max"])),
        slope=(float(s["slope_min"]), float(s["slope_max"])),
        amplitude=(float(s["amplitude_min"]), float(s["amplitude_max"])),
        period=(float(s["period_min"]), float(s["period_max"])),
        min_segment_length=int(s["min_segment_length"]),
        min_down_segments=int(s["min_down"]),
    )
    return GeneratorSpec(random=ranges, **common)


def cmd_generate(args) -> int:
    s = _resolve(args, GENERATE_DEFAULTS)
    if args.amplitude is not None:
        s["amplitude_min"] = s["amplitude_max"] = args.amplitude
    if args.period is not None:
        s["period_min"] = s["period_max"] = args.period
    world = generate(_generator_spec(s))
    resolved = world.resolved()
    files.write_text(
        s["out"],
        files.format_series_csv(
            {"clean": world.clean.values, "noisy": world.noisy.values},
            comments=[json.dumps(resolved, sort_keys=True)],
        ),
    )
    text = files.dumps(resolved)
    if s["report"]:
        files.write_text(s["report"], text)
    sys.stdout.write(text)
    return 0


def cmd_backtest(args) -> int:
    s = _resolve(args, BACKTEST_DEFAULTS)
    prices = files.read_prices(args.prices, s["column"])
    if s["strategy"] not in DEFAULT_PARAMS:
        raise SpecError(f"unknown strategy {s['strategy']!r}; choose from {sorted(DEFAULT_PARAMS)}")
    params = {k: s[k] for k in DEFAULT_PARAMS[s["strategy"]]}
    signals = make_signals(s["strategy"], prices, params)
    report = compare_to_buyhold(prices, signals, float(s["fee"]))
    text = files.dumps(report.to_dict())
    if s["report"]:
        files.write_text(s["report"], text)
    else:
        sys.stdout.write(text)

    lines = _strategy_lines(s["strategy"], prices, params)
    if s["equity_csv"]:
        cols = {"price": prices.values, **lines, "position": signals.positions.astype(float),
                "equity": report.equity.equity}
        files.write_text(s["equity_csv"], files.format_series_csv(cols))
    if s["svg"]:
        entries = [tr.entry_index for tr in report.trades]
        exits = [tr.exit_index for tr in report.trades if tr.exit_index is not None]
        title = (f"{report.strategy} {report.params}  return {report.total_return_pct:.1f}%  "
                 f"buy-and-hold {report.buyhold_return_pct:.1f}%")
        overlay = {k: v for k, v in lines.items() if not k.startswith("rsi")}
        files.write_text(
            s["svg"],
            files.render_chart_svg(prices.values, overlay, report.equity.equity, entries, exits, title),
        )
    return 0


def _strategy_lines(strategy: str, prices, params: dict) -> dict:
    if strategy == "macd":
        fast, slow = macd_lines(prices, MacdSpec(int(params["fast"]), int(params["slow"])))
        return {f"ema_{params['fast']}": fast.values, f"ema_{params['slow']}": slow.values}
    if strategy == "rsi":
        return {f"rsi_{params['lookback']}": rsi(prices, int(params["lookback"])).values}
    return {}


def cmd_indicators(args) -> int:
    prices = files.read_prices(args.prices, args.column)
    cols = {"price": prices.values}
    for w in args.sma or []:
        cols[f"sma_{w}"] = sma(prices, w).values
    for w in args.ema or []:
        cols[f"ema_{w}"] = ema(prices, w).values
    for pair in args.macd or []:
        fast, slow = _int_pair(pair)
        f, sl = macd_lines(prices, MacdSpec(fast, slow))
        cols[f"macd_fast_{fast}"] = f.values
        cols[f"macd_slow_{slow}"] = sl.values
    for x in args.rsi or []:
        cols[f"rsi_{x}"] = rsi(prices, x).values
    if len(cols) == 1:
        raise SpecError("choose at least one of --sma, --ema, --macd, --rsi")
    text = files.format_series_csv(cols)
    if args.out:
        files.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _int_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise SpecError(f"expected FAST,SLOW, got {text!r}") from None
    return a, b


def _split_list(value):
    if value is None or isinstance(value, list):
        return value
    return [x.strip() for x in value.split(",") if x.strip()]


def cmd_experiment(args) -> int:
    args.strategies = _split_list(args.strategies)
    args.patterns = _split_list(args.patterns)
    s = _resolve(args, EXPERIMENT_DEFAULTS)
    params = {k: dict(v) for k, v in s["params"].items()}
    for name, keys in (("macd", ("fast", "slow")), ("rsi", ("lookback", "buy_level", "sell_level"))):
        for key in keys:
            value = getattr(args, key, None)
            if value is not None:
                params.setdefault(name, {})[key] = value
    grid = ExperimentGridSpec(
        strategies=tuple(s["strategies"]),
        patterns=tuple(s["patterns"]),
        noise_levels=tuple(NoiseSpec.parse(x) for x in s["noise"]),
        seeds=int(s["seeds"]),
        base_seed=int(s["base_seed"]),
        n=int(s["n"]),
        fee_rate=float(s["fee"]),
        params=params,
    )
    rows, failures = run_grid(grid, jobs=int(s["jobs"]))
    out = Path(s["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    files.write_text(out / "rows.csv", rows_to_csv(rows))
    table = aggregate(rows)
    files.write_text(out / "aggregate.csv", aggregate_to_csv(table))
    if failures:
        files.write_json(out / "failures.json", [f.__dict__ for f in failures])
        for f in failures:
            print(f"failed: {f.pattern} {f.noise} run {f.run}: {f.error}", file=sys.stderr)
    for entry in table:
        print(
            f"{entry['strategy']:8s} {entry['pattern']:18s} {entry['noise']:7s} "
            f"alpha={entry['alpha']:<6g} median_return={entry['median_return_pct']:10.2f}% "
            f"median_excess={entry['median_excess_pct']:10.2f}% win_rate={entry['win_rate']:.2f}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudotrade", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic clean/noisy price world as CSV")
    g.add_argument("--config")
    g.add_argument("--kind", choices=["trend", "cycle"])
    g.add_argument("--n", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--initial-price", type=float)
    g.add_argument("--noise", choices=["none", "simple", "energy"])
    g.add_argument("--alpha", type=float)
    g.add_argument("--k", type=float)
    g.add_argument("--segments-min", type=int)
    g.add_argument("--segments-max", type=int)
    g.add_argument("--slope-min", type=float)
    g.add_argument("--slope-max", type=float)
    g.add_argument("--amplitude", type=float, help="fixed cycle amplitude")
    g.add_argument("--amplitude-min", type=float)
    g.add_argument("--amplitude-max", type=float)
    g.add_argument("--period", type=float, help="fixed cycle period in steps")
    g.add_argument("--period-min", type=float)
    g.add_argument("--period-max", type=float)
    g.add_argument("--min-segment-length", type=int)
    g.add_argument("--min-down", type=int, help="minimum number of down-trend segments")
    g.add_argument("--out", help="CSV path (default world.csv)")
    g.add_argument("--report", help="also write the resolved spec JSON here")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("backtest", help="trade a strategy on a price CSV")
    b.add_argument("--prices", required=True)
    b.add_argument("--config")
    b.add_argument("--column")
    b.add_argument("--strategy", choices=["macd", "rsi", "buyhold"])
    _strategy_flags(b)
    b.add_argument("--fee", type=float)
    b.add_argument("--report", help="JSON report path (default: stdout)")
    b.add_argument("--equity-csv")
    b.add_argument("--svg")
    b.set_defaults(func=cmd_backtest)

    i = sub.add_parser("indicators", help="dump indicator columns for a price CSV")
    i.add_argument("--prices", required=True)
    i.add_argument("--column")
    i.add_argument("--sma", type=int, action="append")
    i.add_argument("--ema", type=int, action="append")
    i.add_argument("--macd", action="append", metavar="FAST,SLOW")
    i.add_argument("--rsi", type=int, action="append")
    i.add_argument("--out")
    i.set_defaults(func=cmd_indicators)

    e = sub.add_parser("experiment", help="run the strategy x pattern x noise grid")
    e.add_argument("--config")
    e.add_argument("--strategies", help="comma list from macd,rsi,buyhold")
    e.add_argument("--patterns", help="comma list from trend,cycle,cycle_single_freq")
    e.add_argument("--noise", action="append",
                   help="none | simple:ALPHA | energy:ALPHA[:K]; repeatable")
    e.add_argument("--seeds", type=int)
    e.add_argument("--base-seed", type=int)
    e.add_argument("--n", type=int)
    e.add_argument("--fee", type=float)
    _strategy_flags(e)
    e.add_argument("--jobs", type=int)
    e.add_argument("--out-dir")
    e.set_defaults(func=cmd_experiment)
    return parser


def _strategy_flags(p):
    p.add_argument("--fast", type=int)
    p.add_argument("--slow", type=int)
    p.add_argument("--lookback", type=int)
    p.add_argument("--buy-level", type=float)
    p.add_argument("--sell-level", type=float)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except PseudotradeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
