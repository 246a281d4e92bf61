"""
Targeting a risk or return level
================================

A backtest's equity curve can be blended with cash after the fact. Scaling
every per-step return by an exposure ``w`` scales the curve's volatility by
exactly ``w``.
"""
from pseudotrade import (
    GeneratorSpec,
    RandomSegments,
    TargetSpec,
    compare_to_buyhold,
    generate,
    macd_crossover_signals,
    summarize,
    target_exposure,
)

world = generate(GeneratorSpec("trend", 2000, random=RandomSegments(min_down_segments=1), seed=11))
report = compare_to_buyhold(world.clean, macd_crossover_signals(world.clean))
base = summarize(report.equity, report.trades)
print(f"MACD: return {base.total_return_pct:.1f}%, per-step vol {base.per_step_volatility:.5f}, "
      f"max drawdown {base.max_drawdown_pct:.1f}%, buy-and-hold {report.buyhold_return_pct:.1f}%")

for spec in (TargetSpec("risk", base.per_step_volatility / 2),
             TargetSpec("risk", 0.02, w_max=2.0),
             TargetSpec("return", 0.5)):
    res = target_exposure(report.equity, spec)
    s = res.summary
    print(f"{spec.mode.value:6s} target {spec.target:<8.4g} -> w={res.weight:.3f}: "
          f"return {s.total_return_pct:7.1f}%, vol {s.per_step_volatility:.5f}, "
          f"drawdown {s.max_drawdown_pct:.1f}%")
