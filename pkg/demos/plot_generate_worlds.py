"""
Generating synthetic price worlds
=================================

A world is a clean series with a known pattern plus a noisy copy of it.
This script builds one trending and one cyclical world, overlays both noise
models and writes SVG charts next to the script.
"""
from pathlib import Path

import numpy as np

from pseudotrade import (
    GeneratorSpec,
    NoiseSpec,
    RandomSegments,
    apply_energy_noise,
    apply_simple_noise,
    generate,
    sma,
)
from pseudotrade.files import render_chart_svg, write_text

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

###############################################################################
# Trending world: 4-8 straight-line segments. Each change point keeps the
# series continuous, so only the slope jumps.
trend = generate(GeneratorSpec(
    kind="trend", n=2000, seed=7,
    random=RandomSegments(count=(4, 8), min_down_segments=1),
    noise=NoiseSpec("energy", alpha=0.025, k=0.4),
))
for seg in trend.segments:
    print(f"trend segment from t={seg.start:4d}: slope {seg.slope:+.3f}")

write_text(out / "trend_world.svg", render_chart_svg(
    trend.noisy.values, {"clean": trend.clean.values, "sma_20 of noisy": sma(trend.noisy, 20).values},
    title="trending world with energy noise"))

###############################################################################
# Cyclical world: sinusoid segments whose amplitude and period change. The
# offset of each new segment is solved from the previous one.
cycle = generate(GeneratorSpec(kind="cycle", n=1000, seed=3, random=RandomSegments(count=(3, 4))))
for seg in cycle.segments:
    print(f"cycle segment from t={seg.start:4d}: amplitude {seg.amplitude:5.2f}, period {seg.period:6.1f}")
write_text(out / "cycle_world.svg", render_chart_svg(cycle.clean.values, title="cyclical world"))

###############################################################################
# Simple noise is bounded and independent from step to step; energy noise
# wanders away from the clean series and is pulled back, so its deviations
# are strongly autocorrelated.
flat = np.full(5000, 100.0)
samples = {
    "simple:0.1": apply_simple_noise(flat, 0.1, seed=1),
    "energy:0.02:1": apply_energy_noise(flat, 0.02, 1.0, seed=1),
}
for label, noisy in samples.items():
    d = noisy.values / flat - 1
    ac = np.corrcoef(d[:-1], d[1:])[0, 1]
    print(f"{label:14s} spread {d.std():.3f}  lag-1 autocorrelation {ac:+.3f}")
