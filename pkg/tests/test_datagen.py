import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lag1_autocorr
from pseudotrade import (
    MIN_PRICE,
    CycleSegment,
    GeneratorSpec,
    NoiseSpec,
    RandomSegments,
    SpecError,
    TrendSegment,
    apply_energy_noise,
    apply_simple_noise,
    gen_cycle,
    gen_trend,
    generate,
)
from pseudotrade.rng import child_seed, fnv1a64, splitmix64


# --- random source pins (PCG64 seeded through SplitMix64/FNV-1a labels) ---

def test_mixing_function_vectors():
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert fnv1a64("") == 0xCBF29CE484222325
    assert fnv1a64("a") == 0xAF63DC4C8601EC8C
    assert child_seed(7, "run", 3) == child_seed(7, "run", "3")
    assert child_seed(7, "segments") == 17264467927562392821


def test_pinned_noise_outputs():
    y = np.full(3, 100.0)
    simple = apply_simple_noise(y, 0.1, 7).values
    energy = apply_energy_noise(y, 0.02, 1.0, 7).values
    assert [v.hex() for v in simple] == [
        "0x1.8db222cda5844p+6", "0x1.9819d5a69d2e6p+6", "0x1.a8dd9466708ccp+6"]
    assert [v.hex() for v in energy] == [
        "0x1.9000000000000p+6", "0x1.8e0430147847cp+6", "0x1.934d2508f902bp+6"]


# --- trends ---

def test_trend_single_line():
    assert list(gen_trend([TrendSegment(1.0, 0)], 5, 1.0).values) == [1, 2, 3, 4, 5]


def test_trend_continuity_at_change():
    segs = [TrendSegment(1.0, 0), TrendSegment(-1.0, 2)]
    assert list(gen_trend(segs, 5, 2.0).values) == [2, 3, 4, 3, 2]


def test_trend_errors_and_clamp():
    with pytest.raises(SpecError):
        gen_trend([], 5, 1.0)
    with pytest.raises(SpecError):
        gen_trend([TrendSegment(1.0, 0)], 5, 0.0)
    with pytest.raises(SpecError):
        gen_trend([TrendSegment(1.0, 1)], 5, 1.0)
    out = gen_trend([TrendSegment(-1.0, 0)], 5, 2.5)
    assert out.clamped and out.values.min() == MIN_PRICE


def _slope_steps_ok(values, segments, n):
    """Every one-step change equals the slope of the segment the step leaves."""
    starts = [s.start for s in segments] + [n]
    worst = 0.0
    for seg, lo, hi in zip(segments, starts, starts[1:]):
        for t in range(lo, min(hi, n - 1)):
            worst = max(worst, abs(values[t + 1] - values[t] - seg.slope))
    return worst


def test_random_trend_is_continuous():
    spec = GeneratorSpec("trend", 2000, random=RandomSegments(count=(6, 8)), seed=11)
    world = generate(spec)
    segs = world.segments
    y = world.clean.values
    assert _slope_steps_ok(y, segs, 2000) <= 1e-9
    # boundary value equals the previous line extended to the change point
    c = y[0]
    for prev, seg in zip(segs, segs[1:]):
        assert abs(y[seg.start] - (prev.slope * seg.start + c)) <= 1e-9
        c = y[seg.start] - seg.slope * seg.start


def test_random_trend_segment_count_runs():
    spec = GeneratorSpec("trend", 2000, random=RandomSegments(count=(4, 4)), seed=5)
    d = np.diff(generate(spec).clean.values)
    runs = 1 + int(np.sum(np.abs(np.diff(d)) > 1e-9))
    assert runs == 4


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_random_trend_constraints(seed):
    r = RandomSegments(count=(4, 8), min_down_segments=2, min_segment_length=100)
    world = generate(GeneratorSpec("trend", 2000, random=r, seed=seed))
    starts = [s.start for s in world.segments] + [2000]
    assert 4 <= len(world.segments) <= 8
    assert min(np.diff(starts)) >= 100
    assert sum(s.slope < 0 for s in world.segments) >= 2
    assert np.all(world.clean.values >= MIN_PRICE)
    assert not world.clamped


# --- cycles ---

def test_cycle_zero_amplitude():
    assert list(gen_cycle([CycleSegment(0.0, 0.3, 0)], 4, 10.0).values) == [10] * 4


def test_cycle_single_segment():
    out = gen_cycle([CycleSegment(1.0, math.pi / 2, 0)], 4, 10.0).values
    np.testing.assert_allclose(out, [10, 11, 10, 9], atol=1e-12)


def test_cycle_floor_breach():
    with pytest.raises(SpecError, match="cycle breaches price floor"):
        gen_cycle([CycleSegment(20.0, 0.1, 0)], 10, 10.0)
    with pytest.raises(SpecError, match="cycle breaches price floor"):
        gen_cycle([CycleSegment(1.0, 0.1, 0), CycleSegment(50.0, 0.1, 5)], 10, 10.0)


def test_random_cycle_is_continuous():
    spec = GeneratorSpec("cycle", 2000, random=RandomSegments(count=(5, 6)), seed=3)
    world = generate(spec)
    y = world.clean.values
    segs = world.segments
    for prev, seg in zip(segs, segs[1:]):
        c_prev = y[prev.start] - prev.amplitude * math.sin(prev.frequency * prev.start)
        extended = prev.amplitude * math.sin(prev.frequency * seg.start) + c_prev
        assert abs(y[seg.start] - extended) <= 1e-9
    assert y[0] == 100.0


# --- noise ---

def test_simple_noise_zero_alpha_is_identity():
    y = gen_trend([TrendSegment(0.5, 0)], 50, 10.0)
    assert apply_simple_noise(y, 0.0, 1) == y


def test_simple_noise_bound_and_determinism(rng):
    y = rng.uniform(5, 50, 20000)
    x1 = apply_simple_noise(y, 0.1, 42).values
    x2 = apply_simple_noise(y, 0.1, 42).values
    x3 = apply_simple_noise(y, 0.1, 43).values
    assert np.max(np.abs(x1 / y - 1)) <= 0.1
    assert np.array_equal(x1, x2)
    assert not np.array_equal(x1, x3)


def test_simple_noise_alpha_range():
    with pytest.raises(SpecError):
        apply_simple_noise([1.0, 2.0], 0.6, 0)


def test_energy_noise_long_run_mean():
    y = np.full(10_000, 100.0)
    x = apply_energy_noise(y, 0.02, 1.0, 9).values
    assert 0.95 <= np.mean(x / y) <= 1.05
    assert x[0] == y[0]


def test_energy_noise_vanishing_step():
    y = gen_cycle([CycleSegment(3.0, 0.2, 0)], 500, 20.0)
    x = apply_energy_noise(y, 1e-9, 1.0, 2).values
    assert np.max(np.abs(x / y.values - 1)) <= 1e-5


def test_energy_noise_is_autocorrelated_simple_is_not():
    y = np.full(10_000, 100.0)
    d_energy = apply_energy_noise(y, 0.02, 1.0, 4).values - y
    # match the simple model's spread to the energy model's
    alpha = min(0.5, float(np.std(d_energy / y)) * math.sqrt(3))
    d_simple = apply_simple_noise(y, alpha, 4).values - y
    assert lag1_autocorr(list(d_energy)) > 0.2
    assert abs(lag1_autocorr(list(d_simple))) < 0.1


def test_energy_noise_pulls_back_toward_clean():
    k = 2.0
    x = apply_energy_noise(np.full(200_000, 50.0), 0.05, k, 3).values
    d = x / 50.0 - 1
    step = np.diff(d)
    # the stationary spread is about sqrt(alpha / (6k)) ~ 0.065, far inside 1/k
    above, below = d[:-1] > 0.1, d[:-1] < -0.1
    assert above.sum() > 100 and below.sum() > 100
    assert step[above].mean() < 0 < step[below].mean()


def test_noise_spec_validation_and_parse():
    with pytest.raises(SpecError):
        NoiseSpec("energy", 0.1, 0.0)
    with pytest.raises(SpecError):
        NoiseSpec("simple", 0.7)
    assert NoiseSpec.parse("energy:0.025:0.4") == NoiseSpec("energy", 0.025, 0.4)
    assert NoiseSpec.parse("simple:0.1").alpha == 0.1
    assert NoiseSpec.parse("none") == NoiseSpec()
    with pytest.raises(SpecError):
        NoiseSpec.parse("pink:0.1")


# --- composition ---

def test_generate_without_noise_returns_clean():
    world = generate(GeneratorSpec("trend", 500, random=RandomSegments(count=(2, 3)), seed=1))
    assert world.noisy == world.clean


def test_generate_is_deterministic():
    spec = GeneratorSpec("cycle", 1500, random=RandomSegments(count=(2, 4)),
                         noise=NoiseSpec("energy", 0.03, 0.5), seed=77)
    a, b = generate(spec), generate(spec)
    assert a == b
    assert np.array_equal(a.noisy.values, b.noisy.values)
    other = generate(GeneratorSpec("cycle", 1500, random=RandomSegments(count=(2, 4)),
                                   noise=NoiseSpec("energy", 0.03, 0.5), seed=78))
    assert not np.array_equal(a.noisy.values, other.noisy.values)


def test_noise_does_not_change_clean_world():
    r = RandomSegments(count=(4, 6))
    clean = generate(GeneratorSpec("trend", 1000, random=r, seed=3))
    noisy = generate(GeneratorSpec("trend", 1000, random=r, noise=NoiseSpec("simple", 0.1), seed=3))
    assert clean.clean == noisy.clean
    assert noisy.noisy != noisy.clean


def test_generator_spec_validation():
    with pytest.raises(SpecError):
        GeneratorSpec("trend", 1, random=RandomSegments())
    with pytest.raises(SpecError):
        GeneratorSpec("trend", 100)
    with pytest.raises(SpecError):
        GeneratorSpec("trend", 100, segments=[CycleSegment(1.0, 0.1, 0)])
    with pytest.raises(SpecError):
        RandomSegments(count=(5, 4))
    with pytest.raises(SpecError, match="cannot fit"):
        generate(GeneratorSpec("trend", 300, random=RandomSegments(count=(8, 8)), seed=0))
