"""Synthetic price worlds: piecewise trends and cycles plus noise.

A world is a clean series built from segments whose parameters change at
chosen indices, and a noisy copy of it. At every change point the new
segment's offset is solved so the series stays continuous: the value at the
first index of a segment equals the previous segment's line (or sinusoid)
extended to that index.

Two noise models are available:

* ``simple``: ``X = Y * (1 + alpha * (2R - 1))`` with ``R ~ U[0, 1]``; the
  relative deviation never exceeds ``alpha``.
* ``energy``: the ratio ``Q = X/Y`` takes a random multiplicative step that
  is pulled back toward 1, ``Q[t+1] = Q[t] * (1 + alpha * (R[t] - k * (Q[t] - 1)))``
  with ``R ~ U[-1, 1]`` and ``Q[0] = 1``, and ``X[t+1] = Y[t+1] * Q[t+1]``.
  On a constant clean series this is ``X[t+1] = X[t] * (1 + alpha * E[t])``
  with ``E[t] = R[t] - k * (X[t]/Y[t] - 1)``; scaling by the clean series'
  own step keeps the noisy copy riding on trends instead of lagging them.
  Deviations persist for roughly ``1 / (alpha * k)`` steps, giving smoother,
  trend-like wiggles than the simple model.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import SpecError
from .rng import check_seed, make_rng
from .series import MIN_PRICE, PriceSeries

log = logging.getLogger(__name__)

MAX_NOISE_ALPHA = 0.5
MAX_ENERGY_K = 4.0
#: Random down-trends are flattened so a segment never loses more than this
#: fraction of its starting value.
MAX_SEGMENT_DECLINE = 0.75


class PatternKind(str, Enum):
    TREND = "trend"
    CYCLE = "cycle"


class NoiseKind(str, Enum):
    NONE = "none"
    SIMPLE = "simple"
    ENERGY = "energy"


@dataclass(frozen=True)
class TrendSegment:
    slope: float
    start: int


@dataclass(frozen=True)
class CycleSegment:
    """``amplitude * sin(frequency * t) + offset`` from ``start`` on; ``frequency`` in radians/step."""

    amplitude: float
    frequency: float
    start: int

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.frequency


Segment = Union[TrendSegment, CycleSegment]


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind = NoiseKind.NONE
    alpha: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not 0.0 <= self.alpha <= MAX_NOISE_ALPHA:
            raise SpecError(f"noise alpha must lie in [0, {MAX_NOISE_ALPHA}], got {self.alpha}")
        if self.kind is NoiseKind.ENERGY:
            if not 0.0 < self.k <= MAX_ENERGY_K:
                raise SpecError(f"energy noise k must lie in (0, {MAX_ENERGY_K}], got {self.k}")
            if self.alpha == 0.0:
                raise SpecError("energy noise needs alpha > 0")

    def label(self) -> str:
        if self.kind is NoiseKind.NONE:
            return "none"
        if self.kind is NoiseKind.SIMPLE:
            return f"simple:{self.alpha:g}"
        return f"energy:{self.alpha:g}:{self.k:g}"

    @classmethod
    def parse(cls, text: str) -> NoiseSpec:
        """Parse ``none``, ``simple:ALPHA`` or ``energy:ALPHA[:K]``."""
        parts = text.strip().lower().split(":")
        try:
            kind = NoiseKind(parts[0])
            nums = [float(x) for x in parts[1:]]
        except ValueError as exc:
            raise SpecError(f"bad noise spec {text!r}: {exc}") from None
        if kind is NoiseKind.NONE:
            if nums:
                raise SpecError(f"noise 'none' takes no parameters: {text!r}")
            return cls()
        if kind is NoiseKind.SIMPLE and len(nums) == 1:
            return cls(kind, nums[0])
        if kind is NoiseKind.ENERGY and len(nums) in (1, 2):
            return cls(kind, *nums)
        raise SpecError(f"bad noise spec {text!r}")


def _check_range(name: str, lo, hi, low_bound=None):
    if lo > hi:
        raise SpecError(f"{name} range is empty: ({lo}, {hi})")
    if low_bound is not None and lo < low_bound:
        raise SpecError(f"{name} lower bound must be >= {low_bound}, got {lo}")


@dataclass(frozen=True)
class RandomSegments:
    """Ranges from which a world's segments are drawn.

    Trend worlds use ``slope``; cycle worlds use ``amplitude`` and ``period``
    (steps per cycle). ``min_down_segments`` forces at least that many
    negative-slope trend segments. The drawn segment count never exceeds
    ``n // min_segment_length``.
    """

    count: tuple[int, int] = (4, 8)
    slope: tuple[float, float] = (-0.25, 0.25)
    amplitude: tuple[float, float] = (5.0, 25.0)
    period: tuple[float, float] = (20.0, 120.0)
    min_segment_length: int = 100
    min_down_segments: int = 0

    def __post_init__(self):
        for name in ("count", "slope", "amplitude", "period"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        _check_range("segment count", *self.count, low_bound=1)
        _check_range("slope", *self.slope)
        _check_range("amplitude", *self.amplitude, low_bound=0.0)
        _check_range("period", *self.period)
        if self.period[0] <= 0:
            raise SpecError("period must be positive")
        if self.min_segment_length < 1:
            raise SpecError("min_segment_length must be >= 1")
        if not 0 <= self.min_down_segments <= self.count[0]:
            raise SpecError("min_down_segments must lie in [0, minimum segment count]")
        if self.min_down_segments and self.slope[0] >= 0:
            raise SpecError("min_down_segments needs a slope range that admits negatives")


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one world. Give either explicit ``segments`` or ``random`` ranges."""

    kind: PatternKind
    n: int
    initial_price: float = 100.0
    segments: tuple[Segment, ...] | None = None
    random: RandomSegments | None = None
    noise: NoiseSpec = NoiseSpec()
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", PatternKind(self.kind))
        check_seed(self.seed)
        if self.n < 2:
            raise SpecError(f"n must be at least 2, got {self.n}")
        if not self.initial_price > 0:
            raise SpecError("initial price must be positive")
        if (self.segments is None) == (self.random is None):
            raise SpecError("give exactly one of explicit segments or random ranges")
        if self.segments is not None:
            object.__setattr__(self, "segments", tuple(self.segments))
            want = TrendSegment if self.kind is PatternKind.TREND else CycleSegment
            if not all(isinstance(s, want) for s in self.segments):
                raise SpecError(f"{self.kind.value} worlds need {want.__name__} entries")
            _check_partition(self.segments, self.n)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        d["noise"]["kind"] = self.noise.kind.value
        return d


@dataclass(frozen=True, eq=False)
class GeneratedWorld:
    clean: PriceSeries
    noisy: PriceSeries
    spec: GeneratorSpec
    segments: tuple[Segment, ...]

    def __eq__(self, other):
        if not isinstance(other, GeneratedWorld):
            return NotImplemented
        return (
            self.clean == other.clean
            and self.noisy == other.noisy
            and self.spec == other.spec
            and self.segments == other.segments
        )

    @property
    def clamped(self) -> bool:
        return self.clean.clamped or self.noisy.clamped

    def resolved(self) -> dict:
        """Spec plus the concrete segments, as plain data."""
        return {
            "spec": self.spec.to_dict(),
            "segments": [asdict(s) for s in self.segments],
            "clamped": self.clamped,
        }


def _check_partition(segments: Sequence[Segment], n: int):
    if not segments:
        raise SpecError("segment list is empty")
    starts = [s.start for s in segments]
    if starts[0] != 0:
        raise SpecError("first segment must start at 0")
    if any(b <= a for a, b in zip(starts, starts[1:])):
        raise SpecError("segment starts must be strictly increasing")
    if starts[-1] >= n:
        raise SpecError(f"segment start {starts[-1]} is beyond series length {n}")


def _segment_bounds(segments: Sequence[Segment], n: int):
    ends = [s.start for s in segments[1:]] + [n]
    return [(s, s.start, end) for s, end in zip(segments, ends)]


def _clamp(values: np.ndarray, what: str) -> PriceSeries:
    low = values < MIN_PRICE
    if np.any(low):
        log.warning("%s: %d values clamped to %g", what, int(low.sum()), MIN_PRICE)
        values = np.maximum(values, MIN_PRICE)
    return PriceSeries(values, clamped=bool(np.any(low)))


def trend_offsets(segments: Sequence[TrendSegment], initial_price: float) -> list[float]:
    """Intercepts keeping ``slope * t + offset`` continuous across change points."""
    offsets = [float(initial_price) - segments[0].slope * segments[0].start]
    for prev, seg in zip(segments, segments[1:]):
        boundary = prev.slope * seg.start + offsets[-1]
        offsets.append(boundary - seg.slope * seg.start)
    return offsets


def gen_trend(segments: Sequence[TrendSegment], n: int, initial_price: float) -> PriceSeries:
    """Piecewise-linear prices starting at ``initial_price``.

    Values falling below :data:`~pseudotrade.series.MIN_PRICE` are clamped
    and the result is flagged ``clamped``.
    """
    if not initial_price > 0:
        raise SpecError("initial price must be positive")
    _check_partition(segments, n)
    t = np.arange(n, dtype=np.float64)
    y = np.empty(n)
    for (seg, lo, hi), c in zip(_segment_bounds(segments, n), trend_offsets(segments, initial_price)):
        y[lo:hi] = seg.slope * t[lo:hi] + c
    return _clamp(y, "trend")


def cycle_offsets(segments: Sequence[CycleSegment], initial_price: float) -> list[float]:
    """Offsets keeping ``A sin(b t) + offset`` continuous across change points.

    Raises:
        SpecError: if a segment's trough ``offset - A`` would fall below the
            price floor.
    """
    offsets = []
    level = float(initial_price)
    prev = None
    for seg in segments:
        if seg.amplitude < 0 or not seg.frequency > 0:
            raise SpecError(f"bad cycle segment {seg}: need amplitude >= 0 and frequency > 0")
        if prev is not None:
            level = prev.amplitude * np.sin(prev.frequency * seg.start) + offsets[-1]
        c = level - seg.amplitude * np.sin(seg.frequency * seg.start)
        if c - seg.amplitude < MIN_PRICE:
            raise SpecError(
                f"cycle breaches price floor: segment at t={seg.start} has trough "
                f"{c - seg.amplitude:.6g} < {MIN_PRICE}"
            )
        offsets.append(c)
        prev = seg
    return offsets


def gen_cycle(segments: Sequence[CycleSegment], n: int, initial_price: float) -> PriceSeries:
    if not initial_price > 0:
        raise SpecError("initial price must be positive")
    _check_partition(segments, n)
    t = np.arange(n, dtype=np.float64)
    y = np.empty(n)
    for (seg, lo, hi), c in zip(_segment_bounds(segments, n), cycle_offsets(segments, initial_price)):
        y[lo:hi] = seg.amplitude * np.sin(seg.frequency * t[lo:hi]) + c
    return PriceSeries(y)


def apply_simple_noise(clean, alpha: float, seed: int) -> PriceSeries:
    """Bounded multiplicative noise: ``|X/Y - 1| <= alpha`` at every step."""
    clean = clean if isinstance(clean, PriceSeries) else PriceSeries(clean)
    if not 0.0 <= alpha <= MAX_NOISE_ALPHA:
        raise SpecError(f"noise alpha must lie in [0, {MAX_NOISE_ALPHA}], got {alpha}")
    if alpha == 0.0:
        return PriceSeries(clean.values)
    r = make_rng(seed, "simple-noise").random(len(clean))
    return _clamp(clean.values * (1.0 + alpha * (2.0 * r - 1.0)), "simple noise")


def apply_energy_noise(clean, alpha: float, k: float, seed: int) -> PriceSeries:
    """Mean-reverting multiplicative deviation riding on ``clean``."""
    clean = clean if isinstance(clean, PriceSeries) else PriceSeries(clean)
    if not 0.0 < alpha <= MAX_NOISE_ALPHA:
        raise SpecError(f"energy noise alpha must lie in (0, {MAX_NOISE_ALPHA}], got {alpha}")
    if not 0.0 < k <= MAX_ENERGY_K:
        raise SpecError(f"energy noise k must lie in (0, {MAX_ENERGY_K}], got {k}")
    y = clean.values
    r = make_rng(seed, "energy-noise").uniform(-1.0, 1.0, y.size - 1).tolist()
    yl = y.tolist()
    x = np.empty_like(y)
    x[0] = yl[0]
    ratio = 1.0
    clamped = False
    for t in range(y.size - 1):
        ratio *= 1.0 + alpha * (r[t] - k * (ratio - 1.0))
        xt = yl[t + 1] * ratio
        if xt < MIN_PRICE:
            xt = MIN_PRICE
            ratio = MIN_PRICE / yl[t + 1]
            clamped = True
        x[t + 1] = xt
    if clamped:
        log.warning("energy noise: values clamped to %g", MIN_PRICE)
    return PriceSeries(x, clamped=clamped)


def _draw_starts(rng: np.random.Generator, n: int, count: int, min_len: int) -> list[int]:
    """Uniform segment starts with every segment at least ``min_len`` long."""
    slack = n - count * min_len
    if slack < 0:
        raise SpecError(
            f"cannot fit {count} segments of length >= {min_len} into {n} steps"
        )
    # stars and bars: split the slack into `count` non-negative extras
    cuts = np.sort(rng.choice(slack + count - 1, size=count - 1, replace=False))
    extras = np.diff(np.concatenate(([-1], cuts, [slack + count - 1]))) - 1
    lengths = min_len + extras
    return [0] + np.cumsum(lengths[:-1]).astype(int).tolist()


def _random_trend(rng, r: RandomSegments, starts, n, initial_price) -> list[TrendSegment]:
    slopes = rng.uniform(r.slope[0], r.slope[1], len(starts))
    n_down = int(np.sum(slopes < 0))
    if n_down < r.min_down_segments:
        up = np.flatnonzero(slopes >= 0)
        flip = rng.choice(up, size=r.min_down_segments - n_down, replace=False)
        slopes[flip] = rng.uniform(r.slope[0], min(r.slope[1], 0.0), flip.size)
    segments = []
    level = float(initial_price)
    ends = list(starts[1:]) + [n]
    for m, lo, hi in zip(slopes, starts, ends):
        # segment runs lo..hi (the next start continues this line)
        drop_cap = MAX_SEGMENT_DECLINE * (level - MIN_PRICE) / (hi - lo)
        m = float(max(m, -drop_cap))
        segments.append(TrendSegment(m, int(lo)))
        level += m * (hi - lo)
    return segments


def _random_cycle(rng, r: RandomSegments, starts, initial_price) -> list[CycleSegment]:
    segments = []
    level = float(initial_price)
    prev = None
    c_prev = None
    for i, lo in enumerate(starts):
        a = float(rng.uniform(*r.amplitude))
        b = float(2.0 * np.pi / rng.uniform(*r.period))
        if prev is not None:
            level = prev.amplitude * np.sin(prev.frequency * lo) + c_prev
        s = np.sin(b * lo)
        if i > 0 and level - a * (1.0 + s) < MIN_PRICE:
            # later segments shrink to fit above the floor
            a = max(0.0, (level - MIN_PRICE) / (1.0 + s) * 0.99)
        seg = CycleSegment(a, b, int(lo))
        c_prev = level - a * s
        segments.append(seg)
        prev = seg
    return segments


def sample_segments(spec: GeneratorSpec) -> tuple[Segment, ...]:
    """Resolve the concrete segments of ``spec`` (drawn from its seed if random)."""
    if spec.segments is not None:
        return spec.segments
    r = spec.random
    rng = make_rng(spec.seed, "segments")
    # the upper count is capped by what fits; the lower one is a hard requirement
    fit = spec.n // r.min_segment_length
    if fit < r.count[0]:
        raise SpecError(
            f"cannot fit {r.count[0]} segments of length >= {r.min_segment_length} "
            f"into {spec.n} steps"
        )
    count = int(rng.integers(r.count[0], min(r.count[1], fit), endpoint=True))
    starts = _draw_starts(rng, spec.n, count, r.min_segment_length)
    if spec.kind is PatternKind.TREND:
        return tuple(_random_trend(rng, r, starts, spec.n, spec.initial_price))
    return tuple(_random_cycle(rng, r, starts, spec.initial_price))


def generate(spec: GeneratorSpec) -> GeneratedWorld:
    """Build the clean and noisy series described by ``spec``."""
    segments = sample_segments(spec)
    if spec.kind is PatternKind.TREND:
        clean = gen_trend(segments, spec.n, spec.initial_price)
    else:
        clean = gen_cycle(segments, spec.n, spec.initial_price)
    noise = spec.noise
    if noise.kind is NoiseKind.NONE:
        noisy = clean
    elif noise.kind is NoiseKind.SIMPLE:
        noisy = apply_simple_noise(clean, noise.alpha, spec.seed)
    else:
        noisy = apply_energy_noise(clean, noise.alpha, noise.k, spec.seed)
    return GeneratedWorld(clean, noisy, spec, segments)
