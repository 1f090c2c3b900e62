"""Seeded synthetic benchmarks with ground-truth labels.

A series of cluster ``j`` is drawn on ``T + shift_range`` points as

    level + trend * u + amplitude * sin(2 pi (u + phase) / period) + peak(u) + noise

and then cut to a window of ``T`` points starting at a random offset in
``0..shift_range``. Optional per-series jitter adds a small extra slope and a
level offset.

The nine ``G{class}_{i}`` presets follow the sizes of a standard
benchmark grid: class 1 separates by level, class 2 by shape, class 3 mixes
both with small per-series trends. ``APP`` is a twelve-visit cohort with
seven trajectory types on an HbA1c-like scale.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .clustering import ClusterLabels
from .dissimilarity import TimeSeries
from .io import load_dataset, save_dataset  # noqa: F401  (re-exported)


@dataclass(frozen=True)
class ClusterRecipe:
    count: int
    level: float
    trend: float = 0.0
    amplitude: float = 0.0
    period: float = 12.0
    phase: float = 0.0
    noise_sd: float = 0.0
    peak_height: float = 0.0
    peak_at: float = 0.0
    peak_width: float = 1.0
    trend_jitter: float = 0.0
    level_jitter: float = 0.0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.amplitude < 0 or self.noise_sd < 0:
            raise ValueError("amplitude and noise_sd must be >= 0")
        if self.period <= 0 or self.peak_width <= 0:
            raise ValueError("period and peak_width must be > 0")
        if self.trend_jitter < 0 or self.level_jitter < 0:
            raise ValueError("jitter scales must be >= 0")


@dataclass(frozen=True)
class GeneratorSpec:
    recipes: tuple
    T: int = 12
    shift_range: int = 3
    seed: int = 0
    klass: int = 0
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "recipes", tuple(self.recipes))
        if not self.recipes:
            raise ValueError("at least one recipe is required")
        if self.T < 2:
            raise ValueError("T must be >= 2")
        if not 0 <= self.shift_range < self.T:
            raise ValueError("shift_range must satisfy 0 <= shift_range < T")

    @property
    def n(self) -> int:
        return sum(r.count for r in self.recipes)

    @property
    def n_clusters(self) -> int:
        return len(self.recipes)

    def with_seed(self, seed: int) -> "GeneratorSpec":
        return replace(self, seed=seed)

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        recipes = tuple(ClusterRecipe(**r) for r in d["recipes"])
        extra = {k: d[k] for k in ("T", "shift_range", "seed", "klass", "name") if k in d}
        return cls(recipes, **extra)


def generate(spec: GeneratorSpec) -> tuple[list[TimeSeries], ClusterLabels]:
    """Draw the dataset of ``spec``; a pure function of the spec including its seed."""
    rng = np.random.default_rng(spec.seed)
    span = spec.T + spec.shift_range
    u = np.arange(span, dtype=np.float64)
    t = np.arange(spec.T, dtype=np.float64)
    series, labels = [], []
    for j, r in enumerate(spec.recipes, start=1):
        shape = (r.level + r.trend * u
                 + r.amplitude * np.sin(2 * np.pi * (u + r.phase) / r.period)
                 + r.peak_height * np.exp(-0.5 * ((u - r.peak_at) / r.peak_width) ** 2))
        for _ in range(r.count):
            start = int(rng.integers(0, spec.shift_range + 1))
            slope = rng.normal(0.0, r.trend_jitter) if r.trend_jitter else 0.0
            offset = rng.normal(0.0, r.level_jitter) if r.level_jitter else 0.0
            noise = rng.normal(0.0, r.noise_sd, spec.T) if r.noise_sd else np.zeros(spec.T)
            values = shape[start:start + spec.T] + slope * t + offset + noise
            series.append(TimeSeries(f"s{len(series) + 1:04d}", values))
            labels.append(j)
    return series, ClusterLabels(tuple(labels))


# --------------------------------------------------------------------------
# presets

def _split(n, k):
    base, extra = divmod(n, k)
    return [base + (1 if i < extra else 0) for i in range(k)]


# shape library on an HbA1c-like scale, 15 raw points before windowing
_SHAPES = [
    dict(trend=0.22),
    dict(trend=-0.22),
    dict(amplitude=0.9, period=6.0),
    dict(peak_height=2.2, peak_at=7.5, peak_width=1.6),
    dict(amplitude=1.6, period=28.0, phase=0.0),
    dict(peak_height=-2.0, peak_at=7.5, peak_width=1.8),
    dict(amplitude=0.9, period=4.0),
    dict(amplitude=1.6, period=28.0, phase=14.0),
    dict(amplitude=0.8, period=6.0, trend=0.2),
]


def _class1(n, k):
    # levels far apart, one shared weak shape
    return [ClusterRecipe(c, level=5.5 + 1.6 * j, amplitude=0.35, period=6.0, noise_sd=0.3)
            for j, c in enumerate(_split(n, k))]


def _class2(n, k):
    # overlapping levels, distinct shapes
    return [ClusterRecipe(c, level=7.5 + 0.15 * ((-1) ** j), noise_sd=0.12, **_SHAPES[j])
            for j, c in enumerate(_split(n, k))]


# (level, shape index) per cluster: some clusters share a shape at different
# levels, others share a level with different shapes. Shapes are shift
# sensitive, and the level jitter hides shape differences from plain distances.
_CLASS3_LAYOUT = [(6.0, 2), (6.0, 3), (11.0, 2), (11.0, 3), (6.0, 5), (11.0, 5), (6.0, 6)]


def _class3(n, k):
    return [ClusterRecipe(c, level=lvl, noise_sd=0.15, trend_jitter=0.05, level_jitter=0.6,
                          **_SHAPES[s])
            for c, (lvl, s) in zip(_split(n, k), _CLASS3_LAYOUT)]


def _application():
    groups = [
        (51, dict(level=6.7)),                                                   # stable, slightly high
        (62, dict(level=8.6, trend=-0.14)),                                       # declining
        (19, dict(level=6.7, peak_height=1.6, peak_at=15.0, peak_width=3.0)),     # late rise
        (30, dict(level=6.4, trend=0.16)),                                        # increasing
        (9, dict(level=8.0, peak_height=3.5, peak_at=2.0, peak_width=2.0)),       # early peak, recovered
        (26, dict(level=7.8, peak_height=1.5, peak_at=5.0, peak_width=2.5)),      # mid hump
        (5, dict(level=9.0, trend=0.3)),                                          # extreme, rising
    ]
    return [ClusterRecipe(c, noise_sd=0.3, trend_jitter=0.02, level_jitter=0.2, **kw)
            for c, kw in groups]


_GRID = {
    "G1_1": (1, 30, 3), "G1_2": (1, 45, 4), "G1_3": (1, 75, 7),
    "G2_1": (2, 30, 3), "G2_2": (2, 50, 5), "G2_3": (2, 90, 9),
    "G3_1": (3, 90, 7), "G3_2": (3, 60, 5), "G3_3": (3, 40, 4),
}

PRESETS = tuple(_GRID) + ("APP",)


def preset(name: str, seed: int = 0) -> GeneratorSpec:
    """Named benchmark recipe (``G1_1`` .. ``G3_3`` or ``APP``)."""
    if name == "APP":
        return GeneratorSpec(tuple(_application()), T=12, shift_range=3, seed=seed, klass=0, name=name)
    if name not in _GRID:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    klass, n, k = _GRID[name]
    build = {1: _class1, 2: _class2, 3: _class3}[klass]
    return GeneratorSpec(tuple(build(n, k)), T=12, shift_range=3, seed=seed, klass=klass, name=name)
