"""Torus windows (l-infinity quotient metric) and seeded Poisson clouds."""

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import rng as _rng

MIN_SIDE = 3.0  # keeps the wrapped metric sane relative to the max connection radius 1
DEFAULT_MAX_POINTS = 10_000_000


class PointCapExceeded(RuntimeError):
    """Sampled point count exceeded the configured cap."""


@dataclass(frozen=True)
class WindowSpec:
    """Torus [0, b)^d with point-process intensity lam**d (lam is the per-axis knob)."""

    d: int
    b: float
    lam: float

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d!r}")
        if not (self.b >= MIN_SIDE and math.isfinite(self.b)):
            raise ValueError(f"side length must be >= {MIN_SIDE}, got {self.b}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"intensity parameter must be positive, got {self.lam}")
        expected_point_count(self)  # overflow check up front

    @property
    def log_volume(self) -> float:
        return self.d * math.log(self.b)


def expected_point_count(window: WindowSpec) -> float:
    """Mean point count lam**d * b**d, with an explicit overflow error."""
    log_mean = window.d * (math.log(window.lam) + math.log(window.b))
    if log_mean > 700.0:
        raise OverflowError(
            f"expected point count exp({log_mean:.1f}) is not representable")
    return math.exp(log_mean)


def wrap_distance(x, y, window: WindowSpec) -> float:
    """Wrapped l-infinity distance: max over axes of min(|dx|, b - |dx|)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (window.d,) or y.shape != (window.d,):
        raise ValueError(
            f"dimension mismatch: expected {window.d}-vectors, got {x.shape} and {y.shape}")
    ad = np.abs(x - y)
    return float(np.max(np.minimum(ad, window.b - ad)))


@dataclass(frozen=True)
class PointCloud:
    """Seeded homogeneous Poisson sample on the torus; a pure function of (window, seed)."""

    window: WindowSpec
    points: np.ndarray
    seed: int

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        if pts.ndim != 2 or (pts.size and pts.shape[1] != self.window.d):
            raise ValueError("points must be an (n, d) array")
        pts = pts.reshape(-1, self.window.d)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    def save_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"x{i}" for i in range(self.window.d)])
            writer.writerows(self.points.tolist())


def sample_poisson_cloud(window: WindowSpec, seed: int,
                         max_points: int = DEFAULT_MAX_POINTS) -> PointCloud:
    """Sample N ~ Poisson(lam**d b**d) points i.i.d. uniform on [0, b)^d.

    Identical (window, seed) reproduces the identical cloud bit for bit: the
    count and all coordinates come sequentially from one Philox stream.
    """
    mean = expected_point_count(window)
    gen = _rng.stream(seed)
    n = _rng.poisson_count(gen, mean)
    if n > max_points:
        raise PointCapExceeded(
            f"sampled {n} points, exceeding the max_points cap of {max_points}")
    pts = gen.random((n, window.d)) * window.b
    return PointCloud(window=window, points=pts, seed=int(seed))
