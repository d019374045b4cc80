"""Seeded terrain generation and height queries.

A profile is a piecewise-linear heightfield with strictly increasing x plus
one annotation per generated feature, so distribution compliance can be
checked without re-parsing geometry.

Grammar (one iteration per feature, all draws from a single xoshiro256**
stream seeded by the caller, in this exact order):

1. obstacle kind, uniform among the type's enabled kinds (only when the
   type enables more than one);
2. spacing, uniform in the kind's [SpacingMin, SpacingMax] (pure slope
   terrains use the fixed segment range SLOPE_SEGMENT_SPACING);
3. for slope-bearing types, a slope delta uniform in +/-SlopeDeltaRange,
   after which the ground slope is clamped to [SlopeDeltaMin, SlopeDeltaMax];
4. the feature's own dimensions: gap width then depth, wall width then
   height, or one step height (up/down ranges alternate, starting up).

Ground with nonzero slope is emitted as vertices every GROUND_RESOLUTION
metres. Vertical feature faces are emitted FACE_EPS wide so x stays
strictly increasing. A flat apron at y=0 spans [min(x_start, -APRON_LEN), 0]
for character spawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..rng import Xoshiro256
from .params import TerrainParams

APRON_LEN = 5.0
GROUND_RESOLUTION = 0.5
FACE_EPS = 0.01
SLOPE_SEGMENT_SPACING = (2.0, 4.0)

# Clamp applied by sample_terrain_window, in metres relative to the root.
WINDOW_CLAMP = 5.0


@dataclass(frozen=True)
class FeatureAnnotation:
    kind: str  # gap | wall | step | slope-change | flat
    start_x: float
    width: float
    magnitude: float  # depth (gaps), height (walls), delta-h (steps), new slope


@dataclass(frozen=True)
class TerrainProfile:
    xs: np.ndarray
    ys: np.ndarray
    features: tuple[FeatureAnnotation, ...]

    def __post_init__(self):
        self.xs.setflags(write=False)
        self.ys.setflags(write=False)

    @property
    def x_start(self) -> float:
        return float(self.xs[0])

    @property
    def x_end(self) -> float:
        return float(self.xs[-1])


class _Builder:
    def __init__(self, x0: float, y0: float):
        self.vx = [x0]
        self.vy = [y0]
        self.features: list[FeatureAnnotation] = []

    @property
    def x(self) -> float:
        return self.vx[-1]

    @property
    def y(self) -> float:
        return self.vy[-1]

    def vertex(self, x: float, y: float) -> None:
        if x <= self.vx[-1]:
            x = self.vx[-1] + 1e-9
        self.vx.append(x)
        self.vy.append(y)

    def ground(self, length: float, slope: float) -> None:
        if length <= 0:
            return
        if slope == 0.0:
            self.vertex(self.x + length, self.y)
            return
        n = max(1, int(math.ceil(length / GROUND_RESOLUTION)))
        step = length / n
        x, y = self.x, self.y
        for _ in range(n):
            x += step
            y += slope * step
            self.vertex(x, y)

    def annotate(self, kind: str, start_x: float, width: float, magnitude: float) -> None:
        self.features.append(FeatureAnnotation(kind, start_x, width, magnitude))

    def gap(self, width: float, depth: float) -> None:
        x0, y0 = self.x, self.y
        e = min(FACE_EPS, width / 4.0)
        self.vertex(x0 + e, y0 + depth)
        self.vertex(x0 + width - e, y0 + depth)
        self.vertex(x0 + width, y0)
        self.annotate("gap", x0, width, depth)

    def wall(self, width: float, height: float) -> None:
        x0, y0 = self.x, self.y
        e = min(FACE_EPS, width / 4.0)
        self.vertex(x0 + e, y0 + height)
        self.vertex(x0 + width - e, y0 + height)
        self.vertex(x0 + width, y0)
        self.annotate("wall", x0, width, height)

    def step(self, delta: float) -> None:
        x0, y0 = self.x, self.y
        self.vertex(x0 + FACE_EPS, y0 + delta)
        self.annotate("step", x0, 0.0, delta)

    def finish(self) -> TerrainProfile:
        return TerrainProfile(
            xs=np.asarray(self.vx, dtype=np.float64),
            ys=np.asarray(self.vy, dtype=np.float64),
            features=tuple(self.features),
        )


def generate_terrain(params: TerrainParams, seed: int, x_start: float, x_end: float) -> TerrainProfile:
    """Generate a profile covering [x_start, x_end]. Deterministic in
    (params, seed); the feature region starts at x=0, preceded by a flat
    apron of at least APRON_LEN metres."""
    if not x_start < x_end:
        raise ValueError(f"x_start ({x_start}) must be < x_end ({x_end})")

    apron_x = min(x_start, -APRON_LEN)
    b = _Builder(apron_x, 0.0)

    if params.type == "flat":
        b.vertex(x_end, 0.0)
        b.annotate("flat", apron_x, x_end - apron_x, 0.0)
        return b.finish()

    rng = Xoshiro256(seed)
    b.vertex(0.0, 0.0)

    if params.type == "incline":
        sl = params.slopes
        slope = rng.uniform(sl.delta_min, sl.delta_max) if sl is not None else 0.0
        b.annotate("slope-change", 0.0, x_end, slope)
        b.ground(x_end, slope)
        return b.finish()

    kinds = params.enabled_kinds()
    slope_bearing = params.slope_bearing
    slope = 0.0
    step_up = True

    spacing_of = {}
    if params.gaps is not None:
        spacing_of["gap"] = (params.gaps.spacing_min, params.gaps.spacing_max)
    if params.walls is not None:
        spacing_of["wall"] = (params.walls.spacing_min, params.walls.spacing_max)
    if params.steps is not None:
        spacing_of["step"] = (params.steps.spacing_min, params.steps.spacing_max)

    while b.x < x_end:
        kind = None
        if kinds:
            kind = kinds[rng.randint(len(kinds))] if len(kinds) > 1 else kinds[0]
            lo, hi = spacing_of[kind]
        else:
            lo, hi = SLOPE_SEGMENT_SPACING
        spacing = rng.uniform(lo, hi)

        if slope_bearing:
            sl = params.slopes
            delta = rng.uniform(-sl.delta_range, sl.delta_range)
            slope = min(max(slope + delta, sl.delta_min), sl.delta_max)
            b.annotate("slope-change", b.x, spacing, slope)

        b.ground(spacing, slope)

        if kind == "gap":
            g = params.gaps
            w = rng.uniform(g.w_min, g.w_max)
            h = rng.uniform(g.h_min, g.h_max)
            b.gap(w, h)
        elif kind == "wall":
            w_ = params.walls
            w = rng.uniform(w_.w_min, w_.w_max)
            h = rng.uniform(w_.h_min, w_.h_max)
            b.wall(w, h)
        elif kind == "step":
            s = params.steps
            if step_up:
                d = rng.uniform(s.h0_min, s.h0_max)
            else:
                d = rng.uniform(s.h1_min, s.h1_max)
            step_up = not step_up
            b.step(d)

    return b.finish()


def height_at(profile: TerrainProfile, x: float) -> float:
    """Terrain height at x by binary search plus linear interpolation;
    outside the profile the endpoint height holds.

    The interpolation expression is y0 + t*(y1 - y0) with
    t = (x - x0)/(x1 - x0); the vectorized window sampler evaluates the
    same expression so the two agree bit-for-bit.
    """
    xs, ys = profile.xs, profile.ys
    n = xs.shape[0]
    if x <= xs[0]:
        return float(ys[0])
    if x >= xs[n - 1]:
        return float(ys[n - 1])
    i = int(np.searchsorted(xs, x, side="right")) - 1
    if i > n - 2:
        i = n - 2
    x0 = float(xs[i])
    y0 = float(ys[i])
    t = (x - x0) / (float(xs[i + 1]) - x0)
    return y0 + t * (float(ys[i + 1]) - y0)


def interp_heights(profile: TerrainProfile, qx: np.ndarray) -> np.ndarray:
    """Vectorized height_at over an array of query abscissae."""
    xs, ys = profile.xs, profile.ys
    idx = np.searchsorted(xs, qx, side="right") - 1
    idx = np.clip(idx, 0, xs.shape[0] - 2)
    x0 = xs[idx]
    y0 = ys[idx]
    t = (qx - x0) / (xs[idx + 1] - x0)
    h = y0 + t * (ys[idx + 1] - y0)
    return np.where(qx <= xs[0], ys[0], np.where(qx >= xs[-1], ys[-1], h))


def sample_terrain_window(profile: TerrainProfile, root_x: float, root_y: float,
                          n: int, spacing: float) -> np.ndarray:
    """n heights ahead of the root at the given spacing, relative to root_y
    and clamped to +/-WINDOW_CLAMP."""
    if n <= 0:
        raise ValueError("n must be > 0")
    if spacing <= 0:
        raise ValueError("spacing must be > 0")
    qx = root_x + spacing * np.arange(n, dtype=np.float64)
    h = interp_heights(profile, qx) - root_y
    return np.clip(h, -WINDOW_CLAMP, WINDOW_CLAMP)


def terrain_stats(profile: TerrainProfile) -> dict:
    """Aggregate annotations: per kind, count plus width and magnitude
    min/mean/max (zeros when the kind is absent)."""
    out = {}
    for kind in ("gap", "wall", "step", "slope-change", "flat"):
        anns = [f for f in profile.features if f.kind == kind]
        if anns:
            widths = [f.width for f in anns]
            mags = [f.magnitude for f in anns]
            out[kind] = {
                "count": len(anns),
                "width_min": min(widths),
                "width_mean": sum(widths) / len(widths),
                "width_max": max(widths),
                "magnitude_min": min(mags),
                "magnitude_mean": sum(mags) / len(mags),
                "magnitude_max": max(mags),
            }
        else:
            out[kind] = {
                "count": 0,
                "width_min": 0.0, "width_mean": 0.0, "width_max": 0.0,
                "magnitude_min": 0.0, "magnitude_mean": 0.0, "magnitude_max": 0.0,
            }
    return out


def stats_to_csv(stats: dict) -> str:
    header = "kind,count,width_min,width_mean,width_max,magnitude_min,magnitude_mean,magnitude_max"
    lines = [header]
    for kind, s in stats.items():
        lines.append(
            f"{kind},{s['count']},{s['width_min']!r},{s['width_mean']!r},"
            f"{s['width_max']!r},{s['magnitude_min']!r},{s['magnitude_mean']!r},{s['magnitude_max']!r}"
        )
    return "\n".join(lines) + "\n"
