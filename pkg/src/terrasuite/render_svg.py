"""Static SVG frames: terrain polyline plus character link boxes.

Output is dependency-free SVG with fixed-precision coordinates, so
re-rendering the same trajectory yields byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .terrain.generator import TerrainProfile

FRAME_W = 720
FRAME_H = 400
SCALE = 60.0  # px per metre
VIEW_AHEAD = 8.0
VIEW_BEHIND = 4.0

TERRAIN_FILL = "#c8b89a"
TERRAIN_LINE = "#7a6a4f"
SKY = "#eef4fb"
LINK_FILL = "#4a7fb5"
ROOT_FILL = "#2c5985"
TEXT = "#333333"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_frame(profile: TerrainProfile, model, state, step_index: int) -> str:
    """One SVG frame centered on the character's root."""
    root = model.root_link
    cx = float(state.pos[root, 0])
    cy = float(state.pos[root, 1])
    x_lo = cx - VIEW_BEHIND
    y_mid = cy

    def sx(x: float) -> float:
        return (x - x_lo) * SCALE

    def sy(y: float) -> float:
        return FRAME_H / 2 - (y - y_mid) * SCALE

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{FRAME_W}" height="{FRAME_H}" '
        f'viewBox="0 0 {FRAME_W} {FRAME_H}">',
        f'<rect width="{FRAME_W}" height="{FRAME_H}" fill="{SKY}"/>',
    ]

    # terrain: clip to view with one extra vertex each side, fill downward
    xs, ys = profile.xs, profile.ys
    x_hi = cx + VIEW_AHEAD
    pts = [(x_lo, float(_interp(profile, x_lo)))]
    for x, y in zip(xs, ys):
        if x_lo < x < x_hi:
            pts.append((float(x), float(y)))
    pts.append((x_hi, float(_interp(profile, x_hi))))
    poly = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
    bottom = f"{_fmt(sx(x_hi))},{FRAME_H} {_fmt(sx(x_lo))},{FRAME_H}"
    parts.append(f'<polygon points="{poly} {bottom}" fill="{TERRAIN_FILL}" '
                 f'stroke="{TERRAIN_LINE}" stroke-width="1.5"/>')

    for i, link in enumerate(model.links):
        hx, hy = link.half_extents
        px = sx(float(state.pos[i, 0]))
        py = sy(float(state.pos[i, 1]))
        deg = -math.degrees(float(state.ang[i]))  # screen y is flipped
        fill = ROOT_FILL if i == root else LINK_FILL
        parts.append(
            f'<g transform="translate({_fmt(px)},{_fmt(py)}) rotate({_fmt(deg)})">'
            f'<rect x="{_fmt(-hx * SCALE)}" y="{_fmt(-hy * SCALE)}" '
            f'width="{_fmt(2 * hx * SCALE)}" height="{_fmt(2 * hy * SCALE)}" '
            f'fill="{fill}" stroke="#1e3a54" stroke-width="1" rx="2"/></g>'
        )

    parts.append(f'<text x="12" y="22" font-family="monospace" font-size="14" '
                 f'fill="{TEXT}">step {step_index}  x={cx:.2f}m</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _interp(profile: TerrainProfile, x: float) -> float:
    return float(np.interp(x, profile.xs, profile.ys))


def profile_to_svg(profile: TerrainProfile) -> str:
    """Whole-profile overview with feature markers, used by the terrain
    command."""
    xs, ys = profile.xs, profile.ys
    x0, x1 = float(xs[0]), float(xs[-1])
    y0, y1 = float(ys.min()) - 0.5, float(ys.max()) + 0.5
    w = 1000
    h = 300
    sx = w / (x1 - x0)
    sy = h / (y1 - y0)

    def px(x):
        return (x - x0) * sx

    def py(y):
        return h - (y - y0) * sy

    poly = " ".join(f"{px(float(x)):.2f},{py(float(y)):.2f}" for x, y in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="{SKY}"/>',
        f'<polyline points="{poly}" fill="none" stroke="{TERRAIN_LINE}" stroke-width="1.5"/>',
    ]
    colors = {"gap": "#c0392b", "wall": "#8e44ad", "step": "#2980b9",
              "slope-change": "#27ae60", "flat": "#999999"}
    for f in profile.features:
        c = colors.get(f.kind, "#000000")
        parts.append(f'<circle cx="{px(f.start_x):.2f}" cy="{py(_interp(profile, f.start_x)):.2f}" '
                     f'r="3" fill="{c}"><title>{f.kind} w={f.width:.3f} m={f.magnitude:.3f}</title></circle>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_frames(profile: TerrainProfile, model, states_with_steps, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for step_index, state in states_with_steps:
        path = out / f"frame_{step_index:06d}.svg"
        path.write_text(render_frame(profile, model, state, step_index))
        written.append(path)
    return written
