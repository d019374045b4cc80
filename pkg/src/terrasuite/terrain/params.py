"""Terrain parameter files: schema, parsing and validation.

A terrain file is a JSON document with a ``"Type"`` string and a ``"Params"``
array holding a single object of numeric fields, e.g.::

    {
      "Type": "var2d_gaps",
      "Params": [{"GapSpacingMin": 3, "GapSpacingMax": 4, ...}]
    }

Field names are fixed by the schema below and rejected when unknown. The
``Type`` value may carry a ``var2d_`` prefix and use ``_`` or ``-`` word
separators; both spellings normalize to the same terrain type.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional


class TerrainParamsError(ValueError):
    """Raised for malformed terrain parameter documents."""


TERRAIN_TYPES = (
    "flat",
    "gaps",
    "walls",
    "steps",
    "slopes",
    "mixed",
    "slopes-mixed",
    "narrow-gaps",
    "tight-gaps",
    "slopes-gaps",
    "slopes-steps",
    "slopes-walls",
    "incline",
    "cliffs",
)

# Obstacle kinds drawn by the generator for each type. Slope-bearing types
# additionally perturb the ground slope (see SLOPE_TYPES).
FEATURE_KINDS = {
    "flat": (),
    "gaps": ("gap",),
    "narrow-gaps": ("gap",),
    "tight-gaps": ("gap",),
    "walls": ("wall",),
    "steps": ("step",),
    "cliffs": ("step",),
    "slopes": (),
    "incline": (),
    "mixed": ("gap", "wall", "step"),
    "slopes-mixed": ("gap", "wall", "step"),
    "slopes-gaps": ("gap",),
    "slopes-steps": ("step",),
    "slopes-walls": ("wall",),
}

SLOPE_TYPES = frozenset(
    {"slopes", "incline", "slopes-mixed", "slopes-gaps", "slopes-steps", "slopes-walls"}
)

_GAP_FIELDS = ("GapSpacingMin", "GapSpacingMax", "GapWMin", "GapWMax", "GapHMin", "GapHMax")
_WALL_FIELDS = ("WallSpacingMin", "WallSpacingMax", "WallWMin", "WallWMax", "WallHMin", "WallHMax")
_STEP_FIELDS = ("StepSpacingMin", "StepSpacingMax", "StepH0Min", "StepH0Max", "StepH1Min", "StepH1Max")
_SLOPE_FIELDS = ("SlopeDeltaRange", "SlopeDeltaMin", "SlopeDeltaMax")

KNOWN_FIELDS = frozenset(_GAP_FIELDS + _WALL_FIELDS + _STEP_FIELDS + _SLOPE_FIELDS)


@dataclass(frozen=True)
class GapParams:
    spacing_min: float
    spacing_max: float
    w_min: float
    w_max: float
    h_min: float
    h_max: float


@dataclass(frozen=True)
class WallParams:
    spacing_min: float
    spacing_max: float
    w_min: float
    w_max: float
    h_min: float
    h_max: float


@dataclass(frozen=True)
class StepParams:
    spacing_min: float
    spacing_max: float
    h0_min: float
    h0_max: float
    h1_min: float
    h1_max: float


@dataclass(frozen=True)
class SlopeParams:
    delta_range: float
    delta_min: float
    delta_max: float


@dataclass(frozen=True)
class TerrainParams:
    """Validated parameters for one terrain type.

    Feature groups are None when the corresponding fields were absent,
    which disables the feature for this terrain.
    """

    type: str
    gaps: Optional[GapParams] = None
    walls: Optional[WallParams] = None
    steps: Optional[StepParams] = None
    slopes: Optional[SlopeParams] = None

    def enabled_kinds(self) -> tuple[str, ...]:
        """Obstacle kinds this terrain actually draws (declared for the
        type and present in the file)."""
        present = {"gap": self.gaps, "wall": self.walls, "step": self.steps}
        return tuple(k for k in FEATURE_KINDS[self.type] if present[k] is not None)

    @property
    def slope_bearing(self) -> bool:
        return self.type in SLOPE_TYPES and self.slopes is not None


def normalize_type(raw: str) -> str:
    name = raw.strip().lower()
    if name.startswith("var2d_"):
        name = name[len("var2d_"):]
    name = name.replace("_", "-")
    if name not in TERRAIN_TYPES:
        raise TerrainParamsError(f"unknown terrain Type {raw!r}")
    return name


def _require_order(fields: dict, lo_key: str, hi_key: str, group: str) -> None:
    if fields[lo_key] > fields[hi_key]:
        raise TerrainParamsError(
            f"{group}: {lo_key}={fields[lo_key]} exceeds {hi_key}={fields[hi_key]}"
        )


def _take(fields: dict, names: tuple[str, ...]) -> Optional[dict]:
    present = [n for n in names if n in fields]
    if not present:
        return None
    missing = [n for n in names if n not in fields]
    if missing:
        raise TerrainParamsError(
            f"incomplete feature group: have {present}, missing {missing}"
        )
    return {n: float(fields[n]) for n in names}


def parse_terrain_params(text: str) -> TerrainParams:
    """Parse and validate a terrain parameter document.

    Raises TerrainParamsError naming the offending field for malformed
    documents, unknown types, unknown fields and inverted Min/Max pairs.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TerrainParamsError(f"malformed terrain document: {exc}") from exc
    if not isinstance(doc, dict):
        raise TerrainParamsError("terrain document must be a JSON object")
    if "Type" not in doc:
        raise TerrainParamsError("terrain document missing 'Type'")
    ttype = normalize_type(str(doc["Type"]))

    params_list = doc.get("Params", [])
    if not isinstance(params_list, list) or len(params_list) > 1:
        raise TerrainParamsError("'Params' must be an array of at most one object")
    fields: dict = params_list[0] if params_list else {}
    if not isinstance(fields, dict):
        raise TerrainParamsError("'Params' entry must be an object")

    unknown = sorted(set(fields) - KNOWN_FIELDS)
    if unknown:
        raise TerrainParamsError(f"unrecognized terrain fields: {unknown}")
    for name, value in fields.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise TerrainParamsError(f"field {name} must be a number, got {value!r}")

    gaps = walls = steps = slopes = None

    g = _take(fields, _GAP_FIELDS)
    if g is not None:
        _require_order(g, "GapSpacingMin", "GapSpacingMax", "GapSpacing")
        _require_order(g, "GapWMin", "GapWMax", "GapW")
        _require_order(g, "GapHMin", "GapHMax", "GapH")
        if g["GapWMin"] <= 0:
            raise TerrainParamsError("GapWMin must be > 0")
        if g["GapHMax"] > 0:
            raise TerrainParamsError("GapHMax must be <= 0 (gaps descend)")
        gaps = GapParams(g["GapSpacingMin"], g["GapSpacingMax"],
                         g["GapWMin"], g["GapWMax"], g["GapHMin"], g["GapHMax"])

    w = _take(fields, _WALL_FIELDS)
    if w is not None:
        _require_order(w, "WallSpacingMin", "WallSpacingMax", "WallSpacing")
        _require_order(w, "WallWMin", "WallWMax", "WallW")
        _require_order(w, "WallHMin", "WallHMax", "WallH")
        if w["WallWMin"] <= 0:
            raise TerrainParamsError("WallWMin must be > 0")
        if w["WallHMin"] < 0:
            raise TerrainParamsError("WallHMin must be >= 0 (walls rise)")
        walls = WallParams(w["WallSpacingMin"], w["WallSpacingMax"],
                           w["WallWMin"], w["WallWMax"], w["WallHMin"], w["WallHMax"])

    s = _take(fields, _STEP_FIELDS)
    if s is not None:
        _require_order(s, "StepSpacingMin", "StepSpacingMax", "StepSpacing")
        _require_order(s, "StepH0Min", "StepH0Max", "StepH0")
        _require_order(s, "StepH1Min", "StepH1Max", "StepH1")
        steps = StepParams(s["StepSpacingMin"], s["StepSpacingMax"],
                           s["StepH0Min"], s["StepH0Max"], s["StepH1Min"], s["StepH1Max"])

    sl = _take(fields, _SLOPE_FIELDS)
    if sl is not None:
        _require_order(sl, "SlopeDeltaMin", "SlopeDeltaMax", "SlopeDelta")
        if sl["SlopeDeltaRange"] < 0:
            raise TerrainParamsError("SlopeDeltaRange must be >= 0")
        slopes = SlopeParams(sl["SlopeDeltaRange"], sl["SlopeDeltaMin"], sl["SlopeDeltaMax"])

    return TerrainParams(type=ttype, gaps=gaps, walls=walls, steps=steps, slopes=slopes)
