"""Character description files and the built-in morphologies.

A character file is a JSON document in the same family as the terrain
files (CamelCase keys)::

    {
      "Name": "biped7",
      "RootLink": "torso",
      "SpawnRootHeight": 1.151,
      "FootLinks": ["foot_l", "foot_r"],
      "FallLinks": ["torso"],
      "Links":  [{"Name": ..., "Mass": ..., "HalfExtents": [hx, hy]}, ...],
      "Joints": [{"Name": ..., "Parent": ..., "Child": ...,
                  "AnchorParent": [x, y], "AnchorChild": [x, y],
                  "Limits": [lo, hi], "TorqueLimit": ..., "Kp": ..., "Kd": ...}, ...]
    }

Optional link fields: "Inertia" (defaults to the solid-box value),
"ContactPoints" (defaults to corners plus edge midpoints). Optional joint
field "Muscle" overrides the derived antagonistic-muscle parameters.

The built-in morphologies (biped7, raptor19, dog21, hopper4) ship as asset
files; TERRA_ASSET_DIR overrides the shipped asset directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..physics.types import LinkBody, RevoluteJoint, WORLD, box_inertia
from .actuation import MuscleUnit, derive_muscle

BUILTIN_CHARACTERS = ("biped7", "raptor19", "dog21", "hopper4")

# Declared link counts per morphology; enforced when loading the assets.
BUILTIN_LINK_COUNTS = {"biped7": 7, "raptor19": 19, "dog21": 21, "hopper4": 4}


class CharacterError(ValueError):
    """Raised for invalid character documents."""


@dataclass(eq=False)
class CharacterModel:
    name: str
    links: list[LinkBody]
    joints: list[RevoluteJoint]
    root_link: int
    foot_links: frozenset[int]
    fall_links: frozenset[int]
    spawn_root_height: float
    muscles: list[MuscleUnit] = field(default_factory=list)
    fk_order: list[int] = field(default_factory=list)  # joints, parents first

    def __post_init__(self):
        self._validate()
        if not self.muscles:
            self.muscles = [derive_muscle(j) for j in self.joints]

    @property
    def n_links(self) -> int:
        return len(self.links)

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    def link_index(self, name: str) -> int:
        for i, l in enumerate(self.links):
            if l.name == name:
                return i
        raise KeyError(name)

    def _validate(self) -> None:
        n = len(self.links)
        if not 0 <= self.root_link < n:
            raise CharacterError(f"{self.name}: missing root link")
        if self.foot_links & self.fall_links:
            raise CharacterError(f"{self.name}: foot_links and fall_links overlap")
        for j in self.joints:
            if j.parent_link != WORLD and not 0 <= j.parent_link < n:
                raise CharacterError(f"{self.name}: joint {j.name} has unknown parent")
            if not 0 <= j.child_link < n:
                raise CharacterError(f"{self.name}: joint {j.name} has unknown child")
            if j.parent_link == j.child_link:
                raise CharacterError(
                    f"{self.name}: joint {j.name} connects link {j.child_link} to itself"
                )

        # Tree check + FK order: every link except the root is the child of
        # exactly one joint reachable from the root (or a WORLD pin).
        child_of = {}
        for ji, j in enumerate(self.joints):
            if j.child_link in child_of:
                raise CharacterError(
                    f"{self.name}: link {j.child_link} has two parent joints"
                )
            child_of[j.child_link] = ji
        if self.root_link in child_of and self.joints[child_of[self.root_link]].parent_link != WORLD:
            raise CharacterError(f"{self.name}: root link has a parent joint")
        for i in range(n):
            if i != self.root_link and i not in child_of:
                raise CharacterError(f"{self.name}: link {i} is not connected")

        placed = {self.root_link}
        order = []
        if self.root_link in child_of:  # WORLD pin of the root, if present
            order.append(child_of[self.root_link])
        remaining = {ji for ji, j in enumerate(self.joints) if j.child_link != self.root_link}
        while remaining:
            progressed = False
            for ji in sorted(remaining):
                j = self.joints[ji]
                if j.parent_link == WORLD or j.parent_link in placed:
                    order.append(ji)
                    placed.add(j.child_link)
                    remaining.discard(ji)
                    progressed = True
            if not progressed:
                raise CharacterError(f"{self.name}: cyclic joint topology")
        self.fk_order = order


def _link_from_doc(i: int, doc: dict) -> LinkBody:
    try:
        mass = float(doc["Mass"])
        hx, hy = (float(v) for v in doc["HalfExtents"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CharacterError(f"link {doc.get('Name', i)}: bad Mass/HalfExtents: {exc}") from exc
    if mass <= 0:
        raise CharacterError(f"link {doc.get('Name', i)}: Mass must be > 0")
    inertia = float(doc.get("Inertia", box_inertia(mass, hx, hy)))
    pts = [tuple(map(float, p)) for p in doc.get("ContactPoints", [])]
    try:
        return LinkBody(id=i, mass=mass, inertia=inertia, half_extents=(hx, hy),
                        contact_points=pts, name=str(doc.get("Name", f"link{i}")))
    except ValueError as exc:
        raise CharacterError(str(exc)) from exc


def load_character(text: str) -> CharacterModel:
    """Parse and validate a character document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CharacterError(f"malformed character document: {exc}") from exc
    if not isinstance(doc, dict):
        raise CharacterError("character document must be a JSON object")
    for key in ("Name", "RootLink", "SpawnRootHeight", "Links", "Joints"):
        if key not in doc:
            raise CharacterError(f"character document missing '{key}'")

    links = [_link_from_doc(i, ld) for i, ld in enumerate(doc["Links"])]
    index = {}
    for i, l in enumerate(links):
        if l.name in index:
            raise CharacterError(f"duplicate link name {l.name!r}")
        index[l.name] = i

    def resolve(name, joint_name) -> int:
        if name == "world":
            return WORLD
        if name not in index:
            raise CharacterError(f"joint {joint_name}: unknown link {name!r}")
        return index[name]

    joints = []
    muscles = []
    for jd in doc["Joints"]:
        jname = str(jd.get("Name", f"joint{len(joints)}"))
        try:
            joint = RevoluteJoint(
                parent_link=resolve(jd["Parent"], jname),
                child_link=resolve(jd["Child"], jname),
                anchor_parent=tuple(map(float, jd["AnchorParent"])),
                anchor_child=tuple(map(float, jd["AnchorChild"])),
                angle_limits=tuple(map(float, jd["Limits"])),
                torque_limit=float(jd["TorqueLimit"]),
                kp=float(jd.get("Kp", 0.0)),
                kd=float(jd.get("Kd", 0.0)),
                name=jname,
            )
        except KeyError as exc:
            raise CharacterError(f"joint {jname}: missing field {exc}") from exc
        except ValueError as exc:
            raise CharacterError(str(exc)) from exc
        joints.append(joint)
        mdoc = jd.get("Muscle")
        muscles.append(derive_muscle(joint, mdoc))

    if doc["RootLink"] not in index:
        raise CharacterError(f"RootLink {doc['RootLink']!r} is not a link")

    return CharacterModel(
        name=str(doc["Name"]),
        links=links,
        joints=joints,
        root_link=index[doc["RootLink"]],
        foot_links=frozenset(resolve(n, "FootLinks") for n in doc.get("FootLinks", [])),
        fall_links=frozenset(resolve(n, "FallLinks") for n in doc.get("FallLinks", [])),
        spawn_root_height=float(doc["SpawnRootHeight"]),
        muscles=muscles,
    )


def asset_dir() -> Path:
    """Shipped asset directory, overridable via TERRA_ASSET_DIR."""
    override = os.environ.get("TERRA_ASSET_DIR")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent.parent / "assets"


_model_cache: dict[str, CharacterModel] = {}


def builtin_character(name: str, fresh: bool = False) -> CharacterModel:
    """Load a shipped morphology by name (cached; `fresh` bypasses the cache)."""
    if name not in BUILTIN_CHARACTERS:
        raise CharacterError(
            f"unknown character {name!r}; built-ins: {', '.join(BUILTIN_CHARACTERS)}"
        )
    if not fresh and name in _model_cache:
        return _model_cache[name]
    path = asset_dir() / "characters" / f"{name}.json"
    model = load_character(path.read_text())
    expected = BUILTIN_LINK_COUNTS[name]
    if model.n_links != expected:
        raise CharacterError(
            f"{name}: asset has {model.n_links} links, expected {expected}"
        )
    if not fresh:
        _model_cache[name] = model
    return model
