"""Environment configuration, tasks and reference clips."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from ..character.actuation import ActuationMode
from ..character.model import asset_dir
from ..terrain.params import TerrainParams, parse_terrain_params

SIM_HZ = 3000
CONTROL_HZ = 30
MAX_EPISODE_STEPS = 1000

TERRAIN_WINDOW_N = 50
TERRAIN_WINDOW_SPACING = 0.1
INIT_JITTER = 0.05          # rad, uniform joint-angle jitter at reset
SPAWN_X = -2.0              # spawn abscissa on the flat apron
TERRAIN_X_START = -10.0
TERRAIN_X_END = 80.0


class ClipError(ValueError):
    pass


@dataclass(frozen=True)
class ReferenceClip:
    """Cyclic pose targets for the imitation task."""

    name: str
    duration: float
    phases: np.ndarray        # (k,), strictly increasing, phases[0] == 0
    joint_angles: np.ndarray  # (k, n_joints)
    root_height: np.ndarray   # (k,)
    root_speed: np.ndarray    # (k,)

    def __post_init__(self):
        if self.duration <= 0:
            raise ClipError(f"clip {self.name}: duration must be > 0")
        if self.phases.shape[0] == 0 or self.phases[0] != 0.0:
            raise ClipError(f"clip {self.name}: phases must start at 0")
        if np.any(np.diff(self.phases) <= 0) or self.phases[-1] >= 1.0:
            raise ClipError(f"clip {self.name}: phases must increase strictly within [0, 1)")
        for arr in (self.phases, self.joint_angles, self.root_height, self.root_speed):
            arr.setflags(write=False)

    @property
    def n_joints(self) -> int:
        return self.joint_angles.shape[1]


def sample_reference(clip: ReferenceClip, t: float):
    """Reference (joint_angles, root_height, root_speed) at time t, linearly
    interpolated between keyframes with the cycle wrapping last-to-first."""
    phase = (t % clip.duration) / clip.duration
    k = clip.phases.shape[0]
    i = int(np.searchsorted(clip.phases, phase, side="right")) - 1
    j = (i + 1) % k
    ph_i = clip.phases[i]
    ph_j = clip.phases[i + 1] if i + 1 < k else 1.0
    frac = (phase - ph_i) / (ph_j - ph_i)
    angles = clip.joint_angles[i] * (1.0 - frac) + clip.joint_angles[j] * frac
    height = float(clip.root_height[i] * (1.0 - frac) + clip.root_height[j] * frac)
    speed = float(clip.root_speed[i] * (1.0 - frac) + clip.root_speed[j] * frac)
    return angles, height, speed


def load_clip(text: str) -> ReferenceClip:
    try:
        doc = json.loads(text)
        keys = doc["Keyframes"]
        return ReferenceClip(
            name=str(doc.get("Name", "clip")),
            duration=float(doc["Duration"]),
            phases=np.array([k["Phase"] for k in keys], dtype=np.float64),
            joint_angles=np.array([k["JointAngles"] for k in keys], dtype=np.float64),
            root_height=np.array([k["RootHeight"] for k in keys], dtype=np.float64),
            root_speed=np.array([k["RootSpeed"] for k in keys], dtype=np.float64),
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, ClipError):
            raise
        raise ClipError(f"malformed clip document: {exc}") from exc


def builtin_clip(character: str) -> ReferenceClip:
    path = asset_dir() / "clips" / f"{character}_walk.json"
    return load_clip(path.read_text())


@dataclass(frozen=True)
class Locomotion:
    target_speed: float = 1.0

    def __post_init__(self):
        if self.target_speed <= 0:
            raise ValueError("target_speed must be > 0")


@dataclass(frozen=True)
class Imitation:
    clip: ReferenceClip
    weights: tuple[float, float, float] = (0.65, 0.1, 0.25)  # pose, velocity, root

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise ValueError("imitation weights must be >= 0")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError("imitation weights must sum to 1")


Task = Union[Locomotion, Imitation]


def terrain_preset(name: str) -> TerrainParams:
    path = asset_dir() / "terrains" / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(f"no terrain preset {name!r} at {path}")
    return parse_terrain_params(path.read_text())


@dataclass
class EnvConfig:
    name: str
    character: str                       # builtin name or path to a file
    actuation: ActuationMode
    terrain: Union[TerrainParams, str]   # params or preset name
    task: Task
    sim_hz: int = SIM_HZ
    control_hz: int = CONTROL_HZ
    max_episode_steps: int = MAX_EPISODE_STEPS
    terrain_window_n: int = TERRAIN_WINDOW_N
    terrain_window_spacing: float = TERRAIN_WINDOW_SPACING
    init_jitter: float = INIT_JITTER
    terrain_x_start: float = TERRAIN_X_START
    terrain_x_end: float = TERRAIN_X_END

    def __post_init__(self):
        if self.sim_hz <= 0 or self.control_hz <= 0:
            raise ValueError("sim_hz and control_hz must be > 0")
        if self.sim_hz % self.control_hz != 0:
            raise ValueError(
                f"sim_hz ({self.sim_hz}) must be divisible by control_hz ({self.control_hz})"
            )
        if self.max_episode_steps <= 0:
            raise ValueError("max_episode_steps must be > 0")

    @property
    def substeps(self) -> int:
        return self.sim_hz // self.control_hz

    def terrain_params(self) -> TerrainParams:
        if isinstance(self.terrain, TerrainParams):
            return self.terrain
        return terrain_preset(self.terrain)

    def describe(self) -> dict:
        task = self.task
        if isinstance(task, Locomotion):
            task_doc = {"kind": "locomotion", "target_speed": task.target_speed}
        else:
            task_doc = {"kind": "imitation", "clip": task.clip.name,
                        "weights": list(task.weights)}
        return {
            "name": self.name,
            "character": self.character,
            "actuation": self.actuation.name,
            "terrain": self.terrain if isinstance(self.terrain, str) else self.terrain.type,
            "task": task_doc,
            "sim_hz": self.sim_hz,
            "control_hz": self.control_hz,
            "max_episode_steps": self.max_episode_steps,
        }


def config_from_file(path: str | Path) -> EnvConfig:
    """Load an EnvConfig from a JSON document (CamelCase keys, same family
    as the other asset files)."""
    doc = json.loads(Path(path).read_text())
    task_doc = doc.get("Task", {"Kind": "locomotion"})
    kind = str(task_doc.get("Kind", "locomotion")).lower()
    if kind == "imitation":
        clip_ref = task_doc.get("Clip")
        clip = builtin_clip(doc["Character"]) if clip_ref is None else load_clip(Path(clip_ref).read_text())
        weights = tuple(task_doc.get("Weights", (0.65, 0.1, 0.25)))
        task: Task = Imitation(clip=clip, weights=weights)
    elif kind == "locomotion":
        task = Locomotion(target_speed=float(task_doc.get("TargetSpeed", 1.0)))
    else:
        raise ValueError(f"unknown task kind {kind!r}")
    terrain = doc["Terrain"]
    if isinstance(terrain, dict):
        terrain = parse_terrain_params(json.dumps(terrain))
    return EnvConfig(
        name=str(doc.get("Name", "custom")),
        character=str(doc["Character"]),
        actuation=ActuationMode.parse(doc.get("Actuation", "pd")),
        terrain=terrain,
        task=task,
        sim_hz=int(doc.get("SimHz", SIM_HZ)),
        control_hz=int(doc.get("ControlHz", CONTROL_HZ)),
        max_episode_steps=int(doc.get("MaxEpisodeSteps", MAX_EPISODE_STEPS)),
        init_jitter=float(doc.get("InitJitter", INIT_JITTER)),
    )
