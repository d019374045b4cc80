"""The generated environment catalog.

Names follow "<Actuation>_<Character>_<Task>-<Terrain>-v0". The grid is
every built-in character x four actuation modes x eight locomotion
terrains, plus per-character imitation variants on flat and steps.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from functools import lru_cache

from ..character.actuation import ActuationMode
from ..character.features import agent_feature_dim
from ..character.model import builtin_character
from .config import (
    EnvConfig,
    Imitation,
    Locomotion,
    TERRAIN_WINDOW_N,
    builtin_clip,
)
from .env import Env

CHAR_LABEL = {
    "biped7": "Biped2D",
    "raptor19": "Raptor2D",
    "dog21": "Dog2D",
    "hopper4": "Hopper2D",
}
MODE_LABEL = {
    ActuationMode.Torque: "Torque",
    ActuationMode.Velocity: "Velocity",
    ActuationMode.PositionPD: "PD",
    ActuationMode.Muscle: "Muscle",
}
LOCOMOTION_TERRAINS = (
    "flat", "incline", "steps", "slopes", "gaps", "walls", "mixed", "slopes-mixed",
)
IMITATION_TERRAINS = ("flat", "steps")


def _terrain_label(key: str) -> str:
    return "".join(part.capitalize() for part in key.split("-"))


class CatalogMissError(KeyError):
    def __init__(self, name: str, suggestions: list[str]):
        self.env_name = name
        self.suggestions = suggestions
        hint = f"; closest: {', '.join(suggestions)}" if suggestions else ""
        super().__init__(f"unknown environment {name!r}{hint}")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    character: str
    actuation: ActuationMode
    terrain: str
    task_kind: str  # "walk" | "imitate"
    obs_dim: int
    act_dim: int
    description: str

    def make_config(self) -> EnvConfig:
        if self.task_kind == "imitate":
            task = Imitation(clip=builtin_clip(self.character))
        else:
            task = Locomotion()
        return EnvConfig(
            name=self.name,
            character=self.character,
            actuation=self.actuation,
            terrain=self.terrain,
            task=task,
        )


def _dims(character: str, mode: ActuationMode) -> tuple[int, int]:
    model = builtin_character(character)
    obs = TERRAIN_WINDOW_N + agent_feature_dim(model)
    act = model.n_joints * (2 if mode is ActuationMode.Muscle else 1)
    return obs, act


@lru_cache(maxsize=1)
def _catalog() -> tuple[CatalogEntry, ...]:
    entries = []
    for char in CHAR_LABEL:
        for mode in MODE_LABEL:
            for terrain in LOCOMOTION_TERRAINS:
                obs, act = _dims(char, mode)
                name = f"{MODE_LABEL[mode]}_{CHAR_LABEL[char]}_Walk-{_terrain_label(terrain)}-v0"
                entries.append(CatalogEntry(
                    name=name, character=char, actuation=mode, terrain=terrain,
                    task_kind="walk", obs_dim=obs, act_dim=act,
                    description=f"{char} locomotion with {MODE_LABEL[mode]} actuation on {terrain} terrain",
                ))
    for char in ("biped7", "raptor19", "dog21"):
        for terrain in IMITATION_TERRAINS:
            obs, act = _dims(char, ActuationMode.PositionPD)
            name = f"PD_{CHAR_LABEL[char]}_Imitate-{_terrain_label(terrain)}-v0"
            entries.append(CatalogEntry(
                name=name, character=char, actuation=ActuationMode.PositionPD,
                terrain=terrain, task_kind="imitate", obs_dim=obs, act_dim=act,
                description=f"{char} gait imitation with PD actuation on {terrain} terrain",
            ))
    return tuple(entries)


def list_envs(filter: str | None = None) -> list[CatalogEntry]:
    entries = _catalog()
    if filter:
        needle = filter.lower()
        entries = tuple(e for e in entries if needle in e.name.lower())
    return list(entries)


def catalog_entry(name: str) -> CatalogEntry:
    for e in _catalog():
        if e.name == name:
            return e
    suggestions = difflib.get_close_matches(name, [e.name for e in _catalog()], n=3, cutoff=0.3)
    raise CatalogMissError(name, suggestions)


def make_env(name: str) -> Env:
    """Construct a catalog env (seed 0, not yet reset)."""
    return Env(catalog_entry(name).make_config())


def make_env_from_config(config: EnvConfig) -> Env:
    return Env(config)
