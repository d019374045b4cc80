from .config import (
    EnvConfig,
    Locomotion,
    Imitation,
    Task,
    ReferenceClip,
    ClipError,
    sample_reference,
    load_clip,
    builtin_clip,
    terrain_preset,
    config_from_file,
    SIM_HZ,
    CONTROL_HZ,
    TERRAIN_WINDOW_N,
)
from .env import (
    Env,
    EnvError,
    EpisodeDoneError,
    NotResetError,
    Observation,
    StepResult,
    locomotion_reward,
    imitation_reward,
)
from .catalog import (
    CatalogEntry,
    CatalogMissError,
    list_envs,
    catalog_entry,
    make_env,
    make_env_from_config,
)

__all__ = [
    "EnvConfig", "Locomotion", "Imitation", "Task", "ReferenceClip",
    "ClipError", "sample_reference", "load_clip", "builtin_clip",
    "terrain_preset", "config_from_file", "SIM_HZ", "CONTROL_HZ",
    "TERRAIN_WINDOW_N", "Env", "EnvError", "EpisodeDoneError",
    "NotResetError", "Observation", "StepResult", "locomotion_reward",
    "imitation_reward", "CatalogEntry", "CatalogMissError", "list_envs",
    "catalog_entry", "make_env", "make_env_from_config",
]
