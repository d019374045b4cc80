"""terrasuite: planar locomotion environments over procedural terrain.

Quick start::

    from terrasuite import list_envs, make_env

    env = make_env("PD_Biped2D_Walk-Mixed-v0")
    env.set_random_seed(1234)
    obs = env.reset()
    result = env.step([0.0] * env.act_dim)
"""

__version__ = "0.1.0"

from .envs import (  # noqa: E402
    Env,
    EnvConfig,
    Locomotion,
    Imitation,
    Observation,
    StepResult,
    list_envs,
    make_env,
    make_env_from_config,
)
from .terrain import (  # noqa: E402
    TerrainParams,
    TerrainProfile,
    parse_terrain_params,
    generate_terrain,
    height_at,
    sample_terrain_window,
    terrain_stats,
)
from .character import (  # noqa: E402
    ActuationMode,
    CharacterModel,
    builtin_character,
    load_character,
    action_space,
    compute_torques,
    agent_features,
)
from .physics import (  # noqa: E402
    SimState,
    LinkBody,
    RevoluteJoint,
    ContactEvent,
    integrate_step,
    total_energy,
    forward_kinematics,
)

__all__ = [
    "__version__",
    "Env", "EnvConfig", "Locomotion", "Imitation", "Observation", "StepResult",
    "list_envs", "make_env", "make_env_from_config",
    "TerrainParams", "TerrainProfile", "parse_terrain_params", "generate_terrain",
    "height_at", "sample_terrain_window", "terrain_stats",
    "ActuationMode", "CharacterModel", "builtin_character", "load_character",
    "action_space", "compute_torques", "agent_features",
    "SimState", "LinkBody", "RevoluteJoint", "ContactEvent",
    "integrate_step", "total_energy", "forward_kinematics",
]
