from .model import (
    CharacterModel,
    CharacterError,
    load_character,
    builtin_character,
    asset_dir,
    BUILTIN_CHARACTERS,
    BUILTIN_LINK_COUNTS,
)
from .actuation import (
    ActuationMode,
    MuscleUnit,
    ActionSpace,
    action_space,
    compute_torques,
    derive_muscle,
    neutral_action,
    VELOCITY_ACTION_LIMIT,
)
from .features import agent_features, agent_feature_dim

__all__ = [
    "CharacterModel", "CharacterError", "load_character", "builtin_character",
    "asset_dir", "BUILTIN_CHARACTERS", "BUILTIN_LINK_COUNTS",
    "ActuationMode", "MuscleUnit", "ActionSpace", "action_space",
    "compute_torques", "derive_muscle", "neutral_action",
    "VELOCITY_ACTION_LIMIT", "agent_features", "agent_feature_dim",
]
