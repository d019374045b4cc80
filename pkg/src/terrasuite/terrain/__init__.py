from .params import (
    TerrainParams,
    TerrainParamsError,
    GapParams,
    WallParams,
    StepParams,
    SlopeParams,
    TERRAIN_TYPES,
    parse_terrain_params,
    normalize_type,
)
from .generator import (
    FeatureAnnotation,
    TerrainProfile,
    generate_terrain,
    height_at,
    sample_terrain_window,
    terrain_stats,
    stats_to_csv,
    APRON_LEN,
    WINDOW_CLAMP,
)

__all__ = [
    "TerrainParams", "TerrainParamsError", "GapParams", "WallParams",
    "StepParams", "SlopeParams", "TERRAIN_TYPES", "parse_terrain_params",
    "normalize_type", "FeatureAnnotation", "TerrainProfile",
    "generate_terrain", "height_at", "sample_terrain_window",
    "terrain_stats", "stats_to_csv", "APRON_LEN", "WINDOW_CLAMP",
]
