"""Environment registry and construction."""
from .base import Environment, EpisodeOutcome, EpisodeStateError, Transition, WrongActionMode
from .boxes import AreaClearingEnv, BoxDeliveryEnv
from .config import (
    ACTION_MODES,
    ENV_KINDS,
    EnvSpec,
    InvalidSpec,
    RewardConfig,
    apply_overrides,
    load_config,
    spec_from_dict,
    spec_to_dict,
)
from .generation import PlacementError, generate_ice_field
from .maze import MazeEnv
from .ship_ice import ShipIceEnv
from .static_map import GoalDisc, GoalLine, GoalRect, StaticMap

ENV_CLASSES = {
    "maze": MazeEnv,
    "ship_ice": ShipIceEnv,
    "box_delivery": BoxDeliveryEnv,
    "area_clearing": AreaClearingEnv,
}


def make_env(spec: EnvSpec) -> Environment:
    """Instantiate the environment named by ``spec.env`` (not yet reset)."""
    try:
        cls = ENV_CLASSES[spec.env]
    except KeyError:
        raise InvalidSpec(f"unknown env {spec.env!r}; expected one of {sorted(ENV_CLASSES)}")
    return cls(spec)


__all__ = [
    "ACTION_MODES",
    "ENV_CLASSES",
    "ENV_KINDS",
    "AreaClearingEnv",
    "BoxDeliveryEnv",
    "Environment",
    "EnvSpec",
    "EpisodeOutcome",
    "EpisodeStateError",
    "GoalDisc",
    "GoalLine",
    "GoalRect",
    "InvalidSpec",
    "MazeEnv",
    "PlacementError",
    "RewardConfig",
    "ShipIceEnv",
    "StaticMap",
    "Transition",
    "WrongActionMode",
    "apply_overrides",
    "generate_ice_field",
    "load_config",
    "make_env",
    "spec_from_dict",
    "spec_to_dict",
]
