"""Environment specification, config-file loading, and dotted overrides."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, fields

import yaml

from ..observation import ObsConfig

ENV_KINDS = ("maze", "ship_ice", "box_delivery", "area_clearing")
ACTION_MODES = ("angular", "heading", "wheels")


class InvalidSpec(ValueError):
    pass


@dataclass
class RewardConfig:
    c_dist: float = 1.0      # per meter of goal-distance decrement (maze)
    c_coll: float = 0.1      # per new movable contact (maze)
    c_ke: float = 1.0        # per joule of floe kinetic energy gain (ship)
    c_head: float = 0.05     # heading alignment shaping (ship)
    c_box: float = 1.0       # per meter of box goal-distance decrement
    r_done: float = 5.0      # per newly completed sub-task
    r_terminal: float = 10.0
    c_stat: float = 1.0      # per new static-obstacle contact


@dataclass
class EnvSpec:
    env: str = "maze"
    variant: str = "U"              # maze layout id; informational elsewhere
    seed: int = 0
    action_mode: str = None         # default depends on env kind
    bumper: str = "pusher"
    boxes: int = 5                  # movable box count (manipulation envs)
    obstacles: int = 3              # movable obstacles (maze) / static columns (manip)
    static_obstacles: bool = False  # include static columns in manip envs
    wheeled_fraction: float = 0.0
    ice_concentration: float = 0.2
    max_steps: int = None
    v0: float = 0.3                 # robot forward speed, m/s
    omega_max: float = 1.5          # rad/s
    heading_step: float = 0.15      # m travelled per heading action
    box_size: float = 0.25
    drag: bool = False
    map_resolution: float = 0.02
    reward: RewardConfig = field(default_factory=RewardConfig)
    obs: ObsConfig = field(default_factory=ObsConfig)
    fixed_layout: dict = None       # optional explicit robot/box placement

    _DEFAULT_MODE = {
        "maze": "angular",
        "ship_ice": "angular",
        "box_delivery": "heading",
        "area_clearing": "heading",
    }
    _DEFAULT_STEPS = {
        "maze": 3000,
        "ship_ice": 3000,
        "box_delivery": 200,
        "area_clearing": 200,
    }

    def __post_init__(self):
        if self.env not in ENV_KINDS:
            raise InvalidSpec(f"env: unknown kind {self.env!r}, expected one of {ENV_KINDS}")
        if self.action_mode is None:
            self.action_mode = self._DEFAULT_MODE[self.env]
        if self.action_mode not in ACTION_MODES:
            raise InvalidSpec(f"action_mode: {self.action_mode!r} not in {ACTION_MODES}")
        if self.env == "ship_ice" and self.action_mode != "angular":
            raise InvalidSpec("action_mode: ship_ice supports only angular velocity")
        if self.max_steps is None:
            self.max_steps = self._DEFAULT_STEPS[self.env]
        if not 0.0 <= self.ice_concentration <= 0.5:
            raise InvalidSpec(f"ice_concentration: {self.ice_concentration} outside [0, 0.5]")
        if self.env in ("box_delivery", "area_clearing") and self.boxes < 1:
            raise InvalidSpec("boxes: manipulation envs need at least one box")
        for name in ("v0", "omega_max", "heading_step", "box_size", "map_resolution"):
            if getattr(self, name) <= 0:
                raise InvalidSpec(f"{name}: must be positive")
        if self.max_steps < 1:
            raise InvalidSpec("max_steps: must be >= 1")
        if isinstance(self.reward, dict):
            self.reward = RewardConfig(**self.reward)
        if isinstance(self.obs, dict):
            self.obs = ObsConfig(**self.obs)


def spec_from_dict(data: dict) -> EnvSpec:
    known = {f.name for f in fields(EnvSpec) if not f.name.startswith("_")}
    unknown = set(data) - known
    if unknown:
        raise InvalidSpec(f"unknown config keys: {sorted(unknown)}")
    return EnvSpec(**data)


def load_config(path) -> dict:
    with open(path) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise InvalidSpec("config file must hold a mapping")
    return data


def apply_overrides(data: dict, overrides) -> dict:
    """Apply `a.b=value` strings onto a nested config dict."""
    out = dict(data)
    for item in overrides:
        if "=" not in item:
            raise InvalidSpec(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        value = yaml.safe_load(raw)
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            nxt = node.get(part)
            if not isinstance(nxt, dict):
                nxt = {}
            node[part] = dict(nxt)
            node = node[part]
        node[parts[-1]] = value
    return out


def spec_to_dict(spec: EnvSpec) -> dict:
    d = dataclasses.asdict(spec)
    return {k: v for k, v in d.items() if not k.startswith("_")}
