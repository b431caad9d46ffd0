"""Baseline policies and the uniform policy interface."""
from .base import Policy, StationaryPolicy, descent_direction, steer_to_heading
from .dt_follower import DTFollowerPolicy
from .greedy_push import GreedyPushPolicy
from .rrt import NoPathFound, RRTPolicy, rrt_plan
from .teleop import TeleopPolicy

POLICIES = {
    cls.name: cls
    for cls in (StationaryPolicy, TeleopPolicy, DTFollowerPolicy, RRTPolicy, GreedyPushPolicy)
}


def make_policy(name: str) -> Policy:
    try:
        return POLICIES[name]()
    except KeyError:
        raise ValueError(f"unknown policy {name!r}; expected one of {sorted(POLICIES)}")


__all__ = [
    "DTFollowerPolicy",
    "GreedyPushPolicy",
    "NoPathFound",
    "POLICIES",
    "Policy",
    "RRTPolicy",
    "StationaryPolicy",
    "TeleopPolicy",
    "descent_direction",
    "make_policy",
    "rrt_plan",
    "steer_to_heading",
]
