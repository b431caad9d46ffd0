"""Evaluation metrics for pushing-based navigation and manipulation.

Navigation: efficiency (shortest static path over executed path, gated by
success) and interaction effort (robot work over total work; friction
coefficient and gravity cancel). Manipulation: sub-task success fraction,
efficiency against an MST-based idealized path length, and interaction
effort against per-object shortest paths to their goals.
"""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, field

import numpy as np

from .envs.static_map import StaticMap
from .observation import geodesic_distance_field

JITTER_THRESHOLD = 1e-3  # m per step; below this, object motion is solver noise


class CorruptTrace(ValueError):
    """Trace is internally inconsistent (e.g. sub-tasks done with l0 = 0)."""


@dataclass
class ObjectTrace:
    id: int
    mass: float
    path_length: float
    initial_position: tuple
    success: bool = False


@dataclass
class EpisodeTrace:
    robot_mass: float
    robot_path_length: float
    objects: list
    success: bool
    robot_start: tuple
    static_map: StaticMap = None

    @property
    def k(self) -> int:
        return len(self.objects)

    @property
    def k_completed(self) -> int:
        return sum(1 for o in self.objects if o.success)


def shortest_path_length(smap: StaticMap, start, goal_cells=None) -> float:
    """8-connected grid Dijkstra length from start to the goal set (m)."""
    if goal_cells is None:
        goal_cells = smap.goal_cells()
    row, col = smap.world_to_cell(start)
    if not smap.in_bounds(row, col) or smap.grid[row, col]:
        raise ValueError(f"start {tuple(start)} is inside a static obstacle")
    field = geodesic_distance_field(smap, goal_cells)
    return float(field[row, col])


def nav_scores(trace: EpisodeTrace, goal_field: np.ndarray = None) -> tuple:
    """(E_nav, I_nav) for a navigation episode."""
    l0 = trace.robot_path_length
    if l0 <= 0:
        return 0.0, 1.0
    if trace.success:
        if goal_field is not None:
            row, col = trace.static_map.world_to_cell(trace.robot_start)
            l0_star = float(goal_field[row, col])
        else:
            l0_star = shortest_path_length(trace.static_map, trace.robot_start)
        e_nav = l0_star / l0
    else:
        e_nav = 0.0
    total = trace.robot_mass * l0 + sum(o.mass * o.path_length for o in trace.objects)
    i_nav = (trace.robot_mass * l0) / total
    return e_nav, i_nav


def kruskal_mst_weight(n_vertices: int, edges) -> float:
    """MST total weight over edges (i, j, w); raises if graph is disconnected."""
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total = 0.0
    joined = 0
    for i, j, w in sorted(edges, key=lambda e: e[2]):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            total += w
            joined += 1
    if joined != n_vertices - 1:
        raise ValueError("graph is disconnected; no spanning tree")
    return total


def mst_lower_bound(trace: EpisodeTrace, smap: StaticMap = None) -> float:
    """Idealized path length for the completed sub-tasks.

    Graph: robot start, each completed object's initial position, and each
    such object's geodesically nearest goal point. Edges connect all
    object pairs, robot to each object, and each object to its own goal
    vertex; weights are geodesic shortest distances on the static map.
    """
    smap = smap or trace.static_map
    done = [o for o in trace.objects if o.success]
    if not done:
        return 0.0
    goal_cells = smap.goal_cells()

    # one Dijkstra per source vertex (robot + each completed object)
    sources = [trace.robot_start] + [o.initial_position for o in done]
    fields = []
    for src in sources:
        row, col = smap.world_to_cell(src)
        if not smap.in_bounds(row, col) or smap.grid[row, col]:
            raise ValueError(f"trace position {tuple(src)} is inside an obstacle")
        fields.append(geodesic_distance_field(smap, np.array([[row, col]])))

    def dist_between(src_idx, point):
        row, col = smap.world_to_cell(point)
        return float(fields[src_idx][row, col])

    kp = len(done)
    edges = []
    # vertex ids: 0 robot; 1..kp objects; kp+1..2kp per-object goal vertices
    for a in range(kp):
        d = dist_between(0, done[a].initial_position)
        edges.append((0, 1 + a, d))
        for b in range(a + 1, kp):
            edges.append((1 + a, 1 + b, dist_between(1 + a, done[b].initial_position)))
        # nearest goal point for object a
        gfield = fields[1 + a]
        goal_d = gfield[goal_cells[:, 0], goal_cells[:, 1]]
        li_star = float(np.min(goal_d))
        edges.append((1 + a, 1 + kp + a, li_star))

    for _, _, w in edges:
        if not math.isfinite(w):
            raise ValueError("unreachable vertex in MST graph")
    return kruskal_mst_weight(2 * kp + 1, edges)


def object_shortest_goal_distance(smap: StaticMap, position) -> float:
    """Geodesic distance from a point to the map's goal set (m)."""
    return shortest_path_length(smap, position)


@dataclass
class ManipScores:
    success: float
    efficiency: float
    effort: float
    effort_exceeds_one: bool = False


def manip_scores(trace: EpisodeTrace, smap: StaticMap = None) -> ManipScores:
    smap = smap or trace.static_map
    k = trace.k
    kp = trace.k_completed
    l0 = trace.robot_path_length
    if l0 <= 0 and kp > 0:
        raise CorruptTrace("completed sub-tasks with zero robot path length")
    s = kp / k if k else 0.0

    if kp == 0 or l0 <= 0:
        e = 0.0
    else:
        e = mst_lower_bound(trace, smap) / l0

    goal_field = geodesic_distance_field(smap, smap.goal_cells())
    numer = trace.robot_mass * l0
    for o in trace.objects:
        if o.success:
            row, col = smap.world_to_cell(o.initial_position)
            numer += o.mass * float(goal_field[row, col])
    denom = trace.robot_mass * l0 + sum(o.mass * o.path_length for o in trace.objects)
    if denom <= 0:
        return ManipScores(success=s, efficiency=e, effort=1.0)
    i = numer / denom
    flag = False
    if i > 1.0:
        if i - 1.0 < 1e-9:
            i = 1.0
        else:
            flag = True
    return ManipScores(success=s, efficiency=e, effort=i, effort_exceeds_one=flag)


# ---------------------------------------------------------------------------
# reporting

CSV_COLUMNS = [
    "env",
    "variant",
    "policy",
    "seed",
    "E_nav",
    "I_nav",
    "S_manip",
    "E_manip",
    "I_manip",
    "steps",
    "wall_time",
]


@dataclass
class EpisodeScores:
    env: str
    variant: str
    policy: str
    seed: int
    e_nav: float = None
    i_nav: float = None
    s_manip: float = None
    e_manip: float = None
    i_manip: float = None
    steps: int = 0
    wall_time: float = 0.0

    def row(self):
        def fmt(v):
            return "" if v is None else f"{v:.6f}"

        return [
            self.env,
            self.variant,
            self.policy,
            str(self.seed),
            fmt(self.e_nav),
            fmt(self.i_nav),
            fmt(self.s_manip),
            fmt(self.e_manip),
            fmt(self.i_manip),
            str(self.steps),
            f"{self.wall_time:.3f}",
        ]


@dataclass
class MetricsReport:
    episodes: list
    failed_seeds: list = field(default_factory=list)

    @staticmethod
    def _aggregate(episodes):
        """Mean and population std per metric over an episode set."""
        out = {}
        for name in ("e_nav", "i_nav", "s_manip", "e_manip", "i_manip"):
            vals = [getattr(e, name) for e in episodes if getattr(e, name) is not None]
            if vals:
                mean = statistics.fmean(vals)
                std = statistics.pstdev(vals)
                out[name] = (mean, std)
        return out

    def aggregate(self):
        return self._aggregate(self.episodes)

    def groups(self):
        """Episodes bucketed by (env, variant, policy), sorted by seed."""
        episodes = sorted(self.episodes, key=lambda e: (e.env, e.variant, e.policy, e.seed))
        out = {}
        for e in episodes:
            out.setdefault((e.env, e.variant, e.policy), []).append(e)
        return out

    def write_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(CSV_COLUMNS)
            for (env, variant, policy), group in self.groups().items():
                for e in group:
                    w.writerow(e.row())
                agg = self._aggregate(group)

                def fmt(name):
                    if name not in agg:
                        return ""
                    m, s = agg[name]
                    return f"{m:.6f}±{s:.6f}"

                w.writerow(
                    [
                        env,
                        variant,
                        policy,
                        "aggregate",
                        fmt("e_nav"),
                        fmt("i_nav"),
                        fmt("s_manip"),
                        fmt("e_manip"),
                        fmt("i_manip"),
                        str(sum(e.steps for e in group)),
                        f"{sum(e.wall_time for e in group):.3f}",
                    ]
                )
