"""Batch episode runner: JSONL episode logs, replay, and CSV reports.

An episode log is line-delimited JSON (UTF-8, one object per line):

* line 1 — header: full environment spec, its hash, seed, policy name,
  code version;
* step records — tick, robot pose, the action taken, reward, contact
  events; object poses are included at 10 Hz (every 0.1 s of sim time);
* last line — footer: outcome, trace summary, metrics, failure state.

Logs contain no timestamps, so a rerun of the same (spec, policy, seed)
produces byte-identical files. Every step record carries its action, so a
log can be replayed without the original policy (e.g. a teleoperated
session) and must reproduce the footer exactly.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import multiprocessing
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .envs import InvalidSpec, make_env, spec_from_dict, spec_to_dict
from .metrics import EpisodeScores, MetricsReport, manip_scores, nav_scores
from .policies import make_policy

LOG_PERIOD = 0.1  # object-pose sampling period in the log, seconds

NAV_ENVS = ("maze", "ship_ice")


def spec_hash(spec) -> str:
    """Stable hash of an environment spec (order-independent)."""
    canon = json.dumps(spec_to_dict(spec), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _jsonable(value):
    """Coerce actions/poses to plain Python types for exact round-tripping."""
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


@dataclass
class EpisodeLog:
    header: dict
    steps: list
    footer: dict
    wall_time: float = 0.0  # measured, never serialized

    @property
    def failed(self) -> bool:
        return self.footer.get("failed", False)

    def lines(self):
        yield json.dumps(self.header)
        for rec in self.steps:
            yield json.dumps(rec)
        yield json.dumps(self.footer)

    def write(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            for line in self.lines():
                f.write(line + "\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as f:
            records = [json.loads(line) for line in f if line.strip()]
        if len(records) < 2 or records[0].get("type") != "header":
            raise ValueError(f"{path}: not an episode log (missing header)")
        if records[-1].get("type") != "footer":
            raise ValueError(f"{path}: truncated episode log (missing footer)")
        return cls(header=records[0], steps=records[1:-1], footer=records[-1])

    def actions(self):
        return [rec["action"] for rec in self.steps]

    def scores(self) -> EpisodeScores:
        h, f, m = self.header, self.footer, self.footer["metrics"]
        return EpisodeScores(
            env=h["spec"]["env"],
            variant=h["spec"]["variant"],
            policy=h["policy"],
            seed=h["seed"],
            e_nav=m.get("E_nav"),
            i_nav=m.get("I_nav"),
            s_manip=m.get("S_manip"),
            e_manip=m.get("E_manip"),
            i_manip=m.get("I_manip"),
            steps=f["steps"],
            wall_time=self.wall_time,
        )


def compute_metrics(env) -> dict:
    """The five benchmark scores for a finished (or aborted) episode."""
    trace = env.trace()
    if env.kind in NAV_ENVS:
        e_nav, i_nav = nav_scores(trace, env.goal_field)
        return {"E_nav": e_nav, "I_nav": i_nav}
    ms = manip_scores(trace)
    out = {"S_manip": ms.success, "E_manip": ms.efficiency, "I_manip": ms.effort}
    if ms.effort_exceeds_one:
        out["I_manip_exceeds_one"] = True
    return out


class _ReplayPolicy:
    """Feeds back the action sequence recorded in a log."""

    name = "replay"

    def __init__(self, actions):
        self._actions = actions
        self._i = 0

    def reset(self, env, seed):
        self._i = 0

    def act(self, observation, env):
        if self._i >= len(self._actions):
            raise IndexError("log exhausted before episode ended")
        a = self._actions[self._i]
        self._i += 1
        return tuple(a) if isinstance(a, list) else a


class EpisodeRecorder:
    """Builds the log records for one episode; shared by the batch runner
    and the live teleoperation service so both write identical schemas."""

    def __init__(self, env, policy_name: str, seed: int):
        self.header = {
            "type": "header",
            "spec": spec_to_dict(env.spec),
            "spec_hash": spec_hash(env.spec),
            "seed": seed,
            "policy": policy_name,
            "version": __version__,
        }
        self.steps = []
        self._ticks_per_record = None
        self._next_record_tick = 0

    def record(self, env, action, transition):
        if self._ticks_per_record is None:
            self._ticks_per_record = max(1, round(LOG_PERIOD / env.world.params.dt))
        ev = transition.info["events"]
        rec = {
            "type": "step",
            "tick": env.world.tick,
            "pose": _jsonable(transition.info["robot_pose"]),
            "action": _jsonable(action),
            "reward": float(transition.reward),
            "events": {
                "movable_contacts": ev["new_movable_contacts"],
                "static_contacts": ev["new_static_contacts"],
                "completions": list(ev["completions"]),
            },
        }
        if env.world.tick >= self._next_record_tick:
            rec["bodies"] = {str(b.id): _jsonable(b.pose) for b in env.movables()}
            self._next_record_tick = env.world.tick + self._ticks_per_record
        self.steps.append(rec)

    def finish(self, env, terminated, truncated, failed=False, error=None, wall_time=0.0) -> EpisodeLog:
        try:
            outcome = env.outcome()
            trace = env.trace()
            outcome_rec = {
                "success": outcome.success,
                "k": outcome.k,
                "k_completed": outcome.k_completed,
                "object_success": {str(k): bool(v) for k, v in outcome.object_success.items()},
            }
            trace_rec = {
                "robot_path_length": trace.robot_path_length,
                "object_path_lengths": {str(o.id): o.path_length for o in trace.objects},
            }
            metrics = compute_metrics(env)
        except Exception:  # env never finished resetting (e.g. placement failure)
            outcome_rec = {"success": False, "k": 0, "k_completed": 0, "object_success": {}}
            trace_rec = {"robot_path_length": 0.0, "object_path_lengths": {}}
            metrics = {}
        footer = {
            "type": "footer",
            "outcome": outcome_rec,
            "trace": trace_rec,
            "metrics": metrics,
            "steps": getattr(env, "_steps", 0),
            "terminated": bool(terminated),
            "truncated": bool(truncated),
            "failed": failed,
            "error": error,
        }
        return EpisodeLog(
            header=self.header, steps=self.steps, footer=footer, wall_time=wall_time
        )


def run_episode(env, policy, seed: int, log_path=None) -> EpisodeLog:
    """Roll one episode to termination/truncation and build its log.

    A policy/environment exception does not propagate: the log footer is
    marked ``failed`` with the error message, metrics reflect the partial
    trace, and the caller's suite continues.
    """
    recorder = EpisodeRecorder(env, policy.name, seed)
    failed = False
    error = None
    terminated = truncated = False
    start = time.perf_counter()
    try:
        obs = env.reset(seed)
        policy.reset(env, seed)
        while env.active:
            action = policy.act(obs, env)
            tr = env.step(action)
            obs = tr.observation
            terminated, truncated = tr.terminated, tr.truncated
            recorder.record(env, action, tr)
    except Exception as exc:  # noqa: BLE001 - suite must survive bad episodes
        failed = True
        error = f"{type(exc).__name__}: {exc}"
    wall = time.perf_counter() - start
    log = recorder.finish(env, terminated, truncated, failed, error, wall_time=wall)
    if log_path is not None:
        log.write(log_path)
    return log


def replay(log) -> EpisodeLog:
    """Re-simulate a log from its header, feeding back the recorded actions."""
    if not isinstance(log, EpisodeLog):
        log = EpisodeLog.load(log)
    spec = spec_from_dict(log.header["spec"])
    env = make_env(spec)
    return run_episode(env, _ReplayPolicy(log.actions()), log.header["seed"])


@dataclass
class RunConfig:
    spec: dict = field(default_factory=dict)  # environment spec, as a mapping
    policy: str = "stationary"
    episodes: int = 20
    seed: int = 0  # base seed; episode i uses seed + i
    out_dir: str = "runs"
    parallelism: int = 1

    def __post_init__(self):
        if self.episodes < 1:
            raise InvalidSpec("episodes: must be >= 1")
        if self.parallelism < 1:
            raise InvalidSpec("parallelism: must be >= 1")
        spec_from_dict(self.spec)  # validate eagerly
        make_policy(self.policy)


def _run_one(item):
    spec_dict, policy_name, seed, log_path = item
    env = make_env(spec_from_dict(spec_dict))
    policy = make_policy(policy_name)
    log = run_episode(env, policy, seed, log_path=log_path)
    return seed, log.scores(), log.failed, log.footer.get("error")


def run_suite(cfg: RunConfig) -> MetricsReport:
    """Run the configured episodes, write per-episode logs and report.csv."""
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    items = [
        (dict(cfg.spec), cfg.policy, cfg.seed + i, str(out_dir / f"episode_{cfg.seed + i:05d}.jsonl"))
        for i in range(cfg.episodes)
    ]
    if cfg.parallelism > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(cfg.parallelism, cfg.episodes)) as pool:
            results = pool.map(_run_one, items)
    else:
        results = [_run_one(item) for item in items]

    # merge keyed by seed so the aggregate is order-independent
    results.sort(key=lambda r: r[0])
    report = MetricsReport(
        episodes=[scores for _, scores, _, _ in results],
        failed_seeds=[(seed, err) for seed, _, bad, err in results if bad],
    )
    report.write_csv(out_dir / "report.csv")
    return report
