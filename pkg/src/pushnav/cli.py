"""Command-line entry point.

Subcommands:

* ``run``          — run a batch of episodes and write logs + report.csv
* ``replay LOG``   — re-simulate an episode log and verify it matches
* ``teleop-serve`` — host the live teleoperation websocket service
* ``list-envs``    — show environments, maze layouts, and policies

Environment configuration comes from an optional YAML file (``--config``),
shorthand flags (``--env``, ``--variant``, ``--seed``), and trailing
``key=value`` overrides with dotted paths into nested sections, e.g.
``reward.c_coll=0.2 obs.window=64 ice_concentration=0.4``.
"""
from __future__ import annotations

import argparse
import sys

from .envs import ENV_CLASSES, apply_overrides, load_config, spec_from_dict
from .envs.maze import LAYOUTS
from .harness import EpisodeLog, RunConfig, replay, run_suite
from .metrics import CSV_COLUMNS
from .policies import POLICIES
from .teleop import DEFAULT_PORT, serve


def _add_spec_args(p):
    p.add_argument("--config", help="YAML file with environment spec keys")
    p.add_argument("--env", help="environment kind (see list-envs)")
    p.add_argument("--variant", help="environment variant label (maze layout id)")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument(
        "overrides",
        nargs="*",
        metavar="KEY=VALUE",
        help="dotted config overrides, e.g. reward.c_coll=0.2 obs.window=64",
    )


def _build_spec_dict(args) -> dict:
    data = load_config(args.config) if args.config else {}
    for key in ("env", "variant", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            data[key] = value
    return apply_overrides(data, args.overrides)


def _cmd_run(args) -> int:
    spec = _build_spec_dict(args)
    cfg = RunConfig(
        spec=spec,
        policy=args.policy,
        episodes=args.episodes,
        seed=args.seed if args.seed is not None else spec.get("seed", 0),
        out_dir=args.out,
        parallelism=args.parallelism,
    )
    report = run_suite(cfg)
    print(f"wrote {cfg.episodes} episode logs and report.csv to {cfg.out_dir}")
    for (env, variant, policy), group in report.groups().items():
        agg = report._aggregate(group)
        parts = [f"{name}={m:.4f}±{s:.4f}" for name, (m, s) in agg.items()]
        print(f"{env}/{variant}/{policy}: " + "  ".join(parts))
    if report.failed_seeds:
        print(f"{len(report.failed_seeds)} episode(s) failed:", file=sys.stderr)
        for seed, err in report.failed_seeds:
            print(f"  seed {seed}: {err}", file=sys.stderr)
        return 1
    return 0


def _cmd_replay(args) -> int:
    original = EpisodeLog.load(args.log)
    again = replay(original)
    print("metrics:", again.footer["metrics"])
    if original.failed:
        print("original log was marked failed; skipping exact comparison")
        return 0
    if again.footer == original.footer:
        print("replay matches the recorded footer exactly")
        return 0
    print("MISMATCH: replay diverged from the recorded footer", file=sys.stderr)
    print("recorded:", original.footer, file=sys.stderr)
    print("replayed:", again.footer, file=sys.stderr)
    return 1


def _cmd_teleop_serve(args) -> int:
    spec = _build_spec_dict(args)
    spec_from_dict(spec)  # validate before binding the port
    print(f"serving teleoperation on port {args.port} (env={spec.get('env', 'maze')})")
    serve(spec, port=args.port, out_dir=args.out)
    return 0


def _cmd_list_envs(_args) -> int:
    print("environments:")
    for name, cls in sorted(ENV_CLASSES.items()):
        print(f"  {name}")
    print("maze variants:", ", ".join(sorted(LAYOUTS)))
    print("policies:", ", ".join(sorted(POLICIES)))
    print("report columns:", ", ".join(CSV_COLUMNS))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pushnav", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an episode suite and write a CSV report")
    _add_spec_args(p_run)
    p_run.add_argument("--policy", default="stationary", help="policy name (see list-envs)")
    p_run.add_argument("--episodes", type=int, default=20)
    p_run.add_argument("--out", default="runs", help="output directory")
    p_run.add_argument("--parallelism", type=int, default=1)
    p_run.set_defaults(func=_cmd_run)

    p_rep = sub.add_parser("replay", help="re-simulate an episode log and verify it")
    p_rep.add_argument("log", help="path to an episode .jsonl log")
    p_rep.set_defaults(func=_cmd_replay)

    p_tel = sub.add_parser("teleop-serve", help="host the live teleoperation service")
    _add_spec_args(p_tel)
    p_tel.add_argument("--port", type=int, default=DEFAULT_PORT)
    p_tel.add_argument("--out", default="teleop_logs", help="episode log directory")
    p_tel.set_defaults(func=_cmd_teleop_serve)

    p_ls = sub.add_parser("list-envs", help="list environments, variants, and policies")
    p_ls.set_defaults(func=_cmd_list_envs)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
