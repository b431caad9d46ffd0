#!/usr/bin/env python3
"""Sweep movable-obstacle counts in the maze and report the RRT baseline.

Mean I_nav is expected to fall (more incidental pushing) as obstacles are
added. Writes one report.csv per count under --out.
"""
import argparse
from pathlib import Path

from pushnav.harness import RunConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--counts", type=int, nargs="+", default=[3, 6, 10])
    ap.add_argument("--episodes", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--policy", default="rrt")
    ap.add_argument("--out", default="runs/obstacle_sweep")
    ap.add_argument("--parallelism", type=int, default=8)
    args = ap.parse_args()

    print(f"{'obstacles':>9}  {'mean E_nav':>10}  {'mean I_nav':>10}  {'success':>7}")
    for n in args.counts:
        cfg = RunConfig(
            spec={"env": "maze", "variant": "U", "obstacles": n},
            policy=args.policy,
            episodes=args.episodes,
            seed=args.seed,
            out_dir=str(Path(args.out) / f"obstacles_{n}"),
            parallelism=args.parallelism,
        )
        report = run_suite(cfg)
        agg = report.aggregate()
        succ = sum(1 for e in report.episodes if e.e_nav and e.e_nav > 0)
        print(
            f"{n:>9}  {agg['e_nav'][0]:>10.4f}  {agg['i_nav'][0]:>10.4f}"
            f"  {succ:>4}/{len(report.episodes)}"
        )


if __name__ == "__main__":
    main()
