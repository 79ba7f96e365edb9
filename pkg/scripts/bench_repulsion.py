#!/usr/bin/env python3
"""Sweep the Barnes-Hut opening threshold and report accuracy vs speed.

For each theta, measures wall time and the global relative RMS force error
against the exact O(n^2) sum, over seeded random clouds.

Usage: python3 scripts/bench_repulsion.py [--nodes 200] [--states 20]
"""

import argparse
import math
import sys
import time
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from strata.engine import PositionState, repulsion_bh, repulsion_brute
from strata.rng import Lcg


def random_state(seed: int, n: int, span: float = 1200.0) -> PositionState:
    rng = Lcg(seed)
    xs, ys = [], []
    for _ in range(n):
        xs.append(rng.uniform() * span)
        ys.append(rng.uniform() * span)
    return PositionState(
        ids=tuple(str(i) for i in range(n)),
        x=xs, y=ys, vx=[0.0] * n, vy=[0.0] * n,
        pinned={}, alpha=1.0, tick_count=0, rng=rng,
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, default=200)
    parser.add_argument("--states", type=int, default=20)
    args = parser.parse_args()

    states = [random_state(9000 + s, args.nodes) for s in range(args.states)]

    started = time.perf_counter()
    brutes = [repulsion_brute(state, 30.0) for state in states]
    brute_ms = (time.perf_counter() - started) * 1000 / len(states)
    print(f"nodes={args.nodes} states={args.states}")
    print(f"{'theta':>6}  {'ms/state':>9}  {'rel RMS error':>13}  {'speedup':>8}")
    print(f"{'brute':>6}  {brute_ms:9.2f}  {0.0:13.2e}  {1.0:8.2f}")

    for theta in (0.0, 0.3, 0.5, 0.7, 0.9, 1.0):
        started = time.perf_counter()
        approxes = [repulsion_bh(state, 30.0, theta) for state in states]
        bh_ms = (time.perf_counter() - started) * 1000 / len(states)
        worst = 0.0
        for brute, approx in zip(brutes, approxes):
            err2 = sum((ax - bx) ** 2 + (ay - by) ** 2 for (bx, by), (ax, ay) in zip(brute, approx))
            mag2 = sum(bx * bx + by * by for bx, by in brute)
            worst = max(worst, math.sqrt(err2 / mag2))
        print(f"{theta:6.1f}  {bh_ms:9.2f}  {worst:13.2e}  {brute_ms / bh_ms:8.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
