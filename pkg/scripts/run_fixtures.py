"""Sweep the reverse penalty over every fixture and both vehicle models.

Prints one row per run; ``--csv`` also writes the table.  With ``--oracle``
each run is repeated with the admissible cost setting (no steering, reverse
or heading terms, 8 heading bins) and compared against the Dijkstra
reference.

    python3 scripts/run_fixtures.py --penalties 0 1 10 100
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import sys
import time

from nhastar.fixtures import LANE_ROWS, NARROW_LANE_X, scenario_fixtures
from nhastar.geometry import CollisionMode, pose_in_collision
from nhastar.oracle import dijkstra_reference
from nhastar.scenario import CostDoc
from nhastar.search import astar

COLUMNS = ["fixture", "model", "penalty", "status", "cost", "reverse_steps", "poses", "expansions",
           "wall_ms", "narrow_lane", "midpoint_hits"]


def narrow(p) -> bool:
    return NARROW_LANE_X[0] <= p.x < NARROW_LANE_X[1] and LANE_ROWS[0] <= p.y < LANE_ROWS[1]


def run_one(sc, model: str, penalty: float, midpoint: bool) -> dict:
    sc = dataclasses.replace(sc, model=model, costs=dataclasses.replace(sc.costs, reverse_penalty=penalty))
    prob = sc.problem()
    t0 = time.perf_counter()
    r = astar(prob)
    row = dict(fixture=sc.name, model=model, penalty=penalty, wall_ms=round((time.perf_counter() - t0) * 1e3, 1))
    if not r:
        return row | dict(status=r.reason, expansions=r.expansions)
    row |= dict(status="ok", cost=round(r.cost, 4), reverse_steps=r.reverse_steps, poses=len(r.poses),
                expansions=r.expansions)
    if sc.name.startswith("dual_lane"):
        row["narrow_lane"] = any(narrow(p) for p in r.poses)
    if midpoint:
        # how many poses of a midpoint-mode plan clip an obstacle with the full body
        m = astar(dataclasses.replace(sc, collision="midpoint").problem())
        if m:
            fp = prob.spec.footprint
            row["midpoint_hits"] = sum(pose_in_collision(p, fp, prob.grid, CollisionMode.FOOTPRINT) for p in m.poses)
    return row


def oracle_check(fixtures, models) -> int:
    admissible = CostDoc(steer_weight=0.0, reverse_penalty=0.0, heading_weight=0.0, heuristic_weight=1.0)
    bad = 0
    for name, sc in fixtures.items():
        for model in models:
            s = dataclasses.replace(sc, model=model, costs=admissible,
                                    discretization=dataclasses.replace(sc.discretization, theta_bins=8))
            prob = s.problem()
            r, ref = astar(prob), dijkstra_reference(prob)
            same = (not r and not ref) or (bool(r) and bool(ref) and r.cost == ref.cost)
            bad += not same
            print(f"oracle {name:16s} {model:9s} astar={getattr(r, 'cost', 'none')} "
                  f"dijkstra={getattr(ref, 'cost', 'none')} {'agree' if same else 'DIFFER'}")
    return bad


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--penalties", type=float, nargs="+", default=[0.0, 1.0, 10.0, 100.0])
    ap.add_argument("--models", nargs="+", default=["kinematic", "geometric"], choices=["kinematic", "geometric"])
    ap.add_argument("--fixtures", nargs="+", help="subset of fixture names")
    ap.add_argument("--midpoint", action="store_true", help="also count body collisions of midpoint-mode plans")
    ap.add_argument("--oracle", action="store_true")
    ap.add_argument("--csv", help="write the table here")
    args = ap.parse_args(argv)

    fixtures = scenario_fixtures()
    if args.fixtures:
        unknown = set(args.fixtures) - set(fixtures)
        if unknown:
            ap.error(f"unknown fixtures {sorted(unknown)}")
        fixtures = {k: v for k, v in fixtures.items() if k in args.fixtures}

    rows = []
    print(" ".join(f"{c:>13s}" for c in COLUMNS))
    for sc in fixtures.values():
        for model in args.models:
            for pen in args.penalties:
                row = run_one(sc, model, pen, args.midpoint)
                rows.append(row)
                print(" ".join(f"{str(row.get(c, '')):>13s}" for c in COLUMNS), flush=True)
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            w = csv.DictWriter(f, COLUMNS)
            w.writeheader()
            w.writerows(rows)
    if args.oracle:
        return 1 if oracle_check(fixtures, args.models) else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
