"""Command-line front end.

Runs one scenario (a JSON file, a built-in fixture, or a PGM map with
start/goal overrides), or the whole fixture suite, and writes the path as
CSV and optionally an SVG figure.  Exit codes: 0 path found, 1 bad input,
2 goal unreachable, 3 expansion budget spent.  Standard output carries a
single ``key=value`` summary line per run; everything else goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import sys
import time
from pathlib import Path as FsPath

from .fixtures import scenario_fixtures
from .geometry import Footprint, OccupancyGrid, Pose, footprint_corners
from .oracle import dijkstra_reference
from .scenario import PgmMap, PoseSpec, Scenario, ScenarioError
from .search import NoPath, Path, PlanningError, astar
from .world import PGMError, write_pgm

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_UNREACHABLE = 2
EXIT_BUDGET = 3

CSV_HEADER = ["step_index", "x", "y", "theta_rad", "v", "delta_rad", "step_cost", "cumulative_cost"]


def _num(v: float) -> str:
    # shortest round-trip repr keeps CSV exact and byte-stable
    return repr(float(v))


def path_csv(path: Path) -> str:
    """Row 0 is the start pose with zero control; row k holds pose k and the control that reached it."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    total = 0.0
    w.writerow([0, _num(path.poses[0].x), _num(path.poses[0].y), _num(path.poses[0].theta), _num(0.0), _num(0.0), _num(0.0), _num(0.0)])
    for k, (pose, ctrl, c) in enumerate(zip(path.poses[1:], path.controls, path.step_costs), start=1):
        total += c
        w.writerow([k, _num(pose.x), _num(pose.y), _num(pose.theta), _num(ctrl.v), _num(ctrl.delta), _num(c), _num(total)])
    return buf.getvalue()


# ---------------------------------------------------------------- SVG

SVG_SCALE = 20.0  # pixels per grid unit


def _f(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _points(pts) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)


def _marker(pose: Pose, cls: str, size: float) -> list[str]:
    hx = pose.x + size * math.cos(pose.theta)
    hy = pose.y + size * math.sin(pose.theta)
    return [
        f'<circle class="{cls}" cx="{_f(pose.x)}" cy="{_f(pose.y)}" r="{_f(size * 0.3)}"/>',
        f'<line class="{cls}-heading" x1="{_f(pose.x)}" y1="{_f(pose.y)}" x2="{_f(hx)}" y2="{_f(hy)}"/>',
    ]


def render_svg(
    grid: OccupancyGrid,
    path: Path | None,
    footprint: Footprint,
    out: str | FsPath | None = None,
    every: int = 5,
    start: Pose | None = None,
    goal: Pose | None = None,
) -> str:
    """Draw the map, the path and sampled footprints as an SVG 1.1 document.

    All shapes are emitted in world coordinates inside a group that flips y,
    so drawn coordinates can be checked directly against the grid.  Footprints
    are drawn at every ``every``-th pose and always at the final pose.
    """
    if every < 1:
        raise ValueError("footprint stride must be >= 1")
    cs = grid.cell_size
    w, h = grid.extent
    s = SVG_SCALE
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(w * s)}" height="{_f(h * s)}" '
        f'viewBox="0 0 {_f(w * s)} {_f(h * s)}">',
        "<style>.occupied{fill:#333}.frame{fill:none;stroke:#000;stroke-width:0.05}"
        ".path{fill:none;stroke:#1565c0;stroke-width:0.08}.footprint{fill:none;stroke:#e65100;stroke-width:0.04}"
        ".start,.goal{stroke:none}.start{fill:#2e7d32}.goal{fill:#c62828}"
        ".start-heading{stroke:#2e7d32;stroke-width:0.08}.goal-heading{stroke:#c62828;stroke-width:0.08}</style>",
        f'<g transform="matrix({_f(s)} 0 0 {_f(-s)} 0 {_f(h * s)})">',
        f'<rect class="frame" x="0" y="0" width="{_f(w)}" height="{_f(h)}"/>',
    ]
    for i, j in grid.occupied_cells():
        lines.append(f'<rect class="occupied" x="{_f(i * cs)}" y="{_f(j * cs)}" width="{_f(cs)}" height="{_f(cs)}"/>')
    poses = list(path.poses) if path else []
    if len(poses) > 1:
        lines.append(f'<polyline class="path" points="{_points((p.x, p.y) for p in poses)}"/>')
    for k, p in enumerate(poses):
        if k % every == 0 or k == len(poses) - 1:
            lines.append(f'<polygon class="footprint" points="{_points(footprint_corners(p, footprint))}"/>')
    start = start if start is not None else (poses[0] if poses else None)
    for pose, cls in ((start, "start"), (goal, "goal")):
        if pose is not None:
            lines.extend(_marker(pose, cls, 0.8 * cs))
    lines += ["</g>", "</svg>", ""]
    doc = "\n".join(lines)
    if out is not None:
        FsPath(out).write_text(doc)
    return doc


# ---------------------------------------------------------------- running


def _pose_arg(text: str) -> PoseSpec:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected x,y[,theta_deg], got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"non-numeric pose {text!r}") from e
    return PoseSpec(*vals)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nhastar", description="Non-holonomic A* path planner.")
    src = p.add_argument_group("scenario source")
    src.add_argument("--scenario", type=FsPath, help="scenario JSON file")
    src.add_argument("--fixture", help="built-in fixture name")
    src.add_argument("--map", type=FsPath, help="PGM map, replaces the scenario map")
    src.add_argument("--start", type=_pose_arg, help="x,y[,theta_deg]")
    src.add_argument("--goal", type=_pose_arg, help="x,y[,theta_deg]")
    src.add_argument("--list-fixtures", action="store_true", help="print fixture names and exit")
    src.add_argument("--all-fixtures", action="store_true", help="run every fixture, writing into --out-dir")

    cfg = p.add_argument_group("overrides")
    cfg.add_argument("--model", choices=["kinematic", "geometric"])
    cfg.add_argument("--collision", choices=["footprint", "midpoint"])
    cfg.add_argument("--reverse-penalty", type=float)
    cfg.add_argument("--steer-weight", type=float)
    cfg.add_argument("--heading-weight", type=float)
    cfg.add_argument("--heuristic-weight", type=float)
    cfg.add_argument("--theta-bins", type=int)
    cfg.add_argument("--max-expansions", type=int)

    out = p.add_argument_group("output")
    out.add_argument("--out", type=FsPath, help="path CSV")
    out.add_argument("--svg", type=FsPath, help="SVG figure")
    out.add_argument("--svg-every", type=int, default=5, help="draw a footprint every k poses (default 5)")
    out.add_argument("--out-dir", type=FsPath, help="artifact directory for --all-fixtures")
    out.add_argument("--dump-scenario", type=FsPath, help="write the resolved scenario JSON")
    out.add_argument("--export-pgm", type=FsPath, help="write the occupancy grid as binary PGM")
    out.add_argument("--oracle", action="store_true", help="also run the Dijkstra reference and compare")
    return p


def apply_overrides(sc: Scenario, args: argparse.Namespace) -> Scenario:
    costs = sc.costs
    for flag, name in (
        ("reverse_penalty", "reverse_penalty"),
        ("steer_weight", "steer_weight"),
        ("heading_weight", "heading_weight"),
        ("heuristic_weight", "heuristic_weight"),
    ):
        val = getattr(args, flag)
        if val is not None:
            costs = dataclasses.replace(costs, **{name: val})
    disc = sc.discretization
    if args.theta_bins is not None:
        disc = dataclasses.replace(disc, theta_bins=args.theta_bins)
    limits = sc.limits
    if args.max_expansions is not None:
        limits = dataclasses.replace(limits, max_expansions=args.max_expansions)
    changes = dict(costs=costs, discretization=disc, limits=limits)
    if args.model:
        changes["model"] = args.model
    if args.collision:
        changes["collision"] = args.collision
    if args.map is not None:
        changes["map"] = PgmMap(str(args.map.resolve()))
    if args.start is not None:
        changes["start"] = args.start
    if args.goal is not None:
        changes["goal"] = args.goal
    return dataclasses.replace(sc, **changes)


def resolve_scenario(args: argparse.Namespace) -> Scenario:
    if args.scenario is not None and args.fixture is not None:
        raise ScenarioError("--scenario and --fixture are mutually exclusive")
    if args.scenario is not None:
        sc = Scenario.load(args.scenario)
    elif args.fixture is not None:
        fx = scenario_fixtures()
        if args.fixture not in fx:
            raise ScenarioError(f"unknown fixture {args.fixture!r}; choose from {', '.join(fx)}")
        sc = fx[args.fixture]
    else:
        if args.map is None or args.start is None or args.goal is None:
            raise ScenarioError("give --scenario, --fixture, or all of --map, --start and --goal")
        sc = Scenario(name=args.map.stem, map=PgmMap(str(args.map.resolve())), start=args.start, goal=args.goal)
    return apply_overrides(sc, args)


def summary(result: Path | NoPath, wall_ms: float, name: str | None = None) -> str:
    parts = [f"name={name}"] if name else []
    if result:
        parts += ["status=ok", f"cost={result.cost:.9f}", f"expansions={result.expansions}", f"reverse_step_count={result.reverse_steps}"]
    else:
        parts += [f"status={result.reason}", "cost=inf", f"expansions={result.expansions}", "reverse_step_count=0"]
    parts.append(f"wall_ms={wall_ms:.1f}")
    return " ".join(parts)


def exit_code(result: Path | NoPath) -> int:
    if result:
        return EXIT_OK
    return EXIT_BUDGET if result.reason == "budget" else EXIT_UNREACHABLE


def run_scenario(sc: Scenario, args: argparse.Namespace, csv_out=None, svg_out=None) -> int:
    grid = sc.grid()
    if args.export_pgm is not None:
        args.export_pgm.write_bytes(write_pgm(grid))
    if args.dump_scenario is not None:
        args.dump_scenario.write_text(sc.to_json() + "\n")
    prob = sc.problem(grid)
    t0 = time.perf_counter()
    result = astar(prob)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    line = summary(result, wall_ms, sc.name if args.all_fixtures else None)
    if args.oracle:
        ref = dijkstra_reference(prob)
        if ref:
            agree = bool(result) and result.cost == ref.cost
            line += f" oracle_cost={ref.cost:.9f} oracle_expansions={ref.expanded} oracle_agrees={str(agree).lower()}"
        else:
            line += f" oracle_cost=inf oracle_expansions={ref.expansions} oracle_agrees={str(not result).lower()}"
    print(line)
    if not result:
        print(f"{sc.name}: no path ({result.reason}) after {result.expansions} expansions", file=sys.stderr)
        return exit_code(result)
    if csv_out is not None:
        FsPath(csv_out).write_text(path_csv(result))
    if svg_out is not None:
        render_svg(grid, result, prob.spec.footprint, svg_out, args.svg_every, prob.start, prob.goal)
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    if args.list_fixtures:
        for name, sc in scenario_fixtures().items():
            print(f"{name}\t{sc.description}")
        return EXIT_OK
    if args.svg_every < 1:
        print("error: --svg-every must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.all_fixtures:
            if args.out_dir is None:
                raise ScenarioError("--all-fixtures needs --out-dir")
            args.out_dir.mkdir(parents=True, exist_ok=True)
            worst = EXIT_OK
            for name, sc in scenario_fixtures().items():
                sc = apply_overrides(sc, args)
                code = run_scenario(sc, args, args.out_dir / f"{name}.csv", args.out_dir / f"{name}.svg")
                worst = max(worst, code)
            return worst
        sc = resolve_scenario(args)
        return run_scenario(sc, args, args.out, args.svg)
    except (ScenarioError, PGMError, PlanningError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags, which would collide with "unreachable"
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
