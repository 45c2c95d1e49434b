"""Built-in scenarios mirroring the experiments the planner is meant to reproduce.

Each fixture is a plain :class:`~nhastar.scenario.Scenario`, so it can be
dumped to JSON and fed back through the CLI.  Coordinates are in cells
(cell_size 1); all maps are at most 30 x 30.

* ``headings_up`` / ``headings_down``: same start position facing +90 or
  -90 degrees, goal beyond a central block.
* ``reverse_corridor``: goal a few cells straight behind the start; cheap
  to reach by backing up, or forward around a block.
* ``uturn_small`` / ``uturn_big``: dead-end road 4 cells wide with a
  turning bulb at the far end.  A length-1 car turns in the road, a
  length-2 car cannot without backing up.
* ``dual_lane_len2`` / ``dual_lane_len6``: a 3-cell narrow lane and an
  11-cell wide passage lead from the bottom road to the top room.
* ``bottleneck``: a road network read from ``data/bottleneck.pgm``.
"""

from __future__ import annotations

from .scenario import (
    BuilderMap,
    CostDoc,
    Discretization,
    PgmMap,
    PoseSpec,
    Scenario,
    VehicleDoc,
    builder_map,
)
from .world import GridBuilder

# dual-lane geometry, shared with tests that check lane widths
NARROW_LANE_X = (6, 9)
WIDE_LANE_X = (18, 29)
LANE_ROWS = (6, 20)
# u-turn road: free rows 1..4, bulb from column 22
UTURN_ROAD_ROWS = (1, 5)
UTURN_BULB_X = 22

SMALL_CAR = VehicleDoc(wheelbase=1.0, length=1.0, width=0.5, delta_max_deg=45.0)
MID_CAR = VehicleDoc(wheelbase=2.0, length=2.0, width=1.0, delta_max_deg=45.0)
LONG_CAR = VehicleDoc(wheelbase=6.0, length=6.0, width=2.0, delta_max_deg=45.0)

# a wheelbase-6 car turns less than one heading bin per one-cell step, so every
# steering sample would collapse onto the straight successor
LONG_CAR_STEPS = Discretization(delta_samples_deg=[-45.0, 0.0, 45.0], dt=3.0)


def headings_map() -> BuilderMap:
    return builder_map(GridBuilder(24, 24).border().rect(8, 10, 16, 14))


def reverse_corridor_map() -> BuilderMap:
    return builder_map(GridBuilder(24, 16).border().rect(4, 6, 20, 10))


def uturn_map() -> BuilderMap:
    return builder_map(GridBuilder(30, 14).border().rect(1, UTURN_ROAD_ROWS[1], UTURN_BULB_X, 13))


def dual_lane_map() -> BuilderMap:
    b = GridBuilder(30, 30).border()
    b.rect(1, LANE_ROWS[0], NARROW_LANE_X[0], LANE_ROWS[1])
    b.rect(NARROW_LANE_X[1], LANE_ROWS[0], WIDE_LANE_X[0], LANE_ROWS[1])
    return builder_map(b)


def _headings(theta_deg: float, name: str) -> Scenario:
    return Scenario(
        name=name,
        description=f"start (12, 6) facing {theta_deg:+.0f} deg, goal (12, 19) facing +90 beyond an 8x4 block",
        map=headings_map(),
        start=PoseSpec(12.0, 6.0, theta_deg),
        goal=PoseSpec(12.0, 19.0, 90.0),
        vehicle=MID_CAR,
    )


def scenario_fixtures() -> dict[str, Scenario]:
    fx = [
        _headings(90.0, "headings_up"),
        _headings(-90.0, "headings_down"),
        Scenario(
            name="reverse_corridor",
            description="goal 4 cells straight behind the start, same heading; forward route loops round a 16x4 block",
            map=reverse_corridor_map(),
            start=PoseSpec(10.0, 3.5, 0.0),
            goal=PoseSpec(6.0, 3.5, 0.0),
            vehicle=MID_CAR,
            costs=CostDoc(reverse_penalty=1.0),
        ),
        Scenario(
            name="uturn_small",
            description="length-1 car turns round in a 4-wide dead-end road",
            map=uturn_map(),
            start=PoseSpec(4.0, 2.0, 0.0),
            goal=PoseSpec(4.0, 3.5, 180.0),
            vehicle=SMALL_CAR,
        ),
        Scenario(
            name="uturn_big",
            description="length-2 car turns round in a 4-wide dead-end road; bulb at x >= 22 allows a forward-only turn",
            map=uturn_map(),
            start=PoseSpec(4.0, 2.0, 0.0),
            goal=PoseSpec(4.0, 3.5, 180.0),
            vehicle=MID_CAR,
            costs=CostDoc(reverse_penalty=0.0),
        ),
        Scenario(
            name="dual_lane_len2",
            description="narrow lane x in [6, 9) (3 wide) vs wide passage x in [18, 29) (11 wide); length-2 car",
            map=dual_lane_map(),
            start=PoseSpec(9.0, 3.0, 0.0),
            goal=PoseSpec(10.0, 24.0, 180.0),
            vehicle=MID_CAR,
            costs=CostDoc(reverse_penalty=0.0),
        ),
        Scenario(
            name="dual_lane_len6",
            description="same map, length-6 car that cannot fit the 3-wide lane",
            map=dual_lane_map(),
            start=PoseSpec(9.0, 3.5, 0.0),
            goal=PoseSpec(10.0, 24.0, 180.0),
            vehicle=LONG_CAR,
            costs=CostDoc(reverse_penalty=0.0),
            discretization=LONG_CAR_STEPS,
        ),
        Scenario(
            name="bottleneck",
            description="rasterized road network; start in the top-left block, goal in the bottom-left block",
            map=PgmMap("package:bottleneck.pgm"),
            start=PoseSpec(3.0, 27.5, 0.0),
            goal=PoseSpec(3.0, 3.5, 0.0),
            vehicle=MID_CAR,
        ),
    ]
    return {s.name: s for s in fx}
