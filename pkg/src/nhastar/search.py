"""Heading-aware A* over continuous poses keyed by discrete (cell, heading-bin) triples."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

from .geometry import CollisionMode, OccupancyGrid, Pose, angle_diff, motion_in_collision, pose_in_collision
from .vehicle import Control, ControlGrid, ModelKind, VehicleSpec, neighbors, sweep, sweep_margin

DEFAULT_MAX_EXPANSIONS = 200_000


class PlanningError(Exception):
    pass


class ConfigurationError(PlanningError, ValueError):
    pass


class StartInCollisionError(PlanningError):
    pass


class InternalConsistencyError(PlanningError):
    pass


@dataclass(frozen=True)
class CostConfig:
    """Weights of the step cost and of the heuristic.

    steer_weight: cost per radian of |delta| per step.
    reverse_penalty: flat cost added to every reverse step.
    heading_weight: scale of the heading term in both distance and heuristic.
    heuristic_weight: multiplier on h; 0 turns the search into Dijkstra.
    """

    steer_weight: float = 0.5
    reverse_penalty: float = 1.0
    heading_weight: float = 1.0
    heuristic_weight: float = 1.0

    def __post_init__(self):
        for name in ("steer_weight", "reverse_penalty", "heading_weight", "heuristic_weight"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val >= 0):
                raise ConfigurationError(f"{name} must be a finite non-negative number, got {val!r}")


@dataclass(frozen=True)
class SearchLimits:
    max_expansions: int = DEFAULT_MAX_EXPANSIONS
    goal_position_tol: float | None = None  # None -> one cell
    goal_heading_tol: float = math.pi / 8

    def __post_init__(self):
        if self.max_expansions < 1:
            raise ConfigurationError("max_expansions must be >= 1")
        if self.goal_position_tol is not None and not self.goal_position_tol > 0:
            raise ConfigurationError("goal_position_tol must be positive")
        if not self.goal_heading_tol >= 0:
            raise ConfigurationError("goal_heading_tol must be non-negative")

    def position_tol(self, cell_size: float) -> float:
        return self.goal_position_tol if self.goal_position_tol is not None else cell_size


Key = tuple[int, int, int]


def discretize(pose: Pose, cell_size: float, theta_bins: int) -> Key:
    width = 2 * math.pi / theta_bins
    return (
        math.floor(pose.x / cell_size),
        math.floor(pose.y / cell_size),
        round(pose.theta / width) % theta_bins,
    )


@dataclass(frozen=True, eq=False)
class SearchNode:
    pose: Pose
    key: Key
    g: float
    f: float
    parent: "SearchNode | None" = None
    control: Control | None = None
    step_cost: float = 0.0

    @property
    def parent_key(self) -> Key | None:
        return None if self.parent is None else self.parent.key


@dataclass
class Path:
    poses: list[Pose]
    controls: list[Control]
    step_costs: list[float]
    cost: float
    expansions: int = 0

    def __len__(self):
        return len(self.poses)

    @property
    def reverse_steps(self) -> int:
        return sum(1 for c in self.controls if c.v < 0)

    @property
    def positional_length(self) -> float:
        return sum(a.distance_to(b) for a, b in zip(self.poses, self.poses[1:]))


@dataclass
class NoPath:
    reason: str  # "unreachable" | "budget"
    expansions: int = 0

    def __bool__(self):
        return False


def heading_metric(a: Pose, b: Pose, heading_weight: float) -> float:
    """L2 distance over (x, y, w * wrapped heading difference)."""
    dth = heading_weight * angle_diff(a.theta, b.theta)
    return math.hypot(a.x - b.x, a.y - b.y, dth)


def heuristic(pose: Pose, goal: Pose, cfg: CostConfig) -> float:
    return heading_metric(pose, goal, cfg.heading_weight) * cfg.heuristic_weight


def step_cost(frm: Pose, to: Pose, ctrl: Control, cfg: CostConfig) -> float:
    cost = heading_metric(frm, to, cfg.heading_weight) + cfg.steer_weight * abs(ctrl.delta)
    if ctrl.v < 0:
        cost += cfg.reverse_penalty
    return cost


def at_goal(pose: Pose, goal: Pose, position_tol: float, heading_tol: float) -> bool:
    return (
        pose.distance_to(goal) < position_tol
        and abs(angle_diff(pose.theta, goal.theta)) <= heading_tol + 1e-12
    )


def better(g_new: float, pose_new: Pose, g_old: float, pose_old: Pose) -> bool:
    """Replacement rule for the pose held by a key: lower g wins, exact ties go to the smaller pose."""
    if g_new != g_old:
        return g_new < g_old
    return pose_new.as_tuple() < pose_old.as_tuple()


@dataclass
class Problem:
    """Everything a search needs besides the frontier logic; shared with the reference planner."""

    start: Pose
    goal: Pose
    grid: OccupancyGrid
    spec: VehicleSpec
    model: ModelKind = ModelKind.KINEMATIC
    controls: ControlGrid | None = None
    costs: CostConfig = field(default_factory=CostConfig)
    limits: SearchLimits = field(default_factory=SearchLimits)
    collision: CollisionMode = CollisionMode.FOOTPRINT

    def __post_init__(self):
        self.model = ModelKind(self.model)
        self.collision = CollisionMode(self.collision)
        if self.costs is None:
            self.costs = CostConfig()
        if self.limits is None:
            self.limits = SearchLimits()
        if self.controls is None:
            self.controls = ControlGrid.default(self.spec, self.grid.cell_size)
        try:
            self.controls.validate(self.spec)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
        w, h = self.grid.extent
        if not (0 <= self.goal.x < w and 0 <= self.goal.y < h):
            raise ConfigurationError(f"goal ({self.goal.x}, {self.goal.y}) lies outside the {w} x {h} map")
        if self.collides(self.start):
            raise StartInCollisionError(f"start pose {self.start} is in collision ({self.collision.value} mode)")

    @property
    def cell_size(self) -> float:
        return self.grid.cell_size

    def key(self, pose: Pose) -> Key:
        return discretize(pose, self.grid.cell_size, self.controls.theta_bins)

    def collides(self, pose: Pose) -> bool:
        return pose_in_collision(pose, self.spec.footprint, self.grid, self.collision)

    def is_goal(self, pose: Pose) -> bool:
        return at_goal(pose, self.goal, self.limits.position_tol(self.cell_size), self.limits.goal_heading_tol)

    def successors(self, pose: Pose) -> list[tuple[Pose, Control, float]]:
        """Collision-free successors with their step costs.

        Each motion is sampled at arc-length spacing of half a cell.  In
        footprint mode the hull of every pair of consecutive footprints is
        checked, widened by the rotation bound, so the whole swept body is
        covered; midpoint mode checks the sampled reference points only.
        """
        out = []
        spacing = self.cell_size / 2
        fp = self.spec.footprint
        for nxt, ctrl in neighbors(self.model, pose, self.spec, self.controls, self.cell_size):
            samples = sweep(self.model, pose, ctrl, self.spec, self.controls, spacing, self.cell_size)
            if self.collision is CollisionMode.MIDPOINT:
                hit = any(self.collides(p) for p in samples)
            else:
                margin = sweep_margin(self.model, ctrl, self.spec, self.controls, len(samples), self.cell_size)
                chain = [pose] + samples
                hit = any(motion_in_collision(a, b, fp, self.grid, margin) for a, b in zip(chain, chain[1:]))
            if hit:
                continue
            out.append((nxt, ctrl, step_cost(pose, nxt, ctrl, self.costs)))
        return out

    def goal_slack(self) -> float:
        """Largest heading-metric distance from the goal to a pose accepted as reaching it."""
        dth = self.costs.heading_weight * self.limits.goal_heading_tol
        return math.hypot(self.limits.position_tol(self.cell_size), dth)

    @cached_property
    def heuristic_scale(self) -> float:
        """Factor that makes the key-level bound consistent along every edge.

        The bound can fall by at most one key diameter more than the metric
        length of a step, and every step costs at least ``c_min`` (step cost
        >= metric length, which is rigid-motion invariant).  Scaling by
        c_min / (c_min + diameter) therefore keeps h(K) <= c + h(K').
        """
        w = self.costs.heading_weight
        diam = math.hypot(math.sqrt(2.0) * self.cell_size, w * 2 * math.pi / self.controls.theta_bins)
        origin = Pose(0.0, 0.0, 0.0)
        moves = neighbors(self.model, origin, self.spec, self.controls, self.cell_size)
        c_min = min(heading_metric(origin, p, w) for p, _ in moves)
        return c_min / (c_min + diam)

    def key_lower_bound(self, key: Key) -> float:
        """Heading-metric distance from the goal region to the closest point of a key's cell and bin."""
        cs = self.cell_size
        i, j, b = key
        gx, gy = self.goal.x, self.goal.y
        dx = max(i * cs - gx, 0.0, gx - (i + 1) * cs)
        dy = max(j * cs - gy, 0.0, gy - (j + 1) * cs)
        width = 2 * math.pi / self.controls.theta_bins
        dth = max(0.0, abs(angle_diff(b * width, self.goal.theta)) - width / 2)
        d = math.hypot(dx, dy, self.costs.heading_weight * dth)
        return max(0.0, d - self.goal_slack())

    def search_heuristic(self, pose: Pose) -> float:
        # constant within a key and consistent, so the first pop of a key holds its cheapest arrival
        if self.costs.heuristic_weight == 0:
            return 0.0
        return self.key_lower_bound(self.key(pose)) * self.heuristic_scale * self.costs.heuristic_weight


def reconstruct_path(node: SearchNode, expansions: int = 0) -> Path:
    chain = []
    seen = set()
    cur = node
    while cur is not None:
        if id(cur) in seen:
            raise InternalConsistencyError("cycle in parent chain")
        seen.add(id(cur))
        chain.append(cur)
        cur = cur.parent
    chain.reverse()
    if chain[0].g != 0.0:
        raise InternalConsistencyError("parent chain does not terminate at the start node")
    steps = chain[1:]
    path = Path(
        poses=[n.pose for n in chain],
        controls=[n.control for n in steps],
        step_costs=[n.step_cost for n in steps],
        cost=node.g,
        expansions=expansions,
    )
    if abs(math.fsum(path.step_costs) - node.g) > 1e-9 * max(1.0, node.g):
        raise InternalConsistencyError("re-summed step costs disagree with the node's g")
    return path


def plan(
    start: Pose,
    goal: Pose,
    grid: OccupancyGrid,
    spec: VehicleSpec,
    model: ModelKind | str = ModelKind.KINEMATIC,
    controls: ControlGrid | None = None,
    costs: CostConfig | None = None,
    limits: SearchLimits | None = None,
    collision: CollisionMode | str = CollisionMode.FOOTPRINT,
) -> Path | NoPath:
    """Search for a collision-free path from ``start`` to within tolerance of ``goal``.

    Returns a :class:`Path` or a :class:`NoPath` whose ``reason`` tells an
    exhausted frontier ("unreachable") from a spent expansion budget ("budget").
    Raises :class:`StartInCollisionError` or :class:`ConfigurationError` on
    unusable input.
    """
    prob = Problem(start, goal, grid, spec, model, controls, costs, limits, collision)
    return astar(prob)


def astar(prob: Problem) -> Path | NoPath:
    budget = prob.limits.max_expansions
    tick = itertools.count()
    start = SearchNode(prob.start, prob.key(prob.start), 0.0, prob.search_heuristic(prob.start))
    best: dict[Key, SearchNode] = {start.key: start}
    closed: set[Key] = set()
    heap = [(start.f, next(tick), start)]
    expansions = 0

    while heap:
        _, _, node = heapq.heappop(heap)
        if best[node.key] is not node:
            continue  # superseded by a cheaper arrival
        if node.key in closed:
            continue
        if expansions >= budget:
            return NoPath("budget", expansions)
        expansions += 1
        closed.add(node.key)
        if prob.is_goal(node.pose):
            return reconstruct_path(node, expansions)

        for nxt, ctrl, c in prob.successors(node.pose):
            g = node.g + c
            key = prob.key(nxt)
            old = best.get(key)
            if old is not None and not better(g, nxt, old.g, old.pose):
                continue
            child = SearchNode(nxt, key, g, g + prob.search_heuristic(nxt), node, ctrl, c)
            best[key] = child
            closed.discard(key)  # reopen on improvement
            heapq.heappush(heap, (child.f, next(tick), child))

    return NoPath("unreachable", expansions)
