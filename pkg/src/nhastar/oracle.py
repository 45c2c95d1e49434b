"""Brute-force reference computations for testing the planner.

Nothing here is tuned for speed.  The Dijkstra reference reuses the
successor and cost functions of :class:`~nhastar.search.Problem` but has
its own frontier loop, so it checks the A* bookkeeping independently.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .geometry import OccupancyGrid, Pose, footprint_corners, Footprint, OVERLAP_EPS
from .search import NoPath, Problem

# sup over directions of octile length / euclidean length, reached at 22.5 degrees
OCTILE_STRETCH = math.sqrt(4.0 - 2.0 * math.sqrt(2.0))


@dataclass
class OracleResult:
    cost: float
    poses: list[Pose]
    expanded: int


def dijkstra_reference(prob: Problem, max_expansions: int | None = None) -> OracleResult | NoPath:
    """Uniform-cost search over the same successor graph as the planner."""
    limit = prob.limits.max_expansions if max_expansions is None else max_expansions
    # key -> (g, pose, parent key); a key is settled once popped
    table = {prob.key(prob.start): (0.0, prob.start, None)}
    settled = {}
    queue = [(0.0, 0, prob.key(prob.start))]
    pushes = 1
    while queue:
        g, _, k = heapq.heappop(queue)
        if k in settled or table[k][0] != g:
            continue
        if len(settled) >= limit:
            return NoPath("budget", len(settled))
        settled[k] = table[k]
        pose = table[k][1]
        if prob.is_goal(pose):
            poses = []
            cur = k
            while cur is not None:
                poses.append(settled[cur][1])
                cur = settled[cur][2]
            return OracleResult(g, poses[::-1], len(settled))
        for nxt, _ctrl, c in prob.successors(pose):
            nk = prob.key(nxt)
            if nk in settled:
                continue
            ng = g + c
            cur = table.get(nk)
            if cur is None or ng < cur[0] or (ng == cur[0] and nxt.as_tuple() < cur[1].as_tuple()):
                table[nk] = (ng, nxt, k)
                heapq.heappush(queue, (ng, pushes, nk))
                pushes += 1
    return NoPath("unreachable", len(settled))


def grid_distance(grid: OccupancyGrid, start_cell: tuple[int, int], goal_cell: tuple[int, int]) -> float:
    """8-connected shortest path length between free cells (inf if disconnected)."""
    if grid.is_occupied(*start_cell) or grid.is_occupied(*goal_cell):
        return math.inf
    dist = {start_cell: 0.0}
    queue = [(0.0, start_cell)]
    done = set()
    while queue:
        d, cell = heapq.heappop(queue)
        if cell in done:
            continue
        done.add(cell)
        if cell == goal_cell:
            return d * grid.cell_size
        i, j = cell
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == dj == 0:
                    continue
                n = (i + di, j + dj)
                if grid.is_occupied(*n):
                    continue
                nd = d + (math.sqrt(2.0) if di and dj else 1.0)
                if nd < dist.get(n, math.inf):
                    dist[n] = nd
                    heapq.heappush(queue, (nd, n))
    return math.inf


def holonomic_lower_bound(grid: OccupancyGrid, start: Pose, goal: Pose, goal_tol: float = 0.0) -> float:
    """Lower bound on the positional length of any path from ``start`` to within ``goal_tol`` of ``goal``.

    The 8-connected cell distance overestimates oblique straight lines by up to
    ``OCTILE_STRETCH`` and ignores where inside the end cells the points sit,
    so both are discounted.
    """
    d = grid_distance(grid, grid.cell_of(start.x, start.y), grid.cell_of(goal.x, goal.y))
    if math.isinf(d):
        return d
    slack = math.sqrt(2.0) * grid.cell_size + goal_tol
    return max(0.0, d / OCTILE_STRETCH - slack)


def _project(pts, ax, ay):
    vals = [x * ax + y * ay for x, y in pts]
    return min(vals), max(vals)


def rect_overlaps_cell(corners, i: int, j: int, cell_size: float = 1.0) -> bool:
    """Separating-axis test: do the rectangle and cell (i, j) share interior area?"""
    eps = OVERLAP_EPS * cell_size
    x0, y0 = i * cell_size, j * cell_size
    square = [(x0, y0), (x0 + cell_size, y0), (x0 + cell_size, y0 + cell_size), (x0, y0 + cell_size)]
    (ax0, ay0), (ax1, ay1) = corners[0], corners[1]
    ex, ey = ax1 - ax0, ay1 - ay0
    n = math.hypot(ex, ey)
    axes = [(1.0, 0.0), (0.0, 1.0), (ex / n, ey / n), (-ey / n, ex / n)]
    for ax, ay in axes:
        a0, a1 = _project(corners, ax, ay)
        b0, b1 = _project(square, ax, ay)
        if min(a1, b1) - max(a0, b0) <= eps:
            return False
    return True


def exact_footprint_collision(pose: Pose, fp: Footprint, grid: OccupancyGrid) -> bool:
    """Enumerate every cell near the footprint and test each one exactly."""
    corners = footprint_corners(pose, fp)
    cs = grid.cell_size
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    for i in range(math.floor(min(xs) / cs) - 1, math.floor(max(xs) / cs) + 2):
        for j in range(math.floor(min(ys) / cs) - 1, math.floor(max(ys) / cs) + 2):
            if rect_overlaps_cell(corners, i, j, cs) and grid.is_occupied(i, j):
                return True
    return False
