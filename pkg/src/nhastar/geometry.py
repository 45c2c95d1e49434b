"""Planar geometry: poses, angle arithmetic, rectangular footprints and
footprint-vs-occupancy-grid collision tests.

Grid convention: cell (i, j) covers ``[i*cs, (i+1)*cs) x [j*cs, (j+1)*cs)``
with ``i`` the column (x) and ``j`` the row (y), y pointing up.  Anything
outside ``[0, W*cs) x [0, H*cs)`` is occupied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

import numpy as np

TWO_PI = 2.0 * math.pi

# Overlaps thinner than this (in cells) are treated as touching, not colliding.
OVERLAP_EPS = 1e-9


def normalize_angle(theta: float) -> float:
    """Wrap ``theta`` into (-pi, pi]."""
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta!r}")
    r = math.fmod(theta, TWO_PI)
    if r > math.pi:
        r -= TWO_PI
    elif r <= -math.pi:
        r += TWO_PI
    # fmod can land one ulp past -pi after the shift above
    if r <= -math.pi:
        r = math.pi
    return r


def angle_diff(a: float, b: float) -> float:
    """Shortest signed rotation taking heading ``b`` to heading ``a``."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("angles must be finite")
    return normalize_angle(a - b)


@dataclass(frozen=True)
class Pose:
    """Continuous vehicle configuration; ``theta`` is kept in (-pi, pi]."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"pose position must be finite, got ({self.x}, {self.y})")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.theta)

    def distance_to(self, other: "Pose") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Footprint:
    """Rectangular vehicle body.

    ``ref_offset`` is the signed distance, along the heading, from the pose
    reference point to the rectangle center.
    """

    length: float
    width: float
    ref_offset: float = 0.0

    def __post_init__(self):
        if not (self.length > 0 and self.width > 0):
            raise ValueError(f"footprint needs positive length and width, got {self.length} x {self.width}")
        if not math.isfinite(self.ref_offset):
            raise ValueError("ref_offset must be finite")

    @property
    def reach(self) -> float:
        """Largest distance from the pose reference point to a corner."""
        return math.hypot(abs(self.ref_offset) + self.length / 2, self.width / 2)


def footprint_corners(pose: Pose, fp: Footprint) -> list[tuple[float, float]]:
    """Corners in order front-left, front-right, rear-right, rear-left."""
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    cx = pose.x + fp.ref_offset * c
    cy = pose.y + fp.ref_offset * s
    hl, hw = fp.length / 2.0, fp.width / 2.0
    local = ((hl, hw), (hl, -hw), (-hl, -hw), (-hl, hw))
    return [(cx + u * c - v * s, cy + u * s + v * c) for u, v in local]


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """Immutable binary map.  ``occupied[j, i]`` is row ``j`` (y), column ``i`` (x)."""

    occupied: np.ndarray
    cell_size: float = 1.0
    _rows: tuple = field(init=False, repr=False)
    _sat: tuple = field(init=False, repr=False)

    def __post_init__(self):
        occ = np.array(self.occupied, dtype=bool, copy=True)
        if occ.ndim != 2 or occ.shape[0] < 1 or occ.shape[1] < 1:
            raise ValueError(f"occupancy must be a non-empty 2D array, got shape {occ.shape}")
        if not (self.cell_size > 0 and math.isfinite(self.cell_size)):
            raise ValueError(f"cell_size must be positive, got {self.cell_size}")
        occ.flags.writeable = False
        object.__setattr__(self, "occupied", occ)
        object.__setattr__(self, "cell_size", float(self.cell_size))
        # plain tuples are much faster than numpy scalar indexing in the inner loop
        object.__setattr__(self, "_rows", tuple(tuple(bool(v) for v in row) for row in occ))
        sat = np.zeros((occ.shape[0] + 1, occ.shape[1] + 1), dtype=np.int64)
        sat[1:, 1:] = occ.cumsum(0).cumsum(1)
        object.__setattr__(self, "_sat", tuple(tuple(int(v) for v in row) for row in sat))

    @classmethod
    def empty(cls, width_cells: int, height_cells: int, cell_size: float = 1.0) -> "OccupancyGrid":
        return cls(np.zeros((height_cells, width_cells), dtype=bool), cell_size)

    @property
    def width_cells(self) -> int:
        return self.occupied.shape[1]

    @property
    def height_cells(self) -> int:
        return self.occupied.shape[0]

    @property
    def extent(self) -> tuple[float, float]:
        return (self.width_cells * self.cell_size, self.height_cells * self.cell_size)

    def in_bounds(self, i: int, j: int) -> bool:
        return 0 <= i < self.width_cells and 0 <= j < self.height_cells

    def is_occupied(self, i: int, j: int) -> bool:
        """Occupancy of cell (i, j); out-of-bounds cells count as occupied."""
        if 0 <= i < self.width_cells and 0 <= j < self.height_cells:
            return self._rows[j][i]
        return True

    def block_free(self, i0: int, j0: int, i1: int, j1: int) -> bool:
        """True if every cell with i0 <= i <= i1 and j0 <= j <= j1 is in bounds and free."""
        if i0 < 0 or j0 < 0 or i1 >= self.width_cells or j1 >= self.height_cells:
            return False
        s = self._sat
        return s[j1 + 1][i1 + 1] - s[j0][i1 + 1] - s[j1 + 1][i0] + s[j0][i0] == 0

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        return (math.floor(x / self.cell_size), math.floor(y / self.cell_size))

    def point_occupied(self, x: float, y: float) -> bool:
        return self.is_occupied(*self.cell_of(x, y))

    def occupied_count(self) -> int:
        return int(self.occupied.sum())

    def occupied_cells(self) -> Iterator[tuple[int, int]]:
        for j, i in zip(*np.nonzero(self.occupied)):
            yield (int(i), int(j))

    def __eq__(self, other):
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return self.cell_size == other.cell_size and np.array_equal(self.occupied, other.occupied)

    __hash__ = None


class CollisionMode(str, Enum):
    FOOTPRINT = "footprint"
    MIDPOINT = "midpoint"


def _slab_x_range(pts, ylo: float, yhi: float) -> tuple[float, float] | None:
    """x-extent of a convex polygon restricted to ylo <= y <= yhi."""
    xs = []
    n = len(pts)
    for k in range(n):
        x1, y1 = pts[k]
        x2, y2 = pts[(k + 1) % n]
        if ylo <= y1 <= yhi:
            xs.append(x1)
        if y1 != y2:
            for yc in (ylo, yhi):
                if min(y1, y2) < yc < max(y1, y2):
                    xs.append(x1 + (yc - y1) * (x2 - x1) / (y2 - y1))
    if not xs:
        return None
    return min(xs), max(xs)


def polygon_cells(pts: list[tuple[float, float]], cell_size: float = 1.0) -> list[tuple[int, int]]:
    """Cells whose interior overlaps the convex polygon ``pts`` with positive area.

    Scanline rasterization: each row band is intersected with the polygon and
    every column within the resulting x-extent is reported.  Exact for convex
    polygons, unbounded grid (callers check bounds).
    """
    eps = OVERLAP_EPS * cell_size
    ys = [p[1] for p in pts]
    ymin, ymax = min(ys), max(ys)
    cells = []
    j0 = math.floor((ymin + eps) / cell_size)
    j1 = math.ceil((ymax - eps) / cell_size)
    for j in range(j0, j1):
        span = _slab_x_range(pts, max(j * cell_size, ymin), min((j + 1) * cell_size, ymax))
        if span is None:
            continue
        xmin, xmax = span
        for i in range(math.floor((xmin + eps) / cell_size), math.ceil((xmax - eps) / cell_size)):
            cells.append((i, j))
    return cells


def footprint_cells(pose: Pose, fp: Footprint, cell_size: float = 1.0) -> list[tuple[int, int]]:
    return polygon_cells(footprint_corners(pose, fp), cell_size)


def pose_in_collision(
    pose: Pose,
    fp: Footprint,
    grid: OccupancyGrid,
    mode: CollisionMode | str = CollisionMode.FOOTPRINT,
) -> bool:
    """True if the vehicle at ``pose`` touches an occupied or out-of-bounds cell.

    ``midpoint`` checks only the cell holding the pose reference point.
    ``footprint`` checks every cell the rectangle overlaps with positive area.
    """
    mode = CollisionMode(mode)
    if mode is CollisionMode.MIDPOINT:
        return grid.point_occupied(pose.x, pose.y)
    return any(grid.is_occupied(i, j) for i, j in footprint_cells(pose, fp, grid.cell_size))


def convex_hull(points: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    """Counter-clockwise hull by monotone chain; collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def inflate(fp: Footprint, margin: float) -> Footprint:
    if margin < 0:
        raise ValueError("margin must be >= 0")
    return Footprint(fp.length + 2 * margin, fp.width + 2 * margin, fp.ref_offset)


def motion_cells(a: Pose, b: Pose, fp: Footprint, cell_size: float = 1.0, margin: float = 0.0) -> list[tuple[int, int]]:
    """Cells overlapped by the hull of the footprints at ``a`` and ``b``.

    For a pure translation the hull is exactly the swept area.  When the body
    also rotates, every body point strays from the straight segment between
    its end positions by a bounded amount; callers pass that bound as
    ``margin`` so the hull still covers the sweep.
    """
    fp = inflate(fp, margin) if margin else fp
    return polygon_cells(convex_hull(footprint_corners(a, fp) + footprint_corners(b, fp)), cell_size)


def motion_in_collision(a: Pose, b: Pose, fp: Footprint, grid: OccupancyGrid, margin: float = 0.0) -> bool:
    fp = inflate(fp, margin) if margin else fp
    pts = footprint_corners(a, fp) + footprint_corners(b, fp)
    cs = grid.cell_size
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    # cheap accept: the whole bounding box is free
    if grid.block_free(
        math.floor(min(xs) / cs), math.floor(min(ys) / cs), math.floor(max(xs) / cs), math.floor(max(ys) / cs)
    ):
        return False
    return any(grid.is_occupied(i, j) for i, j in polygon_cells(convex_hull(pts), cs))


def poses_in_collision(poses: Iterable[Pose], fp: Footprint, grid: OccupancyGrid, mode=CollisionMode.FOOTPRINT) -> list[int]:
    """Indices of poses that collide."""
    return [k for k, p in enumerate(poses) if pose_in_collision(p, fp, grid, mode)]
