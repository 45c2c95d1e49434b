"""Non-holonomic expansion models.

Two ways of producing successor poses from a pose:

* kinematic: one forward-Euler step of the bicycle model
  ``x' = v cos(theta)``, ``y' = v sin(theta)``, ``theta' = v/l tan(delta)``
  for every (v, delta) pair of a discretized control set;
* geometric: circular-arc primitives at the minimum turning radius (plus a
  straight segment), driven forward or in reverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .geometry import Footprint, Pose

HALF_PI = math.pi / 2.0


class ModelKind(str, Enum):
    KINEMATIC = "kinematic"
    GEOMETRIC = "geometric"


class Direction(str, Enum):
    FORWARD = "forward"
    REVERSE = "reverse"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.FORWARD else -1


@dataclass(frozen=True)
class VehicleSpec:
    wheelbase: float = 1.0
    v_max: float = 1.0
    delta_max: float = math.pi / 4
    footprint: Footprint = field(default_factory=lambda: Footprint(1.0, 0.5))

    def __post_init__(self):
        if not self.wheelbase > 0:
            raise ValueError(f"wheelbase must be positive, got {self.wheelbase}")
        if not self.v_max > 0:
            raise ValueError(f"v_max must be positive, got {self.v_max}")
        if not 0 < self.delta_max < HALF_PI:
            raise ValueError(f"delta_max must lie in (0, pi/2), got {self.delta_max}")

    @property
    def min_turn_radius(self) -> float:
        return self.wheelbase / math.tan(self.delta_max)


@dataclass(frozen=True)
class Control:
    """Commanded speed (sign = direction) and steering angle.

    Geometric primitives also carry the signed arc length and the turning
    radius they were built from (``radius`` is None for straight segments).
    """

    v: float
    delta: float
    arc_len: float | None = None
    radius: float | None = None

    @property
    def reverse(self) -> bool:
        return self.v < 0


@dataclass(frozen=True)
class ControlGrid:
    """Discretized control set plus step size and heading-bin count.

    ``dt`` drives the kinematic model, ``arc_len`` the geometric one; either
    left as None falls back to a default sized to about one cell.
    """

    v_samples: tuple[float, ...]
    delta_samples: tuple[float, ...]
    dt: float | None = None
    arc_len: float | None = None
    extra_radii: tuple[float, ...] = ()
    theta_bins: int = 16

    def __post_init__(self):
        object.__setattr__(self, "v_samples", tuple(sorted(float(v) for v in self.v_samples)))
        object.__setattr__(self, "delta_samples", tuple(sorted(float(d) for d in self.delta_samples)))
        object.__setattr__(self, "extra_radii", tuple(float(r) for r in self.extra_radii))
        if not self.v_samples or not self.delta_samples:
            raise ValueError("control grid needs at least one speed and one steering sample")
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.arc_len is not None and not self.arc_len > 0:
            raise ValueError(f"arc_len must be positive, got {self.arc_len}")
        if self.theta_bins < 1:
            raise ValueError("theta_bins must be >= 1")

    @classmethod
    def default(cls, spec: VehicleSpec, cell_size: float = 1.0, theta_bins: int = 16) -> "ControlGrid":
        d = spec.delta_max
        return cls(
            v_samples=(-spec.v_max, spec.v_max),
            delta_samples=(-d, -d / 2, 0.0, d / 2, d),
            dt=cell_size / spec.v_max,
            arc_len=cell_size * math.sqrt(2.0),
            theta_bins=theta_bins,
        )

    def validate(self, spec: VehicleSpec) -> None:
        tol = 1e-12
        for v in self.v_samples:
            if abs(v) > spec.v_max + tol:
                raise ValueError(f"speed sample {v} exceeds v_max {spec.v_max}")
        for d in self.delta_samples:
            if abs(d) > spec.delta_max + tol:
                raise ValueError(f"steering sample {d} exceeds delta_max {spec.delta_max}")
        for r in self.extra_radii:
            if r < spec.min_turn_radius - tol:
                raise ValueError(f"extra radius {r} is tighter than the minimum turn radius {spec.min_turn_radius}")

    def step_dt(self, spec: VehicleSpec, cell_size: float = 1.0) -> float:
        return self.dt if self.dt is not None else cell_size / spec.v_max

    def step_arc_len(self, cell_size: float = 1.0) -> float:
        return self.arc_len if self.arc_len is not None else cell_size * math.sqrt(2.0)


def kinematic_step(pose: Pose, ctrl: Control, dt: float, wheelbase: float) -> Pose:
    """One forward-Euler step of the bicycle model, all terms using the pre-step heading."""
    if not wheelbase > 0:
        raise ValueError("wheelbase must be positive")
    if not dt > 0:
        raise ValueError("dt must be positive")
    if abs(ctrl.delta) >= HALF_PI:
        raise ValueError(f"steering angle {ctrl.delta} hits the tan singularity")
    th = pose.theta
    return Pose(
        pose.x + ctrl.v * math.cos(th) * dt,
        pose.y + ctrl.v * math.sin(th) * dt,
        th + ctrl.v / wheelbase * math.tan(ctrl.delta) * dt,
    )


def geometric_step(
    pose: Pose,
    r: float,
    arc_angle: float,
    direction: Direction | str = Direction.FORWARD,
    length: float = 1.0,
) -> Pose:
    """Move along a circle of radius ``r`` through ``arc_angle`` radians.

    Positive ``arc_angle`` turns about the center on the left of the heading,
    negative about the right one.  Reverse driving applies the opposite
    rotation about the same center, so the heading change always equals the
    rotation applied to the position.  ``arc_angle == 0`` is a straight
    segment of ``length``.
    """
    if not r > 0:
        raise ValueError(f"turn radius must be positive, got {r}")
    sign = Direction(direction).sign
    th = pose.theta
    c, s = math.cos(th), math.sin(th)
    if arc_angle == 0:
        d = sign * length
        return Pose(pose.x + d * c, pose.y + d * s, th)
    side = 1.0 if arc_angle > 0 else -1.0
    cx = pose.x - side * r * s
    cy = pose.y + side * r * c
    rot = sign * arc_angle
    cr, sr = math.cos(rot), math.sin(rot)
    ox, oy = pose.x - cx, pose.y - cy
    return Pose(cx + ox * cr - oy * sr, cy + ox * sr + oy * cr, th + rot)


def neighbors_kinematic(pose: Pose, spec: VehicleSpec, cg: ControlGrid, cell_size: float = 1.0) -> list[tuple[Pose, Control]]:
    dt = cg.step_dt(spec, cell_size)
    out = []
    for v in cg.v_samples:
        for d in cg.delta_samples:
            ctrl = Control(v, d)
            out.append((kinematic_step(pose, ctrl, dt, spec.wheelbase), ctrl))
    return out


def geometric_primitives(spec: VehicleSpec, cg: ControlGrid, cell_size: float = 1.0) -> list[Control]:
    """Arc primitives, ordered reverse before forward and right, straight, left."""
    arc = cg.step_arc_len(cell_size)
    radii = (spec.min_turn_radius,) + tuple(r for r in cg.extra_radii if r != spec.min_turn_radius)
    prims = []
    for direction in (Direction.REVERSE, Direction.FORWARD):
        v = direction.sign * spec.v_max
        curved = []
        for r in radii:
            delta = math.atan(spec.wheelbase / r)
            curved.append((-delta, r))
            curved.append((delta, r))
        # right arcs (tightest first), straight, left arcs (widest first)
        rights = sorted((c for c in curved if c[0] < 0), key=lambda c: c[0])
        lefts = sorted((c for c in curved if c[0] > 0), key=lambda c: c[0])
        for delta, r in rights:
            prims.append(Control(v, delta, direction.sign * arc, r))
        prims.append(Control(v, 0.0, direction.sign * arc, None))
        for delta, r in lefts:
            prims.append(Control(v, delta, direction.sign * arc, r))
    return prims


def apply_primitive(pose: Pose, prim: Control, fraction: float = 1.0) -> Pose:
    """Pose after driving ``fraction`` of a geometric primitive."""
    direction = Direction.FORWARD if prim.v >= 0 else Direction.REVERSE
    length = abs(prim.arc_len) * fraction
    if prim.radius is None:
        return geometric_step(pose, 1.0, 0.0, direction, length)
    arc_angle = math.copysign(length / prim.radius, prim.delta)
    return geometric_step(pose, prim.radius, arc_angle, direction)


def neighbors_geometric(pose: Pose, spec: VehicleSpec, cg: ControlGrid, cell_size: float = 1.0) -> list[tuple[Pose, Control]]:
    return [(apply_primitive(pose, p), p) for p in geometric_primitives(spec, cg, cell_size)]


def neighbors(model: ModelKind | str, pose: Pose, spec: VehicleSpec, cg: ControlGrid, cell_size: float = 1.0):
    if ModelKind(model) is ModelKind.KINEMATIC:
        return neighbors_kinematic(pose, spec, cg, cell_size)
    return neighbors_geometric(pose, spec, cg, cell_size)


def motion_length(model: ModelKind | str, ctrl: Control, spec: VehicleSpec, cg: ControlGrid, cell_size: float = 1.0) -> float:
    """Path length travelled by the reference point during one step."""
    if ModelKind(model) is ModelKind.KINEMATIC:
        return abs(ctrl.v) * cg.step_dt(spec, cell_size)
    return abs(ctrl.arc_len)


def sweep(
    model: ModelKind | str,
    pose: Pose,
    ctrl: Control,
    spec: VehicleSpec,
    cg: ControlGrid,
    spacing: float,
    cell_size: float = 1.0,
) -> list[Pose]:
    """Poses along one step at arc-length spacing <= ``spacing``, end pose included, start excluded."""
    n = max(1, math.ceil(motion_length(model, ctrl, spec, cg, cell_size) / spacing - 1e-9))
    if ModelKind(model) is ModelKind.KINEMATIC:
        dt = cg.step_dt(spec, cell_size)
        return [kinematic_step(pose, ctrl, dt * (k / n), spec.wheelbase) for k in range(1, n + 1)]
    return [apply_primitive(pose, ctrl, k / n) for k in range(1, n + 1)]


def heading_change(model: ModelKind | str, ctrl: Control, spec: VehicleSpec, cg: ControlGrid, cell_size: float = 1.0) -> float:
    """Absolute heading change over one full step."""
    if ModelKind(model) is ModelKind.KINEMATIC:
        return abs(ctrl.v / spec.wheelbase * math.tan(ctrl.delta) * cg.step_dt(spec, cell_size))
    if ctrl.radius is None:
        return 0.0
    return abs(ctrl.arc_len) / ctrl.radius


def sweep_margin(
    model: ModelKind | str,
    ctrl: Control,
    spec: VehicleSpec,
    cg: ControlGrid,
    n: int,
    cell_size: float = 1.0,
) -> float:
    """Bound on how far any body point strays from the chord between two of ``n`` sweep samples.

    Each body point turns through ``d = heading_change / n`` on a circle of
    radius at most ``rho``; the arc leaves its time-linear chord by at most
    ``rho * d**2 / 8``.  Kinematic steps translate linearly, so only the
    rotation about the reference point counts (rho = footprint reach); arcs
    rotate about the turn center (rho = radius + reach).
    """
    d = heading_change(model, ctrl, spec, cg, cell_size) / n
    if d == 0:
        return 0.0
    rho = spec.footprint.reach
    if ModelKind(model) is ModelKind.GEOMETRIC:
        rho += ctrl.radius
    return rho * d * d / 8
