import math

import pytest
from hypothesis import given, settings, strategies as st

from nhastar.geometry import Footprint, Pose, angle_diff
from nhastar.vehicle import (
    Control,
    ControlGrid,
    Direction,
    ModelKind,
    VehicleSpec,
    apply_primitive,
    geometric_primitives,
    geometric_step,
    kinematic_step,
    neighbors,
    neighbors_geometric,
    neighbors_kinematic,
    sweep,
)

coords = st.floats(-100, 100)
angles = st.floats(-math.pi, math.pi)
poses = st.builds(Pose, coords, coords, angles)


def euler_by_hand(x, y, th, v, d, dt, l):
    return x + v * math.cos(th) * dt, y + v * math.sin(th) * dt, th + v / l * math.tan(d) * dt


def test_kinematic_straight():
    p = kinematic_step(Pose(0, 0, 0), Control(1, 0), 0.5, 1)
    assert p.as_tuple() == (0.5, 0.0, 0.0)


def test_kinematic_turning_example():
    p = kinematic_step(Pose(0, 0, 0), Control(1, math.pi / 4), 0.1, 1)
    assert p.as_tuple() == pytest.approx(euler_by_hand(0, 0, 0, 1, math.pi / 4, 0.1, 1))
    assert p.as_tuple() == pytest.approx((0.1, 0.0, 0.1))


@given(poses, st.floats(-0.5, 0.5))
def test_kinematic_zero_speed_fixed_point(pose, d):
    assert kinematic_step(pose, Control(0, d), 1.0, 1.0) == pose


@given(poses, st.floats(-3, 3), st.floats(0.01, 2))
def test_kinematic_straight_keeps_heading_exactly(pose, v, dt):
    assert kinematic_step(pose, Control(v, 0.0), dt, 2.0).theta == pose.theta


@given(poses, st.floats(-3, 3), st.floats(-1.5, 1.5), st.floats(0.01, 2), st.floats(0.1, 5))
def test_kinematic_uses_pre_step_heading(pose, v, d, dt, l):
    p = kinematic_step(pose, Control(v, d), dt, l)
    x, y, th = euler_by_hand(pose.x, pose.y, pose.theta, v, d, dt, l)
    assert (p.x, p.y) == pytest.approx((x, y), abs=1e-9)
    assert abs(angle_diff(p.theta, th)) < 1e-9
    assert math.hypot(p.x - pose.x, p.y - pose.y) <= abs(v) * dt + 1e-9


def test_kinematic_rejects_bad_input():
    with pytest.raises(ValueError):
        kinematic_step(Pose(0, 0, 0), Control(1, math.pi / 2), 1, 1)
    with pytest.raises(ValueError):
        kinematic_step(Pose(0, 0, 0), Control(1, 0), 0, 1)
    with pytest.raises(ValueError):
        kinematic_step(Pose(0, 0, 0), Control(1, 0), 1, 0)


def test_geometric_quarter_left():
    p = geometric_step(Pose(0, 0, 0), 1.0, math.pi / 2, Direction.FORWARD)
    assert p.as_tuple() == pytest.approx((1.0, 1.0, math.pi / 2))


def test_geometric_straight():
    assert geometric_step(Pose(0, 0, 0), 1.0, 0.0, "forward", length=1.0).as_tuple() == (1.0, 0.0, 0.0)
    assert geometric_step(Pose(0, 0, 0), 1.0, 0.0, "reverse", length=2.0).as_tuple() == (-2.0, 0.0, 0.0)


def test_geometric_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        geometric_step(Pose(0, 0, 0), 0.0, 0.5)


@given(poses, st.floats(0.2, 10))
def test_geometric_full_circle_identity(pose, r):
    p = geometric_step(pose, r, 2 * math.pi)
    assert (p.x, p.y) == pytest.approx((pose.x, pose.y), abs=1e-9)
    assert abs(angle_diff(p.theta, pose.theta)) < 1e-9


@given(poses, st.floats(0.2, 10), st.floats(-3, 3).filter(lambda a: abs(a) > 1e-6), st.sampled_from(list(Direction)))
def test_geometric_preserves_center_distance(pose, r, arc, direction):
    side = 1.0 if arc > 0 else -1.0
    cx = pose.x - side * r * math.sin(pose.theta)
    cy = pose.y + side * r * math.cos(pose.theta)
    p = geometric_step(pose, r, arc, direction)
    assert math.hypot(p.x - cx, p.y - cy) == pytest.approx(r, rel=1e-9)
    # heading turns by exactly the rotation applied to the position
    rot = math.atan2(p.y - cy, p.x - cx) - math.atan2(pose.y - cy, pose.x - cx)
    assert abs(angle_diff(p.theta - pose.theta, rot)) < 1e-7


@given(poses, st.floats(0.2, 10), st.floats(-3, 3))
def test_geometric_reverse_undoes_forward(pose, r, arc):
    fwd = geometric_step(pose, r, arc, Direction.FORWARD, length=1.3)
    back = geometric_step(fwd, r, arc, Direction.REVERSE, length=1.3)
    assert (back.x, back.y) == pytest.approx((pose.x, pose.y), abs=1e-9)
    assert abs(angle_diff(back.theta, pose.theta)) < 1e-9


@given(poses, st.floats(0.2, 10), st.floats(-3, 3).filter(bool))
def test_geometric_chord_within_arc(pose, r, arc):
    p = geometric_step(pose, r, arc)
    assert math.hypot(p.x - pose.x, p.y - pose.y) <= r * abs(arc) + 1e-9


def test_control_grid_validation():
    spec = VehicleSpec()
    with pytest.raises(ValueError):
        ControlGrid((2.0,), (0.0,)).validate(spec)
    with pytest.raises(ValueError):
        ControlGrid((1.0,), (1.0,)).validate(spec)
    with pytest.raises(ValueError):
        ControlGrid((), (0.0,))
    with pytest.raises(ValueError):
        VehicleSpec(delta_max=math.pi / 2)


def test_min_turn_radius():
    assert VehicleSpec(wheelbase=2.0, delta_max=math.pi / 4).min_turn_radius == pytest.approx(2.0)


def test_kinematic_neighbor_count_and_order():
    spec = VehicleSpec()
    cg = ControlGrid((1.0, -1.0), (spec.delta_max, 0.0, -spec.delta_max), dt=1.0)
    out = neighbors_kinematic(Pose(0, 0, 0), spec, cg)
    assert len(out) == 6
    assert [(c.v, c.delta) for _, c in out] == [
        (v, d) for v in (-1.0, 1.0) for d in (-spec.delta_max, 0.0, spec.delta_max)
    ]


def test_kinematic_single_neighbor():
    out = neighbors_kinematic(Pose(0, 0, 0), VehicleSpec(), ControlGrid((1.0,), (0.0,), dt=1.0))
    assert [(p.as_tuple(), (c.v, c.delta)) for p, c in out] == [((1.0, 0.0, 0.0), (1.0, 0.0))]


@given(st.floats(-0.7, 0.7), st.sampled_from([-1.0, 1.0]))
def test_kinematic_neighbors_mirror(d, v):
    spec = VehicleSpec()
    cg = ControlGrid((v,), (-d, d), dt=1.0)
    (a, _), (b, _) = neighbors_kinematic(Pose(0, 0, 0), spec, cg)
    assert (a.x, a.y, a.theta) == pytest.approx((b.x, -b.y, -b.theta), abs=1e-12)


def test_default_grid_branching():
    spec = VehicleSpec()
    cg = ControlGrid.default(spec)
    assert len(neighbors_kinematic(Pose(0, 0, 0), spec, cg)) == 10
    assert len(neighbors_geometric(Pose(0, 0, 0), spec, cg)) == 6


def test_geometric_primitive_annotations():
    spec = VehicleSpec(wheelbase=2.0, delta_max=math.pi / 4)
    prims = geometric_primitives(spec, ControlGrid.default(spec))
    assert [c.v for c in prims] == [-1.0] * 3 + [1.0] * 3
    assert [math.copysign(1, c.delta) if c.delta else 0 for c in prims] == [-1, 0, 1, -1, 0, 1]
    for c in prims:
        assert abs(c.arc_len) == pytest.approx(math.sqrt(2))
        assert math.copysign(1, c.arc_len) == math.copysign(1, c.v)
        if c.radius is not None:
            assert abs(c.delta) == pytest.approx(math.atan(spec.wheelbase / c.radius))


def test_geometric_straight_successor():
    spec = VehicleSpec()
    cg = ControlGrid.default(spec, 1.0)
    cg = ControlGrid(cg.v_samples, cg.delta_samples, arc_len=1.0)
    straight = [p for p, c in neighbors_geometric(Pose(0, 0, 0), spec, cg) if c.v > 0 and c.radius is None]
    assert straight[0].as_tuple() == (1.0, 0.0, 0.0)


@given(poses)
def test_left_then_right_restores_heading(pose):
    spec = VehicleSpec()
    prims = geometric_primitives(spec, ControlGrid.default(spec))
    left = next(c for c in prims if c.v > 0 and c.delta > 0)
    right = next(c for c in prims if c.v > 0 and c.delta < 0)
    p = apply_primitive(apply_primitive(pose, left), right)
    assert abs(angle_diff(p.theta, pose.theta)) < 1e-9


def test_extra_radii_add_primitives():
    spec = VehicleSpec()
    cg = ControlGrid((1.0,), (0.0,), extra_radii=(3.0,))
    assert len(neighbors_geometric(Pose(0, 0, 0), spec, cg)) == 10
    with pytest.raises(ValueError):
        ControlGrid((1.0,), (0.0,), extra_radii=(0.1,)).validate(spec)


@given(poses, st.sampled_from(list(ModelKind)))
def test_neighbors_deterministic(pose, model):
    spec = VehicleSpec(footprint=Footprint(2, 1))
    cg = ControlGrid.default(spec)
    assert neighbors(model, pose, spec, cg) == neighbors(model, pose, spec, cg)


@settings(max_examples=50)
@given(poses, st.sampled_from(list(ModelKind)), st.sampled_from([0.2, 0.5, 1.0]))
def test_sweep_spacing_and_endpoint(pose, model, spacing):
    spec = VehicleSpec()
    cg = ControlGrid.default(spec)
    for end, ctrl in neighbors(model, pose, spec, cg):
        pts = sweep(model, pose, ctrl, spec, cg, spacing)
        assert pts[-1].as_tuple() == pytest.approx(end.as_tuple(), abs=1e-12)
        prev = pose
        for p in pts:
            assert math.hypot(p.x - prev.x, p.y - prev.y) <= spacing + 1e-9
            prev = p
