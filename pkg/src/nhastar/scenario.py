"""Scenario documents: the JSON file format and its conversion to planner inputs.

Angles are degrees everywhere in the document and are converted to radians
only in :meth:`Scenario.problem`.  Parsing is strict: unknown keys raise.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from importlib import resources
from pathlib import Path as FsPath

from .geometry import CollisionMode, Footprint, OccupancyGrid, Pose
from .search import CostConfig, Problem, SearchLimits
from .vehicle import ControlGrid, ModelKind, VehicleSpec
from .world import GridBuilder, RasterImportConfig, load_raster, shape_from_dict, shape_to_dict

PACKAGE_PREFIX = "package:"


class ScenarioError(ValueError):
    pass


def _strict(cls, d: dict, where: str):
    if not isinstance(d, dict):
        raise ScenarioError(f"{where}: expected an object, got {type(d).__name__}")
    names = {f.name for f in fields(cls)}
    unknown = set(d) - names
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {sorted(unknown)}")
    try:
        return cls(**d)
    except TypeError as e:
        raise ScenarioError(f"{where}: {e}") from e


@dataclass
class PoseSpec:
    x: float
    y: float
    theta_deg: float = 0.0

    def pose(self) -> Pose:
        return Pose(self.x, self.y, math.radians(self.theta_deg))


@dataclass
class VehicleDoc:
    wheelbase: float = 1.0
    length: float = 1.0
    width: float = 0.5
    v_max: float = 1.0
    delta_max_deg: float = 45.0
    ref_offset: float = 0.0

    def spec(self) -> VehicleSpec:
        return VehicleSpec(
            wheelbase=self.wheelbase,
            v_max=self.v_max,
            delta_max=math.radians(self.delta_max_deg),
            footprint=Footprint(self.length, self.width, self.ref_offset),
        )


@dataclass
class CostDoc:
    steer_weight: float = 0.5
    reverse_penalty: float = 1.0
    heading_weight: float = 1.0
    heuristic_weight: float = 1.0

    def config(self) -> CostConfig:
        return CostConfig(self.steer_weight, self.reverse_penalty, self.heading_weight, self.heuristic_weight)


@dataclass
class Discretization:
    """Any field left as None takes the default control set for the vehicle."""

    v_samples: list[float] | None = None
    delta_samples_deg: list[float] | None = None
    dt: float | None = None
    arc_len: float | None = None
    extra_radii: list[float] | None = None
    theta_bins: int = 16

    def controls(self, spec: VehicleSpec, cell_size: float) -> ControlGrid:
        base = ControlGrid.default(spec, cell_size, self.theta_bins)
        return ControlGrid(
            v_samples=tuple(self.v_samples) if self.v_samples is not None else base.v_samples,
            delta_samples=(
                tuple(math.radians(d) for d in self.delta_samples_deg)
                if self.delta_samples_deg is not None
                else base.delta_samples
            ),
            dt=self.dt if self.dt is not None else base.dt,
            arc_len=self.arc_len if self.arc_len is not None else base.arc_len,
            extra_radii=tuple(self.extra_radii or ()),
            theta_bins=self.theta_bins,
        )


@dataclass
class LimitsDoc:
    max_expansions: int = 200_000
    goal_position_tol: float | None = None
    goal_heading_tol_deg: float = 22.5

    def limits(self) -> SearchLimits:
        return SearchLimits(self.max_expansions, self.goal_position_tol, math.radians(self.goal_heading_tol_deg))


@dataclass
class BuilderMap:
    width: int
    height: int
    cell_size: float = 1.0
    shapes: list[dict] = field(default_factory=list)

    def grid(self, base_dir: FsPath | None = None) -> OccupancyGrid:
        b = GridBuilder(self.width, self.height, self.cell_size)
        for s in self.shapes:
            b.add(shape_from_dict(s))
        return b.build()

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PgmMap:
    pgm: str
    threshold: float = 0.5
    invert: bool = False
    cell_size: float = 1.0

    def read_bytes(self, base_dir: FsPath | None = None) -> bytes:
        if self.pgm.startswith(PACKAGE_PREFIX):
            return resources.files("nhastar.data").joinpath(self.pgm[len(PACKAGE_PREFIX):]).read_bytes()
        path = FsPath(self.pgm)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        return path.read_bytes()

    def grid(self, base_dir: FsPath | None = None) -> OccupancyGrid:
        return load_raster(self.read_bytes(base_dir), RasterImportConfig(self.threshold, self.invert, self.cell_size))

    def to_dict(self) -> dict:
        return asdict(self)


def builder_map(builder: GridBuilder) -> BuilderMap:
    return BuilderMap(builder.width, builder.height, builder.cell_size, [shape_to_dict(s) for s in builder.shapes])


@dataclass
class Scenario:
    name: str
    map: BuilderMap | PgmMap
    start: PoseSpec
    goal: PoseSpec
    vehicle: VehicleDoc = field(default_factory=VehicleDoc)
    model: str = "kinematic"
    costs: CostDoc = field(default_factory=CostDoc)
    discretization: Discretization = field(default_factory=Discretization)
    limits: LimitsDoc = field(default_factory=LimitsDoc)
    collision: str = "footprint"
    description: str = ""
    base_dir: FsPath | None = field(default=None, repr=False, compare=False)

    def grid(self) -> OccupancyGrid:
        return self.map.grid(self.base_dir)

    def problem(self, grid: OccupancyGrid | None = None) -> Problem:
        grid = grid if grid is not None else self.grid()
        spec = self.vehicle.spec()
        return Problem(
            start=self.start.pose(),
            goal=self.goal.pose(),
            grid=grid,
            spec=spec,
            model=ModelKind(self.model),
            controls=self.discretization.controls(spec, grid.cell_size),
            costs=self.costs.config(),
            limits=self.limits.limits(),
            collision=CollisionMode(self.collision),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "map": self.map.to_dict(),
            "start": asdict(self.start),
            "goal": asdict(self.goal),
            "vehicle": asdict(self.vehicle),
            "model": self.model,
            "costs": asdict(self.costs),
            "discretization": asdict(self.discretization),
            "limits": asdict(self.limits),
            "collision": self.collision,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict, base_dir: FsPath | None = None) -> "Scenario":
        if not isinstance(d, dict):
            raise ScenarioError("scenario must be a JSON object")
        allowed = {f.name for f in fields(cls)} - {"base_dir"}
        unknown = set(d) - allowed
        if unknown:
            raise ScenarioError(f"unknown top-level keys {sorted(unknown)}")
        for req in ("map", "start", "goal"):
            if req not in d:
                raise ScenarioError(f"missing required key {req!r}")
        m = d["map"]
        if isinstance(m, dict) and "pgm" in m:
            map_ = _strict(PgmMap, m, "map")
        else:
            map_ = _strict(BuilderMap, m, "map")
            try:
                [shape_from_dict(s) for s in map_.shapes]
            except (ValueError, TypeError) as e:
                raise ScenarioError(f"map.shapes: {e}") from e
        model = d.get("model", "kinematic")
        if model not in ("kinematic", "geometric"):
            raise ScenarioError(f"model must be 'kinematic' or 'geometric', got {model!r}")
        collision = d.get("collision", "footprint")
        if collision not in ("footprint", "midpoint"):
            raise ScenarioError(f"collision must be 'footprint' or 'midpoint', got {collision!r}")
        return cls(
            name=d.get("name", "scenario"),
            description=d.get("description", ""),
            map=map_,
            start=_strict(PoseSpec, d["start"], "start"),
            goal=_strict(PoseSpec, d["goal"], "goal"),
            vehicle=_strict(VehicleDoc, d.get("vehicle", {}), "vehicle"),
            model=model,
            costs=_strict(CostDoc, d.get("costs", {}), "costs"),
            discretization=_strict(Discretization, d.get("discretization", {}), "discretization"),
            limits=_strict(LimitsDoc, d.get("limits", {}), "limits"),
            collision=collision,
            base_dir=base_dir,
        )

    @classmethod
    def from_json(cls, text: str, base_dir: FsPath | None = None) -> "Scenario":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(f"invalid JSON: {e}") from e
        return cls.from_dict(d, base_dir)

    @classmethod
    def load(cls, path: str | FsPath) -> "Scenario":
        path = FsPath(path)
        return cls.from_json(path.read_text(), base_dir=path.parent)
