"""JSON run configuration for the command-line front end.

Schema (keys not listed here are rejected)::

    {
      "k": 5.0,
      "scatterer": {
        "kind": "sphere" | "ball" | "box" | "union" | "voxel",
        "method": "born" | "ls",              # potentials only, default "born"
        "q0": 1.0,                            # potentials only, default 1.0
        "center": [0, 0, 0], "radius": 1.0,   # sphere, ball
        "lower": [0, 0, 0], "sides": [1, 1, 1],   # box
        "balls": [{"center": [...], "radius": r}, ...],   # union
        "profile": {"kind": "gaussian", "width": 0.5},    # optional, ball only
        "grid_file": "q.grid"                 # voxel, relative to the config file
      },
      "alpha": [0.6, 0.8, 0.0],
      "directions": [{"w": [1, 0, 0], "v": [0, 1, 0]}, ...],
      "sweep": {"count": 8, "plane_normal": [0, 0, 1], "start": [1, 0, 0]},
      "b_grid": {"min": 8, "max": 24, "count": 12, "spacing": "linear" | "log"}
                or {"values": [8, 10, 12]},
      "solver": {"grid_size": 24, "tol": 1e-8},
      "output": {"dir": "out"}
    }

``directions`` is needed by ``ladder``, ``estimate`` and ``oracle``;
``sweep`` by ``sweep``.  Without ``b_grid`` the default grid of
:func:`scatsize.estimator.default_b_grid` is used.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import ConfigError, ScatsizeError
from ..estimator import PotentialModel, default_b_grid
from ..forward_obstacle import SphereObstacle
from ..forward_potential import AnalyticPotential, GaussianProfile
from ..geometry import AxisBox, Ball, RealDirection, UnionOfBalls, VarietyDirection, bounding_box
from .gridfile import read_grid

SCATTERER_KINDS = ("sphere", "ball", "box", "union", "voxel")


def _check_keys(section: dict, allowed: set, where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    extra = set(section) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(extra))}")


def _vector(value, where: str) -> tuple:
    try:
        vec = tuple(float(x) for x in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where} must be a list of three numbers") from exc
    if len(vec) != 3:
        raise ConfigError(f"{where} must have three components")
    return vec


def _direction(value, where: str) -> RealDirection:
    try:
        return RealDirection(*_vector(value, where))
    except ScatsizeError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _number(section: dict, key: str, where: str, default=None, kind=float):
    if key not in section:
        if default is None:
            raise ConfigError(f"missing '{key}' in {where}")
        return default
    try:
        return kind(section[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{key}' in {where} must be a number") from exc


@dataclass(frozen=True)
class ScattererConfig:
    kind: str
    method: str = "born"
    q0: float = 1.0
    center: tuple = (0.0, 0.0, 0.0)
    radius: Optional[float] = None
    lower: Optional[tuple] = None
    sides: Optional[tuple] = None
    balls: tuple = ()
    profile_width: Optional[float] = None
    grid_file: Optional[str] = None

    @classmethod
    def from_dict(cls, d: dict) -> "ScattererConfig":
        _check_keys(d, {"kind", "method", "q0", "center", "radius", "lower", "sides",
                        "balls", "profile", "grid_file"}, "scatterer")
        kind = d.get("kind")
        if kind not in SCATTERER_KINDS:
            raise ConfigError(f"scatterer kind must be one of {SCATTERER_KINDS}, got {kind!r}")
        method = d.get("method", "born")
        if method not in ("born", "ls"):
            raise ConfigError(f"scatterer method must be 'born' or 'ls', got {method!r}")
        kw = dict(kind=kind, method=method, q0=_number(d, "q0", "scatterer", 1.0))
        if kind in ("sphere", "ball"):
            kw["center"] = _vector(d.get("center", (0, 0, 0)), "scatterer.center")
            kw["radius"] = _number(d, "radius", "scatterer")
        elif kind == "box":
            kw["lower"] = _vector(d.get("lower", (0, 0, 0)), "scatterer.lower")
            if "sides" not in d:
                raise ConfigError("missing 'sides' in scatterer")
            kw["sides"] = _vector(d["sides"], "scatterer.sides")
        elif kind == "union":
            balls = d.get("balls")
            if not isinstance(balls, list) or not balls:
                raise ConfigError("union scatterer needs a non-empty 'balls' list")
            parsed = []
            for i, ball in enumerate(balls):
                _check_keys(ball, {"center", "radius"}, f"scatterer.balls[{i}]")
                parsed.append((_vector(ball.get("center"), f"scatterer.balls[{i}].center"),
                               _number(ball, "radius", f"scatterer.balls[{i}]")))
            kw["balls"] = tuple(parsed)
        else:
            if not isinstance(d.get("grid_file"), str):
                raise ConfigError("voxel scatterer needs a 'grid_file' path")
            kw["grid_file"] = d["grid_file"]
        if "profile" in d:
            prof = d["profile"]
            _check_keys(prof, {"kind", "width"}, "scatterer.profile")
            if prof.get("kind", "gaussian") != "gaussian":
                raise ConfigError("only the 'gaussian' radial profile is available")
            if kind != "ball":
                raise ConfigError("radial profiles apply to 'ball' scatterers only")
            kw["profile_width"] = _number(prof, "width", "scatterer.profile", 0.5)
        return cls(**kw)

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind != "sphere":
            d["method"] = self.method
            d["q0"] = self.q0
        if self.kind in ("sphere", "ball"):
            d["center"] = list(self.center)
            d["radius"] = self.radius
        elif self.kind == "box":
            d["lower"] = list(self.lower)
            d["sides"] = list(self.sides)
        elif self.kind == "union":
            d["balls"] = [{"center": list(c), "radius": r} for c, r in self.balls]
        else:
            d["grid_file"] = self.grid_file
        if self.profile_width is not None:
            d["profile"] = {"kind": "gaussian", "width": self.profile_width}
        return d

    def shape(self):
        """Analytic geometry, or None for voxel data."""
        if self.kind in ("sphere", "ball"):
            return Ball(self.center, self.radius)
        if self.kind == "box":
            return AxisBox(self.lower, self.sides)
        if self.kind == "union":
            return UnionOfBalls(tuple(Ball(c, r) for c, r in self.balls))
        return None


@dataclass(frozen=True)
class BGridConfig:
    min: Optional[float] = None
    max: Optional[float] = None
    count: int = 12
    spacing: str = "log"
    values: Optional[tuple] = None

    @classmethod
    def from_dict(cls, d: dict) -> "BGridConfig":
        _check_keys(d, {"min", "max", "count", "spacing", "values"}, "b_grid")
        if not d:
            return cls()
        if "values" in d:
            if set(d) != {"values"}:
                raise ConfigError("b_grid 'values' cannot be combined with min/max/count")
            try:
                vals = tuple(float(x) for x in d["values"])
            except (TypeError, ValueError) as exc:
                raise ConfigError("b_grid values must be numbers") from exc
            cfg = cls(values=vals, count=len(vals), spacing="explicit")
        else:
            spacing = d.get("spacing", "log")
            if spacing not in ("linear", "log"):
                raise ConfigError(f"b_grid spacing must be 'linear' or 'log', got {spacing!r}")
            cfg = cls(_number(d, "min", "b_grid"), _number(d, "max", "b_grid"),
                      _number(d, "count", "b_grid", 12, int), spacing)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.values is not None:
            b = np.asarray(self.values)
            if b.size < 3:
                raise ConfigError("b_grid needs at least 3 values")
            if not np.all(np.isfinite(b)) or np.any(b <= 0):
                raise ConfigError("b_grid values must be positive")
            if np.any(np.diff(b) <= 0):
                raise ConfigError("b_grid values must be strictly increasing")
            return
        if self.min is None:
            return
        if not (self.max > self.min > 0):
            raise ConfigError(f"b_grid needs max > min > 0, got min={self.min}, max={self.max}")
        if self.count < 3:
            raise ConfigError(f"b_grid count must be at least 3, got {self.count}")

    def grid(self, k: float, scale: float | None) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.min is None:
            return default_b_grid(k, scale, self.count)
        if self.spacing == "linear":
            return np.linspace(self.min, self.max, self.count)
        return np.geomspace(self.min, self.max, self.count)

    def to_dict(self) -> dict:
        if self.values is not None:
            return {"values": list(self.values)}
        if self.min is None:
            return {}
        return {"min": self.min, "max": self.max, "count": self.count, "spacing": self.spacing}


@dataclass(frozen=True)
class SweepConfig:
    count: int
    plane_normal: RealDirection
    start: Optional[RealDirection] = None

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        _check_keys(d, {"count", "plane_normal", "start"}, "sweep")
        count = _number(d, "count", "sweep", kind=int)
        if count < 1:
            raise ConfigError("sweep count must be at least 1")
        normal = _direction(d.get("plane_normal", (0, 0, 1)), "sweep.plane_normal")
        start = _direction(d["start"], "sweep.start") if "start" in d else None
        if start is not None and abs(start.dot(normal)) > 1e-10:
            raise ConfigError("sweep.start must be orthogonal to sweep.plane_normal")
        return cls(count, normal, start)

    def to_dict(self) -> dict:
        d = {"count": self.count, "plane_normal": list(self.plane_normal)}
        if self.start is not None:
            d["start"] = list(self.start)
        return d


@dataclass(frozen=True)
class RunConfig:
    k: float
    scatterer: ScattererConfig
    alpha: RealDirection
    directions: tuple = ()
    sweep: Optional[SweepConfig] = None
    b_grid: BGridConfig = field(default_factory=BGridConfig)
    grid_size: int = 24
    tol: float = 1e-8
    output_dir: Optional[str] = None
    base_dir: str = field(default=".", compare=False)

    @classmethod
    def from_dict(cls, d: dict, base_dir: str = ".") -> "RunConfig":
        _check_keys(d, {"k", "scatterer", "alpha", "directions", "sweep", "b_grid",
                        "solver", "output"}, "config")
        k = _number(d, "k", "config")
        if not k > 0:
            raise ConfigError(f"k must be positive, got {k}")
        if "scatterer" not in d:
            raise ConfigError("missing 'scatterer' section")
        scatterer = ScattererConfig.from_dict(d["scatterer"])
        alpha = _direction(d.get("alpha", (0.6, 0.8, 0.0)), "alpha")
        pairs = []
        for i, pair in enumerate(d.get("directions", [])):
            _check_keys(pair, {"w", "v"}, f"directions[{i}]")
            if "w" not in pair or "v" not in pair:
                raise ConfigError(f"directions[{i}] needs both 'w' and 'v'")
            w = _direction(pair["w"], f"directions[{i}].w")
            v = _direction(pair["v"], f"directions[{i}].v")
            try:
                VarietyDirection(w, v, 0.0)
            except ScatsizeError as exc:
                raise ConfigError(f"directions[{i}]: {exc}") from exc
            pairs.append((w, v))
        sweep = SweepConfig.from_dict(d["sweep"]) if "sweep" in d else None
        b_grid = BGridConfig.from_dict(d.get("b_grid", {}))
        solver = d.get("solver", {})
        _check_keys(solver, {"grid_size", "tol"}, "solver")
        grid_size = _number(solver, "grid_size", "solver", 24, int)
        tol = _number(solver, "tol", "solver", 1e-8)
        if grid_size < 8 or not tol > 0:
            raise ConfigError("solver needs grid_size >= 8 and tol > 0")
        output = d.get("output", {})
        _check_keys(output, {"dir"}, "output")
        return cls(k, scatterer, alpha, tuple(pairs), sweep, b_grid, grid_size, tol,
                   output.get("dir"), base_dir)

    @classmethod
    def load(cls, path) -> "RunConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data, str(path.parent))

    def to_dict(self) -> dict:
        d = {"k": self.k, "scatterer": self.scatterer.to_dict(), "alpha": list(self.alpha)}
        if self.directions:
            d["directions"] = [{"w": list(w), "v": list(v)} for w, v in self.directions]
        if self.sweep is not None:
            d["sweep"] = self.sweep.to_dict()
        grid = self.b_grid.to_dict()
        if grid:
            d["b_grid"] = grid
        d["solver"] = {"grid_size": self.grid_size, "tol": self.tol}
        if self.output_dir is not None:
            d["output"] = {"dir": self.output_dir}
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    # -- model construction ------------------------------------------------

    def build_model(self):
        """Scatterer model ready for the estimator (reads the grid file if any)."""
        sc = self.scatterer
        try:
            if sc.kind == "sphere":
                return SphereObstacle(sc.radius, self.k, sc.center)
            if sc.kind == "voxel":
                path = Path(sc.grid_file)
                if not path.is_absolute():
                    path = Path(self.base_dir) / path
                potential = read_grid(path)
            else:
                profile = GaussianProfile(sc.profile_width) if sc.profile_width else None
                potential = AnalyticPotential(sc.shape(), sc.q0, profile)
            return PotentialModel(potential, sc.method, self.grid_size, self.tol)
        except ConfigError:
            raise
        except ScatsizeError as exc:
            raise ConfigError(f"scatterer: {exc}") from exc

    def b_values(self) -> np.ndarray:
        shape = self.scatterer.shape()
        scale = None
        if shape is not None:
            lo, hi = bounding_box(shape)
            scale = float(np.max(np.abs(np.concatenate([lo, hi]))))
        return self.b_grid.grid(self.k, scale)
