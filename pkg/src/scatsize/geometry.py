"""Direction algebra, scatterer shapes and their exact support functions.

Complex observation directions live on the quadric ``z . z = 1`` (bilinear
product, no conjugation).  They are parametrised as

    beta = a * w + i * b * v,   a = sqrt(1 + b**2),

with ``w`` and ``v`` orthonormal real vectors.  The support function
``h(v) = sup_{y in D} v . y`` of each shape is available in closed form and
is the ground truth every estimate is compared against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import GeometryError, NegativeB, NonOrthogonal, NonUnit

TOL = 1e-10


@dataclass(frozen=True)
class RealDirection:
    """A real unit vector (incident direction, or an axis of a complex direction)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - 1.0) > TOL:
            raise NonUnit(f"direction norm {norm!r} deviates from 1 by more than {TOL}")

    @classmethod
    def normalized(cls, vec: Sequence[float]) -> "RealDirection":
        arr = np.asarray(vec, dtype=float)
        norm = np.linalg.norm(arr)
        if arr.shape != (3,) or not np.isfinite(norm) or norm == 0.0:
            raise NonUnit(f"cannot normalise {vec!r}")
        arr = arr / norm
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))

    @classmethod
    def from_spherical(cls, theta: float, phi: float) -> "RealDirection":
        st = math.sin(theta)
        return cls.normalized([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other) -> float:
        return float(np.dot(self.array, _as_array(other)))

    def __neg__(self) -> "RealDirection":
        return RealDirection(-self.x, -self.y, -self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))


E1 = RealDirection(1.0, 0.0, 0.0)
E2 = RealDirection(0.0, 1.0, 0.0)
E3 = RealDirection(0.0, 0.0, 1.0)


def _as_array(vec) -> np.ndarray:
    if isinstance(vec, RealDirection):
        return vec.array
    return np.asarray(vec, dtype=float)


@dataclass(frozen=True)
class VarietyDirection:
    """Complex direction ``a w + i b v`` with ``a**2 - b**2 = 1``.

    ``a`` is always recomputed from ``b``; it is never stored.
    """

    w: RealDirection
    v: RealDirection
    b: float

    def __post_init__(self):
        if self.b < 0:
            raise NegativeB(f"continuation parameter b={self.b!r} must be >= 0")
        if not math.isfinite(self.b):
            raise GeometryError("continuation parameter must be finite")
        d = self.w.dot(self.v)
        if abs(d) > TOL:
            raise NonOrthogonal(f"|w . v| = {abs(d):.3e} exceeds {TOL}")

    @property
    def a(self) -> float:
        return math.sqrt(1.0 + self.b * self.b)

    @property
    def vector(self) -> np.ndarray:
        """The complex 3-vector beta."""
        return self.a * self.w.array + 1j * self.b * self.v.array

    def dot(self, vec) -> complex:
        """Bilinear product ``beta . vec`` with a real or complex vector."""
        vec = np.asarray(vec.array if isinstance(vec, RealDirection) else vec)
        return complex(np.dot(self.vector, vec))

    def self_dot(self) -> complex:
        beta = self.vector
        return complex(np.sum(beta * beta))


def make_variety_direction(w: RealDirection, v: RealDirection, b: float) -> VarietyDirection:
    return VarietyDirection(w, v, float(b))


def real_direction(beta_real: RealDirection) -> VarietyDirection:
    """Observation direction on the unit sphere, as a point of the variety with b = 0."""
    return VarietyDirection(beta_real, orthogonal_to(beta_real), 0.0)


def orthogonal_to(u: RealDirection) -> RealDirection:
    """Some unit vector orthogonal to ``u`` (deterministic choice)."""
    arr = u.array
    trial = np.eye(3)[int(np.argmin(np.abs(arr)))]
    perp = trial - np.dot(trial, arr) * arr
    return RealDirection.normalized(perp)


# --------------------------------------------------------------------------
# shapes


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != 3:
            raise GeometryError("ball center must have three components")
        if not self.radius > 0:
            raise GeometryError(f"ball radius must be positive, got {self.radius!r}")


@dataclass(frozen=True)
class AxisBox:
    lower: tuple
    sides: tuple

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(c) for c in self.lower))
        object.__setattr__(self, "sides", tuple(float(c) for c in self.sides))
        if len(self.lower) != 3 or len(self.sides) != 3:
            raise GeometryError("box corner and sides must have three components")
        if not all(s > 0 for s in self.sides):
            raise GeometryError(f"box sides must be positive, got {self.sides!r}")

    @property
    def upper(self) -> tuple:
        return tuple(lo + s for lo, s in zip(self.lower, self.sides))


@dataclass(frozen=True)
class UnionOfBalls:
    balls: tuple

    def __post_init__(self):
        object.__setattr__(self, "balls", tuple(self.balls))
        if not self.balls:
            raise GeometryError("union of balls needs at least one ball")
        if not all(isinstance(b, Ball) for b in self.balls):
            raise GeometryError("union members must be Ball instances")


ShapeSpec = Union[Ball, AxisBox, UnionOfBalls]


def support_extent(shape: ShapeSpec, v) -> float:
    """Support function ``sup_{y in shape} v . y``."""
    v = _as_array(v)
    if isinstance(shape, Ball):
        return float(np.dot(shape.center, v) + shape.radius * np.linalg.norm(v))
    if isinstance(shape, AxisBox):
        lo = np.asarray(shape.lower)
        sides = np.asarray(shape.sides)
        return float(np.dot(lo, v) + np.sum(np.maximum(v, 0.0) * sides))
    if isinstance(shape, UnionOfBalls):
        return max(support_extent(b, v) for b in shape.balls)
    raise TypeError(f"unsupported shape {shape!r}")


def width(shape: ShapeSpec, v) -> float:
    """Distance between the two supporting planes with normal ``v``."""
    v = _as_array(v)
    return support_extent(shape, v) + support_extent(shape, -v)


def translate(shape: ShapeSpec, t) -> ShapeSpec:
    t = _as_array(t)
    if isinstance(shape, Ball):
        return Ball(tuple(np.asarray(shape.center) + t), shape.radius)
    if isinstance(shape, AxisBox):
        return AxisBox(tuple(np.asarray(shape.lower) + t), shape.sides)
    if isinstance(shape, UnionOfBalls):
        return UnionOfBalls(tuple(translate(b, t) for b in shape.balls))
    raise TypeError(f"unsupported shape {shape!r}")


def bounding_box(shape: ShapeSpec) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(shape, Ball):
        c = np.asarray(shape.center)
        return c - shape.radius, c + shape.radius
    if isinstance(shape, AxisBox):
        return np.asarray(shape.lower), np.asarray(shape.upper)
    if isinstance(shape, UnionOfBalls):
        boxes = [bounding_box(b) for b in shape.balls]
        return (np.min([lo for lo, _ in boxes], axis=0),
                np.max([hi for _, hi in boxes], axis=0))
    raise TypeError(f"unsupported shape {shape!r}")


def contains(shape: ShapeSpec, points) -> np.ndarray:
    """Boolean mask of points (shape (..., 3)) lying in the closed shape."""
    p = np.asarray(points, dtype=float)
    if isinstance(shape, Ball):
        return np.sum((p - np.asarray(shape.center)) ** 2, axis=-1) <= shape.radius ** 2
    if isinstance(shape, AxisBox):
        return np.all((p >= np.asarray(shape.lower)) & (p <= np.asarray(shape.upper)), axis=-1)
    if isinstance(shape, UnionOfBalls):
        mask = np.zeros(p.shape[:-1], dtype=bool)
        for b in shape.balls:
            mask |= contains(b, p)
        return mask
    raise TypeError(f"unsupported shape {shape!r}")


def balls_disjoint(shape: UnionOfBalls) -> bool:
    balls = shape.balls
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            d = np.linalg.norm(np.subtract(balls[i].center, balls[j].center))
            if d < balls[i].radius + balls[j].radius:
                return False
    return True


def volume(shape: ShapeSpec) -> float:
    """Volume of the shape; for unions, sum of member volumes (exact only when disjoint)."""
    if isinstance(shape, Ball):
        return 4.0 / 3.0 * math.pi * shape.radius ** 3
    if isinstance(shape, AxisBox):
        return float(np.prod(shape.sides))
    if isinstance(shape, UnionOfBalls):
        return sum(volume(b) for b in shape.balls)
    raise TypeError(f"unsupported shape {shape!r}")


def satisfies_smoothness_hypotheses(shape: ShapeSpec) -> bool:
    """True when the shape is a connected domain with C^2 boundary."""
    if isinstance(shape, Ball):
        return True
    if isinstance(shape, UnionOfBalls):
        return len(shape.balls) == 1
    return False


def sample_interior(shape: ShapeSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform rejection sample of ``n`` points inside the shape."""
    lo, hi = bounding_box(shape)
    out = []
    count = 0
    while count < n:
        pts = rng.uniform(lo, hi, size=(max(2 * (n - count), 64), 3))
        pts = pts[contains(shape, pts)]
        out.append(pts)
        count += len(pts)
    return np.concatenate(out)[:n]
