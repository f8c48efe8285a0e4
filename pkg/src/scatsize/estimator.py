"""Support-extent estimation from amplitudes on the complex variety.

For ``beta(b) = sqrt(1 + b^2) w + i b v`` the amplitude modulus is bounded by
``C exp(k b h(v))`` with ``h(v) = sup_D v.y``.  A ladder of ``ln|A(beta(b))|``
over increasing ``b`` is fitted by

    ln|A| ~ (k d) b + s ln b + C,

and ``d`` is reported as the estimate of ``h(v)``.  The ``ln b`` term absorbs
the algebraic prefactor produced by the contact geometry near the supporting
plane.  Two one-sided runs (``v`` and ``-v``) give the width.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, TooFewPoints, ZeroAmplitude
from .forward_obstacle import (
    SphereObstacle,
    amplitude_via_surface_integral,
    max_normal_derivative,
    obstacle_amplitude,
)
from .forward_potential import (
    AnalyticPotential,
    FieldGrid,
    PotentialSpec,
    VoxelPotential,
    amplitude_from_H,
    born_amplitude,
    solve_lippmann_schwinger,
)
from .geometry import (
    AxisBox,
    Ball,
    RealDirection,
    ShapeSpec,
    UnionOfBalls,
    VarietyDirection,
    satisfies_smoothness_hypotheses,
    support_extent,
    volume,
)
from .special_functions import LogComplex, log_sum

ORTHOGONALITY_WARNING = "alpha-orthogonal-to-Im-beta"
NONMONOTONE_WARNING = "nonmonotone-slopes"
HYPOTHESIS_WARNING = "support-outside-smooth-connected-hypotheses"
ENVELOPE_WARNING = "envelope-bound-exceeded"


@dataclass(frozen=True)
class PotentialModel:
    """A potential scatterer together with the forward method used for it."""

    potential: PotentialSpec
    method: str = "born"
    grid_size: int = 24
    tol: float = 1e-8

    def __post_init__(self):
        if self.method not in ("born", "ls"):
            raise DomainError(f"unknown potential method {self.method!r}")


ScattererModel = Union[SphereObstacle, PotentialModel]


@dataclass(frozen=True, eq=False)
class AmplitudeLadder:
    k: float
    alpha: RealDirection
    w: RealDirection
    v: RealDirection
    b_grid: np.ndarray
    logmag: np.ndarray
    phase: np.ndarray
    source: str
    warnings: tuple = ()
    envelope: Optional[np.ndarray] = None
    field: Optional[FieldGrid] = field(default=None, repr=False)

    def __len__(self):
        return len(self.b_grid)

    @property
    def normalized(self) -> np.ndarray:
        """``ln|A| / (k b)`` per rung."""
        return self.logmag / (self.k * self.b_grid)

    @property
    def pairwise_slopes(self) -> np.ndarray:
        return np.diff(self.logmag) / (self.k * np.diff(self.b_grid))


@dataclass(frozen=True)
class SizeEstimate:
    d_hat: float
    slope: float
    log_coefficient: float
    constant: float
    residual_rms: float
    pairwise_slopes: tuple
    median_slope: float
    warnings: tuple = ()


@dataclass(frozen=True)
class WidthEstimate:
    width_hat: float
    plus: SizeEstimate
    minus: SizeEstimate


# --------------------------------------------------------------------------
# ladders


def _validated_grid(b_grid) -> np.ndarray:
    b = np.sort(np.asarray(b_grid, dtype=float).ravel())
    if b.size == 0:
        raise DomainError("empty b grid")
    if not np.all(np.isfinite(b)) or b[0] <= 0:
        raise DomainError("b grid values must be positive and finite")
    if np.any(np.diff(b) <= 0):
        raise DomainError("b grid values must be distinct")
    return b


def default_b_grid(k: float, scale: float | None = None, count: int = 12) -> np.ndarray:
    """Twelve log-spaced rungs in [6, 36], shrunk so that ``k b scale <= 700``."""
    b = np.geomspace(6.0, 36.0, count)
    if scale is not None and scale > 0 and k * b[-1] * scale > 700:
        b *= 700 / (k * b[-1] * scale)
    return b


def model_support(model: ScattererModel):
    """Analytic support shape of the model, or None for voxel data."""
    if isinstance(model, SphereObstacle):
        return Ball(model.center, model.radius)
    if isinstance(model.potential, AnalyticPotential):
        return model.potential.shape
    return None


def model_extent(model: ScattererModel, v, field_grid: FieldGrid | None = None) -> float:
    """Support function of the scatterer (voxel support for grid potentials)."""
    shape = model_support(model)
    if shape is not None:
        return support_extent(shape, v)
    if field_grid is not None:
        return field_grid.support_extent(v)
    return model.potential.support_extent(v)


def _resolve_k(model: ScattererModel, k: float | None) -> float:
    if isinstance(model, SphereObstacle):
        if k is not None and not math.isclose(k, model.k, rel_tol=1e-12):
            raise DomainError(f"k={k!r} differs from the obstacle wavenumber {model.k!r}")
        return model.k
    if k is None or not k > 0:
        raise DomainError(f"a positive wavenumber is required, got {k!r}")
    return float(k)


def envelope_constant(model: ScattererModel, alpha: RealDirection, k: float,
                      field_grid: FieldGrid | None = None) -> float:
    """Log of the model's amplitude-bound constant.

    For the obstacle this is ``max|u_N| * area / (4 pi)``; for a potential it
    is ``max|H| * volume / (4 pi)`` with ``H = q psi`` (``psi = u0`` for Born).
    """
    if isinstance(model, SphereObstacle):
        area = 4 * math.pi * model.radius ** 2
        return math.log(max_normal_derivative(model) * area / (4 * math.pi))
    pot = model.potential
    if field_grid is not None:
        return math.log(field_grid.max_abs * field_grid.support_volume() / (4 * math.pi))
    if isinstance(pot, VoxelPotential):
        qmax = float(np.max(np.abs(pot.values)))
        return math.log(qmax * pot.support_volume() / (4 * math.pi))
    qmax = abs(pot.q0)
    if pot.profile is not None:
        qmax *= float(np.max(np.abs(pot.profile(np.linspace(0.0, 1.0, 2001)))))
    return math.log(qmax * volume(pot.shape) / (4 * math.pi))


def solve_field(model: PotentialModel, alpha: RealDirection, k: float) -> FieldGrid:
    return solve_lippmann_schwinger(model.potential, alpha, k, tol=model.tol,
                                    grid_size=model.grid_size)


def amplitude(model: ScattererModel, alpha: RealDirection, beta: VarietyDirection,
              k: float, field_grid: FieldGrid | None = None) -> LogComplex:
    """Amplitude of any scatterer model at one (possibly complex) direction."""
    if isinstance(model, SphereObstacle):
        return obstacle_amplitude(model, alpha, beta)
    if model.method == "born":
        return born_amplitude(model.potential, alpha, beta, k)
    if field_grid is None:
        field_grid = solve_field(model, alpha, k)
    return amplitude_from_H(field_grid, beta, k)


def compute_ladder(model: ScattererModel, alpha: RealDirection, w: RealDirection,
                   v: RealDirection, b_grid: Sequence[float], k: float | None = None,
                   field_grid: FieldGrid | None = None) -> AmplitudeLadder:
    """Evaluate ``ln|A(beta(b), alpha)|`` on every rung of ``b_grid``.

    For Lippmann-Schwinger models the density ``H`` is solved once (or taken
    from ``field_grid``) and reused for all rungs.
    """
    k = _resolve_k(model, k)
    b = _validated_grid(b_grid)
    VarietyDirection(w, v, 0.0)
    warnings = []
    if abs(v.dot(alpha)) < 1e-8:
        warnings.append(ORTHOGONALITY_WARNING)
    shape = model_support(model)
    if shape is None or not satisfies_smoothness_hypotheses(shape):
        warnings.append(HYPOTHESIS_WARNING)

    source = "obstacle" if isinstance(model, SphereObstacle) else model.method
    if source == "ls" and field_grid is None:
        field_grid = solve_field(model, alpha, k)

    logmag = np.empty(len(b))
    phase = np.empty(len(b))
    for i, bi in enumerate(b):
        amp = amplitude(model, alpha, VarietyDirection(w, v, float(bi)), k, field_grid)
        if amp.zero_flag:
            raise ZeroAmplitude(f"amplitude vanishes exactly at b={float(bi):g}")
        logmag[i] = amp.logmag
        phase[i] = amp.phase

    env = envelope_constant(model, alpha, k, field_grid if source == "ls" else None) \
        + k * b * model_extent(model, v, field_grid)
    if np.any(logmag > env + 1e-9):
        warnings.append(ENVELOPE_WARNING)
    return AmplitudeLadder(k, alpha, w, v, b, logmag, phase, source, tuple(warnings),
                           env, field_grid)


def fit_extent(ladder: AmplitudeLadder) -> SizeEstimate:
    """Least-squares fit of ``ln|A| = (k d) b + s ln b + C`` over the ladder."""
    n = len(ladder.b_grid)
    if n < 3:
        raise TooFewPoints(f"fit needs at least 3 rungs, ladder has {n}")
    b = ladder.b_grid
    X = np.column_stack([b, np.log(b), np.ones(n)])
    coef, *_ = np.linalg.lstsq(X, ladder.logmag, rcond=None)
    resid = ladder.logmag - X @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    slopes = ladder.pairwise_slopes
    top = slopes[n - (n + 1) // 2:]
    warnings = list(ladder.warnings)
    med_top = float(np.median(top))
    if top.size and np.ptp(top) > 0.1 * max(abs(med_top), 1e-12):
        warnings.append(NONMONOTONE_WARNING)
    return SizeEstimate(
        d_hat=float(coef[0] / ladder.k),
        slope=float(coef[0]),
        log_coefficient=float(coef[1]),
        constant=float(coef[2]),
        residual_rms=rms,
        pairwise_slopes=tuple(float(s) for s in slopes),
        median_slope=float(np.median(slopes)),
        warnings=tuple(warnings),
    )


def estimate_extent(model: ScattererModel, alpha: RealDirection, w: RealDirection,
                    v: RealDirection, b_grid, k: float | None = None,
                    field_grid: FieldGrid | None = None) -> SizeEstimate:
    return fit_extent(compute_ladder(model, alpha, w, v, b_grid, k, field_grid))


def estimate_width(model: ScattererModel, alpha: RealDirection, w: RealDirection,
                   v: RealDirection, b_grid, k: float | None = None,
                   field_grid: FieldGrid | None = None) -> WidthEstimate:
    """Two one-sided fits (``v`` and ``-v``) and their sum."""
    k = _resolve_k(model, k)
    if isinstance(model, PotentialModel) and model.method == "ls" and field_grid is None:
        field_grid = solve_field(model, alpha, k)
    plus = fit_extent(compute_ladder(model, alpha, w, v, b_grid, k, field_grid))
    minus = fit_extent(compute_ladder(model, alpha, w, -v, b_grid, k, field_grid))
    return WidthEstimate(plus.d_hat + minus.d_hat, plus, minus)


def sweep_directions(n: int, plane_normal: RealDirection,
                     start: RealDirection | None = None) -> list:
    """``n`` unit vectors spread over a half-turn in the plane orthogonal to the normal.

    Widths are even in ``v``, so a half-turn covers every distinct direction.
    """
    if n < 1:
        raise DomainError("sweep needs at least one direction")
    nvec = plane_normal.array
    if start is None:
        from .geometry import orthogonal_to
        start = orthogonal_to(plane_normal)
    if abs(start.dot(plane_normal)) > 1e-10:
        raise DomainError("sweep start direction must lie in the plane")
    e1 = start.array
    e2 = np.cross(nvec, e1)
    angles = math.pi * np.arange(n) / n
    return [RealDirection.normalized(math.cos(t) * e1 + math.sin(t) * e2) for t in angles]


def sweep_widths(model: ScattererModel, alpha: RealDirection, n: int,
                 plane_normal: RealDirection, b_grid, k: float | None = None,
                 start: RealDirection | None = None) -> list:
    """Width profile over in-plane directions; the real axis ``w`` is the plane normal."""
    k = _resolve_k(model, k)
    field_grid = None
    if isinstance(model, PotentialModel) and model.method == "ls":
        field_grid = solve_field(model, alpha, k)
    rows = []
    for v in sweep_directions(n, plane_normal, start):
        rows.append((v, estimate_width(model, alpha, plane_normal, v, b_grid, k, field_grid)))
    return rows


# --------------------------------------------------------------------------
# surface-integral oracle


def _log_sinhc(x):
    # log(sinh(x)/x), x real
    x = abs(x)
    if x < 1e-4:
        return x * x / 6
    return x + math.log1p(-math.exp(-2 * x)) - math.log(2 * x)


def _log_interval(c: float, lo: float, length: float) -> float:
    # log int_lo^{lo+L} exp(c y) dy
    return c * (lo + 0.5 * length) + math.log(length) + _log_sinhc(0.5 * c * length)


def lemma1_oracle(shape: ShapeSpec, v, b: float, k: float,
                  n_polar: int | None = None) -> float:
    """``ln int_S exp(b k s.v) ds`` over the boundary of the shape.

    Closed form for balls (``4 pi R sinh(bkR)/(bk)`` times the centre shift)
    and boxes; Gauss-Legendre surface quadrature for unions of balls, with
    points buried inside other members discarded.
    """
    if not b > 0 or not k > 0:
        raise DomainError(f"b and k must be positive, got b={b!r}, k={k!r}")
    v = np.asarray(v.array if isinstance(v, RealDirection) else v, dtype=float)
    c = b * k
    if isinstance(shape, Ball):
        R = shape.radius
        return (math.log(4 * math.pi * R * R) + _log_sinhc(c * R)
                + c * float(np.dot(v, shape.center)))
    if isinstance(shape, AxisBox):
        terms = []
        for j in range(3):
            others = [i for i in range(3) if i != j]
            face = sum(_log_interval(c * v[i], shape.lower[i], shape.sides[i]) for i in others)
            for y in (shape.lower[j], shape.upper[j]):
                terms.append(face + c * v[j] * y)
        return log_sum(terms, np.zeros(len(terms))).logmag
    if isinstance(shape, UnionOfBalls):
        return _union_surface_log_integral(shape, v, c, n_polar)
    raise TypeError(f"unsupported shape {shape!r}")


def _union_surface_log_integral(shape: UnionOfBalls, v: np.ndarray, c: float,
                                n_polar: int | None) -> float:
    from .geometry import orthogonal_to
    vd = RealDirection.normalized(v)
    e1 = orthogonal_to(vd).array
    e2 = np.cross(vd.array, e1)
    logs, phases = [], []
    for idx, ball in enumerate(shape.balls):
        R = ball.radius
        n = n_polar or max(96, int(4 * math.sqrt(c * R)) + 64)
        mu, wmu = np.polynomial.legendre.leggauss(n)
        phi = 2 * math.pi * np.arange(2 * n) / (2 * n)
        st = np.sqrt(1 - mu ** 2)[:, None]
        dirs = (st[..., None] * (np.cos(phi)[None, :, None] * e1 + np.sin(phi)[None, :, None] * e2)
                + mu[:, None, None] * vd.array)
        pts = np.asarray(ball.center) + R * dirs
        keep = np.ones(pts.shape[:2], dtype=bool)
        for jdx, other in enumerate(shape.balls):
            if jdx != idx:
                d2 = np.sum((pts - np.asarray(other.center)) ** 2, axis=-1)
                keep &= d2 >= other.radius ** 2
        expo = c * (pts @ vd.array)
        wts = (wmu[:, None] * np.ones_like(phi)[None, :]) * (2 * math.pi / len(phi)) * R * R
        sel = keep & (wts > 0)
        logs.append(expo[sel] + np.log(wts[sel]))
        phases.append(np.zeros(np.count_nonzero(sel)))
    return log_sum(np.concatenate(logs), np.concatenate(phases)).logmag


def growth_envelope(ladder: AmplitudeLadder) -> np.ndarray:
    """Per-rung upper bound on ``ln|A| / (k b)`` implied by the amplitude bound."""
    if ladder.envelope is None:
        raise ValueError("ladder carries no envelope")
    return ladder.envelope / (ladder.k * ladder.b_grid)


__all__ = [
    "PotentialModel", "ScattererModel", "AmplitudeLadder", "SizeEstimate", "WidthEstimate",
    "compute_ladder", "fit_extent", "estimate_extent", "estimate_width", "lemma1_oracle",
    "default_b_grid", "sweep_directions", "sweep_widths", "amplitude", "model_extent",
    "model_support", "envelope_constant", "solve_field", "growth_envelope",
    "amplitude_via_surface_integral",
]
