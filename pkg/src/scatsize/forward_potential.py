"""Potential scattering: Born amplitudes, a Lippmann-Schwinger solver, and
evaluation of ``A(beta) = -1/(4 pi) int exp(-ik beta.y) H(y) dy`` at complex
``beta``.

Voxel integrals are exact for piecewise-constant densities: the integral over
a cell factorises into three one-dimensional integrals
``int exp(i z y) dy = h exp(i z y_mid) sinc(z h / 2)``, which are combined
per axis in log form before the tensor contraction.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy import fft as sfft
from scipy.sparse.linalg import LinearOperator, gmres

from .errors import DomainError, NoConvergence, NyquistViolation
from .forward_obstacle import translation_phase
from .geometry import (
    AxisBox,
    Ball,
    RealDirection,
    ShapeSpec,
    UnionOfBalls,
    VarietyDirection,
    balls_disjoint,
    bounding_box,
    contains,
)
from .special_functions import LogComplex, scaled_sum

__all__ = [
    "GaussianProfile",
    "AnalyticPotential",
    "VoxelPotential",
    "FieldGrid",
    "PotentialSpec",
    "rasterize",
    "translation_phase",
    "born_amplitude",
    "solve_lippmann_schwinger",
    "amplitude_from_H",
    "self_cell_integral",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GaussianProfile:
    """Radial profile ``exp(-(r / (width R))**2)`` truncated at the ball radius."""

    width: float = 0.5

    def __call__(self, s):
        return np.exp(-(np.asarray(s) / self.width) ** 2)


@dataclass(frozen=True)
class AnalyticPotential:
    shape: ShapeSpec
    q0: float
    profile: Optional[Callable] = None

    def __post_init__(self):
        if not math.isfinite(self.q0):
            raise DomainError("potential amplitude must be finite and real")
        if self.profile is not None and not isinstance(self.shape, Ball):
            raise DomainError("radial profiles are supported on a single Ball only")

    def value(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        inside = contains(self.shape, points)
        if self.profile is None:
            return self.q0 * inside
        r = np.linalg.norm(points - np.asarray(self.shape.center), axis=-1) / self.shape.radius
        return self.q0 * inside * self.profile(np.minimum(r, 1.0))


@dataclass(frozen=True, eq=False)
class VoxelPotential:
    """Piecewise-constant real potential on a uniform grid of cubic cells."""

    origin: tuple
    spacing: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values)
        if np.iscomplexobj(vals):
            if np.any(vals.imag != 0):
                raise DomainError("potential values must be real")
            vals = vals.real
        vals = np.ascontiguousarray(vals, dtype=float)
        if vals.ndim != 3:
            raise DomainError("potential grid must be three-dimensional")
        if not np.all(np.isfinite(vals)):
            raise DomainError("potential values must be finite")
        if not self.spacing > 0:
            raise DomainError("grid spacing must be positive")
        faces = [vals[0], vals[-1], vals[:, 0], vals[:, -1], vals[:, :, 0], vals[:, :, -1]]
        if any(np.any(f != 0) for f in faces):
            raise DomainError("support must leave at least one zero cell on every face")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))

    @property
    def dims(self) -> tuple:
        return self.values.shape

    def axis_edges(self, j: int) -> np.ndarray:
        return self.origin[j] + self.spacing * np.arange(self.dims[j] + 1)

    def axis_centers(self, j: int) -> np.ndarray:
        return self.origin[j] + self.spacing * (np.arange(self.dims[j]) + 0.5)

    def centers(self) -> np.ndarray:
        return np.stack(np.meshgrid(*[self.axis_centers(j) for j in range(3)],
                                    indexing="ij"), axis=-1)

    def support_mask(self) -> np.ndarray:
        return self.values != 0

    def support_extent(self, v) -> float:
        """``max v.y`` over the closed support cells (cell corners)."""
        return grid_support_extent(self.origin, self.spacing, self.support_mask(), v)

    def support_volume(self) -> float:
        return float(np.count_nonzero(self.values)) * self.spacing ** 3

    def translated(self, t) -> "VoxelPotential":
        return VoxelPotential(tuple(np.asarray(self.origin) + np.asarray(t)),
                              self.spacing, self.values)


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """``H = q psi`` (and ``psi``) on the voxel grid of a potential."""

    origin: tuple
    spacing: float
    values: np.ndarray = field(repr=False)
    psi: Optional[np.ndarray] = field(default=None, repr=False)
    iterations: int = 0
    residual: float = 0.0

    @property
    def max_abs(self) -> float:
        m = float(np.max(np.abs(self.values))) if self.values.size else 0.0
        if not math.isfinite(m):
            raise NoConvergence("non-finite density in field grid")
        return m

    def support_volume(self) -> float:
        return float(np.count_nonzero(self.values)) * self.spacing ** 3

    def support_extent(self, v) -> float:
        return grid_support_extent(self.origin, self.spacing, self.values != 0, v)

    def translated(self, t) -> "FieldGrid":
        return FieldGrid(tuple(np.asarray(self.origin) + np.asarray(t)), self.spacing,
                         self.values, self.psi, self.iterations, self.residual)


PotentialSpec = Union[AnalyticPotential, VoxelPotential]


def grid_support_extent(origin, h, mask, v) -> float:
    """``max v.y`` over the closed cells flagged in ``mask``."""
    v = np.asarray(v.array if isinstance(v, RealDirection) else v, dtype=float)
    if not mask.any():
        return -math.inf
    lower = np.asarray(origin) + h * np.argwhere(mask)
    return float(np.max(lower @ v) + h * np.sum(np.maximum(v, 0.0)))


# --------------------------------------------------------------------------
# rasterisation


def rasterize(q: PotentialSpec, grid_size: int = 24, padding: int = 2,
              spacing: float | None = None, subsample: int = 4) -> VoxelPotential:
    """Voxelise an analytic potential.

    By default the largest side of the support bounding box spans
    ``grid_size - 2*padding`` cells.  Boxes get exact volume fractions, balls
    and radial profiles a ``subsample**3`` point average per cell.
    """
    if isinstance(q, VoxelPotential):
        return q
    lo, hi = bounding_box(q.shape)
    size = hi - lo
    if spacing is None:
        spacing = float(np.max(size)) / (grid_size - 2 * padding)
    h = float(spacing)
    dims = tuple(int(math.ceil(s / h - 1e-9)) + 2 * padding for s in size)
    origin = lo - padding * h
    if isinstance(q.shape, AxisBox) and q.profile is None:
        fracs = []
        for j in range(3):
            edges = origin[j] + h * np.arange(dims[j] + 1)
            overlap = np.clip(np.minimum(edges[1:], q.shape.upper[j])
                              - np.maximum(edges[:-1], q.shape.lower[j]), 0.0, None)
            fracs.append(overlap / h)
        values = q.q0 * np.einsum("i,j,k->ijk", *fracs)
    else:
        offs = (np.arange(subsample) + 0.5) / subsample
        sub = np.stack(np.meshgrid(offs, offs, offs, indexing="ij"), -1).reshape(-1, 3)
        axes = [origin[j] + h * np.arange(dims[j]) for j in range(3)]
        corners = np.stack(np.meshgrid(*axes, indexing="ij"), -1)
        values = np.zeros(dims)
        for s in sub:
            values += q.value(corners + h * s)
        values /= len(sub)
    return VoxelPotential(tuple(origin), h, values)


# --------------------------------------------------------------------------
# exact cell integrals


def _log_sin(z):
    # log sin z, stable for large |Im z|
    z = np.asarray(z, dtype=complex)
    pos = z.imag >= 0
    e = np.where(pos, np.exp(2j * z), np.exp(-2j * z))
    with np.errstate(divide="ignore"):
        inner = np.where(pos, np.log((e - 1) / 2j) - 1j * z, np.log((1 - e) / 2j) + 1j * z)
    return inner


def log_sinc(z):
    """``log(sin z / z)`` for complex arrays, with a series near zero."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    zs = np.where(small, 0.0, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = _log_sin(np.where(small, 1.0, zs)) - np.log(np.where(small, 1.0, zs))
    z2 = z * z
    series = np.log(1 - z2 / 6 + z2 * z2 / 120)
    return np.where(small, series, big)


def log_interval_integral(zeta: complex, lo: float, length: float) -> complex:
    """Complex log of ``int_lo^{lo+L} exp(i zeta y) dy``."""
    return complex(1j * zeta * (lo + 0.5 * length) + math.log(length)
                   + log_sinc(zeta * 0.5 * length))


def _cell_sum(values: np.ndarray, origin, h: float, zeta: np.ndarray) -> LogComplex:
    """``-1/(4 pi) sum_c values_c int_c exp(i zeta . y) dy`` in log-scaled form."""
    if not np.any(values != 0):
        return LogComplex.zero()
    factors = []
    total = 0.0
    for j in range(3):
        axis_others = tuple(i for i in range(3) if i != j)
        active = np.nonzero(np.any(values != 0, axis=axis_others))[0]
        n = values.shape[j]
        mid = origin[j] + h * (np.arange(n) + 0.5)
        logf = 1j * zeta[j] * mid + math.log(h) + log_sinc(zeta[j] * 0.5 * h)
        scale = float(np.max(logf.real[active]))
        f = np.zeros(n, dtype=complex)
        f[active] = np.exp(logf[active] - scale)
        factors.append(f)
        total += scale
    s = np.einsum("ijk,i,j,k->", values, *factors, optimize=True)
    return scaled_sum(-s / (4 * math.pi), total)


def _log_ball_transform(zeta: np.ndarray, radius: float) -> complex:
    # log of int_{|y|<R} exp(i zeta.y) dy = 4 pi R^3 j1(QR)/(QR), Q^2 = zeta.zeta
    z = complex(np.sqrt(np.sum(zeta * zeta))) * radius
    if abs(z) < 0.5:
        z2 = z * z
        val = 1 / 3 - z2 / 30 + z2 ** 2 / 840 - z2 ** 3 / 45360 + z2 ** 4 / 3991680
        return complex(np.log(4 * math.pi * radius ** 3 * val))
    y = abs(z.imag)
    ep = np.exp(1j * z - y)
    em = np.exp(-1j * z - y)
    sin_s = (ep - em) / 2j
    cos_s = (ep + em) / 2
    return complex(y + np.log(4 * math.pi * radius ** 3 * (sin_s - z * cos_s) / z ** 3))


def _log_radial_transform(zeta: np.ndarray, radius: float, q0: float, profile,
                          n: int | None = None) -> LogComplex:
    # 4 pi int_0^R q(r) r^2 j0(Q r) dr by Gauss-Legendre, scaled by exp(|Im Q| R)
    Q = complex(np.sqrt(np.sum(zeta * zeta)))
    if n is None:
        n = max(64, int(math.ceil(abs(Q) * radius)) + 48)
    x, w = np.polynomial.legendre.leggauss(n)
    r = 0.5 * radius * (x + 1)
    wr = 0.5 * radius * w
    y = abs(Q.imag) * radius
    qr = Q * r
    small = np.abs(qr) < 1e-4
    safe = np.where(small, 1.0, qr)
    ep = np.exp(1j * safe - y)
    em = np.exp(-1j * safe - y)
    j0s = np.where(small, (1 - qr * qr / 6) * np.exp(-y), (ep - em) / (2j * safe))
    s = np.sum(wr * q0 * profile(r / radius) * r * r * j0s) * 4 * math.pi
    return scaled_sum(s, y)


def born_amplitude(q: PotentialSpec, alpha: RealDirection, beta: VarietyDirection,
                   k: float) -> LogComplex:
    """First-order amplitude ``-1/(4 pi) int q(y) exp(ik (alpha - beta).y) dy``."""
    if not k > 0:
        raise DomainError(f"wavenumber must be positive, got {k!r}")
    zeta = k * (alpha.array - beta.vector)
    if isinstance(q, VoxelPotential):
        return _cell_sum(q.values, q.origin, q.spacing, zeta)
    if q.q0 == 0:
        return LogComplex.zero()
    shape = q.shape
    pref = LogComplex.from_complex(-q.q0 / (4 * math.pi))
    if isinstance(shape, AxisBox):
        logs = sum(log_interval_integral(zeta[j], shape.lower[j], shape.sides[j])
                   for j in range(3))
        return pref * LogComplex.exp(logs)
    if isinstance(shape, Ball):
        shift = LogComplex.exp(1j * np.dot(zeta, shape.center))
        if q.profile is None:
            return pref * LogComplex.exp(_log_ball_transform(zeta, shape.radius)) * shift
        core = _log_radial_transform(zeta, shape.radius, q.q0, q.profile)
        return LogComplex.from_complex(-1 / (4 * math.pi)) * core * shift
    if isinstance(shape, UnionOfBalls):
        if not balls_disjoint(shape):
            raise DomainError("overlapping balls: rasterize() the potential first")
        total = LogComplex.zero()
        for ball in shape.balls:
            total = total + born_amplitude(AnalyticPotential(ball, q.q0), alpha, beta, k)
        return total
    raise TypeError(f"unsupported shape {shape!r}")


def amplitude_from_H(H: FieldGrid, beta: VarietyDirection, k: float) -> LogComplex:
    """``-1/(4 pi) int exp(-ik beta.y) H(y) dy`` with exact per-cell integration."""
    return _cell_sum(H.values, H.origin, H.spacing, -k * beta.vector)


# --------------------------------------------------------------------------
# Lippmann-Schwinger


def self_cell_integral(h: float, k: float) -> complex:
    """``int g`` over the ball of volume ``h**3`` about its centre.

    Equals ``(exp(ik rho)(1 - ik rho) - 1)/k**2`` with ``rho = h (3/(4 pi))**(1/3)``,
    tending to ``rho**2 / 2`` as ``k -> 0``.
    """
    rho = h * (3.0 / (4.0 * math.pi)) ** (1.0 / 3.0)
    kr = k * rho
    if kr < 1e-4:
        return complex(rho * rho / 2 + 1j * k * rho ** 3 / 3)
    return (np.exp(1j * kr) * (1 - 1j * kr) - 1) / (k * k)


class _GreenOperator:
    """Discrete volume potential ``(G f)_i = sum_j G(x_i - x_j) f_j`` via zero-padded FFT."""

    def __init__(self, dims, h: float, k: float):
        self.dims = tuple(dims)
        self.shape = tuple(sfft.next_fast_len(2 * n - 1) for n in dims)
        axes = []
        for n, m in zip(self.dims, self.shape):
            idx = np.arange(m)
            off = np.where(idx < n, idx, idx - m)
            off = np.where(np.abs(off) < n, off, 0)
            axes.append(off * h)
        X, Y, Z = np.meshgrid(*axes, indexing="ij")
        r = np.sqrt(X * X + Y * Y + Z * Z)
        with np.errstate(divide="ignore", invalid="ignore"):
            kern = h ** 3 * np.exp(1j * k * r) / (4 * math.pi * r)
        kern[0, 0, 0] = self_cell_integral(h, k)
        # zero the wrap-around region not reached by any offset pair
        for j, (n, m) in enumerate(zip(self.dims, self.shape)):
            idx = np.arange(m)
            dead = (idx >= n) & (idx <= m - n)
            sl = [slice(None)] * 3
            sl[j] = dead
            kern[tuple(sl)] = 0.0
        self.kernel_hat = sfft.fftn(kern)

    def __call__(self, f: np.ndarray) -> np.ndarray:
        fh = sfft.fftn(f, s=self.shape)
        out = sfft.ifftn(fh * self.kernel_hat)
        return out[: self.dims[0], : self.dims[1], : self.dims[2]]


def solve_lippmann_schwinger(q: PotentialSpec, alpha: RealDirection, k: float,
                             tol: float = 1e-8, grid_size: int = 24,
                             max_iter: int = 500) -> FieldGrid:
    """Solve ``psi + G(q psi) = u0`` on the voxel grid; returns ``H = q psi``.

    Collocation at cell centres with the point kernel ``h^3 g(x_i - x_j)``
    off the diagonal and the equivalent-volume ball integral on it.  The
    system is solved by restarted GMRES.
    """
    if not k > 0:
        raise DomainError(f"wavenumber must be positive, got {k!r}")
    vox = rasterize(q, grid_size) if isinstance(q, AnalyticPotential) else q
    h = vox.spacing
    if h > math.pi / (4 * k) * (1 + 1e-12):
        raise NyquistViolation(f"spacing {h:.4g} exceeds pi/(4k) = {math.pi / (4 * k):.4g}")
    centers = vox.centers()
    u0 = np.exp(1j * k * centers @ alpha.array)
    qv = vox.values
    if not np.any(qv != 0):
        return FieldGrid(vox.origin, h, np.zeros(vox.dims, dtype=complex), u0, 0, 0.0)

    G = _GreenOperator(vox.dims, h, k)
    n = qv.size
    dims = vox.dims

    def matvec(x):
        psi = x.reshape(dims)
        return (psi + G(qv * psi)).ravel()

    op = LinearOperator((n, n), matvec=matvec, dtype=complex)
    rhs = u0.ravel()
    counter = {"n": 0}

    def count(_):
        counter["n"] += 1

    restart = min(max_iter, 100)
    sol, info = gmres(op, rhs, x0=rhs.copy(), rtol=0.5 * tol, atol=0.0, restart=restart,
                      maxiter=int(math.ceil(max_iter / restart)), callback=count,
                      callback_type="pr_norm")
    resid = float(np.linalg.norm(matvec(sol) - rhs) / np.linalg.norm(rhs))
    if info != 0 or resid > tol:
        raise NoConvergence(f"GMRES stopped after {counter['n']} iterations, "
                            f"relative residual {resid:.3e} > {tol:.1e}")
    psi = sol.reshape(dims)
    log.debug("Lippmann-Schwinger: %d iterations, residual %.2e", counter["n"], resid)
    return FieldGrid(vox.origin, h, qv * psi, psi, counter["n"], resid)
