"""Sound-soft (Dirichlet) sphere: partial-wave amplitude, boundary flux and fields.

Conventions: incident wave ``u0 = exp(i k alpha . x)``, outgoing Green's
function ``exp(ik|x-y|) / (4 pi |x-y|)`` and far field
``u = u0 + A(beta, alpha) exp(ikr)/r + O(r^-2)``.  The series amplitude

    A(t) = 1/(ik) * sum_l (2l+1) T_l P_l(t),   T_l = -j_l(kR) / h_l(kR),

depends on ``t = beta . alpha`` only and is evaluated at complex ``t`` with
log-scaled terms.  It is cross-checked against the convention-free surface
integral ``-1/(4 pi) int_S exp(-ik beta . s) u_N(s) ds``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, InsideObstacle, NoConvergence, OffSurface
from .geometry import RealDirection, VarietyDirection, orthogonal_to
from .special_functions import (
    LogComplex,
    ScaledAccumulator,
    legendre_real,
    legendre_scaled,
    log_spherical_hankel1,
    log_spherical_jn,
    scaled_sum,
)

LMAX_CAP = 5000
_NEGLIGIBLE = math.log(1e-16)


@dataclass(frozen=True)
class SphereObstacle:
    radius: float
    k: float
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"sphere radius must be positive, got {self.radius!r}")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError(f"wavenumber must be positive, got {self.k!r}")

    @property
    def size_parameter(self) -> float:
        return self.k * self.radius

    @property
    def center_array(self) -> np.ndarray:
        return np.asarray(self.center)


@dataclass(frozen=True)
class MieCoefficients:
    """Log-scaled partial-wave coefficients ``T_l``, ``l = 0..lmax``."""

    k: float
    radius: float
    logmag: np.ndarray = field(repr=False)
    phase: np.ndarray = field(repr=False)

    @property
    def lmax(self) -> int:
        return len(self.logmag) - 1

    @property
    def T(self) -> np.ndarray:
        return np.exp(self.logmag + 1j * self.phase)

    def term(self, l: int) -> LogComplex:
        return LogComplex(float(self.logmag[l]), float(self.phase[l]))

    def unitarity_defect(self) -> float:
        """``max_l | |1 + 2 T_l| - 1 |`` over coefficients above 1e-300."""
        T = self.T
        keep = np.abs(T) > 1e-300
        if not keep.any():
            return 0.0
        return float(np.max(np.abs(np.abs(1 + 2 * T[keep]) - 1.0)))

    def perturbed(self, l: int, delta: complex) -> "MieCoefficients":
        """Copy with ``T_l`` shifted by ``delta`` (negative-control hook)."""
        T = self.T.copy()
        T[l] += delta
        logmag = self.logmag.copy()
        phase = self.phase.copy()
        logmag[l] = math.log(abs(T[l])) if T[l] != 0 else -math.inf
        phase[l] = float(np.angle(T[l]))
        return replace(self, logmag=logmag, phase=phase)


def mie_coefficients(sphere: SphereObstacle, lmax: int) -> MieCoefficients:
    x = sphere.size_parameter
    sj, lj = log_spherical_jn(lmax, x)
    lh, ph = log_spherical_hankel1(lmax, x)
    # T = -j/h ; sign of j contributes 0 or pi to the phase
    phase = np.pi * (sj > 0) - ph
    return MieCoefficients(sphere.k, sphere.radius, lj - lh, phase)


def sphere_amplitude(sphere: SphereObstacle, t: complex,
                     lmax_cap: int = LMAX_CAP,
                     coefficients: MieCoefficients | None = None) -> LogComplex:
    """Partial-wave amplitude of the origin-centred sphere at ``t = beta . alpha``.

    Summation stops at the first degree past ``ceil(kR) + 10`` where ten
    consecutive terms fall below 1e-16 of the running sum.  Off-centre
    spheres need the caller to apply :func:`translation_phase`.
    """
    lmin = int(math.ceil(sphere.size_parameter)) + 10
    L = lmin + 40
    while True:
        L = min(L, lmax_cap)
        T = coefficients if coefficients is not None and coefficients.lmax >= L else \
            mie_coefficients(sphere, L)
        P = legendre_scaled(L, t)
        acc = ScaledAccumulator()
        quiet = 0
        for l in range(L + 1):
            if P.zero[l]:
                term = LogComplex.zero()
            else:
                term = LogComplex(math.log(2 * l + 1) + T.logmag[l] + P.logmag[l],
                                  T.phase[l] + P.phase[l])
            acc.add(term)
            if l >= lmin:
                partial = acc.value
                small = term.zero_flag or (
                    not partial.zero_flag and term.logmag < partial.logmag + _NEGLIGIBLE)
                quiet = quiet + 1 if small else 0
                if quiet >= 10:
                    # 1/(ik) = exp(-ln k - i pi/2)
                    return acc.value * LogComplex(-math.log(sphere.k), -math.pi / 2)
        if L >= lmax_cap:
            raise NoConvergence(f"partial-wave series not converged by lmax={lmax_cap}")
        L *= 2


def translation_phase(alpha: RealDirection, beta: VarietyDirection, t, k: float) -> LogComplex:
    """``exp(i k (alpha - beta) . t)``; its log-modulus is ``k b (v . t)``."""
    t = np.asarray(t, dtype=float)
    alpha_t = float(np.dot(alpha.array, t))
    w_t = float(np.dot(beta.w.array, t))
    v_t = float(np.dot(beta.v.array, t))
    # i k (alpha - a w - i b v) . t
    return LogComplex(k * beta.b * v_t, k * (alpha_t - beta.a * w_t))


def obstacle_amplitude(sphere: SphereObstacle, alpha: RealDirection,
                       beta: VarietyDirection) -> LogComplex:
    """Series amplitude including the translation factor for an off-centre sphere."""
    amp = sphere_amplitude(sphere, beta.dot(alpha))
    if any(sphere.center):
        amp = amp * translation_phase(alpha, beta, sphere.center, sphere.k)
    return amp


# --------------------------------------------------------------------------
# boundary data and surface integrals


def _flux_coefficients(sphere: SphereObstacle) -> np.ndarray:
    """Coefficients c_l of ``u_N = sum_l c_l P_l(s_hat . alpha)`` (origin-centred)."""
    x = sphere.size_parameter
    L = int(math.ceil(x)) + 60
    lh, ph = log_spherical_hankel1(L, x)
    l = np.arange(L + 1)
    logc = np.log(2 * l + 1) - lh
    keep = logc > logc.max() - 45.0
    last = int(np.max(np.nonzero(keep)))
    l = l[: last + 1]
    # u_N = -i/(k R^2) sum (2l+1) i^l P_l / h_l, from the Wronskian j h' - j' h = i/x^2
    return (-1j / (sphere.k * sphere.radius ** 2)) * (2 * l + 1) * (1j ** l) \
        * np.exp(-lh[: last + 1] - 1j * ph[: last + 1])


def _flux_on_cosines(sphere: SphereObstacle, mu: np.ndarray,
                     coeffs: np.ndarray | None = None) -> np.ndarray:
    if coeffs is None:
        coeffs = _flux_coefficients(sphere)
    P = legendre_real(len(coeffs) - 1, mu)
    return np.tensordot(coeffs, P, axes=(0, 0))


def sphere_normal_derivative(sphere: SphereObstacle, alpha: RealDirection, s) -> complex:
    """Normal derivative of the total field at a boundary point ``s``."""
    s = np.asarray(s, dtype=float)
    rel = s - sphere.center_array
    r = float(np.linalg.norm(rel))
    if abs(r - sphere.radius) > 1e-9 * sphere.radius:
        raise OffSurface(f"|s - center| = {r!r} is not the radius {sphere.radius!r}")
    mu = float(np.dot(rel / r, alpha.array))
    val = complex(_flux_on_cosines(sphere, np.array([mu]))[0])
    return val * np.exp(1j * sphere.k * np.dot(alpha.array, sphere.center_array))


def max_normal_derivative(sphere: SphereObstacle, n: int = 4001) -> float:
    """``max_S |u_N|`` sampled densely in ``s_hat . alpha`` (independent of alpha)."""
    mu = np.cos(np.linspace(0.0, math.pi, n))
    return float(np.max(np.abs(_flux_on_cosines(sphere, mu))))


def surface_nodes(n_polar: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre cosines/weights times a uniform azimuth of ``2 n_polar`` points."""
    mu, wmu = np.polynomial.legendre.leggauss(n_polar)
    phi = 2 * math.pi * np.arange(2 * n_polar) / (2 * n_polar)
    return (mu, wmu), phi


def default_polar_nodes(sphere: SphereObstacle, b: float) -> int:
    return max(24, 2 * int(math.ceil(sphere.k * (1 + b) * sphere.radius)) + 12)


def amplitude_via_surface_integral(sphere: SphereObstacle, alpha: RealDirection,
                                   beta: VarietyDirection,
                                   n_polar: int | None = None) -> LogComplex:
    """Amplitude from the boundary flux, ``-1/(4 pi) int_S exp(-ik beta.s) u_N ds``.

    The polar axis of the quadrature is ``v``; the factor ``exp(k b R)`` is
    taken out analytically so every scaled integrand value is at most one in
    modulus times ``|u_N|``.
    """
    k, R, b, a = sphere.k, sphere.radius, beta.b, beta.a
    if n_polar is None:
        n_polar = default_polar_nodes(sphere, b)
    (mu, wmu), phi = surface_nodes(n_polar)
    w, v = beta.w.array, beta.v.array
    u = np.cross(v, w)
    st = np.sqrt(1.0 - mu ** 2)[:, None]
    cphi, sphi = np.cos(phi)[None, :], np.sin(phi)[None, :]
    # s_hat . alpha on the grid, and beta . s_hat = a sin(theta) cos(phi) + i b cos(theta)
    s_alpha = st * (cphi * np.dot(w, alpha.array) + sphi * np.dot(u, alpha.array)) \
        + mu[:, None] * np.dot(v, alpha.array)
    flux = _flux_on_cosines(sphere, s_alpha)
    expo = -1j * k * R * a * st * cphi + k * b * R * (mu[:, None] - 1.0)
    weights = wmu[:, None] * (2 * math.pi / len(phi)) * R * R
    integral = np.sum(weights * np.exp(expo) * flux)
    amp = scaled_sum(-integral / (4 * math.pi), k * b * R)
    if any(sphere.center):
        amp = amp * translation_phase(alpha, beta, sphere.center, k)
    return amp


def scattered_field(sphere: SphereObstacle, alpha: RealDirection, x,
                    n_rho: int | None = None, n_phi: int | None = None) -> complex:
    """Total field ``u(x) = u0(x) - int_S g(x, s) u_N(s) ds`` at an exterior point.

    The surface is parametrised by the distance ``rho = |x - s|`` about the
    axis through ``x``; the surface element ``R^2 dOmega = (R/r) rho drho dphi``
    cancels the ``1/rho`` singularity of the Green's function, so points right
    next to the boundary are handled by the same rule.
    """
    x = np.asarray(x, dtype=float)
    rel = x - sphere.center_array
    r = float(np.linalg.norm(rel))
    R, k = sphere.radius, sphere.k
    if not r > R:
        raise InsideObstacle(f"point at distance {r!r} is not outside radius {R!r}")
    coeffs = _flux_coefficients(sphere)
    L = len(coeffs) - 1
    if n_rho is None:
        n_rho = max(48, L + int(math.ceil(2 * k * R)) + 24)
    if n_phi is None:
        n_phi = 2 * L + 16
    axis = RealDirection.normalized(rel)
    e1 = orthogonal_to(axis).array
    e2 = np.cross(axis.array, e1)
    nodes, wts = np.polynomial.legendre.leggauss(n_rho)
    lo, hi = r - R, r + R
    rho = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    wrho = 0.5 * (hi - lo) * wts
    cos_t = np.clip((r * r + R * R - rho ** 2) / (2 * r * R), -1.0, 1.0)
    sin_t = np.sqrt(1.0 - cos_t ** 2)[:, None]
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    s_alpha = sin_t * (np.cos(phi)[None, :] * np.dot(e1, alpha.array)
                       + np.sin(phi)[None, :] * np.dot(e2, alpha.array)) \
        + cos_t[:, None] * axis.dot(alpha)
    flux = _flux_on_cosines(sphere, s_alpha, coeffs)
    flux = flux * np.exp(1j * k * np.dot(alpha.array, sphere.center_array))
    integrand = (wrho * np.exp(1j * k * rho))[:, None] * flux
    layer = (R / r) / (4 * math.pi) * np.sum(integrand) * (2 * math.pi / n_phi)
    return complex(np.exp(1j * k * np.dot(alpha.array, x)) - layer)
