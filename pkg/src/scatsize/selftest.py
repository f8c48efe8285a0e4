"""Embedded invariant suite run by ``scatsize selftest``.

Each check returns a :class:`CheckResult` with the measured defect and the
tolerance it was held to.  All checks are deterministic and together take a
few seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.integrate import lebedev_rule

from .estimator import lemma1_oracle
from .forward_obstacle import (
    SphereObstacle,
    amplitude_via_surface_integral,
    mie_coefficients,
    obstacle_amplitude,
    sphere_amplitude,
    translation_phase,
)
from .forward_potential import AnalyticPotential, amplitude_from_H, born_amplitude, \
    solve_lippmann_schwinger
from .geometry import E1, E2, E3, Ball, RealDirection, VarietyDirection, real_direction, translate
from .special_functions import wrap_phase


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: {self.value:.3e} <= {self.tolerance:.1e}{extra}"


def _result(name, value, tol, detail=""):
    return CheckResult(name, bool(value <= tol), float(value), tol, detail)


def _coefficients(sphere: SphereObstacle, lmax: int, perturb: float | None):
    T = mie_coefficients(sphere, lmax)
    if perturb:
        T = T.perturbed(1, perturb)
    return T


def optical_theorem_defect(amplitude_fn: Callable[[RealDirection], complex],
                           alpha: RealDirection, k: float, order: int = 35) -> float:
    """Relative defect of ``Im A(alpha, alpha) = k/(4 pi) int |A(beta, alpha)|^2 dbeta``.

    ``amplitude_fn`` maps a real observation direction to the complex
    amplitude; the sphere integral uses a Lebedev rule of the given order.
    """
    x, wts = lebedev_rule(order)
    values = np.array([amplitude_fn(RealDirection.normalized(p)) for p in x.T])
    sigma = k / (4 * math.pi) * float(np.sum(wts * np.abs(values) ** 2))
    forward = amplitude_fn(alpha).imag
    return abs(forward - sigma) / abs(sigma)


def check_unitarity(perturb: float | None = None) -> CheckResult:
    worst = 0.0
    for kR in (0.5, 3.0, 10.0):
        sphere = SphereObstacle(1.0, kR)
        T = _coefficients(sphere, int(math.ceil(kR)) + 40, perturb)
        worst = max(worst, T.unitarity_defect())
    return _result("mie-unitarity", worst, 1e-12, "kR in {0.5, 3, 10}")


def check_sphere_optical_theorem(perturb: float | None = None) -> CheckResult:
    worst = 0.0
    for kR in (1.0, 3.0):
        sphere = SphereObstacle(1.0, kR)
        L = int(math.ceil(kR)) + 60
        T = _coefficients(sphere, L, perturb)
        forward = sphere_amplitude(sphere, 1.0, coefficients=T).to_complex().imag
        ls = np.arange(L + 1)
        sigma = float(np.sum((2 * ls + 1) * np.abs(T.T) ** 2)) / sphere.k
        worst = max(worst, abs(forward - sigma) / sigma)
    return _result("sphere-optical-theorem", worst, 1e-12, "kR in {1, 3}")


def check_ls_optical_theorem() -> CheckResult:
    k = 1.0
    alpha = RealDirection.normalized([0.6, 0.8, 0.0])
    q = AnalyticPotential(Ball((0.0, 0.0, 0.0), 1.0), 1.0)
    H = solve_lippmann_schwinger(q, alpha, k, grid_size=24)
    defect = optical_theorem_defect(
        lambda d: amplitude_from_H(H, real_direction(d), k).to_complex(), alpha, k)
    return _result("ls-optical-theorem", defect, 1e-3, "unit ball q0=1 k=1 grid 24^3")


def cross_representation_defects(b: float, kRs: Iterable[float] = (1.0, 3.0, 6.0)) -> list:
    """Relative logmag differences between series and surface-integral amplitudes."""
    alpha = RealDirection.normalized([0.6, 0.8, 0.0])
    out = []
    for kR in kRs:
        sphere = SphereObstacle(1.0, kR)
        beta = VarietyDirection(E3, E2, b)
        s = obstacle_amplitude(sphere, alpha, beta)
        q = amplitude_via_surface_integral(sphere, alpha, beta)
        out.append(abs(s.logmag - q.logmag) / max(abs(s.logmag), 1.0))
    return out


def check_cross_representation() -> list:
    return [
        _result("cross-representation-b0", max(cross_representation_defects(0.0)), 1e-10,
                "kR in {1, 3, 6}"),
        _result("cross-representation-b5", max(cross_representation_defects(5.0)), 1e-4,
                "kR in {1, 3, 6}"),
    ]


def check_lemma1() -> list:
    ball = Ball((0.0, 0.0, 0.0), 1.0)
    val = lemma1_oracle(ball, E2, 30.0, 1.0) / 30.0
    ref = 1.0 + math.log(2 * math.pi * (1 - math.exp(-60.0)) / 30.0) / 30.0
    # ln J/(bk) = 1 + ln(2 pi/(bk))/(bk) bottoms out at bk = 2 pi e, rising after
    grid = np.arange(20.0, 121.0, 10.0)
    trend = np.array([lemma1_oracle(ball, E2, b, 1.0) / b for b in grid])
    steps = np.diff(trend)
    return [
        _result("lemma1-ball-b30", abs(val - ref), 1e-12, f"lnJ/(bk) = {val:.6f}"),
        CheckResult("lemma1-monotone-trend", bool(np.all(steps > 0) and trend[-1] < 1.0),
                    float(max(-steps.min(), 0.0)), 0.0, "b = 20..120"),
    ]


def check_translation() -> CheckResult:
    k = 4.0
    alpha = RealDirection.normalized([0.6, 0.8, 0.0])
    shift = np.array([0.3, -0.7, 0.2])
    ball = Ball((0.0, 0.0, 0.0), 1.0)
    q = AnalyticPotential(ball, 1.0)
    qt = AnalyticPotential(translate(ball, shift), 1.0)
    worst = 0.0
    for b in (0.0, 3.0, 12.0):
        beta = VarietyDirection(E1, E2, b)
        expected = born_amplitude(q, alpha, beta, k) * translation_phase(alpha, beta, shift, k)
        got = born_amplitude(qt, alpha, beta, k)
        worst = max(worst, abs(got.logmag - expected.logmag),
                    abs(wrap_phase(got.phase - expected.phase)))
    return _result("translation-covariance", worst, 1e-8, "Born ball, b in {0, 3, 12}")


def run_all(perturb_mie: float | None = None) -> list:
    results = [check_unitarity(perturb_mie), check_sphere_optical_theorem(perturb_mie)]
    results.append(check_ls_optical_theorem())
    results.extend(check_cross_representation())
    results.extend(check_lemma1())
    results.append(check_translation())
    return results
