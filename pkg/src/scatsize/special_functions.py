"""Spherical Bessel/Hankel functions and Legendre polynomials in log-scaled form.

Amplitudes continued to complex directions grow like ``exp(k b d)``, so every
value that can leave the double range is carried as a :class:`LogComplex`
(natural-log modulus plus phase).  The Bessel recurrences keep an explicit
running exponent so that ``j_l`` deep in the evanescent regime and ``y_l`` of
huge order remain representable.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_RESCALE = 1e100
_LOG_RESCALE = math.log(_RESCALE)


def wrap_phase(phase: float) -> float:
    """Map an angle into (-pi, pi]."""
    r = math.remainder(phase, 2.0 * math.pi)
    return math.pi if r <= -math.pi else r


@dataclass(frozen=True)
class LogComplex:
    """A complex number ``exp(logmag + i*phase)``, or exact zero when ``zero_flag``."""

    logmag: float
    phase: float = 0.0
    zero_flag: bool = False

    def __post_init__(self):
        if self.zero_flag:
            object.__setattr__(self, "logmag", -math.inf)
            object.__setattr__(self, "phase", 0.0)
            return
        if math.isnan(self.logmag) or math.isnan(self.phase):
            raise ValueError("LogComplex components must not be NaN")
        if self.logmag == -math.inf:
            object.__setattr__(self, "zero_flag", True)
            object.__setattr__(self, "phase", 0.0)
            return
        object.__setattr__(self, "phase", wrap_phase(float(self.phase)))

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(-math.inf, 0.0, True)

    @classmethod
    def from_complex(cls, z: complex) -> "LogComplex":
        z = complex(z)
        if z == 0:
            return cls.zero()
        if not cmath.isfinite(z):
            raise OverflowError(f"cannot represent non-finite value {z!r}")
        return cls(math.log(abs(z)), cmath.phase(z))

    @classmethod
    def exp(cls, w: complex) -> "LogComplex":
        """``exp(w)`` without ever forming the (possibly huge) value."""
        w = complex(w)
        return cls(w.real, w.imag)

    def to_complex(self) -> complex:
        """Plain complex value; overflows to ``inf`` modulus for huge numbers."""
        if self.zero_flag:
            return 0j
        with np.errstate(over="ignore"):
            mag = float(np.exp(self.logmag))
        return mag * cmath.exp(1j * self.phase) if math.isfinite(mag) else complex(math.inf, 0.0)

    def __mul__(self, other) -> "LogComplex":
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if self.zero_flag or other.zero_flag:
            return LogComplex.zero()
        return LogComplex(self.logmag + other.logmag, self.phase + other.phase)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogComplex":
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if other.zero_flag:
            raise ZeroDivisionError("division by LogComplex zero")
        if self.zero_flag:
            return self
        return LogComplex(self.logmag - other.logmag, self.phase - other.phase)

    def _combine(self, other, sign: int) -> "LogComplex":
        big = max(self.logmag, other.logmag)
        z = (cmath.exp(complex(self.logmag - big, self.phase))
             + sign * cmath.exp(complex(other.logmag - big, other.phase)))
        if z == 0:
            return LogComplex.zero()
        return LogComplex(big + math.log(abs(z)), cmath.phase(z))

    def __add__(self, other) -> "LogComplex":
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if self.zero_flag:
            return other
        if other.zero_flag:
            return self
        return self._combine(other, 1)

    __radd__ = __add__

    def __neg__(self) -> "LogComplex":
        if self.zero_flag:
            return self
        return LogComplex(self.logmag, self.phase + math.pi)

    def __sub__(self, other) -> "LogComplex":
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if other.zero_flag:
            return self
        if self.zero_flag:
            return -other
        return self._combine(other, -1)

    def conjugate(self) -> "LogComplex":
        if self.zero_flag:
            return self
        return LogComplex(self.logmag, -self.phase)

    def log(self) -> complex:
        """Principal complex logarithm."""
        if self.zero_flag:
            raise ValueError("log of zero")
        return complex(self.logmag, self.phase)


class ScaledAccumulator:
    """Running sum of :class:`LogComplex` terms.

    The partial sum is held as ``mantissa * exp(scale)`` and renormalised
    whenever the mantissa modulus exceeds 1e100, so arbitrarily large or small
    terms can be added in sequence.
    """

    def __init__(self):
        self.mantissa = 0j
        self.scale = 0.0

    def add(self, term: LogComplex) -> None:
        if term.zero_flag:
            return
        if self.mantissa == 0:
            self.mantissa = cmath.exp(1j * term.phase)
            self.scale = term.logmag
            return
        if term.logmag > self.scale + _LOG_RESCALE:
            self.mantissa *= math.exp(self.scale - term.logmag)
            self.scale = term.logmag
        self.mantissa += cmath.exp(complex(term.logmag - self.scale, term.phase))
        mag = abs(self.mantissa)
        if mag > _RESCALE or (0 < mag < 1.0 / _RESCALE):
            self.mantissa /= mag
            self.scale += math.log(mag)

    @property
    def value(self) -> LogComplex:
        if self.mantissa == 0:
            return LogComplex.zero()
        return LogComplex(self.scale + math.log(abs(self.mantissa)), cmath.phase(self.mantissa))


def log_sum(logmag, phase) -> LogComplex:
    """Sum of ``exp(logmag + i phase)`` over arrays, factoring out the largest term."""
    logmag = np.asarray(logmag, dtype=float).ravel()
    phase = np.asarray(phase, dtype=float).ravel()
    finite = np.isfinite(logmag)
    if not finite.any():
        return LogComplex.zero()
    big = float(np.max(logmag[finite]))
    s = np.sum(np.exp(logmag[finite] - big + 1j * phase[finite]))
    if s == 0:
        return LogComplex.zero()
    return LogComplex(big + math.log(abs(s)), cmath.phase(s))


def scaled_sum(values, log_scale: float) -> LogComplex:
    """``exp(log_scale) * sum(values)`` for a moderate-size complex array."""
    s = complex(np.sum(values))
    if s == 0:
        return LogComplex.zero()
    return LogComplex(log_scale + math.log(abs(s)), cmath.phase(s))


@dataclass(frozen=True)
class ScaledSequence:
    """Degree-indexed sequence ``l = 0..lmax`` of log-scaled complex values."""

    logmag: np.ndarray
    phase: np.ndarray
    zero: np.ndarray

    def __len__(self):
        return len(self.logmag)

    def __getitem__(self, l: int) -> LogComplex:
        if self.zero[l]:
            return LogComplex.zero()
        return LogComplex(float(self.logmag[l]), float(self.phase[l]))

    @property
    def values(self) -> list:
        return [self[l] for l in range(len(self))]

    @property
    def lmax(self) -> int:
        return len(self) - 1

    def to_complex(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            out = np.exp(self.logmag + 1j * self.phase)
        out[self.zero] = 0.0
        return out


# --------------------------------------------------------------------------
# spherical Bessel functions


def _check_args(lmax: int, x: float) -> tuple[int, float]:
    if int(lmax) != lmax or lmax < 0:
        raise DomainError(f"lmax must be a non-negative integer, got {lmax!r}")
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"argument must be positive and finite, got {x!r}")
    return int(lmax), x


def miller_start(lmax: int, x: float) -> int:
    """Starting degree of the downward recurrence for ``j_l``."""
    top = max(lmax, int(math.ceil(x)))
    return top + max(20, int(math.ceil(math.sqrt(40.0 * top))))


def _downward(lmax: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    # unnormalised minimal solution as mantissa * exp(scale), degrees 0..lmax
    start = miller_start(lmax, x)
    mant = np.zeros(lmax + 1)
    scale = np.zeros(lmax + 1)
    f_next, f_cur, s = 0.0, 1.0, 0.0
    for l in range(start, 0, -1):
        f_prev = (2 * l + 1) / x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        if abs(f_cur) > _RESCALE:
            f_next /= _RESCALE
            f_cur /= _RESCALE
            s += _LOG_RESCALE
        if l - 1 <= lmax:
            mant[l - 1] = f_cur
            scale[l - 1] = s
    # bring stored mantissas onto the final scale so ratios are consistent
    return mant, scale - s


def log_spherical_jn(lmax: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """``(sign, log|j_l(x)|)`` for ``l = 0..lmax`` by normalised downward recurrence."""
    lmax, x = _check_args(lmax, x)
    n = max(lmax, 1)
    mant, scale = _downward(n, x)
    j0 = math.sin(x) / x
    j1 = math.sin(x) / (x * x) - math.cos(x) / x
    ref, true = (0, j0) if abs(j0) >= abs(j1) else (1, j1)
    log_c = math.log(abs(mant[ref])) + scale[ref] - math.log(abs(true))
    sign_c = math.copysign(1.0, mant[ref]) * math.copysign(1.0, true)
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(mant)) + scale - log_c
    sign = np.sign(mant) * sign_c
    return sign[: lmax + 1], logabs[: lmax + 1]


def log_spherical_yn(lmax: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """``(sign, log|y_l(x)|)`` by upward recurrence with running rescaling."""
    lmax, x = _check_args(lmax, x)
    sign = np.zeros(lmax + 1)
    logabs = np.zeros(lmax + 1)
    y_prev = -math.cos(x) / x
    y_cur = -math.cos(x) / (x * x) - math.sin(x) / x
    s = 0.0

    def put(l, val):
        sign[l] = math.copysign(1.0, val) if val != 0 else 0.0
        logabs[l] = math.log(abs(val)) + s if val != 0 else -math.inf

    put(0, y_prev)
    if lmax >= 1:
        put(1, y_cur)
    for l in range(1, lmax):
        y_prev, y_cur = y_cur, (2 * l + 1) / x * y_cur - y_prev
        if abs(y_cur) > _RESCALE:
            y_prev /= _RESCALE
            y_cur /= _RESCALE
            s += _LOG_RESCALE
        put(l + 1, y_cur)
    return sign, logabs


def log_spherical_hankel1(lmax: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """``(log|h_l(x)|, arg h_l(x))`` for ``h_l = j_l + i y_l``."""
    sj, lj = log_spherical_jn(lmax, x)
    sy, ly = log_spherical_yn(lmax, x)
    big = np.maximum(lj, ly)
    with np.errstate(invalid="ignore"):
        m = sj * np.exp(lj - big) + 1j * sy * np.exp(ly - big)
    return big + np.log(np.abs(m)), np.angle(m)


def spherical_bessel_j(lmax: int, x: float) -> np.ndarray:
    """Spherical Bessel functions ``j_0(x) .. j_lmax(x)``.

    Values below the double range underflow to zero; use
    :func:`log_spherical_jn` to keep them.
    """
    sign, logabs = log_spherical_jn(lmax, x)
    return sign * np.exp(logabs)


def spherical_bessel_y(lmax: int, x: float) -> np.ndarray:
    sign, logabs = log_spherical_yn(lmax, x)
    with np.errstate(over="ignore"):
        return sign * np.exp(logabs)


def spherical_hankel1(lmax: int, x: float) -> np.ndarray:
    """Spherical Hankel functions of the first kind ``h_l = j_l + i y_l``."""
    logabs, phase = log_spherical_hankel1(lmax, x)
    with np.errstate(over="ignore"):
        return np.exp(logabs) * np.exp(1j * phase)


def spherical_derivatives(values: np.ndarray, x: float) -> np.ndarray:
    """Derivatives ``f_l'(x)`` of a spherical Bessel-type sequence ``f_0..f_L`` (L >= 1).

    Uses ``f_0' = -f_1`` and ``f_l' = f_{l-1} - (l+1)/x f_l``.
    """
    values = np.asarray(values)
    if len(values) < 2:
        raise DomainError("need at least degrees 0 and 1")
    out = np.empty_like(values)
    out[0] = -values[1]
    l = np.arange(1, len(values))
    out[1:] = values[:-1] - (l + 1) / x * values[1:]
    return out


# --------------------------------------------------------------------------
# Legendre polynomials


def legendre_scaled(lmax: int, z: complex) -> ScaledSequence:
    """``P_0(z) .. P_lmax(z)`` at a complex argument, in log-scaled form.

    The three-term recurrence runs on mantissas sharing a common exponent,
    renormalised whenever the current value passes 1e100.
    """
    if int(lmax) != lmax or lmax < 0:
        raise DomainError(f"lmax must be a non-negative integer, got {lmax!r}")
    lmax = int(lmax)
    z = complex(z)
    logmag = np.zeros(lmax + 1)
    phase = np.zeros(lmax + 1)
    zero = np.zeros(lmax + 1, dtype=bool)
    s = 0.0

    def put(l, p):
        if p == 0:
            zero[l] = True
            logmag[l] = -math.inf
        else:
            logmag[l] = math.log(abs(p)) + s
            phase[l] = cmath.phase(p)

    p_prev, p_cur = 1.0 + 0j, z
    put(0, p_prev)
    if lmax >= 1:
        put(1, p_cur)
    for l in range(1, lmax):
        p_prev, p_cur = p_cur, ((2 * l + 1) * z * p_cur - l * p_prev) / (l + 1)
        mag = abs(p_cur)
        if mag > _RESCALE:
            p_prev /= mag
            p_cur /= mag
            s += math.log(mag)
        put(l + 1, p_cur)
    return ScaledSequence(logmag, phase, zero)


def legendre_real(lmax: int, mu) -> np.ndarray:
    """``P_l(mu)`` for real ``mu`` in [-1, 1], shape ``(lmax + 1,) + mu.shape``."""
    mu = np.asarray(mu, dtype=float)
    out = np.empty((lmax + 1,) + mu.shape)
    out[0] = 1.0
    if lmax >= 1:
        out[1] = mu
    for l in range(1, lmax):
        out[l + 1] = ((2 * l + 1) * mu * out[l] - l * out[l - 1]) / (l + 1)
    return out
