"""Angle arithmetic and the von Mises smoothing kernel.

Everything downstream (density, regression, the significance map) is built
on three primitives defined here: angle wrapping to [0, 2*pi), the scaled
modified Bessel function I0(nu)*exp(-nu), and the von Mises kernel

    K_nu(u) = exp(nu * (cos(u) - 1)) / (2*pi * I0(nu) * exp(-nu))

together with its analytic derivative.  The kernel is always evaluated in
this scaled form so that no intermediate exceeds exp(0); the unscaled
exp(nu*cos(u)) overflows for nu above ~700 and loses precision well before
that.
"""

import math

import numpy as np

TWO_PI = 2.0 * math.pi

__all__ = [
    "TWO_PI",
    "InvalidAngleError",
    "wrap",
    "angular_distance",
    "bessel_i0_scaled",
    "vm_kernel",
    "vm_kernel_deriv",
]


class InvalidAngleError(ValueError):
    """Raised when an angle argument is not a finite number."""


def wrap(theta):
    """Reduce angles modulo 2*pi into [0, 2*pi).

    Accepts a scalar or array; the return type matches the input.
    """
    arr = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidAngleError("angles must be finite")
    out = np.mod(arr, TWO_PI)
    # np.mod can round up to exactly 2*pi for tiny negative inputs
    out = np.where(out >= TWO_PI, 0.0, out)
    if np.isscalar(theta) or arr.ndim == 0:
        return float(out)
    return out


def angular_distance(a, b):
    """Shortest arc length between two angles, in [0, pi]."""
    d = np.abs(np.asarray(wrap(a)) - np.asarray(wrap(b)))
    d = np.minimum(d, TWO_PI - d)
    if np.ndim(d) == 0:
        return float(d)
    return d


# crossover between the power series and the asymptotic expansion of I0
_SERIES_CUTOFF = 15.0


def _i0_series(x):
    # sum_k (x/2)^(2k) / (k!)^2, term recurrence t_k = t_{k-1} * (x/2)^2 / k^2
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, 200):
        term *= q / (k * k)
        total += term
        if term < 1e-18 * total:
            break
    return total


def _i0e_asymptotic(x):
    # I0(x)*exp(-x) ~ (2*pi*x)^{-1/2} * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    term = 1.0
    total = 1.0
    for k in range(1, 40):
        new = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if new >= term:  # asymptotic series started diverging
            break
        term = new
        total += term
        if term < 1e-17 * total:
            break
    return total / math.sqrt(TWO_PI * x)


def bessel_i0_scaled(nu):
    """Exponentially scaled modified Bessel function I0(nu)*exp(-nu).

    Monotonically decreasing in nu, with value 1 at nu=0.  Uses the power
    series below nu=15 and the standard asymptotic expansion above.
    """
    nu = float(nu)
    if nu < 0:
        raise ValueError("concentration must be nonnegative")
    if nu < _SERIES_CUTOFF:
        return _i0_series(nu) * math.exp(-nu)
    return _i0e_asymptotic(nu)


def vm_kernel(u, nu):
    """Von Mises kernel K_nu(u), vectorized over u.

    Symmetric, 2*pi-periodic, integrates to 1 over a period; nu=0 gives the
    uniform kernel 1/(2*pi).
    """
    norm = TWO_PI * bessel_i0_scaled(nu)
    val = np.exp(nu * (np.cos(u) - 1.0)) / norm
    if np.ndim(u) == 0:
        return float(val)
    return val


def vm_kernel_deriv(u, nu):
    """Derivative K'_nu(u) = -nu * sin(u) * K_nu(u), vectorized over u."""
    norm = TWO_PI * bessel_i0_scaled(nu)
    val = -nu * np.sin(u) * np.exp(nu * (np.cos(u) - 1.0)) / norm
    if np.ndim(u) == 0:
        return float(val)
    return val
