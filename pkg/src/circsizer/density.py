"""Circular kernel density estimation and its derivative.

The estimator at angle theta with concentration nu is the average of the
von Mises kernel over the sample offsets,

    fhat(theta; nu) = (1/n) * sum_i K_nu(theta - Theta_i),

its derivative replaces K_nu with K'_nu, and the standard deviation of the
derivative estimator is sqrt(s^2 / n) where s^2 is the (n-1)-denominator
sample variance of the n kernel-derivative values.
"""

from dataclasses import dataclass, field

import numpy as np

from .kernels import vm_kernel, vm_kernel_deriv, wrap

__all__ = [
    "EmptySampleError",
    "InsufficientDataError",
    "CircularSample",
    "density_estimate",
    "density_deriv",
    "density_deriv_sd",
]


class EmptySampleError(ValueError):
    """Raised when an operation requires at least one observation."""


class InsufficientDataError(ValueError):
    """Raised when an operation requires more observations than supplied."""


@dataclass(frozen=True)
class CircularSample:
    """A sample of angles, wrapped into [0, 2*pi) on construction."""

    angles: np.ndarray = field()

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(wrap(self.angles), dtype=float))
        if arr.size == 0:
            raise EmptySampleError("sample must contain at least one angle")
        object.__setattr__(self, "angles", arr)

    @property
    def n(self):
        return self.angles.size


def _offsets(sample, theta):
    theta = np.asarray(theta, dtype=float)
    return theta[..., None] - sample.angles


def density_estimate(sample, theta, nu):
    """Kernel density estimate at theta (scalar or array of angles)."""
    val = np.mean(vm_kernel(_offsets(sample, theta), nu), axis=-1)
    return float(val) if val.ndim == 0 else val


def density_deriv(sample, theta, nu):
    """Derivative of the kernel density estimate at theta."""
    val = np.mean(vm_kernel_deriv(_offsets(sample, theta), nu), axis=-1)
    return float(val) if val.ndim == 0 else val


def density_deriv_sd(sample, theta, nu):
    """Closed-form sd of the density-derivative estimator at theta.

    Requires n >= 2 observations; the variance of the estimator is the
    sample variance of the kernel-derivative values divided by n.
    """
    if sample.n < 2:
        raise InsufficientDataError("sd estimate needs at least 2 observations")
    vals = vm_kernel_deriv(_offsets(sample, theta), nu)
    var = np.var(vals, axis=-1, ddof=1)
    # variance below rounding noise of identical values is exactly zero
    var = np.where(var < 1e-13 * np.mean(vals * vals, axis=-1), 0.0, var)
    out = np.sqrt(var / sample.n)
    return float(out) if out.ndim == 0 else out
