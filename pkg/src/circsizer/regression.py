"""Local linear regression with a circular covariate and linear response.

At an angle theta the fit minimizes

    sum_i K_nu(theta - Theta_i) * (Y_i - (a + b*sin(Theta_i - theta)))^2

and reports fhat(theta; nu) = a_hat, fhat'(theta; nu) = b_hat.  The local
basis regressor is the sine of the offset, not its linearization; its
orientation sin(Theta_i - theta) ~ Theta_i - theta is what makes b_hat
track the derivative of the fitted level curve (the opposite orientation
negates the reported slope).
The 2x2 weighted normal equations are solved in closed form; a design is
declared singular when its determinant falls below a scale-relative
threshold, and callers (the map layer) turn that into a Sparse cell rather
than regularizing silently.
"""

from dataclasses import dataclass

import numpy as np

from .density import InsufficientDataError
from .kernels import bessel_i0_scaled, wrap

__all__ = [
    "SingularDesignError",
    "CircLinearSample",
    "LocalFit",
    "SINGULARITY_RTOL",
    "local_design",
    "loclin_fit",
    "loclin_grid",
    "deriv_weights",
    "conditional_variance_form",
]

# normal matrix is singular when det < SINGULARITY_RTOL * (trace/2)^2
SINGULARITY_RTOL = 1e-12


class SingularDesignError(ValueError):
    """Raised when the local weighted design cannot be inverted."""


@dataclass(frozen=True)
class CircLinearSample:
    """Paired (angle, response) observations; angles wrapped on construction."""

    angles: np.ndarray
    responses: np.ndarray

    def __post_init__(self):
        ang = np.atleast_1d(np.asarray(wrap(self.angles), dtype=float))
        resp = np.atleast_1d(np.asarray(self.responses, dtype=float))
        if ang.size != resp.size:
            raise ValueError("angles and responses must have the same length")
        if ang.size < 2:
            raise InsufficientDataError("regression sample needs at least 2 pairs")
        if not np.all(np.isfinite(resp)):
            raise ValueError("responses must be finite")
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "responses", resp)

    @property
    def n(self):
        return self.angles.size


@dataclass(frozen=True)
class LocalFit:
    """Level and derivative estimate of one local weighted fit."""

    a_hat: float
    b_hat: float
    theta: float
    nu: float


def local_design(angles, theta_grid, nu):
    """Kernel weights and sine regressors for a grid of fit locations.

    Returns (w, s) with shape (ngrid, n): w[g, i] = K_nu(theta_g - Theta_i)
    and s[g, i] = sin(Theta_i - theta_g).
    """
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    diff = theta_grid[:, None] - np.asarray(angles, dtype=float)[None, :]
    norm = 2.0 * np.pi * bessel_i0_scaled(nu)
    w = np.exp(nu * (np.cos(diff) - 1.0)) / norm
    return w, np.sin(-diff)


def _normal_sums(w, s, y):
    s0 = w.sum(axis=-1)
    s1 = (w * s).sum(axis=-1)
    s2 = (w * s * s).sum(axis=-1)
    t0 = (w * y).sum(axis=-1)
    t1 = (w * s * y).sum(axis=-1)
    return s0, s1, s2, t0, t1


def _solve(s0, s1, s2, t0, t1):
    det = s0 * s2 - s1 * s1
    ok = det > SINGULARITY_RTOL * (0.5 * (s0 + s2)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(ok, (s2 * t0 - s1 * t1) / det, np.nan)
        b = np.where(ok, (s0 * t1 - s1 * t0) / det, np.nan)
    return a, b, ok


def loclin_fit(sample, theta, nu):
    """Exact weighted least-squares solution of the local linear problem."""
    w, s = local_design(sample.angles, theta, nu)
    a, b, ok = _solve(*_normal_sums(w, s, sample.responses))
    if not ok[0]:
        raise SingularDesignError(
            f"singular local design at theta={float(theta):.6g}, nu={float(nu):.6g}"
        )
    return LocalFit(float(a[0]), float(b[0]), float(wrap(theta)), float(nu))


def loclin_grid(sample, theta_grid, nu):
    """Vectorized local fits over a grid of angles.

    Returns (a_hat, b_hat, ok); entries where ok is False are NaN instead
    of raising, so the map layer can mark those cells Sparse.
    """
    w, s = local_design(sample.angles, theta_grid, nu)
    return _solve(*_normal_sums(w, s, sample.responses))


def deriv_weights(angles, theta, nu):
    """Weights W_i with (1/n) * sum_i W_i * Y_i = b_hat for every Y.

    These are n times the second row of (X'WX)^{-1} X'W for the design with
    rows (1, sin(Theta_i - theta)) and kernel weights on the diagonal.
    """
    angles = np.asarray(angles, dtype=float)
    w, s = local_design(angles, theta, nu)
    w, s = w[0], s[0]
    s0, s1 = w.sum(), (w * s).sum()
    s2 = (w * s * s).sum()
    det = s0 * s2 - s1 * s1
    if not det > SINGULARITY_RTOL * (0.5 * (s0 + s2)) ** 2:
        raise SingularDesignError(
            f"singular local design at theta={float(theta):.6g}, nu={float(nu):.6g}"
        )
    return angles.size * w * (s0 * s - s1) / det


def conditional_variance_form(weights, sigma2):
    """Plug-in variance sum_i sigma2_i * W_i^2 / n^2.

    Kept as a closed-form cross-check for the bootstrap sd estimator; the
    inference engine itself never uses it.
    """
    weights = np.asarray(weights, dtype=float)
    sigma2 = np.asarray(sigma2, dtype=float)
    if weights.shape != sigma2.shape:
        raise ValueError("weights and sigma2 must have the same length")
    if np.any(sigma2 < 0):
        raise ValueError("variances must be nonnegative")
    n = weights.size
    return float(np.sum(sigma2 * weights**2) / n**2)
