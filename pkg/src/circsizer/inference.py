"""Bootstrap-t inference for derivative estimators over a circular grid.

For a fixed concentration nu and a grid of angles, the engine draws B
with-replacement resamples, studentizes the replicate derivative estimates

    Z*_b(theta) = (fhat'*(theta; nu) - fhat'(theta; nu)) / sd(fhat'*(theta; nu)),

takes empirical alpha and (1-alpha) quantiles of Z*, and reports the
interval

    (fhat' - t_hi * sd0,  fhat' - t_lo * sd0)

with sd0 estimated on the original data.  In density mode both sd0 and the
per-replicate denominators come from the closed-form expression; in
regression mode sd0 is the sample sd of the B replicate estimates and each
replicate's denominator comes from a nested bootstrap of B2 inner
resamples of that replicate.

Reproducibility: every resample is drawn from a counter-based substream
derived from (seed, nu_index, replicate, stage), so results are
bit-identical no matter how work is scheduled across threads.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .density import CircularSample, InsufficientDataError
from .kernels import vm_kernel_deriv
from .regression import SINGULARITY_RTOL, CircLinearSample, local_design

__all__ = [
    "BootstrapConfig",
    "CellState",
    "ConfidenceBand",
    "substream",
    "empirical_quantile",
    "resample_density",
    "resample_pairs",
    "bootstrap_sd_regression",
    "bootstrap_t_band",
    "classify",
]


class CellState(enum.Enum):
    """Significance state of one (theta, nu) cell."""

    INCREASING = "increasing"
    DECREASING = "decreasing"
    FLAT = "flat"
    SPARSE = "sparse"


@dataclass(frozen=True)
class BootstrapConfig:
    """Knobs of the bootstrap-t procedure.

    B is the number of outer resamples; B2 the number of inner resamples
    used for the per-replicate denominator in regression mode.
    """

    alpha: float = 0.05
    B: int = 500
    B2: int = 250
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 0.5)")
        if self.B < 2 or self.B2 < 2:
            raise ValueError("B and B2 must be at least 2")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class ConfidenceBand:
    """Per-grid-point derivative estimate, sd and bootstrap-t interval.

    NaN entries in (sd, lower, upper) mark grid points where no
    significance statement can be made (degenerate denominator or too few
    usable replicates); the map layer renders those Sparse.
    """

    theta_grid: np.ndarray
    nu: float
    estimate: np.ndarray
    sd: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    n_used: np.ndarray = field(default=None)

    def __post_init__(self):
        m = self.theta_grid.size
        for name in ("estimate", "sd", "lower", "upper"):
            if getattr(self, name).size != m:
                raise ValueError(f"{name} length does not match theta_grid")


def substream(seed, *path):
    """Deterministic RNG substream for the given counter path."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(path)))
    )


def empirical_quantile(values, p):
    """Order-statistic quantile at position 1 + p*(len-1), rank-interpolated."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("quantile of an empty list")
    return np.quantile(values, p, method="linear")


def resample_density(sample, rng):
    """One with-replacement resample of a circular sample."""
    idx = rng.integers(0, sample.n, sample.n)
    return CircularSample(sample.angles[idx])


def resample_pairs(sample, rng):
    """One with-replacement resample of (angle, response) pairs, kept intact."""
    idx = rng.integers(0, sample.n, sample.n)
    return CircLinearSample(sample.angles[idx], sample.responses[idx])


def _masked_col_sd(vals, ok):
    """Column-wise sample sd over rows flagged ok; NaN below 2 usable rows."""
    cnt = ok.sum(axis=0)
    safe = np.where(ok, vals, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mean = safe.sum(axis=0) / cnt
        ssq = (np.where(ok, vals - mean, 0.0) ** 2).sum(axis=0)
        var = ssq / (cnt - 1)
    sd = np.sqrt(var)
    sd[cnt < 2] = np.nan
    return sd, cnt


def _outer_indices(n, config, nu_index):
    idx = np.empty((config.B, n), dtype=np.int64)
    for b in range(config.B):
        idx[b] = substream(config.seed, nu_index, b, 0).integers(0, n, n)
    return idx


def _quantile_bounds(z, est, sd0, alpha):
    """Assemble the Step-4 interval from the studentized replicate matrix."""
    ngrid = est.size
    lower = np.full(ngrid, np.nan)
    upper = np.full(ngrid, np.nan)
    valid = np.isfinite(z)
    n_used = valid.sum(axis=0)
    usable = (n_used >= 2) & np.isfinite(sd0) & (sd0 > 0) & np.isfinite(est)
    if np.all(valid) and np.all(usable):
        t_lo, t_hi = np.quantile(z, [alpha, 1.0 - alpha], axis=0)
        lower = est - t_hi * sd0
        upper = est - t_lo * sd0
    else:
        for g in np.nonzero(usable)[0]:
            col = z[valid[:, g], g]
            t_lo, t_hi = np.quantile(col, [alpha, 1.0 - alpha])
            lower[g] = est[g] - t_hi * sd0[g]
            upper[g] = est[g] - t_lo * sd0[g]
    return lower, upper, n_used


def bootstrap_sd_regression(sample, theta_grid, nu, B, rng):
    """Bootstrap sd of the regression derivative estimate at each grid point.

    Draws B pair resamples, refits, and takes the per-point sample sd of
    the replicate estimates; replicates with singular local designs are
    dropped per point.  Returns (sd, n_used); sd is NaN where fewer than
    two replicates were usable.
    """
    if B < 2:
        raise ValueError("B must be at least 2")
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    n = sample.n
    idx = rng.integers(0, n, size=(B, n)).astype(np.int64)
    w, s = local_design(sample.angles, theta_grid, nu)
    bhat, ok = _backend.reg_boot(w, s, sample.responses, idx, SINGULARITY_RTOL)
    return _masked_col_sd(bhat, ok)


def _band_density(sample, theta_grid, nu, config, nu_index):
    if sample.n < 2:
        raise InsufficientDataError("density band needs at least 2 observations")
    n = sample.n
    kp = vm_kernel_deriv(theta_grid[:, None] - sample.angles[None, :], nu)
    est = kp.mean(axis=1)
    var0 = np.var(kp, axis=1, ddof=1)
    var0 = np.where(var0 < 1e-13 * np.mean(kp * kp, axis=1), 0.0, var0)
    sd0 = np.sqrt(var0 / n)
    idx = _outer_indices(n, config, nu_index)
    est_b, sd_b = _backend.density_boot(kp, idx)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sd_b > 0, (est_b - est) / sd_b, np.nan)
    sd0 = np.where(sd0 > 0, sd0, np.nan)
    lower, upper, n_used = _quantile_bounds(z, est, sd0, config.alpha)
    return est, sd0, lower, upper, n_used


def _band_regression(sample, theta_grid, nu, config, nu_index):
    n = sample.n
    w, s = local_design(sample.angles, theta_grid, nu)
    y = sample.responses

    identity = np.arange(n, dtype=np.int64)[None, :]
    est, ok0 = _backend.reg_boot(w, s, y, identity, SINGULARITY_RTOL)
    est = np.where(ok0[0], est[0], np.nan)

    idx = _outer_indices(n, config, nu_index)
    fits, ok = _backend.reg_boot(w, s, y, idx, SINGULARITY_RTOL)
    sd0, _ = _masked_col_sd(fits, ok)

    z = np.full_like(fits, np.nan)
    for b in range(config.B):
        inner_u = substream(config.seed, nu_index, b, 1).integers(
            0, n, size=(config.B2, n)
        )
        inner_idx = idx[b][inner_u]
        in_fits, in_ok = _backend.reg_boot(w, s, y, inner_idx, SINGULARITY_RTOL)
        sd_star, _ = _masked_col_sd(in_fits, in_ok)
        with np.errstate(divide="ignore", invalid="ignore"):
            zb = (fits[b] - est) / sd_star
        zb[~ok[b] | ~(sd_star > 0)] = np.nan
        z[b] = zb

    sd0 = np.where(sd0 > 0, sd0, np.nan)
    lower, upper, n_used = _quantile_bounds(z, est, sd0, config.alpha)
    return est, sd0, lower, upper, n_used


def bootstrap_t_band(data, mode, theta_grid, nu, config, nu_index=0):
    """Bootstrap-t confidence band for the derivative at one nu.

    mode is "density" (data: CircularSample) or "regression" (data:
    CircLinearSample).  nu_index enters the RNG substream path so that
    each ring of a scale-space sweep gets independent, reproducible
    resamples.
    """
    theta_grid = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    if mode == "density":
        parts = _band_density(data, theta_grid, nu, config, nu_index)
    elif mode == "regression":
        parts = _band_regression(data, theta_grid, nu, config, nu_index)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    est, sd0, lower, upper, n_used = parts
    return ConfidenceBand(
        theta_grid=theta_grid,
        nu=float(nu),
        estimate=est,
        sd=sd0,
        lower=lower,
        upper=upper,
        n_used=n_used,
    )


def classify(lower, upper, ess, ess_threshold):
    """Map one cell's interval and effective sample size to a CellState.

    The ESS rule dominates: below the threshold the cell is Sparse no
    matter what the interval says.
    """
    if ess < 0:
        raise ValueError("ess must be nonnegative")
    if ess < ess_threshold:
        return CellState.SPARSE
    if not (np.isfinite(lower) and np.isfinite(upper)):
        return CellState.SPARSE
    if lower > upper:
        raise ValueError("lower must not exceed upper")
    if lower > 0:
        return CellState.INCREASING
    if upper < 0:
        return CellState.DECREASING
    return CellState.FLAT
