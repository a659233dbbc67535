"""Pure numpy implementation of the bootstrap hot kernels.

Resamples are represented by index matrices idx of shape (B, n); each row
is converted to a multiplicity-count vector over the original observations
so that every per-replicate statistic becomes a matrix product against
matrices precomputed once per (sample, grid, nu).
"""

import numpy as np

__all__ = ["density_boot", "reg_boot"]


def _counts(idx, n):
    b = idx.shape[0]
    flat = idx + np.arange(b)[:, None] * n
    return np.bincount(flat.ravel(), minlength=b * n).reshape(b, n).astype(float)


def density_boot(kp, idx):
    """Per-replicate density-derivative estimate and closed-form sd.

    Parameters
    ----------
    kp : (ngrid, n) array
        Kernel-derivative values K'_nu(theta_g - Theta_i) on the original
        sample.
    idx : (B, n) integer array
        With-replacement resample indices into the original sample.

    Returns
    -------
    est, sd : (B, ngrid) arrays
    """
    n = kp.shape[1]
    c = _counts(idx, n)
    m1 = c @ kp.T / n
    m2 = c @ (kp * kp).T / n
    var = np.maximum(m2 - m1 * m1, 0.0) * (n / (n - 1.0))
    # cancellation noise on degenerate columns must read as exactly zero;
    # the one-pass m2 - m1*m1 form carries eps-level relative error
    var = np.where(var < 1e-13 * m2, 0.0, var)
    return m1, np.sqrt(var / n)


def reg_boot(w, s, y, idx, rtol):
    """Per-replicate local linear derivative estimates over a grid.

    Parameters
    ----------
    w, s : (ngrid, n) arrays
        Kernel weights and sine regressors on the original sample.
    y : (n,) array
        Responses of the original sample.
    idx : (B, n) integer array
        With-replacement resample indices (pairs stay intact by indexing).
    rtol : float
        Scale-relative singularity threshold for the 2x2 normal matrix.

    Returns
    -------
    bhat : (B, ngrid) array, NaN where the design is singular
    ok : (B, ngrid) bool array
    """
    n = w.shape[1]
    c = _counts(idx, n)
    ws = w * s
    stacked = np.concatenate([w, ws, ws * s, w * y, ws * y], axis=0)
    sums = c @ stacked.T
    s0, s1, s2, t0, t1 = np.split(sums, 5, axis=1)
    det = s0 * s2 - s1 * s1
    ok = det > rtol * (0.5 * (s0 + s2)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        bhat = np.where(ok, (s0 * t1 - s1 * t0) / det, np.nan)
    return bhat, ok
