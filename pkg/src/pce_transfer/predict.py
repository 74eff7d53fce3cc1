"""Pushed-forward predictions and their scores.

A Gaussian coefficient posterior pushed through the (linear) basis map gives
a Gaussian over outputs at any set of evaluation points: mean = A mu,
covariance = A Sigma A^T, optionally inflated by an observation-noise
variance on the diagonal.  Scores are the summed per-point marginal
log-densities of observed outputs and the plain RMSE of the mean surrogate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec, vandermonde
from .errors import DomainError, NumericError
from .gaussian import GaussianDist

# Marginal variances below this are clamped before taking logs; scores that
# hit the clamp are finite sentinels (~ -690 per point) rather than -inf.
MARGINAL_VAR_FLOOR = 1e-300


@dataclass(frozen=True)
class PfpPrediction:
    """Gaussian over outputs at a list of evaluation points."""

    points: np.ndarray
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        mean = np.asarray(self.mean, dtype=float).ravel()
        cov = np.asarray(self.cov, dtype=float)
        m = points.shape[0]
        if mean.shape[0] != m or cov.shape != (m, m):
            raise ValueError("points, mean, and cov sizes disagree")
        for arr in (points, mean, cov):
            arr.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def marginal_var(self) -> np.ndarray:
        return np.diag(self.cov)


def pushforward(posterior: GaussianDist, basis: BasisSpec, points,
                noise_var: float = 0.0) -> PfpPrediction:
    """Push a coefficient posterior through the basis map at the given points.

    noise_var > 0 adds observation noise to the predictive diagonal; the
    default 0 scores the model alone.  The covariance is assembled as
    (A L)(A L)^T from the posterior's Cholesky factor so its diagonal cannot
    go negative by round-off.
    """
    if posterior.dim != basis.n_terms:
        raise ValueError(
            f"posterior dimension {posterior.dim} does not match basis size {basis.n_terms}"
        )
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    A = vandermonde(basis, pts)
    B = A @ posterior.chol
    cov = B @ B.T
    cov = 0.5 * (cov + cov.T)
    if noise_var:
        cov = cov + noise_var * np.eye(len(pts))
    return PfpPrediction(points=pts, mean=A @ posterior.mean, cov=cov)


def lpfp(pred: PfpPrediction, y_obs) -> float:
    """Sum over points of the marginal Gaussian log-density of each observation."""
    y = np.asarray(y_obs, dtype=float).ravel()
    if y.shape[0] != pred.mean.shape[0]:
        raise ValueError("observation count does not match prediction count")
    var = pred.marginal_var
    if np.any(var < 0) or np.any(~np.isfinite(var)):
        raise NumericError("non-positive or non-finite marginal variance")
    var = np.maximum(var, MARGINAL_VAR_FLOOR)
    resid = y - pred.mean
    return float(-0.5 * np.sum(np.log(2.0 * np.pi * var) + resid**2 / var))


def rmse(posterior_mean, basis: BasisSpec, points, y_true) -> float:
    """RMSE of the mean-coefficient surrogate at validation points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0:
        raise DomainError("empty validation point list")
    y = np.asarray(y_true, dtype=float).ravel()
    if y.shape[0] != pts.shape[0]:
        raise ValueError("y_true length does not match point count")
    pred = vandermonde(basis, pts) @ np.asarray(posterior_mean, dtype=float)
    return float(np.sqrt(np.mean((pred - y) ** 2)))


def correlation_matrix(dist: GaussianDist) -> np.ndarray:
    """Matrix of correlation coefficients R = D^{-1} Sigma D^{-1}, D = sqrt(diag)."""
    d = np.sqrt(np.diag(dist.cov))
    R = dist.cov / np.outer(d, d)
    R = 0.5 * (R + R.T)
    np.fill_diagonal(R, 1.0)
    return np.clip(R, -1.0, 1.0)
