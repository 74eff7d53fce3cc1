"""Gaussian distributions over coefficients and conjugate Bayesian regression.

A regression dataset with known Gaussian noise induces a Gaussian likelihood
over the coefficient vector (mean = ordinary least squares, covariance =
noise_var * (A^T A)^{-1}); Gaussian priors fuse with it by precision
additivity.  All solves go through QR or Cholesky factors, never explicit
inverses of the design matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular

from .basis import BasisSpec, vandermonde
from .errors import CalibrationError, NumericError

# Relative symmetry slack and the floor applied to estimated noise variances.
SYMMETRY_RTOL = 1e-12
NOISE_VAR_FLOOR = 1e-12
DEFAULT_COND_CEILING = 1e12


@dataclass(frozen=True)
class GaussianDist:
    """Multivariate normal with mean vector and SPD covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.asarray(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise NumericError("covariance must be a square matrix")
        if mean.shape[0] != cov.shape[0]:
            raise NumericError("mean length does not match covariance order")
        scale = max(np.abs(cov).max(), 1e-300)
        if np.abs(cov - cov.T).max() > SYMMETRY_RTOL * scale:
            raise NumericError("covariance is not symmetric within tolerance")
        try:
            chol = cholesky(cov, lower=True)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"covariance is not positive definite: {exc}") from exc
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "_chol", chol)

    @property
    def dim(self) -> int:
        return self.mean.size

    @property
    def chol(self) -> np.ndarray:
        """Lower Cholesky factor of the covariance (cached at construction)."""
        return self._chol

    def precision(self) -> np.ndarray:
        """Inverse covariance, assembled from the Cholesky factor."""
        p = cho_solve((self._chol, True), np.eye(self.dim))
        return 0.5 * (p + p.T)

    def to_record(self) -> dict:
        """Flat numeric record (mean, row-major covariance) for JSON output."""
        return {
            "dim": self.dim,
            "mean": self.mean.tolist(),
            "cov": self.cov.ravel().tolist(),
        }

    @classmethod
    def from_record(cls, record: dict) -> "GaussianDist":
        dim = int(record["dim"])
        mean = np.asarray(record["mean"], dtype=float)
        cov = np.asarray(record["cov"], dtype=float).reshape(dim, dim)
        return cls(mean=mean, cov=cov)


@dataclass(frozen=True)
class CalibrationTask:
    """A regression dataset with its basis and (optionally known) noise variance.

    noise_var is the variance of the i.i.d. Gaussian observation noise.  When
    None it is estimated from the residual mean square of the least-squares
    fit, floored at NOISE_VAR_FLOOR.
    """

    basis: BasisSpec
    X: np.ndarray
    Y: np.ndarray
    noise_var: float | None = None

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, self.basis.box.dimension)
        Y = np.asarray(self.Y, dtype=float).ravel()
        if X.shape[0] != Y.shape[0]:
            raise ValueError("X and Y have different numbers of samples")
        if self.noise_var is not None and not self.noise_var > 0:
            raise ValueError("noise_var must be positive when given")
        X.flags.writeable = False
        Y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]


def likelihood_with_report(task: CalibrationTask,
                           cond_ceiling: float = DEFAULT_COND_CEILING,
                           jitter: float = 0.0) -> tuple[GaussianDist, dict]:
    """Gaussian likelihood over coefficients plus fit diagnostics.

    Mean solves the least-squares problem via QR of the design matrix;
    covariance is noise_var * (A^T A)^{-1} assembled from the R factor.
    Ill-conditioning raises CalibrationError naming the condition number of
    A^T A unless an explicit ridge `jitter` is opted into.
    """
    p = task.basis.n_terms
    if task.n_samples < p:
        raise CalibrationError(
            f"under-determined fit: {task.n_samples} samples for {p} coefficients"
        )
    A = vandermonde(task.basis, task.X)
    singvals = np.linalg.svd(A, compute_uv=False)
    if singvals[-1] == 0.0:
        raise CalibrationError("design matrix is rank deficient")
    cond_normal = (singvals[0] / singvals[-1]) ** 2
    if cond_normal > cond_ceiling and jitter == 0.0:
        raise CalibrationError(
            f"normal equations condition number {cond_normal:.3e} exceeds "
            f"ceiling {cond_ceiling:.1e}"
        )

    if jitter > 0.0:
        gram = A.T @ A + jitter * np.eye(p)
        L = cholesky(gram, lower=True)
        mean = cho_solve((L, True), A.T @ task.Y)
        gram_inv = cho_solve((L, True), np.eye(p))
    else:
        Q, R = np.linalg.qr(A, mode="reduced")
        mean = solve_triangular(R, Q.T @ task.Y)
        Rinv = solve_triangular(R, np.eye(p))
        gram_inv = Rinv @ Rinv.T

    resid = task.Y - A @ mean
    if task.noise_var is None:
        noise_var = max(float(np.mean(resid**2)), NOISE_VAR_FLOOR)
    else:
        noise_var = float(task.noise_var)

    cov = noise_var * gram_inv
    dist = GaussianDist(mean=mean, cov=0.5 * (cov + cov.T))
    report = {
        "n_samples": task.n_samples,
        "n_coefficients": p,
        "condition_number": float(cond_normal),
        "residual_rmse": float(np.sqrt(np.mean(resid**2))),
        "noise_var": noise_var,
    }
    return dist, report


def likelihood(task: CalibrationTask,
               cond_ceiling: float = DEFAULT_COND_CEILING,
               jitter: float = 0.0) -> GaussianDist:
    """Gaussian likelihood over coefficients from a regression dataset."""
    return likelihood_with_report(task, cond_ceiling=cond_ceiling, jitter=jitter)[0]


def fuse(prior: GaussianDist, lik: GaussianDist) -> GaussianDist:
    """Product of two Gaussians, renormalized: precisions add.

    cov_post^{-1} = cov_prior^{-1} + cov_lik^{-1};
    mean_post = cov_post (cov_prior^{-1} mean_prior + cov_lik^{-1} mean_lik).
    """
    if prior.dim != lik.dim:
        raise NumericError(f"dimension mismatch: {prior.dim} vs {lik.dim}")
    prec_prior = prior.precision()
    prec_lik = lik.precision()
    prec_post = prec_prior + prec_lik
    try:
        L = cholesky(prec_post, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"summed precision lost positive definiteness: {exc}") from exc
    cov = cho_solve((L, True), np.eye(prior.dim))
    cov = 0.5 * (cov + cov.T)
    mean = cho_solve((L, True), prec_prior @ prior.mean + prec_lik @ lik.mean)
    return GaussianDist(mean=mean, cov=cov)


def fuse_with_flat_prior(lik: GaussianDist) -> GaussianDist:
    """Limit of fuse as the prior covariance grows unbounded: the likelihood."""
    return lik


def log_pdf(dist: GaussianDist, theta: np.ndarray) -> float:
    """Exact multivariate normal log-density via the cached Cholesky factor."""
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != dist.dim:
        raise ValueError(f"point has dimension {theta.size}, distribution has {dist.dim}")
    L = dist.chol
    z = solve_triangular(L, theta - dist.mean, lower=True)
    log_det = 2.0 * np.sum(np.log(np.diag(L)))
    return float(-0.5 * (dist.dim * np.log(2.0 * np.pi) + log_det + z @ z))
