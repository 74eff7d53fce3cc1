"""Independent numerical oracles shared by the unit and acceptance tests.

Everything here deliberately avoids the package's closed-form code paths:
densities go through plain inv/slogdet algebra, integrals through scipy's
adaptive quadrature, and expectations through Monte-Carlo sampling.
"""

import numpy as np
from scipy import integrate

from pce_transfer.gaussian import GaussianDist
from pce_transfer.transfer import TransferProblem, tempered_posterior


def rand_spd(rng, k, scale=1.0):
    F = rng.normal(size=(k, k))
    S = F @ F.T / k + 0.3 * np.eye(k)
    return scale * 0.5 * (S + S.T)


def rand_problem(rng, k, objective, mean_gap=0.5):
    src = GaussianDist(rng.normal(size=k), rand_spd(rng, k))
    tgt = GaussianDist(src.mean + mean_gap * rng.normal(size=k), rand_spd(rng, k, 0.7))
    return TransferProblem(src, tgt, objective)


def _plain_logpdf(draws, mean, cov):
    prec = np.linalg.inv(cov)
    logdet = np.linalg.slogdet(cov)[1]
    diff = draws - mean
    quad = np.einsum("ij,jk,ik->i", diff, prec, diff)
    return -0.5 * (cov.shape[0] * np.log(2 * np.pi) + logdet + quad)


def mc_edf(prob, beta, n=1_000_000, seed=0):
    """Monte-Carlo E_{posterior}[log target] from posterior draws."""
    post = tempered_posterior(prob, beta)
    rng = np.random.default_rng(seed)
    draws = rng.multivariate_normal(post.mean, post.cov, size=n)
    return float(np.mean(_plain_logpdf(draws, prob.target.mean, prob.target.cov)))


def mc_kld(prob, beta, n=1_000_000, seed=0):
    """Monte-Carlo KL(posterior || tempered source) from posterior draws."""
    post = tempered_posterior(prob, beta)
    rng = np.random.default_rng(seed)
    draws = rng.multivariate_normal(post.mean, post.cov, size=n)
    return float(np.mean(
        _plain_logpdf(draws, post.mean, post.cov)
        - _plain_logpdf(draws, prob.source.mean, prob.source.cov / beta)
    ))


def quad_product_integral(a: GaussianDist, b: GaussianDist) -> float:
    """Adaptive quadrature of the product of two densities, dims 1 or 2."""
    k = a.dim
    sd = np.sqrt(np.maximum(np.diag(a.cov), np.diag(b.cov)))
    lo = np.minimum(a.mean, b.mean) - 9 * sd
    hi = np.maximum(a.mean, b.mean) + 9 * sd

    def logpdf_pair(x):
        pt = np.asarray(x).reshape(1, -1)
        return (_plain_logpdf(pt, a.mean, a.cov) + _plain_logpdf(pt, b.mean, b.cov))[0]

    if k == 1:
        val, _ = integrate.quad(lambda x: np.exp(logpdf_pair([x])), lo[0], hi[0],
                                limit=200)
        return val
    val, _ = integrate.dblquad(
        lambda y, x: np.exp(logpdf_pair([x, y])),
        lo[0], hi[0], lo[1], hi[1], epsabs=1e-12, epsrel=1e-9,
    )
    return val
