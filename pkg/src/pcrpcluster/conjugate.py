# =================================================================
# Copyright (C) 2024-2024 pcrp-cluster contributors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#    http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# =================================================================
"""
Normal-Inverse-Wishart (NIW) conjugate machinery for Gaussian mixture components

A component collects the sufficient statistics (n, sum x, sum x x^T) of its items. Integrating the
Gaussian mean and covariance against the NIW posterior gives a multivariate Student-t predictive:

    kappa_n = kappa0 + n, nu_n = nu0 + n, mu_n = (kappa0 mu0 + sum x) / kappa_n
    psi_n = psi0 + scatter - sum sum^T / n + kappa0 n / kappa_n (xbar - mu0)(xbar - mu0)^T
    x* ~ t_{nu_n - d + 1}(mu_n, psi_n (kappa_n + 1) / (kappa_n (nu_n - d + 1)))

Log determinants and quadratic forms go through Cholesky factors, no matrix is inverted.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_triangular
from scipy.special import gammaln, multigammaln

from .constants import DEFAULT_KAPPA0, DEFAULT_NU0_OFFSET, DEFAULT_PSI0_SCALE
from .errors import NumericalError, ParameterError

LOGGER = logging.getLogger(__name__)


def _lower_cholesky(matrix: np.ndarray) -> np.ndarray:
    return cholesky(matrix, lower=True, check_finite=True)


@dataclass(frozen=True)
class NiwParams:
    """
    Hyperparameters (mu0, kappa0, nu0, psi0) of the NIW prior
    """
    mu0: np.ndarray
    kappa0: float
    nu0: float
    psi0: np.ndarray

    def __post_init__(self):
        mu0 = np.array(self.mu0, dtype=float).reshape(-1)
        psi0 = np.atleast_2d(np.array(self.psi0, dtype=float))
        object.__setattr__(self, 'mu0', mu0)
        object.__setattr__(self, 'psi0', psi0)
        object.__setattr__(self, 'kappa0', float(self.kappa0))
        object.__setattr__(self, 'nu0', float(self.nu0))
        d = mu0.size
        if d < 1 or not np.all(np.isfinite(mu0)):
            raise ParameterError('mu0 MUST be a finite vector of dimension >= 1')
        if psi0.shape != (d, d):
            raise ParameterError('psi0 MUST have shape {}, got {}'.format((d, d), psi0.shape))
        if not math.isfinite(self.kappa0) or self.kappa0 <= 0.0:
            raise ParameterError('kappa0 MUST be positive, got {}'.format(self.kappa0))
        if not math.isfinite(self.nu0) or self.nu0 <= d - 1:
            raise ParameterError('nu0 MUST be > d - 1 = {}, got {}'.format(d - 1, self.nu0))
        if not np.allclose(psi0, psi0.T, rtol=0.0, atol=1e-12):
            raise ParameterError('psi0 MUST be symmetric')
        try:
            _lower_cholesky(psi0)
        except (LinAlgError, ValueError):
            raise ParameterError('psi0 MUST be positive definite')

    @property
    def dim(self) -> int:
        return int(self.mu0.size)

    @classmethod
    def from_data(cls, x: np.ndarray, kappa0: float = DEFAULT_KAPPA0, nu0: Optional[float] = None,
                  psi0_scale: float = DEFAULT_PSI0_SCALE, mu0=None, psi0=None) -> 'NiwParams':
        """
        Weakly informative, scale adapted prior: mu0 = data mean, kappa0 = 0.01, nu0 = d + 2,
        psi0 = psi0_scale * empirical covariance with psi0_scale = 0.05. Every value can be overridden.
        """
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n, d = x.shape
        if mu0 is None:
            mu0 = x.mean(axis=0)
        else:
            mu0 = np.broadcast_to(np.asarray(mu0, dtype=float), (d,))
        if nu0 is None:
            nu0 = d + DEFAULT_NU0_OFFSET
        if psi0 is None:
            if n < 2:
                LOGGER.warning('less than two observations, using the identity as prior scale')
                psi0 = np.eye(d)
            else:
                psi0 = np.atleast_2d(np.cov(x, rowvar=False))
            psi0 = psi0_scale * psi0
        prior = cls(mu0, kappa0, nu0, psi0)
        LOGGER.debug('NIW prior: mu0={}, kappa0={}, nu0={}, psi0={}'.format(
            prior.mu0.tolist(), prior.kappa0, prior.nu0, prior.psi0.tolist()))
        return prior


@dataclass(frozen=True)
class ClusterStats:
    """
    Sufficient statistics of one mixture component: count, running sum and running sum of outer products
    """
    n: int
    sum: np.ndarray
    scatter: np.ndarray

    @classmethod
    def empty(cls, dim: int) -> 'ClusterStats':
        return cls(0, np.zeros(dim), np.zeros((dim, dim)))

    @classmethod
    def from_points(cls, points: np.ndarray) -> 'ClusterStats':
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(points.shape[0], points.sum(axis=0), points.T @ points)

    @property
    def dim(self) -> int:
        return int(self.sum.size)

    @property
    def mean(self) -> np.ndarray:
        if self.n == 0:
            raise NumericalError('an empty component has no mean')
        return self.sum / self.n


def _check_point(stats: ClusterStats, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != stats.dim:
        raise ParameterError('point MUST have dimension {}, got {}'.format(stats.dim, x.size))
    if not np.all(np.isfinite(x)):
        raise ParameterError('point MUST be finite')
    return x


def add_point(stats: ClusterStats, x) -> ClusterStats:
    x = _check_point(stats, x)
    return ClusterStats(stats.n + 1, stats.sum + x, stats.scatter + np.outer(x, x))


def remove_point(stats: ClusterStats, x) -> ClusterStats:
    x = _check_point(stats, x)
    if stats.n < 1:
        raise NumericalError('cannot remove a point from an empty component')
    if stats.n == 1:
        return ClusterStats.empty(stats.dim)
    return ClusterStats(stats.n - 1, stats.sum - x, stats.scatter - np.outer(x, x))


def posterior_params(stats: ClusterStats, prior: NiwParams) -> NiwParams:
    """
    NIW posterior after observing the component's points
    """
    if stats.n == 0:
        return prior
    kappa_n = prior.kappa0 + stats.n
    mean = stats.sum / stats.n
    diff = mean - prior.mu0
    psi_n = (prior.psi0 + stats.scatter - np.outer(stats.sum, mean)
             + (prior.kappa0 * stats.n / kappa_n) * np.outer(diff, diff))
    psi_n = 0.5 * (psi_n + psi_n.T)
    try:
        return NiwParams((prior.kappa0 * prior.mu0 + stats.sum) / kappa_n, kappa_n, prior.nu0 + stats.n, psi_n)
    except ParameterError as err:
        raise NumericalError('posterior scale lost positive definiteness, component statistics are corrupted: {}'
                             .format(err))


@dataclass(frozen=True)
class StudentT:
    """
    Multivariate Student-t with location loc, scale matrix scale and dof degrees of freedom
    """
    loc: np.ndarray
    scale: np.ndarray
    dof: float
    chol: np.ndarray = field(init=False, repr=False)
    log_normalizer: float = field(init=False, repr=False)

    def __post_init__(self):
        try:
            chol = _lower_cholesky(self.scale)
        except (LinAlgError, ValueError) as err:
            raise NumericalError('predictive scale is not positive definite: {}'.format(err))
        d = self.loc.size
        log_normalizer = (gammaln(0.5 * (self.dof + d)) - gammaln(0.5 * self.dof)
                          - 0.5 * d * math.log(self.dof * math.pi) - np.log(np.diag(chol)).sum())
        object.__setattr__(self, 'chol', chol)
        object.__setattr__(self, 'log_normalizer', float(log_normalizer))

    def logpdf(self, x) -> float:
        diff = np.asarray(x, dtype=float).reshape(-1) - self.loc
        solved = solve_triangular(self.chol, diff, lower=True)
        mahalanobis = float(solved @ solved)
        return self.log_normalizer - 0.5 * (self.dof + self.loc.size) * math.log1p(mahalanobis / self.dof)


def predictive_params(stats: ClusterStats, prior: NiwParams) -> StudentT:
    posterior = posterior_params(stats, prior)
    d = prior.dim
    dof = posterior.nu0 - d + 1
    scale = posterior.psi0 * ((posterior.kappa0 + 1.0) / (posterior.kappa0 * dof))
    return StudentT(posterior.mu0, scale, dof)


def predictive_factors(n: int, total: np.ndarray, scatter: np.ndarray,
                       prior: NiwParams) -> Tuple[np.ndarray, np.ndarray, float, float]:
    """
    Location, lower Cholesky factor of the scale, log normalizer and degrees of freedom of the Student-t
    predictive of a component holding n points with sum total and sum of outer products scatter.
    Same values as predictive_params without building and validating intermediate objects; the
    sampler calls it after every move.
    """
    d = prior.dim
    kappa_n = prior.kappa0 + n
    dof = prior.nu0 + n - d + 1
    if n:
        mean = total / n
        diff = mean - prior.mu0
        psi_n = (prior.psi0 + scatter - np.outer(total, mean)
                 + (prior.kappa0 * n / kappa_n) * np.outer(diff, diff))
        loc = (prior.kappa0 * prior.mu0 + total) / kappa_n
    else:
        psi_n = prior.psi0
        loc = prior.mu0.copy()
    chol = np.linalg.cholesky(psi_n * ((kappa_n + 1.0) / (kappa_n * dof)))
    log_normalizer = (math.lgamma(0.5 * (dof + d)) - math.lgamma(0.5 * dof)
                      - 0.5 * d * math.log(dof * math.pi) - float(np.log(np.diag(chol)).sum()))
    return loc, chol, log_normalizer, dof


def log_posterior_predictive(x, stats: ClusterStats, prior: NiwParams) -> float:
    """
    Log density at x of the Student-t predictive of a component holding stats
    """
    return predictive_params(stats, prior).logpdf(x)


def log_prior_predictive(x, prior: NiwParams) -> float:
    """
    Log density at x of the predictive of a new, empty component
    """
    return log_posterior_predictive(x, ClusterStats.empty(prior.dim), prior)


def log_marginal_likelihood(stats: ClusterStats, prior: NiwParams) -> float:
    """
    Log evidence of the component's points with mean and covariance integrated out
    """
    if stats.n == 0:
        return 0.0
    posterior = posterior_params(stats, prior)
    d = prior.dim
    log_det_prior = 2.0 * np.log(np.diag(_lower_cholesky(prior.psi0))).sum()
    log_det_posterior = 2.0 * np.log(np.diag(_lower_cholesky(posterior.psi0))).sum()
    return float(-0.5 * stats.n * d * math.log(math.pi)
                 + multigammaln(0.5 * posterior.nu0, d) - multigammaln(0.5 * prior.nu0, d)
                 + 0.5 * prior.nu0 * log_det_prior - 0.5 * posterior.nu0 * log_det_posterior
                 + 0.5 * d * (math.log(prior.kappa0) - math.log(posterior.kappa0)))


def log_student_t_batch(x: np.ndarray, locs: np.ndarray, chols: np.ndarray,
                        log_normalizers: np.ndarray, dofs: np.ndarray) -> np.ndarray:
    """
    Log densities of one point under K Student-t predictives given their stacked Cholesky factors
    """
    diffs = x - locs
    solved = np.linalg.solve(chols, diffs[..., None])[..., 0]
    mahalanobis = np.einsum('kd,kd->k', solved, solved)
    return log_normalizers - 0.5 * (dofs + x.size) * np.log1p(mahalanobis / dofs)
