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
Collapsed Gibbs sampler for CRP, pCRP and g-CRP mixtures of Gaussians with a NIW prior

Every sweep visits the items in a fresh random permutation. Each item is removed from its component,
its log weight for every occupied component is the log seating weight plus the log posterior
predictive, the new component gets the log seating weight of a new table plus the log prior
predictive; a component is drawn after max-shift normalization and emptied components are deleted.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from .constants import (ALL_IN_ONE, DEFAULT_BURN_IN, DEFAULT_ITERATIONS, DEFAULT_THIN, INTEGRITY_CHECK_EVERY,
                        INTEGRITY_TOLERANCE, LOG_EVERY)
from .conjugate import (ClusterStats, NiwParams, log_marginal_likelihood, log_prior_predictive,
                        log_student_t_batch, predictive_factors)
from .errors import NumericalError, ParameterError, SamplerError
from .metrics import nmi, vi
from .partition import ProcessParams, canonical_labels, log_seat_terms, log_stationary_prior
from .utils import make_rng, sample_index, standard_error

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SamplerConfig:
    iterations: int = DEFAULT_ITERATIONS
    burn_in: int = DEFAULT_BURN_IN
    thin: int = DEFAULT_THIN
    seed: int = 0
    initial_k: Union[int, str] = ALL_IN_ONE
    debug: bool = False
    log_every: int = LOG_EVERY

    def __post_init__(self):
        if self.iterations < 1:
            raise ParameterError('iterations MUST be positive, got {}'.format(self.iterations))
        if not 0 <= self.burn_in < self.iterations:
            raise ParameterError('burn_in MUST be in [0, iterations), got {}'.format(self.burn_in))
        if self.thin < 1:
            raise ParameterError('thin MUST be >= 1, got {}'.format(self.thin))
        if self.initial_k != ALL_IN_ONE and (not isinstance(self.initial_k, int) or self.initial_k < 1):
            raise ParameterError("initial_k MUST be a positive integer or '{}', got '{}'"
                                 .format(ALL_IN_ONE, self.initial_k))

    @property
    def num_retained(self) -> int:
        return (self.iterations - self.burn_in) // self.thin


@dataclass
class Chain:
    """
    Retained posterior samples of one chain

    samples: (S, N) canonical label vectors of the retained sweeps
    k_trace: number of clusters after every sweep, burn-in included
    log_joint: unnormalized joint log probability of every retained sample
    """
    samples: np.ndarray
    k_trace: np.ndarray
    runtime: float
    log_joint: Optional[np.ndarray] = None
    params: Optional[ProcessParams] = field(default=None, repr=False)

    @property
    def num_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def k_samples(self) -> np.ndarray:
        return self.samples.max(axis=1) + 1


@dataclass(frozen=True)
class ChainSummary:
    mean_k: float
    se_k: float
    k_max: int
    nmi: Optional[float] = None
    nmi_se: Optional[float] = None
    vi: Optional[float] = None
    vi_se: Optional[float] = None

    def as_dict(self) -> Dict:
        return {
            'nmi': self.nmi,
            'nmi_se': self.nmi_se,
            'vi': self.vi,
            'vi_se': self.vi_se,
            'k': self.mean_k,
            'k_se': self.se_k,
            'k_max': self.k_max,
        }


class _Components:
    """
    Sufficient statistics and cached Student-t predictives of the occupied components.
    Components live in slots 0..K-1; deleting a component moves the last slot into the gap.
    """

    def __init__(self, x: np.ndarray, prior: NiwParams):
        n, d = x.shape
        self.x = x
        self.prior = prior
        self.k = 0
        self.counts = np.zeros(n, dtype=np.int64)
        self.sums = np.zeros((n, d))
        self.scatters = np.zeros((n, d, d))
        self.locs = np.zeros((n, d))
        self.chols = np.zeros((n, d, d))
        self.log_normalizers = np.zeros(n)
        self.dofs = np.ones(n)

    def open(self) -> int:
        slot = self.k
        self.counts[slot] = 0
        self.sums[slot] = 0.0
        self.scatters[slot] = 0.0
        self.k += 1
        return slot

    def add(self, slot: int, item: int) -> None:
        xi = self.x[item]
        self.counts[slot] += 1
        self.sums[slot] += xi
        self.scatters[slot] += np.outer(xi, xi)
        self._refresh(slot)

    def remove(self, slot: int, item: int) -> None:
        xi = self.x[item]
        self.counts[slot] -= 1
        if self.counts[slot] < 0:
            raise NumericalError('component count underflow')
        if self.counts[slot] == 0:
            self.sums[slot] = 0.0
            self.scatters[slot] = 0.0
            return
        self.sums[slot] -= xi
        self.scatters[slot] -= np.outer(xi, xi)
        self._refresh(slot)

    def delete(self, slot: int, assignments: np.ndarray) -> None:
        last = self.k - 1
        if slot != last:
            for array in (self.counts, self.sums, self.scatters, self.locs, self.chols, self.log_normalizers,
                          self.dofs):
                array[slot] = array[last]
            assignments[assignments == last] = slot
        self.k -= 1

    def stats(self, slot: int) -> ClusterStats:
        return ClusterStats(int(self.counts[slot]), self.sums[slot].copy(), self.scatters[slot].copy())

    def _refresh(self, slot: int) -> None:
        loc, chol, log_normalizer, dof = predictive_factors(int(self.counts[slot]), self.sums[slot],
                                                            self.scatters[slot], self.prior)
        self.locs[slot] = loc
        self.chols[slot] = chol
        self.log_normalizers[slot] = log_normalizer
        self.dofs[slot] = dof

    def log_predictive(self, item: int) -> np.ndarray:
        k = self.k
        return log_student_t_batch(self.x[item], self.locs[:k], self.chols[:k], self.log_normalizers[:k],
                                   self.dofs[:k])

    def log_marginal(self) -> float:
        return sum(log_marginal_likelihood(self.stats(slot), self.prior) for slot in range(self.k))

    def check_integrity(self, assignments: np.ndarray) -> None:
        for slot in range(self.k):
            rebuilt = ClusterStats.from_points(self.x[assignments == slot])
            if (rebuilt.n != self.counts[slot]
                    or not np.allclose(rebuilt.sum, self.sums[slot], rtol=0.0, atol=INTEGRITY_TOLERANCE)
                    or not np.allclose(rebuilt.scatter, self.scatters[slot], rtol=0.0, atol=INTEGRITY_TOLERANCE)):
                raise NumericalError('incremental statistics of component {} drifted from a rebuild'.format(slot))


def _check_data(data, prior: NiwParams) -> np.ndarray:
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
        raise ParameterError('data MUST be an N x d matrix with N, d >= 1')
    if not np.all(np.isfinite(x)):
        raise ParameterError('data MUST be finite')
    if x.shape[1] != prior.dim:
        raise ParameterError('data dimension {} does not match the prior dimension {}'.format(x.shape[1], prior.dim))
    return x


def _initial_assignments(n: int, initial_k: Union[int, str]) -> np.ndarray:
    if initial_k == ALL_IN_ONE:
        return np.zeros(n, dtype=np.int64)
    return np.arange(n, dtype=np.int64) % min(int(initial_k), n)


def run_chain(data: np.ndarray, params: ProcessParams, prior: NiwParams, config: SamplerConfig) -> Chain:
    """
    Runs one collapsed Gibbs chain

    :param data: N x d matrix
    :param params: seating rule of the partition prior
    :param prior: NIW prior of the components
    :param config: iterations, burn-in, thinning, seed and initialization
    :returns: Chain with the retained samples and the trace of cluster counts
    """
    x = _check_data(data, prior)
    n = x.shape[0]
    rng = make_rng(config.seed)
    started = time.perf_counter()
    LOGGER.info('Start chain {}: N={}, d={}, iterations={}, burn-in={}, thin={}, seed={}'.format(
        params.describe(), n, x.shape[1], config.iterations, config.burn_in, config.thin, config.seed))

    prior_log_predictive = np.array([log_prior_predictive(x[i], prior) for i in range(n)])
    assignments = _initial_assignments(n, config.initial_k)
    components = _Components(x, prior)
    for _ in range(int(assignments.max()) + 1):
        components.open()
    for i in range(n):
        components.add(int(assignments[i]), i)

    k_trace = np.zeros(config.iterations, dtype=np.int64)
    samples = np.zeros((config.num_retained, n), dtype=np.int64)
    log_joint = np.zeros(config.num_retained)
    retained = 0

    for iteration in range(1, config.iterations + 1):
        item = None
        try:
            for item in rng.permutation(n).tolist():
                slot = int(assignments[item])
                components.remove(slot, item)
                if components.counts[slot] == 0:
                    components.delete(slot, assignments)
                k = components.k
                log_seat = log_seat_terms(components.counts[:k], params)
                log_weights = np.empty(k + 1)
                log_weights[:k] = log_seat[:k] + components.log_predictive(item)
                log_weights[k] = log_seat[k] + prior_log_predictive[item]
                chosen = sample_index(log_weights, rng)
                if chosen == k:
                    chosen = components.open()
                components.add(chosen, item)
                assignments[item] = chosen
            item = None
            if config.debug and iteration % INTEGRITY_CHECK_EVERY == 0:
                components.check_integrity(assignments)
        except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as err:
            LOGGER.warning('chain failed at iteration {}, item {}: {}'.format(iteration, item, err))
            raise SamplerError(str(err), iteration=iteration, item=item) from err

        k_trace[iteration - 1] = components.k
        if iteration > config.burn_in and (iteration - config.burn_in) % config.thin == 0 \
                and retained < config.num_retained:
            samples[retained] = canonical_labels(assignments)
            log_joint[retained] = (log_stationary_prior(components.counts[:components.k], params)
                                   + components.log_marginal())
            retained += 1
        if config.log_every and iteration % config.log_every == 0:
            LOGGER.info('[{}/{}] K={}'.format(iteration, config.iterations, components.k))

    runtime = time.perf_counter() - started
    LOGGER.info('Finished chain {} in {:.1f}s, final K={}'.format(params.describe(), runtime, components.k))
    return Chain(samples=samples, k_trace=k_trace, runtime=runtime, log_joint=log_joint, params=params)


def posterior_k_distribution(chain: Chain) -> Dict[int, float]:
    """
    Relative frequency of every cluster count among the retained samples
    """
    if chain.num_samples < 1:
        raise ParameterError('chain MUST hold at least one retained sample')
    values, counts = np.unique(chain.k_samples, return_counts=True)
    return {int(k): float(c) / chain.num_samples for k, c in zip(values, counts)}


def summarize(chain: Chain, true_labels=None) -> ChainSummary:
    """
    Mean and standard error of K, NMI and VI over the retained samples; K_max over all sweeps
    """
    if chain.num_samples < 1:
        raise ParameterError('chain MUST hold at least one retained sample')
    k_samples = chain.k_samples
    k_max = int(chain.k_trace.max()) if chain.k_trace.size else int(k_samples.max())
    summary = dict(mean_k=float(k_samples.mean()), se_k=standard_error(k_samples), k_max=k_max)
    if true_labels is not None:
        true_labels = np.asarray(true_labels)
        if true_labels.size != chain.samples.shape[1]:
            raise ParameterError('true labels MUST have length {}, got {}'.format(chain.samples.shape[1],
                                                                                 true_labels.size))
        nmis = [nmi(sample, true_labels) for sample in chain.samples]
        vis = [vi(sample, true_labels) for sample in chain.samples]
        summary.update(nmi=float(np.mean(nmis)), nmi_se=standard_error(nmis),
                       vi=float(np.mean(vis)), vi_se=standard_error(vis))
    return ChainSummary(**summary)


def point_estimate(chain: Chain) -> np.ndarray:
    """
    The retained sample with the highest unnormalized joint log probability
    """
    if chain.num_samples < 1:
        raise ParameterError('chain MUST hold at least one retained sample')
    if chain.log_joint is None:
        raise ParameterError('chain carries no joint log probabilities')
    return chain.samples[int(np.argmax(chain.log_joint))].copy()
