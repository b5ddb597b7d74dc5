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
Seating rules of the Chinese restaurant process (CRP), the powered CRP (pCRP) and the generic g-CRP

An item joins occupied table k with probability proportional to g(N_k) and opens a new table with
probability proportional to alpha, where g(x) = x for the CRP, g(x) = x^r for the pCRP and a user
supplied increasing g with g(0) = 0 for the g-CRP. All weights are handled in log space.

Cluster labels are integers 0..K-1 in order of first appearance (canonical form). Items that are
currently held out of the partition carry the label UNASSIGNED.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .constants import G_CHECK_GRID
from .errors import ParameterError
from .utils import make_rng, normalize_log_weights, sample_index

LOGGER = logging.getLogger(__name__)

UNASSIGNED = -1


class ProcessKind(Enum):
    CRP = 'crp'
    PCRP = 'pcrp'
    GCRP = 'gcrp'


def g_identity(x):
    return np.asarray(x, dtype=float)


def g_square(x):
    return np.square(np.asarray(x, dtype=float))


def g_xlog(x):
    x = np.asarray(x, dtype=float)
    return x * (1.0 + np.log1p(x))


def g_expm1(x):
    return np.expm1(np.asarray(x, dtype=float))


def _log_expm1(x):
    x = np.asarray(x, dtype=float)
    return x + np.log(-np.expm1(-x))


# log(e^x - 1) stays finite where e^x overflows
g_expm1.log_g = _log_expm1


G_FUNCTIONS = {
    'identity': g_identity,
    'square': g_square,
    'xlog': g_xlog,
    'expm1': g_expm1,
}
"""
Named g functions selectable from the command line. Module level functions so that g-CRP
parameters stay picklable for process pools. A g may carry a log_g attribute computing log g(x)
directly; it is used wherever the seating rule works in log space.
"""


def log_g_values(g: Callable, x) -> np.ndarray:
    """
    log g(x), through g.log_g when g provides one
    """
    log_g = getattr(g, 'log_g', None)
    if log_g is not None:
        return np.asarray(log_g(x), dtype=float)
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.log(np.asarray(g(x), dtype=float))


def _check_g(g: Callable) -> None:
    grid = np.asarray(G_CHECK_GRID, dtype=float)
    try:
        at_zero = np.asarray(g(grid[:1]), dtype=float)
        log_values = log_g_values(g, grid[1:])
    except Exception as err:
        raise ParameterError('g MUST accept an array of non-negative reals: {}'.format(err))
    if at_zero.shape != (1,) or log_values.shape != grid[1:].shape:
        raise ParameterError('g MUST map an array to an array of the same shape')
    if at_zero[0] != 0.0:
        raise ParameterError('g MUST satisfy g(0) = 0, got {}'.format(at_zero[0]))
    if not np.all(np.isfinite(log_values)):
        raise ParameterError('g MUST be positive with a finite logarithm on the check grid {}; give a fast growing '
                             'g a log_g attribute'.format(list(G_CHECK_GRID)))
    if np.any(np.diff(log_values) < 0.0):
        raise ParameterError('g MUST be nondecreasing on the check grid {}'.format(list(G_CHECK_GRID)))
    above_one = grid[1:] > 1.0
    if np.any(log_values[above_one] < np.log(grid[1:][above_one])):
        msg = 'g(x) < x for some x > 1, the g-CRP will not shrink small clusters'
        LOGGER.warning(msg)
        warnings.warn(msg, UserWarning, stacklevel=3)


@dataclass(frozen=True)
class ProcessParams:
    """
    Parameters of a seating rule: concentration alpha, power r (1 for the CRP) and the process kind.
    g is only set for the g-CRP.
    """
    alpha: float
    power: float = 1.0
    kind: ProcessKind = ProcessKind.CRP
    g: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.kind, ProcessKind):
            try:
                object.__setattr__(self, 'kind', ProcessKind(str(self.kind).lower()))
            except ValueError:
                raise ParameterError("process kind MUST be one of {}, got '{}'"
                                     .format([k.value for k in ProcessKind], self.kind))
        object.__setattr__(self, 'alpha', float(self.alpha))
        object.__setattr__(self, 'power', float(self.power))
        if not math.isfinite(self.alpha) or self.alpha <= 0.0:
            raise ParameterError('alpha MUST be finite and positive, got {}'.format(self.alpha))
        if not math.isfinite(self.power) or self.power < 1.0:
            raise ParameterError('power MUST be finite and >= 1, got {}'.format(self.power))
        if self.kind is ProcessKind.CRP and self.power != 1.0:
            raise ParameterError('the CRP has power 1, got {}; use the pCRP instead'.format(self.power))
        if self.kind is ProcessKind.GCRP:
            if self.g is None:
                raise ParameterError('the g-CRP MUST be given a function g')
            _check_g(self.g)
        elif self.g is not None:
            raise ParameterError('g MUST only be given for the g-CRP')

    @classmethod
    def crp(cls, alpha: float) -> 'ProcessParams':
        return cls(alpha=alpha)

    @classmethod
    def pcrp(cls, alpha: float, power: float) -> 'ProcessParams':
        return cls(alpha=alpha, power=power, kind=ProcessKind.PCRP)

    @classmethod
    def gcrp(cls, alpha: float, g: Callable) -> 'ProcessParams':
        return cls(alpha=alpha, kind=ProcessKind.GCRP, g=g)

    def log_table_weights(self, sizes) -> np.ndarray:
        """
        log g(N_k) for an array of table sizes
        """
        sizes = np.asarray(sizes, dtype=float)
        if self.kind is ProcessKind.CRP:
            return np.log(sizes)
        if self.kind is ProcessKind.PCRP:
            return self.power * np.log(sizes)
        return log_g_values(self.g, sizes)

    def describe(self) -> str:
        if self.kind is ProcessKind.PCRP:
            return 'pcrp(alpha={}, r={})'.format(self.alpha, self.power)
        if self.kind is ProcessKind.GCRP:
            return 'gcrp(alpha={}, g={})'.format(self.alpha, getattr(self.g, '__name__', self.g))
        return 'crp(alpha={})'.format(self.alpha)


def canonical_labels(labels) -> np.ndarray:
    """
    Relabels clusters as 0..K-1 in order of first appearance
    """
    labels = np.asarray(labels)
    if labels.size == 0:
        return np.zeros(0, dtype=np.int64)
    _, first_index, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first_index.size, dtype=np.int64)
    rank[np.argsort(first_index)] = np.arange(first_index.size)
    return rank[np.ravel(inverse)]


def is_canonical(labels) -> bool:
    labels = np.asarray(labels)
    if labels.size and not np.issubdtype(labels.dtype, np.integer):
        return False
    return bool(np.array_equal(labels, canonical_labels(labels)))


@dataclass(frozen=True)
class PartitionState:
    """
    Cluster assignments of N items and the size of every cluster.

    Held out items are marked UNASSIGNED: they keep their slot in assignments but belong to no cluster,
    so n_total (the number of seated items, the sum of sizes) equals n_items (the length of assignments)
    minus n_held_out. Outside of a seating step no item is held out and the two agree.
    """
    assignments: np.ndarray
    sizes: np.ndarray

    def __post_init__(self):
        assignments = np.array(self.assignments, dtype=np.int64)
        sizes = np.array(self.sizes, dtype=np.int64)
        object.__setattr__(self, 'assignments', assignments)
        object.__setattr__(self, 'sizes', sizes)
        assigned = assignments[assignments != UNASSIGNED]
        if np.any(assigned < 0) or np.any(assigned >= sizes.size):
            raise ParameterError('assignments MUST be cluster indices in 0..{}'.format(sizes.size - 1))
        if not np.array_equal(np.bincount(assigned, minlength=sizes.size), sizes):
            raise ParameterError('sizes MUST equal the number of items assigned to every cluster')

    @classmethod
    def from_labels(cls, labels) -> 'PartitionState':
        assignments = canonical_labels(labels)
        return cls(assignments, np.bincount(assignments, minlength=0))

    @property
    def n_total(self) -> int:
        return int(self.sizes.sum())

    @property
    def n_items(self) -> int:
        return int(self.assignments.size)

    @property
    def n_held_out(self) -> int:
        return int(np.count_nonzero(self.assignments == UNASSIGNED))

    @property
    def num_clusters(self) -> int:
        return int(self.sizes.size)

    def hold_out(self, item: int) -> 'PartitionState':
        """
        Removes item from its cluster; an emptied cluster is dropped and higher labels shift down
        """
        label = int(self.assignments[item])
        if label == UNASSIGNED:
            raise ParameterError('item {} is already held out'.format(item))
        assignments = self.assignments.copy()
        sizes = self.sizes.copy()
        assignments[item] = UNASSIGNED
        sizes[label] -= 1
        if sizes[label] == 0:
            sizes = np.delete(sizes, label)
            assignments[assignments > label] -= 1
        return PartitionState(assignments, sizes)


def log_seat_terms(sizes, params: ProcessParams) -> np.ndarray:
    """
    Unnormalized log seating weights log g(N_1), ..., log g(N_K), log(alpha)
    """
    sizes = np.asarray(sizes)
    if np.any(sizes < 1):
        raise ParameterError('a partition MUST NOT contain empty clusters, got sizes {}'.format(sizes.tolist()))
    return np.append(params.log_table_weights(sizes), math.log(params.alpha))


def log_seat_weights(sizes, params: ProcessParams) -> np.ndarray:
    """
    Normalized log seating probabilities: K occupied tables followed by the new table
    """
    log_weights = log_seat_terms(sizes, params)
    return log_weights - logsumexp(log_weights)


def seat_weights(state: PartitionState, held_out_item: Optional[int], params: ProcessParams) -> np.ndarray:
    """
    Seating probabilities of held_out_item given the rest of the partition

    :param state: partition with held_out_item already removed
    :param held_out_item: index of the item to seat, None for an item not yet part of state
    :param params: seating rule
    :returns: K occupied table probabilities followed by the new table probability
    """
    if held_out_item is not None and state.assignments[held_out_item] != UNASSIGNED:
        raise ParameterError('item {} MUST be held out of the partition before seating'.format(held_out_item))
    return normalize_log_weights(log_seat_terms(state.sizes, params))


def sample_prior_partition(n: int, params: ProcessParams, rng_seed: int) -> PartitionState:
    """
    Seats items 0..n-1 one after another according to the seating rule
    """
    if n < 1:
        raise ParameterError('n MUST be >= 1, got {}'.format(n))
    rng = make_rng(rng_seed)
    labels = np.empty(n, dtype=np.int64)
    sizes = np.zeros(0, dtype=np.int64)
    for i in range(n):
        table = sample_index(log_seat_terms(sizes, params), rng)
        if table == sizes.size:
            sizes = np.append(sizes, 1)
        else:
            sizes[table] += 1
        labels[i] = table
    return PartitionState(labels, sizes)


def partition_log_probability(assignment_sequence: Sequence[int], params: ProcessParams) -> float:
    """
    Log probability of seating items in the given order into the given clusters, i.e. the log of the
    product of the sequential seating probabilities
    """
    labels = np.asarray(assignment_sequence)
    if not is_canonical(labels):
        raise ParameterError('assignment sequence MUST be labeled in order of first appearance starting at 0, '
                             'got {}'.format(labels.tolist()))
    sizes = []
    log_probability = 0.0
    for label in labels.tolist():
        log_probability += log_seat_weights(np.asarray(sizes, dtype=np.int64), params)[label]
        if label == len(sizes):
            sizes.append(1)
        else:
            sizes[label] += 1
    return float(log_probability)


def log_stationary_prior(sizes, params: ProcessParams) -> float:
    """
    Unnormalized log prior of a partition whose full conditionals are the seating rule,
    K log(alpha) + sum_k sum_{m=1}^{N_k - 1} log g(m). The collapsed Gibbs sampler leaves it invariant.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    if np.any(sizes < 1):
        raise ParameterError('a partition MUST NOT contain empty clusters')
    log_alpha_term = sizes.size * math.log(params.alpha)
    if params.kind is ProcessKind.CRP:
        return float(log_alpha_term + gammaln(sizes).sum())
    if params.kind is ProcessKind.PCRP:
        return float(log_alpha_term + params.power * gammaln(sizes).sum())
    return float(log_alpha_term + sum(params.log_table_weights(np.arange(1, size)).sum() for size in sizes))


def enumerate_partitions(n: int) -> Iterator[Tuple[int, ...]]:
    """
    Yields every set partition of n items once, as canonical label tuples (restricted growth strings)
    """
    def extend(prefix, num_labels):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for label in range(num_labels + 1):
            yield from extend(prefix + [label], max(num_labels, label + 1))

    if n >= 1:
        yield from extend([0], 1)
