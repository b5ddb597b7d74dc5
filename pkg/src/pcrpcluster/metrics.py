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
Partition comparison (normalized mutual information, variation of information) and the
cross validation loss of a clustering. Entropies are in nats.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import ParameterError

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Contingency:
    """
    Joint counts of two labelings: counts[i, j] items carry label i in a and label j in b
    """
    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def column_marginals(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def contingency(labels_a, labels_b) -> Contingency:
    labels_a = np.asarray(labels_a).reshape(-1)
    labels_b = np.asarray(labels_b).reshape(-1)
    if labels_a.size != labels_b.size:
        raise ParameterError('labelings MUST have equal lengths, got {} and {}'.format(labels_a.size, labels_b.size))
    if labels_a.size == 0:
        raise ParameterError('labelings MUST NOT be empty')
    _, rows = np.unique(labels_a, return_inverse=True)
    _, columns = np.unique(labels_b, return_inverse=True)
    rows = np.ravel(rows)
    columns = np.ravel(columns)
    counts = np.zeros((rows.max() + 1, columns.max() + 1), dtype=np.int64)
    np.add.at(counts, (rows, columns), 1)
    return Contingency(counts)


def _entropy_of_counts(counts: np.ndarray, n: int) -> float:
    p = counts / n
    return float(-xlogy(p, p).sum())


def entropy(labels) -> float:
    table = contingency(labels, labels)
    return _entropy_of_counts(table.row_marginals, table.n)


def mutual_information(labels_a, labels_b) -> float:
    table = contingency(labels_a, labels_b)
    return _mutual_information(table)


def _mutual_information(table: Contingency) -> float:
    n = table.n
    joint = table.counts / n
    outer = np.outer(table.row_marginals, table.column_marginals) / (n * n)
    nonzero = joint > 0
    return max(0.0, float((joint[nonzero] * np.log(joint[nonzero] / outer[nonzero])).sum()))


def _is_bijection(table: Contingency) -> bool:
    # identical up to relabeling
    rows, columns = table.counts.shape
    return rows == columns and np.count_nonzero(table.counts) == rows


def nmi(labels_a, labels_b) -> float:
    """
    Normalized mutual information 2 I(A;B) / (H(A) + H(B)); 1 when both labelings are a single
    cluster, 0 when exactly one of them is
    """
    table = contingency(labels_a, labels_b)
    h_a = _entropy_of_counts(table.row_marginals, table.n)
    h_b = _entropy_of_counts(table.column_marginals, table.n)
    if h_a == 0.0 and h_b == 0.0:
        return 1.0
    if h_a == 0.0 or h_b == 0.0:
        return 0.0
    if _is_bijection(table):
        return 1.0
    return float(min(1.0, 2.0 * _mutual_information(table) / (h_a + h_b)))


def vi(labels_a, labels_b) -> float:
    """
    Variation of information H(A) + H(B) - 2 I(A;B)
    """
    table = contingency(labels_a, labels_b)
    h_a = _entropy_of_counts(table.row_marginals, table.n)
    h_b = _entropy_of_counts(table.column_marginals, table.n)
    if _is_bijection(table):
        return 0.0
    return max(0.0, h_a + h_b - 2.0 * _mutual_information(table))


def cv_loss(data, labels) -> float:
    """
    Sum over clusters of the square root of the within-cluster sum of squared distances to the cluster mean
    """
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    labels = np.asarray(labels).reshape(-1)
    if labels.size != x.shape[0]:
        raise ParameterError('labels MUST have one entry per row of data')
    loss = 0.0
    for label in np.unique(labels):
        members = x[labels == label]
        loss += np.sqrt(np.square(members - members.mean(axis=0)).sum())
    return float(loss)
