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
import codecs
import io
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
import yaml
from scipy.linalg import LinAlgError, cholesky

from .constants import CSV_FLOAT_FORMAT, DATA_DIR, FEATURE_PREFIX, LABEL_COLUMN, OLD_FAITHFUL_FILE, \
    SIM1_COMPONENT_VARIANCE
from .errors import ConfigError, DatasetFormatError, ParameterError
from .utils import atomic_write, make_rng

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class MixtureSpec:
    """
    Gaussian mixture: component weights, means (K x d) and covariances (K x d x d)
    """
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).reshape(-1)
        means = np.atleast_2d(np.array(self.means, dtype=float))
        covariances = np.array(self.covariances, dtype=float)
        if covariances.ndim == 2:
            covariances = covariances[None, :, :]
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'means', means)
        object.__setattr__(self, 'covariances', covariances)
        k, d = means.shape
        if weights.size != k or covariances.shape != (k, d, d):
            raise ParameterError('mixture MUST have matching numbers of weights ({}), means ({}) and covariances ({})'
                                 .format(weights.size, k, covariances.shape[0]))
        if np.any(weights < 0.0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ParameterError('mixture weights MUST be a probability vector, got {}'.format(weights.tolist()))
        for index, covariance in enumerate(covariances):
            try:
                if not np.allclose(covariance, covariance.T, rtol=0.0, atol=1e-12):
                    raise LinAlgError('not symmetric')
                cholesky(covariance, lower=True)
            except LinAlgError:
                raise ParameterError('covariance of component {} MUST be symmetric positive definite'.format(index))

    @property
    def num_components(self) -> int:
        return int(self.weights.size)

    @property
    def dim(self) -> int:
        return int(self.means.shape[1])


PRESETS = {
    # three compact components, the second and third closer to each other than to the first
    'sim1': MixtureSpec(
        weights=[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        means=[[0.0, 0.0], [2.0, 0.0], [1.0, 1.5]],
        covariances=[SIM1_COMPONENT_VARIANCE * np.eye(2)] * 3,
    ),
    # shared mean, different spread
    'sim2': MixtureSpec(
        weights=[0.5, 0.5],
        means=[[0.0, 0.0], [0.0, 0.0]],
        covariances=[np.eye(2), 16.0 * np.eye(2)],
    ),
}

PRESET_TRUE_K = {'sim1': 3, 'sim2': 2, 'oldfaithful': 2}


@dataclass
class Dataset:
    """
    Observations x (N x d), optional integer labels and a name
    """
    x: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = 'dataset'

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        if self.x.ndim == 1:
            self.x = self.x[:, None]
        if self.x.ndim != 2:
            raise ParameterError('x MUST be an N x d matrix')
        if not np.all(np.isfinite(self.x)):
            raise ParameterError('x MUST be finite')
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
            if self.labels.size != self.x.shape[0]:
                raise ParameterError('labels MUST have length {}, got {}'.format(self.x.shape[0], self.labels.size))

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def dim(self) -> int:
        return int(self.x.shape[1])

    def subset(self, rows: np.ndarray, name: str = None) -> 'Dataset':
        return Dataset(self.x[rows], None if self.labels is None else self.labels[rows], name or self.name)


@dataclass(frozen=True)
class Standardization:
    """
    Per dimension shift and scale of a standardization, invertible
    """
    mean: np.ndarray
    scale: np.ndarray

    def apply(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean) / self.scale

    def inverse(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float) * self.scale + self.mean


def generate(spec: MixtureSpec, n: int, seed: int) -> Dataset:
    """
    Draws n points: a component from the weights, then a Gaussian draw from it. True labels are kept.
    """
    if n < 1:
        raise ParameterError('n MUST be >= 1, got {}'.format(n))
    rng = make_rng(seed)
    labels = rng.choice(spec.num_components, size=n, p=spec.weights)
    x = np.empty((n, spec.dim))
    for k in range(spec.num_components):
        rows = np.flatnonzero(labels == k)
        if rows.size:
            x[rows] = rng.multivariate_normal(spec.means[k], spec.covariances[k], size=rows.size, method='cholesky')
    LOGGER.debug('generated {} points from {} components'.format(n, spec.num_components))
    return Dataset(x, labels, 'mixture')


def standardize(data: Dataset) -> Tuple[Dataset, Standardization]:
    mean = data.x.mean(axis=0)
    scale = data.x.std(axis=0)
    if np.any(scale == 0.0):
        raise ParameterError('dimension(s) {} have zero variance and cannot be standardized'
                             .format((np.flatnonzero(scale == 0.0) + 1).tolist()))
    transform = Standardization(mean, scale)
    return Dataset(transform.apply(data.x), data.labels, data.name), transform


def split(data: Dataset, n_train: int, seed: int) -> Tuple[Dataset, Dataset]:
    """
    Seeded shuffle, then the first n_train rows for tuning and the remaining rows for evaluation
    """
    if not 1 <= n_train < data.n:
        raise ParameterError('training size MUST be in [1, {}), got {}'.format(data.n, n_train))
    order = make_rng(seed).permutation(data.n)
    return (data.subset(np.sort(order[:n_train]), data.name + '-train'),
            data.subset(np.sort(order[n_train:]), data.name + '-eval'))


def _line_of(parser_error: Exception) -> Optional[int]:
    match = re.search(r'line (\d+)', str(parser_error))
    return int(match.group(1)) if match else None


def read_csv(path, name: str = None) -> Dataset:
    """
    Reads a UTF-8 CSV with header x1..xd and an optional final integer column 'label'
    """
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(codecs.BOM_UTF8):
        raw = raw[len(codecs.BOM_UTF8):]
    try:
        text = raw.decode('utf-8')
    except UnicodeDecodeError as err:
        raise DatasetFormatError('{} is not UTF-8 encoded: {}'.format(path, err.reason),
                                 line=raw.count(b'\n', 0, err.start) + 1)
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, skip_blank_lines=False)
    except pd.errors.EmptyDataError:
        raise DatasetFormatError('missing header in {}'.format(path), line=1)
    except pd.errors.ParserError as err:
        raise DatasetFormatError('ragged row in {}: {}'.format(path, err), line=_line_of(err))

    columns = [str(c).strip() for c in frame.columns]
    has_label = bool(columns) and columns[-1] == LABEL_COLUMN
    features = columns[:-1] if has_label else columns
    expected = ['{}{}'.format(FEATURE_PREFIX, j + 1) for j in range(len(features))]
    if not features or features != expected:
        if columns and all(re.fullmatch(r'[-+0-9.eE]+', c) for c in columns):
            raise DatasetFormatError('missing header in {}'.format(path), line=1)
        raise DatasetFormatError('header MUST be {} followed by an optional "{}", got {}'
                                 .format(', '.join(expected[:2] + ['...']), LABEL_COLUMN, columns), line=1)

    missing = frame.isna().any(axis=1).to_numpy()
    if missing.any():
        raise DatasetFormatError('ragged row in {}'.format(path), line=int(np.flatnonzero(missing)[0]) + 2)

    x = np.empty((len(frame), len(features)))
    for j, column in enumerate(frame.columns[:len(features)]):
        for row, cell in enumerate(frame[column].tolist()):
            try:
                value = float(cell)
            except ValueError:
                raise DatasetFormatError("nonnumeric cell '{}' in column {}".format(cell, column), line=row + 2)
            if not np.isfinite(value):
                raise DatasetFormatError("nonfinite cell '{}' in column {}".format(cell, column), line=row + 2)
            x[row, j] = value
    labels = None
    if has_label:
        labels = np.empty(len(frame), dtype=np.int64)
        for row, cell in enumerate(frame[frame.columns[-1]].tolist()):
            try:
                labels[row] = int(cell)
            except ValueError:
                raise DatasetFormatError("label '{}' is not an integer".format(cell), line=row + 2)
    LOGGER.debug('read {} rows, {} features{} from {}'.format(x.shape[0], x.shape[1],
                                                             ' and labels' if has_label else '', path))
    return Dataset(x, labels, name or path.stem)


def write_csv(data: Dataset, path) -> None:
    frame = pd.DataFrame(data.x, columns=['{}{}'.format(FEATURE_PREFIX, j + 1) for j in range(data.dim)])
    if data.labels is not None:
        frame[LABEL_COLUMN] = data.labels
    with atomic_write(path) as stream:
        frame.to_csv(stream, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')


def mixture_spec_from_dict(spec: Dict) -> MixtureSpec:
    try:
        return MixtureSpec(spec['weights'], spec['means'], spec['covariances'])
    except KeyError as err:
        raise ParameterError('mixture spec MUST define {}'.format(err))


def mixture_spec_from_file(path) -> MixtureSpec:
    with open(path, 'r') as infile:
        return mixture_spec_from_dict(yaml.safe_load(infile))


def load_preset(name: str, n: int = None, seed: int = None) -> Dataset:
    """
    Resolves the presets sim1 and sim2 (generated, need n and seed) and oldfaithful (read from DATA_DIR)
    """
    if name in PRESETS:
        if n is None or seed is None:
            raise ConfigError("preset '{}' MUST be given a sample size and a seed".format(name))
        data = generate(PRESETS[name], n, seed)
        data.name = name
        return data
    if name == 'oldfaithful':
        path = Path(DATA_DIR) / OLD_FAITHFUL_FILE
        if not path.exists():
            raise ConfigError('{} not found. Place the Old Faithful data there (columns x1=eruption duration, '
                              'x2=waiting time) or point PCRP_DATA_DIR to its folder'.format(path))
        return read_csv(path, name)
    raise ConfigError("unknown preset '{}', expected one of {}".format(name, sorted(PRESET_TRUE_K)))
