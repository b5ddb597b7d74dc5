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
import contextlib
import os
import tempfile
from pathlib import Path
from typing import Iterator, List, Sequence

import numpy as np

from .errors import ParameterError


def make_rng(seed: int) -> np.random.Generator:
    """
    Creates the random generator every stochastic routine of the toolkit draws from.
    The bit generator is pinned to PCG64 so that seeded runs are reproducible across platforms
    :param seed: non-negative integer seed, None is rejected
    :returns: numpy.random.Generator
    """
    if seed is None or isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ParameterError("seed MUST be an integer, got '{}'".format(seed))
    if seed < 0:
        raise ParameterError("seed MUST be non-negative, got {}".format(seed))
    return np.random.Generator(np.random.PCG64(int(seed)))


def spawn_seeds(seed: int, count: int) -> List[int]:
    """
    Derives count independent integer seeds from one seed, e.g. one per grid point or per chain
    """
    children = np.random.SeedSequence(int(seed)).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint32)[0]) for child in children]


def normalize_log_weights(log_weights: np.ndarray) -> np.ndarray:
    """
    Exponentiates and normalizes log weights after shifting by their maximum
    """
    log_weights = np.asarray(log_weights, dtype=float)
    weights = np.exp(log_weights - np.max(log_weights))
    return weights / weights.sum()


def sample_index(log_weights: np.ndarray, rng: np.random.Generator) -> int:
    """
    Draws an index proportional to exp(log_weights) by inverting the cumulative sum with one uniform draw
    """
    weights = np.exp(log_weights - np.max(log_weights))
    cumulative = np.cumsum(weights)
    u = rng.random() * cumulative[-1]
    return min(int(np.searchsorted(cumulative, u, side='right')), len(cumulative) - 1)


def standard_error(values: Sequence[float]) -> float:
    """
    Standard error of the mean: sample standard deviation / sqrt(n), 0 for fewer than two values
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


@contextlib.contextmanager
def atomic_write(path, mode: str = 'w', newline: str = '\n') -> Iterator:
    """
    Opens a temporary file next to path and moves it over path once the block finished without error
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix='.{}.'.format(path.name), dir=str(path.parent))
    try:
        if 'b' in mode:
            stream = os.fdopen(fd, mode)
        else:
            stream = os.fdopen(fd, mode, encoding='utf-8', newline=newline)
        with stream:
            yield stream
        os.replace(tmp_name, str(path))
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
