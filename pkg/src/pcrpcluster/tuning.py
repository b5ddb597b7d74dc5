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
Choice of the pCRP power r by cross validation and the CRP-Oracle concentration
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import repeat
from typing import List, Optional, Sequence

import numpy as np

from .constants import (DEFAULT_JUMP_FACTOR, GRID_COARSE_STEP, GRID_DENSE_UNTIL, GRID_EPSILON, GRID_MAX,
                        GRID_STEP)
from .conjugate import NiwParams
from .errors import ParameterError
from .metrics import cv_loss
from .partition import ProcessParams
from .sampler import SamplerConfig, run_chain
from .utils import spawn_seeds

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """
    Power grid: start (1 + epsilon) in steps of step up to dense_until, then coarse_step up to max_r
    """
    start: float = 1.0 + GRID_EPSILON
    step: float = GRID_STEP
    max_r: float = GRID_MAX
    dense_until: float = GRID_DENSE_UNTIL
    coarse_step: float = GRID_COARSE_STEP

    def __post_init__(self):
        if not self.start > 1.0:
            raise ParameterError('grid start MUST be > 1, got {}'.format(self.start))
        if not self.step > 0.0 or not self.coarse_step > 0.0:
            raise ParameterError('grid steps MUST be positive')
        if self.max_r < self.start:
            raise ParameterError('grid max {} MUST NOT be below its start {}'.format(self.max_r, self.start))


@dataclass(frozen=True)
class CvCurve:
    """
    Cross validation losses of the evaluated prefix of the power grid and the chosen power
    """
    grid: np.ndarray
    losses: np.ndarray
    chosen_r: float
    chosen_index: int
    inflection_found: bool


def power_grid(spec: GridSpec) -> np.ndarray:
    points = []
    i = 0
    while True:
        r = round(spec.start + i * spec.step, 10)
        if r > min(spec.dense_until, spec.max_r) + 1e-9:
            break
        points.append(r)
        i += 1
    base = points[-1] if points else spec.start - spec.coarse_step
    j = 1
    while True:
        r = round(base + j * spec.coarse_step, 10)
        if r > spec.max_r + 1e-9:
            break
        points.append(r)
        j += 1
    return np.asarray(points, dtype=float)


def detect_jump(losses: Sequence[float], jump_factor: float = DEFAULT_JUMP_FACTOR) -> Optional[int]:
    """
    Index of the first loss exceeding the smallest preceding loss times jump_factor, None if there is none
    """
    if not jump_factor > 1.0:
        raise ParameterError('jump factor MUST be > 1, got {}'.format(jump_factor))
    running_min = math.inf
    for index, loss in enumerate(losses):
        if index > 0 and loss > running_min * jump_factor:
            return index
        running_min = min(running_min, loss)
    return None


def _grid_point_loss(train_data: np.ndarray, power: float, alpha: float, prior: NiwParams,
                     config: SamplerConfig) -> float:
    chain = run_chain(train_data, ProcessParams.pcrp(alpha, power), prior, config)
    return float(np.mean([cv_loss(train_data, sample) for sample in chain.samples]))


def tune_power(train_data: np.ndarray, grid_spec: GridSpec, prior: NiwParams, alpha: float,
               config: SamplerConfig, rng_seed: int, jump_factor: float = DEFAULT_JUMP_FACTOR,
               workers: int = 1) -> CvCurve:
    """
    Walks the power grid upwards, scoring every r by the mean cv_loss of the retained samples of a pCRP
    chain on the training data, and stops at the first jump. The chosen r is the grid point before it.

    With workers > 1 all grid points are evaluated in a process pool and the jump is located in the
    completed curve afterwards; the result equals the sequential one.
    """
    x = np.asarray(train_data, dtype=float)
    grid = power_grid(grid_spec)
    configs = [replace(config, seed=seed) for seed in spawn_seeds(rng_seed, grid.size)]
    LOGGER.info('Start tuning the power on {} training points, {} grid points from {} to {}'
                .format(x.shape[0], grid.size, grid[0], grid[-1]))

    losses: List[float] = []
    if workers <= 1:
        for index, power in enumerate(grid):
            losses.append(_grid_point_loss(x, float(power), alpha, prior, configs[index]))
            LOGGER.info('[{}/{}] r={} loss={:.4f}'.format(index + 1, grid.size, power, losses[-1]))
            if detect_jump(losses, jump_factor) is not None:
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            losses = list(pool.map(_grid_point_loss, repeat(x), grid.tolist(), repeat(alpha), repeat(prior),
                                   configs))
        jump = detect_jump(losses, jump_factor)
        if jump is not None:
            losses = losses[:jump + 1]

    jump = detect_jump(losses, jump_factor)
    if jump is None:
        chosen_index = len(losses) - 1
        LOGGER.warning('no inflection detected up to r={}, choosing the largest grid point'.format(grid[-1]))
    else:
        chosen_index = jump - 1
        LOGGER.info('Loss jumps at r={}, chosen r={}'.format(grid[jump], grid[chosen_index]))
    return CvCurve(grid=grid[:len(losses)].copy(), losses=np.asarray(losses, dtype=float),
                   chosen_r=float(grid[chosen_index]), chosen_index=chosen_index, inflection_found=jump is not None)


def oracle_alpha(true_k: int, n: int) -> float:
    """
    Concentration whose CRP prior mean alpha log(n) equals the true number of clusters
    """
    if true_k < 1:
        raise ParameterError('true_k MUST be positive, got {}'.format(true_k))
    if n < 2:
        raise ParameterError('n MUST be >= 2, got {}'.format(n))
    return true_k / math.log(n)
