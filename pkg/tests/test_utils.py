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
import numpy as np
import pytest
from pytest import approx

from pcrpcluster.errors import ParameterError
from pcrpcluster.utils import atomic_write, make_rng, normalize_log_weights, sample_index, spawn_seeds, \
    standard_error


@pytest.mark.parametrize('seed', [None, True, -1, 1.5, '3'])
def test_make_rng_rejects_invalid_seeds(seed):
    with pytest.raises(ParameterError):
        make_rng(seed)


def test_make_rng_is_pinned_pcg64():
    assert isinstance(make_rng(1).bit_generator, np.random.PCG64)
    assert make_rng(12).random(3).tolist() == np.random.Generator(np.random.PCG64(12)).random(3).tolist()


def test_spawn_seeds():
    seeds = spawn_seeds(5, 4)
    assert seeds == spawn_seeds(5, 4)
    assert len(set(seeds)) == 4
    assert spawn_seeds(6, 4) != seeds
    assert all(isinstance(seed, int) and seed >= 0 for seed in seeds)


def test_normalize_log_weights_handles_large_values():
    weights = normalize_log_weights(np.array([1000.0, 1000.0 + np.log(3.0)]))
    assert weights == approx([0.25, 0.75])


def test_sample_index_frequencies():
    rng = make_rng(3)
    log_weights = np.log(np.array([0.2, 0.5, 0.3]))
    draws = np.array([sample_index(log_weights, rng) for _ in range(20000)])
    assert np.bincount(draws, minlength=3) / draws.size == approx([0.2, 0.5, 0.3], abs=0.02)


def test_sample_index_never_picks_zero_weight():
    rng = make_rng(4)
    log_weights = np.array([-np.inf, 0.0, -np.inf])
    assert {sample_index(log_weights, rng) for _ in range(100)} == {1}


def test_standard_error():
    assert standard_error([3, 3, 4, 4]) == approx(0.2887, abs=1e-4)
    assert standard_error([5.0]) == 0.0


def test_atomic_write_replaces_file(tmp_path):
    path = tmp_path / 'out' / 'result.csv'
    with atomic_write(path) as stream:
        stream.write('a\n')
    assert path.read_text() == 'a\n'
    with atomic_write(path) as stream:
        stream.write('b\n')
    assert path.read_text() == 'b\n'


def test_atomic_write_keeps_old_file_on_failure(tmp_path):
    path = tmp_path / 'result.csv'
    path.write_text('old\n')
    with pytest.raises(RuntimeError):
        with atomic_write(path) as stream:
            stream.write('partial')
            raise RuntimeError('interrupted')
    assert path.read_text() == 'old\n'
    assert [p.name for p in tmp_path.iterdir()] == ['result.csv']
