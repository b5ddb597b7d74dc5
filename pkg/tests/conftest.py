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
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / 'src'))

from pcrpcluster.conjugate import NiwParams  # noqa: E402


@pytest.fixture
def unit_prior_1d() -> NiwParams:
    return NiwParams(mu0=np.zeros(1), kappa0=1.0, nu0=3.0, psi0=np.eye(1))


@pytest.fixture
def unit_prior_2d() -> NiwParams:
    return NiwParams(mu0=np.zeros(2), kappa0=0.5, nu0=5.0, psi0=np.array([[1.0, 0.3], [0.3, 2.0]]))


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run tests marked slow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)
