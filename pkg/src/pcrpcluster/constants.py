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
import os
from pathlib import Path

DEFAULT_ALPHA = 1.0
"""
Concentration parameter used for CRP and pCRP unless configured otherwise
"""

DEFAULT_ITERATIONS = 20000
DEFAULT_BURN_IN = 10000
DEFAULT_THIN = 5
"""
Gibbs sweeps, discarded leading sweeps and thinning interval of a chain
"""

ALL_IN_ONE = 'all-in-one'
"""
Initialisation placing every item in a single cluster
"""

DEFAULT_KAPPA0 = 0.01
"""
Mean-confidence pseudo-count of the default NIW prior
"""

DEFAULT_NU0_OFFSET = 2
"""
Default degrees of freedom of the NIW prior are d + DEFAULT_NU0_OFFSET
"""

DEFAULT_PSI0_SCALE = 0.05
"""
The default NIW scale psi0 is DEFAULT_PSI0_SCALE times the empirical covariance of the data. With
nu0 = d + 2 the prior mean of a component covariance equals psi0, so this expects components
spread over about 5% of the overall variance in every direction
"""

GRID_EPSILON = 0.01
GRID_STEP = 0.01
GRID_DENSE_UNTIL = 1.2
GRID_COARSE_STEP = 0.05
GRID_MAX = 3.0
"""
Cross validation grid for the power r: 1 + GRID_EPSILON in steps of GRID_STEP up to
GRID_DENSE_UNTIL, then GRID_COARSE_STEP up to GRID_MAX
"""

DEFAULT_JUMP_FACTOR = 1.5
"""
A grid point is an inflection when its loss exceeds the smallest loss so far times this factor
"""

G_CHECK_GRID = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0, 100.0, 1000.0)
"""
Points at which a user supplied g of a g-CRP is checked for g(0) = 0 and monotonicity
"""

INTEGRITY_CHECK_EVERY = 1000
INTEGRITY_TOLERANCE = 1e-7
"""
In debug mode the sampler rebuilds all sufficient statistics every INTEGRITY_CHECK_EVERY sweeps
"""

LOG_EVERY = int(os.getenv('PCRP_LOG_EVERY', '1000'))
"""
Sweeps between two progress lines of a chain

Defaults to 1000
"""

CSV_FLOAT_FORMAT = '%.17g'
"""
Float format of all emitted CSV files, 17 significant digits round-trip every double
"""

LABEL_COLUMN = 'label'
FEATURE_PREFIX = 'x'

DATA_DIR = os.getenv('PCRP_DATA_DIR', str(Path(__file__).resolve().parents[2] / 'data'))
"""
Directory holding data files of the presets, e.g. oldfaithful.csv

Defaults to the data folder of the repository
"""

OLD_FAITHFUL_FILE = 'oldfaithful.csv'
OLD_FAITHFUL_TRAIN_SIZE = 100

SIM1_COMPONENT_VARIANCE = 0.03
"""
Isotropic variance of the three components of the sim1 preset
"""

TUNE_ITERATIONS = 600
TUNE_BURN_IN = 300
"""
Gibbs sweeps and burn-in of every cross validation chain when the run configuration sets none,
capped by the length of the evaluation chains
"""
