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
from .conjugate import (ClusterStats, NiwParams, StudentT, log_marginal_likelihood, log_posterior_predictive,
                        log_prior_predictive)
from .datasets import Dataset, MixtureSpec, generate, load_preset, read_csv, split, standardize, write_csv
from .errors import (ConfigError, DatasetFormatError, NumericalError, ParameterError, PcrpError,
                     SamplerError)
from .metrics import cv_loss, nmi, vi
from .partition import (PartitionState, ProcessKind, ProcessParams, partition_log_probability,
                        sample_prior_partition, seat_weights)
from .sampler import Chain, ChainSummary, SamplerConfig, point_estimate, posterior_k_distribution, \
    run_chain, summarize
from .tuning import CvCurve, GridSpec, oracle_alpha, tune_power

__version__ = '0.1.0'
