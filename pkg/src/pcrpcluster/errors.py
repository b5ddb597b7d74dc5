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


class PcrpError(Exception):
    """Base class of all errors raised by pcrpcluster"""


class ParameterError(PcrpError, ValueError):
    """Invalid process, prior, sampler, grid or mixture parameters"""


class NumericalError(PcrpError, ArithmeticError):
    """Numerical failure, e.g. a posterior scale matrix that lost positive definiteness"""


class SamplerError(PcrpError):
    """Failure inside a Gibbs chain"""

    def __init__(self, msg: str, iteration: int = None, item: int = None):
        super().__init__('{} (iteration {}, item {})'.format(msg, iteration, item))
        self.iteration = iteration
        self.item = item


class DatasetFormatError(PcrpError, ValueError):
    """Malformed dataset file"""

    def __init__(self, msg: str, line: int = None):
        super().__init__(msg if line is None else 'line {}: {}'.format(line, msg))
        self.line = line


class ConfigError(PcrpError, ValueError):
    """Invalid run configuration"""
