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
#
# https://docs.python.org/3/distutils/setupscript.html
#
# =================================================================

from pip._internal.req import parse_requirements
from setuptools import setup, find_packages

# loading requirements
requirements = list(parse_requirements('requirements.txt', session='hack'))
requirements = [r.requirement for r in requirements]

setup(
    name="pcrp-cluster",
    packages=find_packages(where='src'),
    package_dir={'': 'src'},
    py_modules=['pcrp'],
    version="0.1.0",
    description="Powered Chinese restaurant process mixtures of Gaussians",
    long_description="Bayesian nonparametric clustering with the CRP, the powered CRP and generic g-CRP priors, "
                     "collapsed Gibbs sampling and cross validation of the power parameter",
    long_description_content_type="text/markdown",
    license="Apache License, Version 2.0",
    url="",
    keywords=["clustering", "Bayesian nonparametrics", "Chinese restaurant process", "Gibbs sampling"],
    install_requires=requirements,
    python_requires=">=3.8",
    entry_points={
        'console_scripts': ['pcrp=pcrp:main'],
    },
    test_suite="tests",
    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: Apache License, Version 2.0',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
    ]
)
