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
# Command line entry point: simulate data, tune the power r, fit chains, evaluate and compare
# CRP, CRP-Oracle and pCRP. Every artifact is a CSV, JSON or text file below --out.
# =================================================================
import argparse
import json
import logging
import logging.config
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from itertools import repeat
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import yaml

from pcrpcluster.conjugate import NiwParams
from pcrpcluster.constants import (CSV_FLOAT_FORMAT, DEFAULT_ALPHA, DEFAULT_BURN_IN, DEFAULT_ITERATIONS,
                                   DEFAULT_JUMP_FACTOR, DEFAULT_KAPPA0, DEFAULT_PSI0_SCALE, DEFAULT_THIN, GRID_EPSILON,
                                   GRID_MAX, GRID_STEP, OLD_FAITHFUL_TRAIN_SIZE, TUNE_BURN_IN, TUNE_ITERATIONS)
from pcrpcluster.datasets import (PRESET_TRUE_K, PRESETS, Dataset, MixtureSpec, generate, load_preset,
                                  mixture_spec_from_file, read_csv, split, standardize, write_csv)
from pcrpcluster.errors import ConfigError, PcrpError
from pcrpcluster.metrics import nmi, vi
from pcrpcluster.partition import G_FUNCTIONS, ProcessKind, ProcessParams
from pcrpcluster.sampler import (Chain, SamplerConfig, point_estimate, posterior_k_distribution, run_chain,
                                 summarize)
from pcrpcluster.tuning import CvCurve, GridSpec, oracle_alpha, tune_power
from pcrpcluster.utils import atomic_write, spawn_seeds

logging_config_file = Path(Path(__file__).parent, 'logging.yaml')
level = logging.INFO
if os.path.exists(logging_config_file):
    with open(logging_config_file, 'rt') as file:
        try:
            config = yaml.safe_load(file.read())
            logging.config.dictConfig(config)
        except Exception as e:
            print(e, file=sys.stderr)
            print('Error while loading logging configuration from file "{}". Using defaults'
                  .format(logging_config_file), file=sys.stderr)
            logging.basicConfig(level=level)
else:
    logging.basicConfig(level=level)

LOGGER = logging.getLogger(__name__)

METHODS = ('crp', 'crp-oracle', 'pcrp')
GROUND_TRUTH = 'ground-truth'
SUMMARY_COLUMNS = ['method', 'nmi', 'nmi_se', 'vi', 'vi_se', 'k', 'k_se', 'k_max', 'nmi_point', 'vi_point', 'k_point']
"""
Columns of every summary table: sample averaged metrics with standard errors, K_max over all sweeps and
the metrics of the point estimate
"""


@dataclass
class RunConfig:
    """
    Everything one command needs. Built from the config file (YAML or JSON) and the command line flags,
    flags win.
    """
    seed: Optional[int] = None
    data: Optional[str] = None
    preset: Optional[str] = None
    spec_file: Optional[str] = None
    n: Optional[int] = None
    standardize: bool = False
    train_size: Optional[int] = None
    process: str = ProcessKind.CRP.value
    alpha: float = DEFAULT_ALPHA
    power: Optional[float] = None
    g: Optional[str] = None
    true_k: Optional[int] = None
    iterations: int = DEFAULT_ITERATIONS
    burn_in: int = DEFAULT_BURN_IN
    thin: int = DEFAULT_THIN
    tune_iterations: Optional[int] = None
    tune_burn_in: Optional[int] = None
    kappa0: float = DEFAULT_KAPPA0
    nu0: Optional[float] = None
    psi0_scale: float = DEFAULT_PSI0_SCALE
    mu0: Optional[List[float]] = None
    grid_start: float = 1.0 + GRID_EPSILON
    grid_step: float = GRID_STEP
    grid_max: float = GRID_MAX
    jump_factor: float = DEFAULT_JUMP_FACTOR
    methods: List[str] = field(default_factory=lambda: list(METHODS))
    workers: int = 1
    samples: Optional[str] = None
    name: Optional[str] = None
    out: str = '.'
    verbose: bool = False

    def __post_init__(self):
        if self.seed is not None and (isinstance(self.seed, bool) or not isinstance(self.seed, int)
                                      or self.seed < 0):
            raise ConfigError("seed MUST be a non-negative integer, got '{}'".format(self.seed))
        if isinstance(self.methods, str):
            self.methods = _csv_list(self.methods)
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError('unknown method(s) {}, expected a subset of {}'.format(unknown, list(METHODS)))
        if self.data and self.preset:
            raise ConfigError('either a data file or a preset MUST be given, not both')
        if self.process not in [kind.value for kind in ProcessKind]:
            raise ConfigError("process MUST be one of {}, got '{}'".format([kind.value for kind in ProcessKind],
                                                                             self.process))
        if self.g is not None and self.g not in G_FUNCTIONS:
            raise ConfigError("unknown g '{}', expected one of {}".format(self.g, sorted(G_FUNCTIONS)))
        if self.workers < 1:
            raise ConfigError('workers MUST be >= 1, got {}'.format(self.workers))

    def require(self, *names: str) -> None:
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ConfigError('missing required setting(s): {}'.format(
                ', '.join('--' + name.replace('_', '-') for name in missing)))

    @property
    def synthetic(self) -> bool:
        return self.spec_file is not None or self.preset in PRESETS


def _csv_list(value: str) -> List[str]:
    return [s.strip() for s in value.split(',') if s.strip()]


def _float_list(value: str) -> List[float]:
    try:
        return [float(s) for s in _csv_list(value)]
    except ValueError:
        raise argparse.ArgumentTypeError("'{}' is not a comma separated list of numbers".format(value))


def parse_parameter(argv: List[str] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', '-c',
                        help='YAML or JSON run configuration; command line flags override its values')
    common.add_argument('--seed', type=int,
                        help='Seed of every random draw, required by all commands but eval')
    common.add_argument('--out', '-o',
                        help='Output directory (default: current directory)')
    common.add_argument('--verbose', '-v', action='store_true', default=None,
                        help='Log at DEBUG level')

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument('--data', help='CSV with columns x1..xd and an optional label column')
    source.add_argument('--preset', choices=sorted(PRESET_TRUE_K), help='Built-in dataset')
    source.add_argument('--spec-file', help='YAML or JSON mixture spec with weights, means and covariances')
    source.add_argument('--n', type=int, help='Number of points to simulate')
    source.add_argument('--standardize', action='store_true', default=None,
                        help='Shift and scale every dimension to zero mean and unit variance')
    source.add_argument('--train-size', type=int,
                        help='Size of the training sample used to tune r')

    process = argparse.ArgumentParser(add_help=False)
    process.add_argument('--process', choices=[kind.value for kind in ProcessKind])
    process.add_argument('--alpha', type=float, help='Concentration (default: {})'.format(DEFAULT_ALPHA))
    process.add_argument('--power', type=float, help='Power r of the pCRP')
    process.add_argument('--g', choices=sorted(G_FUNCTIONS), help='Table weight function of the g-CRP')
    process.add_argument('--true-k', type=int, help='True number of clusters, calibrates CRP-Oracle')

    sampler = argparse.ArgumentParser(add_help=False)
    sampler.add_argument('--iterations', type=int, help='Gibbs sweeps (default: {})'.format(DEFAULT_ITERATIONS))
    sampler.add_argument('--burn-in', type=int, help='Discarded sweeps (default: {})'.format(DEFAULT_BURN_IN))
    sampler.add_argument('--thin', type=int, help='Keep every thin-th sweep (default: {})'.format(DEFAULT_THIN))
    sampler.add_argument('--tune-iterations', type=int,
                         help='Gibbs sweeps of every cross validation chain (default: {} or --iterations if smaller)'
                         .format(TUNE_ITERATIONS))
    sampler.add_argument('--tune-burn-in', type=int,
                         help='Discarded sweeps of every cross validation chain (default: {} or less)'
                         .format(TUNE_BURN_IN))
    sampler.add_argument('--kappa0', type=float, help='NIW mean precision (default: {})'.format(DEFAULT_KAPPA0))
    sampler.add_argument('--nu0', type=float, help='NIW degrees of freedom (default: d + 2)')
    sampler.add_argument('--psi0-scale', type=float, help='Factor on the empirical covariance (default: {})'
                         .format(DEFAULT_PSI0_SCALE))
    sampler.add_argument('--mu0', type=_float_list, help='Comma separated prior mean (default: data mean)')

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument('--grid-start', type=float, help='First r of the grid (default: {})'.format(1 + GRID_EPSILON))
    grid.add_argument('--grid-step', type=float, help='Dense grid step (default: {})'.format(GRID_STEP))
    grid.add_argument('--grid-max', type=float, help='Largest r of the grid (default: {})'.format(GRID_MAX))
    grid.add_argument('--jump-factor', type=float,
                      help='A loss above factor times the running minimum is a jump (default: {})'
                      .format(DEFAULT_JUMP_FACTOR))
    grid.add_argument('--workers', type=int, help='Worker processes (default: 1)')

    parser = argparse.ArgumentParser(
        prog='pcrp',
        description='Clustering with the power Chinese restaurant process and its relatives')
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('simulate', parents=[common, source],
                        help='Draw a labeled dataset from a preset or a mixture spec')
    commands.add_parser('tune', parents=[common, source, process, sampler, grid],
                        help='Choose the pCRP power r by cross validation')
    commands.add_parser('fit', parents=[common, source, process, sampler],
                        help='Run one Gibbs chain and write trace, samples and summary')
    evaluate = commands.add_parser('eval', parents=[common],
                                   help='Summarize retained samples against true labels')
    evaluate.add_argument('--samples', help='samples CSV written by fit or compare')
    evaluate.add_argument('--data', help='CSV holding the true labels')
    evaluate.add_argument('--name', help='Method name of the summary row (default: fit)')
    compare = commands.add_parser('compare', parents=[common, source, process, sampler, grid],
                                  help='Fit several methods on one dataset, Table shaped output')
    compare.add_argument('--methods', type=_csv_list,
                         help='Comma separated subset of {} (default: all)'.format(','.join(METHODS)))
    return parser.parse_args(argv)


def _merge_config(infile, flags: Dict) -> Dict:
    """
    Merges the command line flags into the settings of a config file
    :param infile: file name of a YAML or JSON run configuration
    :param flags: dict of flag values, None for flags that were not given
    :return: merged dict, flags override file values
    """
    with open(infile, 'r') as stream:
        try:
            data_in = yaml.safe_load(stream) or {}
        except yaml.YAMLError as err:
            raise ConfigError("config file '{}' is not valid YAML or JSON: {}".format(infile, err))
    if not isinstance(data_in, dict):
        raise ConfigError("config file '{}' MUST hold a mapping".format(infile))
    data_in = {str(key).replace('-', '_'): value for key, value in data_in.items()}
    data_in.update({key: value for key, value in flags.items() if value is not None})
    return data_in


def _run_config(values: Dict) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError('unknown setting(s): {}'.format(', '.join(unknown)))
    return RunConfig(**values)


def _seeds(cfg: RunConfig) -> Tuple[int, int, int]:
    """
    Data, training and tuning seeds, all derived from --seed. Chains use --seed itself.
    """
    data_seed, train_seed, tune_seed = spawn_seeds(cfg.seed, 3)
    return data_seed, train_seed, tune_seed


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise ConfigError("output directory '{}' MUST be writable: {}".format(out, err))
    if not os.access(str(out), os.W_OK):
        raise ConfigError("output directory '{}' MUST be writable".format(out))
    return out


def _mixture(cfg: RunConfig) -> Tuple[MixtureSpec, str]:
    if cfg.spec_file is not None:
        if not Path(cfg.spec_file).is_file():
            raise ConfigError("mixture spec '{}' does not exist".format(cfg.spec_file))
        return mixture_spec_from_file(cfg.spec_file), Path(cfg.spec_file).stem
    if cfg.preset in PRESETS:
        return PRESETS[cfg.preset], cfg.preset
    raise ConfigError('simulating MUST be given a preset among {} or a mixture spec file'.format(sorted(PRESETS)))


def _load_data(cfg: RunConfig) -> Dataset:
    if cfg.data is not None:
        if not Path(cfg.data).is_file():
            raise ConfigError("data file '{}' does not exist".format(cfg.data))
        return read_csv(cfg.data)
    if cfg.synthetic:
        cfg.require('n', 'seed')
        spec, name = _mixture(cfg)
        data = generate(spec, cfg.n, _seeds(cfg)[0])
        data.name = name
        return data
    if cfg.preset is not None:
        return load_preset(cfg.preset)
    raise ConfigError('a dataset MUST be given: --data, --preset or --spec-file')


def _maybe_standardize(cfg: RunConfig, data: Dataset) -> Dataset:
    if cfg.standardize:
        data, _ = standardize(data)
    return data


def _train_size(cfg: RunConfig) -> Optional[int]:
    if cfg.train_size is None and cfg.preset == 'oldfaithful':
        return OLD_FAITHFUL_TRAIN_SIZE
    return cfg.train_size


def _split_data(cfg: RunConfig) -> Tuple[Optional[Dataset], Dataset]:
    """
    Training and evaluation data. Synthetic sources draw a fresh training sample, files are split
    after a seeded shuffle. Without a training size there is no training data.
    """
    data = _maybe_standardize(cfg, _load_data(cfg))
    train_size = _train_size(cfg)
    if train_size is None:
        return None, data
    _, train_seed, _ = _seeds(cfg)
    if cfg.synthetic:
        spec, name = _mixture(cfg)
        train = generate(spec, train_size, train_seed)
        train.name = name + '-train'
        return _maybe_standardize(cfg, train), data
    return split(data, train_size, train_seed)


def _prior(cfg: RunConfig, x: np.ndarray) -> NiwParams:
    return NiwParams.from_data(x, kappa0=cfg.kappa0, nu0=cfg.nu0, psi0_scale=cfg.psi0_scale, mu0=cfg.mu0)


def _sampler_config(cfg: RunConfig) -> SamplerConfig:
    return SamplerConfig(iterations=cfg.iterations, burn_in=cfg.burn_in, thin=cfg.thin, seed=cfg.seed)


def _tune_sampler_config(cfg: RunConfig) -> SamplerConfig:
    """
    Cross validation chains default to TUNE_ITERATIONS sweeps, capped by the length of the evaluation
    chains
    """
    iterations = cfg.tune_iterations if cfg.tune_iterations is not None else min(TUNE_ITERATIONS, cfg.iterations)
    burn_in = cfg.tune_burn_in
    if burn_in is None:
        burn_in = min(TUNE_BURN_IN, cfg.burn_in, iterations // 2)
    return SamplerConfig(iterations=iterations, burn_in=burn_in, thin=cfg.thin, seed=cfg.seed)


def _grid_spec(cfg: RunConfig) -> GridSpec:
    return GridSpec(start=cfg.grid_start, step=cfg.grid_step, max_r=cfg.grid_max)


def _process_params(cfg: RunConfig) -> ProcessParams:
    kind = ProcessKind(cfg.process)
    if kind is ProcessKind.PCRP:
        cfg.require('power')
        return ProcessParams.pcrp(cfg.alpha, cfg.power)
    if kind is ProcessKind.GCRP:
        cfg.require('g')
        return ProcessParams.gcrp(cfg.alpha, G_FUNCTIONS[cfg.g])
    return ProcessParams(alpha=cfg.alpha, power=1.0 if cfg.power is None else cfg.power)


def _write_frame(frame: pd.DataFrame, path: Path) -> None:
    with atomic_write(path) as stream:
        frame.to_csv(stream, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
    LOGGER.debug("Wrote '{}'".format(path))


def _write_json(record: Dict, path: Path) -> None:
    with atomic_write(path) as stream:
        json.dump(record, stream, indent=2)
        stream.write('\n')
    LOGGER.debug("Wrote '{}'".format(path))


def _write_summary(rows: List[Dict], out: Path, stem: str) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)
    _write_frame(frame, out / '{}.csv'.format(stem))
    text = frame.to_string(index=False, na_rep='-', float_format=lambda v: '{:.3f}'.format(v))
    with atomic_write(out / '{}.txt'.format(stem)) as stream:
        stream.write(text + '\n')
    LOGGER.info('Summary:\n{}'.format(text))
    return frame


def _summary_row(method: str, chain: Chain, true_labels: Optional[np.ndarray]) -> Dict:
    row = {'method': method}
    row.update(summarize(chain, true_labels).as_dict())
    estimate = point_estimate(chain)
    row['k_point'] = int(estimate.max()) + 1
    row['nmi_point'] = None if true_labels is None else nmi(estimate, true_labels)
    row['vi_point'] = None if true_labels is None else vi(estimate, true_labels)
    return row


def _ground_truth_row(true_labels: np.ndarray) -> Dict:
    k = int(np.unique(true_labels).size)
    return {'method': GROUND_TRUTH, 'nmi': 1.0, 'nmi_se': 0.0, 'vi': 0.0, 'vi_se': 0.0, 'k': float(k),
            'k_se': 0.0, 'k_max': k, 'nmi_point': 1.0, 'vi_point': 0.0, 'k_point': k}


def _write_chain(chain: Chain, data: Dataset, out: Path, suffix: str = '') -> None:
    """
    Trace (iteration, K), retained samples with their joint log probability, posterior of K and the
    point estimate clustering
    """
    _write_frame(pd.DataFrame({'iteration': np.arange(1, chain.k_trace.size + 1), 'K': chain.k_trace}),
                 out / 'trace{}.csv'.format(suffix))
    samples = pd.DataFrame(chain.samples, columns=['z{}'.format(i + 1) for i in range(chain.samples.shape[1])])
    samples.insert(0, 'log_joint', chain.log_joint)
    _write_frame(samples, out / 'samples{}.csv'.format(suffix))
    posterior = posterior_k_distribution(chain)
    _write_frame(pd.DataFrame({'K': list(posterior), 'probability': list(posterior.values())}),
                 out / 'posterior_k{}.csv'.format(suffix))
    write_csv(Dataset(data.x, point_estimate(chain), data.name), out / 'point_estimate{}.csv'.format(suffix))


def _read_chain(samples_file: Path) -> Chain:
    if not samples_file.is_file():
        raise ConfigError("samples file '{}' does not exist".format(samples_file))
    frame = pd.read_csv(samples_file, float_precision='round_trip')
    if frame.empty or frame.columns[0] != 'log_joint':
        raise ConfigError("'{}' is not a samples file written by fit or compare".format(samples_file))
    samples = frame.iloc[:, 1:].to_numpy(dtype=np.int64)
    trace_file = samples_file.with_name(samples_file.name.replace('samples', 'trace', 1))
    if trace_file.is_file() and trace_file != samples_file:
        k_trace = pd.read_csv(trace_file)['K'].to_numpy(dtype=np.int64)
    else:
        LOGGER.warning("no trace next to '{}', K_max is taken over the retained samples".format(samples_file))
        k_trace = samples.max(axis=1) + 1
    return Chain(samples=samples, k_trace=k_trace, runtime=0.0,
                 log_joint=frame['log_joint'].to_numpy(dtype=float))


def _tune(cfg: RunConfig, train: Dataset) -> CvCurve:
    _, _, tune_seed = _seeds(cfg)
    return tune_power(train.x, _grid_spec(cfg), _prior(cfg, train.x), cfg.alpha, _tune_sampler_config(cfg),
                      tune_seed, cfg.jump_factor, cfg.workers)


def _write_curve(curve: CvCurve, path: Path) -> None:
    chosen = np.zeros(curve.grid.size, dtype=bool)
    chosen[curve.chosen_index] = True
    _write_frame(pd.DataFrame({'r': curve.grid, 'loss': curve.losses, 'is_chosen': chosen}), path)


def cmd_simulate(cfg: RunConfig) -> int:
    cfg.require('seed', 'n')
    spec, name = _mixture(cfg)
    data = generate(spec, cfg.n, _seeds(cfg)[0])
    path = _out_dir(cfg) / '{}.csv'.format(name)
    write_csv(Dataset(data.x, data.labels, name), path)
    LOGGER.info("Wrote {} points of {} components to '{}'".format(data.n, spec.num_components, path))
    print(path)
    return 0


def cmd_tune(cfg: RunConfig) -> int:
    cfg.require('seed')
    train, data = _split_data(cfg)
    if train is None:
        train = data
    out = _out_dir(cfg)
    curve = _tune(cfg, train)
    _write_curve(curve, out / 'cv_curve.csv')
    print('{}'.format(curve.chosen_r))
    if not curve.inflection_found:
        LOGGER.warning('no inflection found, widen the grid with --grid-max')
        return 2
    return 0


def cmd_fit(cfg: RunConfig) -> int:
    cfg.require('seed')
    data = _maybe_standardize(cfg, _load_data(cfg))
    params = _process_params(cfg)
    prior = _prior(cfg, data.x)
    config = _sampler_config(cfg)
    out = _out_dir(cfg)
    chain = run_chain(data.x, params, prior, config)
    _write_chain(chain, data, out)
    _write_json({
        'dataset': data.name,
        'n': data.n,
        'process': params.describe(),
        'prior': {'mu0': prior.mu0.tolist(), 'kappa0': prior.kappa0, 'nu0': prior.nu0,
                  'psi0': prior.psi0.tolist()},
        'sampler': asdict(config),
        'summary': _summary_row(cfg.process, chain, data.labels),
    }, out / 'summary.json')
    return 0


def cmd_eval(cfg: RunConfig) -> int:
    cfg.require('samples')
    chain = _read_chain(Path(cfg.samples))
    true_labels = None
    if cfg.data is not None:
        truth = _load_data(cfg)
        if truth.labels is None:
            raise ConfigError("'{}' MUST have a label column".format(cfg.data))
        true_labels = truth.labels
    _write_summary([_summary_row(cfg.name or 'fit', chain, true_labels)], _out_dir(cfg), 'summary')
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    cfg.require('seed')
    if not cfg.methods:
        raise ConfigError('at least one method MUST be compared')
    true_k = cfg.true_k if cfg.true_k is not None else PRESET_TRUE_K.get(cfg.preset)
    if 'crp-oracle' in cfg.methods and true_k is None:
        raise ConfigError('crp-oracle MUST be given the true number of clusters (--true-k)')
    train, data = _split_data(cfg)
    out = _out_dir(cfg)
    record = {'dataset': data.name, 'n': data.n, 'methods': {}}

    runs: Dict[str, ProcessParams] = {}
    for method in cfg.methods:
        if method == 'crp':
            runs[method] = ProcessParams.crp(cfg.alpha)
        elif method == 'crp-oracle':
            runs[method] = ProcessParams.crp(oracle_alpha(true_k, data.n))
        else:
            power = cfg.power
            if power is None:
                if train is None:
                    raise ConfigError('pcrp MUST be given --power or a --train-size to tune it on')
                curve = _tune(cfg, train)
                _write_curve(curve, out / 'cv_curve.csv')
                power = curve.chosen_r
                record['tuning'] = {'train_size': train.n, 'chosen_r': power,
                                    'inflection_found': curve.inflection_found}
            runs[method] = ProcessParams.pcrp(cfg.alpha, power)
        record['methods'][method] = runs[method].describe()

    prior = _prior(cfg, data.x)
    config = _sampler_config(cfg)
    LOGGER.info('Start comparing {} on {} points'.format(', '.join(runs), data.n))
    if cfg.workers > 1 and len(runs) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(runs))) as pool:
            chains = list(pool.map(run_chain, repeat(data.x), list(runs.values()), repeat(prior), repeat(config)))
    else:
        chains = [run_chain(data.x, params, prior, config) for params in runs.values()]

    rows = [] if data.labels is None else [_ground_truth_row(data.labels)]
    for method, chain in zip(runs, chains):
        LOGGER.info('{} finished in {:.1f}s'.format(method, chain.runtime))
        _write_chain(chain, data, out, '_' + method)
        rows.append(_summary_row(method, chain, data.labels))
    _write_summary(rows, out, 'comparison')
    _write_json(record, out / 'comparison.json')
    return 0


COMMANDS = {
    'simulate': cmd_simulate,
    'tune': cmd_tune,
    'fit': cmd_fit,
    'eval': cmd_eval,
    'compare': cmd_compare,
}


def main(argv: List[str] = None) -> int:
    args = parse_parameter(argv)
    flags = {key: value for key, value in vars(args).items() if key not in ('command', 'config')}
    try:
        if args.config is not None:
            if not Path(args.config).is_file():
                raise ConfigError("config file '{}' does not exist".format(args.config))
            values = _merge_config(args.config, flags)
        else:
            values = {key: value for key, value in flags.items() if value is not None}
        cfg = _run_config(values)
        if cfg.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
            logging.getLogger('pcrpcluster').setLevel(logging.DEBUG)
        LOGGER.info("""
Start {}
======={}
{}""".format(args.command, '=' * len(args.command),
             '\n'.join('{:<12}: {}'.format(key, value) for key, value in sorted(values.items()))))
        return COMMANDS[args.command](cfg)
    except PcrpError as err:
        print('error: {}'.format(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
