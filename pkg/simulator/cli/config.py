import copy
import dataclasses
import logging
from dataclasses import dataclass, field
from typing import Optional

import yaml

from simulator.errors import ConfigurationError
from simulator.federation import ALGORITHMS, Ablations, make_partition

logger = logging.getLogger(__name__)

DATASET_TYPES = ('synthetic', 'csv')

PRESETS = {
    'digits': {'tau': 10.0, 'lambda_lce': 10.0, 'lambda_ent': 0.001, 'lambda_dis': 10.0},
    'office': {'tau': 1.0, 'lambda_lce': 1.0, 'lambda_ent': 0.001, 'lambda_dis': 1.0},
    'domainnet': {'tau': 1.0, 'lambda_lce': 1.0, 'lambda_ent': 0.001, 'lambda_dis': 1.0},
}


def _fail(path, message):
    raise ConfigurationError(f"{path}: {message}")


def _int(section, name, minimum=None):
    value = getattr(section, name)
    path = f"{section.SECTION}.{name}" if section.SECTION else name
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        _fail(path, f"must be at least {minimum}, got {value}")
    return value


def _float(section, name, low=None, high=None, low_open=False, high_open=False):
    value = getattr(section, name)
    path = f"{section.SECTION}.{name}" if section.SECTION else name
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, f"expected a number, got {value!r}")
    value = float(value)
    if value != value or value in (float('inf'), float('-inf')):
        _fail(path, f"must be finite, got {value}")
    if low is not None and (value < low or (low_open and value == low)):
        _fail(path, f"must be {'>' if low_open else '>='} {low}, got {value}")
    if high is not None and (value > high or (high_open and value == high)):
        _fail(path, f"must be {'<' if high_open else '<='} {high}, got {value}")
    object.__setattr__(section, name, value)
    return value


def _bool(section, name):
    value = getattr(section, name)
    if not isinstance(value, bool):
        _fail(f"{section.SECTION}.{name}", f"expected true or false, got {value!r}")


@dataclass(frozen=True)
class DatasetConfig:
    SECTION = 'dataset'

    type: str = 'synthetic'
    n_clients: int = 4
    n: int = 20
    C: int = 10
    samples_per_client: int = 1000
    test_fraction: float = 0.5
    nuisance_dims: int = 6
    domain_magnitudes: Optional[tuple] = None
    class_sep: float = 0.6
    noise_sigma: float = 0.1
    files: tuple = ()

    def __post_init__(self):
        if self.type not in DATASET_TYPES:
            _fail('dataset.type', f"expected one of {', '.join(DATASET_TYPES)}, got {self.type!r}")
        _int(self, 'n_clients', 1)
        _int(self, 'n', 1)
        _int(self, 'C', 2)
        _int(self, 'samples_per_client', self.C)
        _float(self, 'test_fraction', 0.0, 1.0, low_open=True, high_open=True)
        _int(self, 'nuisance_dims', 0)
        if self.nuisance_dims >= self.n:
            _fail('dataset.nuisance_dims', f"must be below n={self.n}, got {self.nuisance_dims}")
        _float(self, 'class_sep', 0.0, low_open=True)
        _float(self, 'noise_sigma', 0.0)
        if self.domain_magnitudes is not None:
            magnitudes = tuple(self.domain_magnitudes)
            if len(magnitudes) != self.n_clients:
                _fail('dataset.domain_magnitudes', f"expected {self.n_clients} entries, got {len(magnitudes)}")
            for i, m in enumerate(magnitudes):
                if isinstance(m, bool) or not isinstance(m, (int, float)) or m < 0:
                    _fail(f"dataset.domain_magnitudes[{i}]", f"expected a non-negative number, got {m!r}")
            object.__setattr__(self, 'domain_magnitudes', tuple(float(m) for m in magnitudes))
        files = tuple(self.files or ())
        for i, entry in enumerate(files):
            if not isinstance(entry, dict) or set(entry) != {'train', 'test'}:
                _fail(f"dataset.files[{i}]", "expected a mapping with exactly the keys train and test")
        if self.type == 'csv':
            if len(files) != self.n_clients:
                _fail('dataset.files', f"expected {self.n_clients} train/test pairs, got {len(files)}")
        object.__setattr__(self, 'files', files)


@dataclass(frozen=True)
class ModelConfig:
    SECTION = 'model'

    hidden_dims: tuple = (64,)
    feature_dim: int = 32
    batch_norm: bool = True

    def __post_init__(self):
        hidden = tuple(self.hidden_dims or ())
        for i, width in enumerate(hidden):
            if isinstance(width, bool) or not isinstance(width, int) or width < 1:
                _fail(f"model.hidden_dims[{i}]", f"expected a positive integer, got {width!r}")
        object.__setattr__(self, 'hidden_dims', hidden)
        _int(self, 'feature_dim', 1)
        _bool(self, 'batch_norm')


@dataclass(frozen=True)
class HyperConfig:
    SECTION = 'hyper'

    tau: float = 1.0
    lambda_lce: float = 1.0
    lambda_ent: float = 0.001
    lambda_dis: float = 1.0
    eps_mask: float = 0.5
    lr: float = 0.01
    momentum: float = 0.5
    B: int = 64
    E: int = 1
    T: int = 50

    def __post_init__(self):
        _float(self, 'tau', 0.0, low_open=True)
        for name in ('lambda_lce', 'lambda_ent', 'lambda_dis', 'lr'):
            _float(self, name, 0.0)
        _float(self, 'eps_mask', 0.0, 1.0, low_open=True, high_open=True)
        _float(self, 'momentum', 0.0, 1.0, high_open=True)
        for name in ('B', 'E', 'T'):
            _int(self, name, 1)


@dataclass(frozen=True)
class ProbeConfig:
    SECTION = 'probe'

    ratios: tuple = tuple(round(0.1 * i, 1) for i in range(1, 11))
    K: int = 10
    pretrain_rounds: Optional[int] = None
    checkpoint_dir: Optional[str] = None

    def __post_init__(self):
        ratios = tuple(self.ratios or ())
        if not ratios:
            _fail('probe.ratios', "needs at least one ratio")
        for i, ratio in enumerate(ratios):
            if isinstance(ratio, bool) or not isinstance(ratio, (int, float)) or not 0.0 < ratio <= 1.0:
                _fail(f"probe.ratios[{i}]", f"expected a number in (0, 1], got {ratio!r}")
        object.__setattr__(self, 'ratios', tuple(float(r) for r in ratios))
        _int(self, 'K', 1)
        if self.pretrain_rounds is not None:
            _int(self, 'pretrain_rounds', 1)


@dataclass(frozen=True)
class RunConfig:
    SECTION = ''

    seed: int = 0
    output_dir: str = 'runs/default'
    algorithm: str = 'fedpick'
    workers: int = 1
    ablations: Ablations = field(default_factory=Ablations)
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    hyper: HyperConfig = field(default_factory=HyperConfig)
    probe: ProbeConfig = field(default_factory=ProbeConfig)

    def __post_init__(self):
        _int(self, 'seed', 0)
        _int(self, 'workers', 1)
        if not isinstance(self.output_dir, str) or not self.output_dir:
            _fail('output_dir', f"expected a non-empty path, got {self.output_dir!r}")
        if self.algorithm not in ALGORITHMS:
            _fail('algorithm', f"expected one of {', '.join(ALGORITHMS)}, got {self.algorithm!r}")
        for flag in dataclasses.fields(Ablations):
            value = getattr(self.ablations, flag.name)
            if not isinstance(value, bool):
                _fail(f"ablations.{flag.name}", f"expected true or false, got {value!r}")
        try:
            make_partition(self.algorithm, self.ablations)
        except ConfigurationError as exc:
            _fail('ablations', str(exc))


_SECTIONS = {'ablations': Ablations, 'dataset': DatasetConfig, 'model': ModelConfig,
             'hyper': HyperConfig, 'probe': ProbeConfig}


def _build(cls, raw, path):
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        _fail(path or 'config', f"expected a mapping, got {type(raw).__name__}")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(raw) - names)
    if unknown:
        prefix = f"{path}." if path else ""
        raise ConfigurationError(f"Unknown config key {prefix}{unknown[0]}.")
    kwargs = {}
    for key, value in raw.items():
        if cls is RunConfig and key in _SECTIONS:
            value = _build(_SECTIONS[key], value, key)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        _fail(path or 'config', str(exc))


def from_dict(raw):
    """Strict RunConfig from a nested mapping; unknown keys are errors."""
    return _build(RunConfig, copy.deepcopy(raw), '')


def _set_dotted(raw, key, value):
    parts = key.split('.')
    if not all(parts):
        raise ConfigurationError(f"Malformed override key {key!r}.")
    node = raw
    for part in parts[:-1]:
        child = node.get(part)
        if child is None:
            child = node[part] = {}
        elif not isinstance(child, dict):
            raise ConfigurationError(f"Override {key!r} descends into non-section {part!r}.")
        node = child
    node[parts[-1]] = value


def parse_override(text):
    """Split ``dotted.key=value``; the value is read as a YAML scalar."""
    key, sep, value = text.partition('=')
    if not sep or not key.strip():
        raise ConfigurationError(f"Override {text!r} must look like dotted.key=value.")
    try:
        return key.strip(), yaml.safe_load(value)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"Override {text!r}: {exc}") from exc


def read_config_file(path):
    try:
        with open(path, encoding='utf-8') as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"Config file {path} does not exist.") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"Config file {path} is not valid YAML: {exc}") from exc
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"Config file {path} must hold a mapping at the top level.")
    return raw


def load_config(path=None, preset=None, overrides=()):
    """
    Resolve a RunConfig: file, then preset hyperparameters, then overrides.

    :param path: YAML file, or None for the defaults.
    :param preset: Name from PRESETS, or None.
    :param overrides: Iterable of ``dotted.key=value`` strings.
    :raises ConfigurationError: Naming the offending key or value.
    """
    raw = read_config_file(path) if path is not None else {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(f"Unknown preset {preset!r}; expected one of {', '.join(PRESETS)}.")
        hyper = raw.setdefault('hyper', {})
        if not isinstance(hyper, dict):
            raise ConfigurationError("hyper: expected a mapping.")
        hyper.update(PRESETS[preset])
    for text in overrides:
        key, value = parse_override(text)
        _set_dotted(raw, key, value)
    cfg = from_dict(raw)
    logger.debug("resolved config: %s", to_dict(cfg))
    return cfg


def _plain(value):
    if isinstance(value, tuple):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    return value


def to_dict(cfg):
    """Nested plain mapping of a RunConfig; from_dict(to_dict(cfg)) == cfg."""
    return _plain(dataclasses.asdict(cfg))


def dump_config(cfg, path):
    with open(path, 'w', encoding='utf-8') as fh:
        yaml.safe_dump(to_dict(cfg), fh, sort_keys=False)
