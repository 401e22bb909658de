import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from simulator.errors import ConfigurationError

from .dataset import Dataset

logger = logging.getLogger(__name__)

_MAX_CONDITION = 1e6


@dataclass(frozen=True, eq=False)
class DomainSpec:
    """
    Input transform of one domain: ``x = (v @ mixing.T) * scale + shift + noise``.

    ``v`` stacks the label-carrying coordinates and ``nuisance_dims``
    label-independent ones; ``mixing`` rotates them together so each domain
    spreads the label information over different input coordinates.
    """
    mixing: np.ndarray
    shift: np.ndarray
    scale: np.ndarray
    noise_sigma: float = 0.0
    nuisance_dims: int = 0

    def __post_init__(self):
        n = len(self.shift)
        if self.mixing.shape != (n, n) or self.scale.shape != (n,):
            raise ConfigurationError(
                f"DomainSpec shapes disagree: mixing {self.mixing.shape}, shift {self.shift.shape}, "
                f"scale {self.scale.shape}.")
        if np.any(self.scale <= 0):
            raise ConfigurationError("DomainSpec scale entries must be positive.")
        if self.noise_sigma < 0:
            raise ConfigurationError(f"noise_sigma must be non-negative, got {self.noise_sigma}.")
        if not 0 <= self.nuisance_dims < n:
            raise ConfigurationError(f"nuisance_dims must lie in [0, {n}), got {self.nuisance_dims}.")
        if np.linalg.cond(self.mixing * self.scale[:, None]) > _MAX_CONDITION:
            raise ConfigurationError("DomainSpec transform is numerically singular.")

    @property
    def n(self):
        return len(self.shift)

    @classmethod
    def identity(cls, n, nuisance_dims=0):
        return cls(mixing=np.eye(n), shift=np.zeros(n), scale=np.ones(n),
                   noise_sigma=0.0, nuisance_dims=nuisance_dims)

    @classmethod
    def random(cls, n, magnitude, rng, nuisance_dims=0, noise_sigma=0.1):
        """
        Random domain whose distance from the identity grows with ``magnitude``.

        The mixing matrix is the exponential of a random skew-symmetric matrix,
        so it stays orthogonal; magnitude 0 gives the identity domain.
        """
        if magnitude < 0:
            raise ConfigurationError(f"Domain magnitude must be non-negative, got {magnitude}.")
        a = rng.normal(size=(n, n))
        skew = (a - a.T) / 2.0
        mixing = expm(magnitude * skew)
        shift = magnitude * rng.normal(size=n)
        scale = np.exp(0.3 * magnitude * rng.normal(size=n))
        return cls(mixing=mixing, shift=shift, scale=scale,
                   noise_sigma=noise_sigma * min(magnitude, 1.0), nuisance_dims=nuisance_dims)

    def apply(self, v, rng):
        x = (v @ self.mixing.T) * self.scale + self.shift
        if self.noise_sigma > 0:
            x = x + self.noise_sigma * rng.normal(size=x.shape)
        return x


def _balanced_labels(count, num_classes, rng):
    labels = np.arange(count) % num_classes
    return rng.permutation(labels)


def gen_synthetic_domains(n_clients, n, C, samples_per_client, test_fraction=0.5, specs='auto',
                          seed=0, nuisance_dims=0, domain_magnitudes=None, class_sep=0.6,
                          noise_sigma=0.1):
    """
    Cross-domain benchmark: shared class structure, per-client input domains.

    Class prototypes live in the ``n - nuisance_dims`` informative coordinates
    and are shared by every client. Each client draws balanced samples around
    them, appends label-independent nuisance coordinates and pushes the
    result through its own DomainSpec.

    :param n_clients: Number of clients (domains).
    :param n: Input width.
    :param C: Number of classes.
    :param samples_per_client: Train plus test samples per client.
    :param test_fraction: Share of each client's samples held out for testing.
    :param specs: 'auto' or a list of DomainSpec, one per client.
    :param seed: Master seed.
    :param nuisance_dims: Label-independent coordinates per sample.
    :param domain_magnitudes: Per-client magnitudes for 'auto' specs (default 1.0 each).
    :param class_sep: Standard deviation of the class prototypes.
    :param noise_sigma: Additive observation noise of non-identity domains.
    :return: List of (train, test) Dataset pairs.
    """
    informative = n - nuisance_dims
    if n_clients < 1:
        raise ConfigurationError(f"n_clients must be at least 1, got {n_clients}.")
    if C < 2:
        raise ConfigurationError(f"At least two classes are needed, got C={C}.")
    if nuisance_dims < 0 or informative < 1:
        raise ConfigurationError(f"n={n} leaves no informative dimension with {nuisance_dims} nuisance dims.")
    if samples_per_client < C:
        raise ConfigurationError(f"samples_per_client={samples_per_client} is below C={C}.")
    if not 0.0 < test_fraction < 1.0:
        raise ConfigurationError(f"test_fraction must lie in (0, 1), got {test_fraction}.")
    n_test = int(round(samples_per_client * test_fraction))
    n_train = samples_per_client - n_test
    if n_train < 1 or n_test < 1:
        raise ConfigurationError("test_fraction leaves an empty train or test split.")

    master = np.random.default_rng(seed)
    prototypes = master.normal(scale=class_sep, size=(C, informative))

    if isinstance(specs, str):
        if specs != 'auto':
            raise ConfigurationError(f"specs must be 'auto' or a list of DomainSpec, got {specs!r}.")
        magnitudes = [1.0] * n_clients if domain_magnitudes is None else list(domain_magnitudes)
        if len(magnitudes) != n_clients:
            raise ConfigurationError(f"Expected {n_clients} domain magnitudes, got {len(magnitudes)}.")
        specs = [DomainSpec.random(n, m, master, nuisance_dims, noise_sigma) for m in magnitudes]
    elif len(specs) != n_clients:
        raise ConfigurationError(f"Expected {n_clients} domain specs, got {len(specs)}.")
    for spec in specs:
        if spec.n != n or spec.nuisance_dims != nuisance_dims:
            raise ConfigurationError("Every DomainSpec must match n and nuisance_dims.")

    clients = []
    for client_id, spec in enumerate(specs):
        rng = np.random.default_rng([seed, client_id + 1])
        split = []
        for count in (n_train, n_test):
            labels = _balanced_labels(count, C, rng)
            signal = prototypes[labels] + rng.normal(size=(count, informative))
            nuisance = rng.normal(size=(count, nuisance_dims))
            features = spec.apply(np.hstack([signal, nuisance]), rng)
            split.append(Dataset(features, labels, domain_id=client_id, num_classes=C))
        clients.append(tuple(split))
        logger.debug("client %d: %d train / %d test samples", client_id, n_train, n_test)
    return clients
