import copy

import numpy as np

from simulator.cli.config import from_dict
from simulator.value import Value

SMALL = {
    'seed': 0,
    'algorithm': 'fedpick',
    'dataset': {'n_clients': 2, 'n': 6, 'C': 3, 'samples_per_client': 40, 'nuisance_dims': 2},
    'model': {'hidden_dims': [], 'feature_dim': 8},
    'hyper': {'B': 8, 'E': 1, 'T': 2, 'lr': 0.05},
    'probe': {'K': 3},
}


def small_raw(**sections):
    """Nested config mapping of a tiny federation; keyword sections are merged in."""
    raw = copy.deepcopy(SMALL)
    for key, value in sections.items():
        if isinstance(value, dict):
            raw.setdefault(key, {}).update(value)
        else:
            raw[key] = value
    return raw


def small_config(**sections):
    return from_dict(small_raw(**sections))


def random_value(rng, shape, requires_grad=True):
    return Value(rng.normal(size=shape), requires_grad=requires_grad)


def parameter_arrays(model):
    return {name: value.data.copy() for name, value in model.parameters().items()}


def assert_arrays_equal(a, b, message):
    assert a.keys() == b.keys(), f"{message}: names differ"
    for name in a:
        assert np.array_equal(a[name], b[name]), f"{message}: {name} differs"
