import numpy as np
import pytest

from simulator.errors import ConfigurationError
from simulator.model import ModelDims, ensemble_logits, init_model, role_of
from simulator.value import Value
from simulator.tests.helpers import assert_arrays_equal


def small_model(seed=0, **kwargs):
    dims = ModelDims(input_dim=6, feature_dim=8, num_classes=3, **kwargs)
    return init_model(dims, seed)


def test_same_seed_gives_identical_models():
    assert_arrays_equal(small_model(4).arrays(), small_model(4).arrays(), "init_model is not deterministic")
    a, b = small_model(4).arrays(), small_model(5).arrays()
    assert not np.array_equal(a['h_g.W'], b['h_g.W']), "Different seeds should give different weights."


def test_roles_cover_every_array():
    model = small_model(hidden_dims=(5,))
    assert model.roles() == {'encoder_weights', 'encoder_bn', 'classifier_g', 'pfsm'}
    assert role_of('encoder.1.bn.running_var') == 'encoder_bn'
    assert role_of('encoder.0.W') == 'encoder_weights'
    assert role_of('pfsm.gate.0.b') == 'pfsm'
    assert role_of('pfsm.h_u.W') == 'pfsm'

    pfsm = model.arrays(['pfsm'])
    assert pfsm and all(name.startswith('pfsm.') for name in pfsm)
    with pytest.raises(ConfigurationError):
        role_of('decoder.W')


def test_mask_algebra_over_many_forwards():
    model = small_model(hidden_dims=(5,))
    rng = np.random.default_rng(7)
    for _ in range(1000):
        x = Value(rng.normal(size=(4, 6)))
        out = model.forward(x, mode='train', rng=rng)
        assert np.all((out.mask_hard.data == 0.0) | (out.mask_hard.data == 1.0)), "Hard mask left {0, 1}."
        assert np.array_equal(out.z_p.data + out.z_u.data, out.z_g.data), "z_p + z_u must rebuild z_g."


def test_eval_forward_is_deterministic():
    model = small_model()
    x = np.random.default_rng(1).normal(size=(10, 6))
    first = model.forward(Value(x), mode='eval', rng=np.random.default_rng(0))
    second = model.forward(Value(x), mode='eval', rng=np.random.default_rng(99))

    assert np.array_equal(first.mask_soft.data, second.mask_soft.data), "Eval mode must not draw noise."
    assert np.array_equal(model.predict(x), model.predict(x))


def test_soft_mask_reweights_features():
    model = small_model()
    x = Value(np.random.default_rng(2).normal(size=(4, 6)))
    out = model.forward(x, mode='eval', soft_mask=True)
    assert np.allclose(out.z_p.data, out.z_g.data * out.mask_soft.data)
    assert np.allclose(out.z_u.data, out.z_g.data * (1.0 - out.mask_soft.data))


def test_predictions_are_distributions():
    model = small_model()
    x = np.random.default_rng(3).normal(size=(5, 6))
    for use_ensemble in (True, False):
        probs = model.predict(x, use_ensemble=use_ensemble)
        assert probs.shape == (5, 3)
        assert np.allclose(probs.sum(axis=1), 1.0)

    out = model.forward(Value(x), mode='eval')
    expected = ensemble_logits(out.logits_g, out.logits_p).data
    assert np.allclose(model.predict(x), expected)


def test_identity_encoder_passes_inputs_through():
    dims = ModelDims(input_dim=5, feature_dim=5, num_classes=2, identity_encoder=True)
    model = init_model(dims, seed=0)
    x = np.random.default_rng(4).normal(size=(3, 5))
    assert np.array_equal(model.features(x), x)


def test_dimension_errors():
    model = small_model()
    with pytest.raises(ConfigurationError):
        model.forward(Value(np.ones((2, 7))))
    with pytest.raises(ConfigurationError):
        ModelDims(input_dim=6, feature_dim=0, num_classes=3)
    with pytest.raises(ConfigurationError):
        model.load_arrays({'h_g.W': np.ones((2, 2))})
    with pytest.raises(ConfigurationError):
        model.load_arrays({'nothing.here': np.ones(1)})


def test_copy_and_load_arrays():
    model = small_model()
    twin = model.copy()
    twin.parameters()['h_g.b'].data += 1.0
    assert not np.array_equal(model.arrays()['h_g.b'], twin.arrays()['h_g.b']), "copy() must not share arrays."

    model.load_arrays(twin.arrays(['classifier_g', 'encoder_bn']))
    assert np.array_equal(model.arrays()['h_g.b'], twin.arrays()['h_g.b'])


if __name__ == "__main__":
    test_same_seed_gives_identical_models()
    test_mask_algebra_over_many_forwards()
    test_eval_forward_is_deterministic()
    test_identity_encoder_passes_inputs_through()
