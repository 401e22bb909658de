import numpy as np
import pytest

from simulator.errors import ConfigurationError, DataError
from simulator.graph import Graph
from simulator.losses import LossWeights, cross_entropy, cyclic_kl, negative_entropy, total_loss
from simulator.model import ModelDims, init_model
from simulator.optim import SGD
from simulator.value import Value
from simulator.tests.test_ops import assert_gradients_match


def test_cross_entropy_of_uniform_logits():
    for C in (2, 3, 10):
        loss = cross_entropy(Value(np.zeros((4, C))), np.arange(4) % C)
        assert abs(loss.item() - np.log(C)) < 1e-9, f"Uniform logits should cost ln {C}."


def test_negative_entropy_minimum_is_minus_log_c():
    C = 4
    logits = Value(np.random.default_rng(0).normal(size=(1, C)), requires_grad=True)
    opt = SGD({'logits': logits}, lr=1.0, momentum=0.0)
    for _ in range(500):
        opt.zero_grad()
        graph = Graph()
        graph.backward(negative_entropy(logits, graph))
        opt.step()

    assert abs(negative_entropy(logits).item() + np.log(C)) < 1e-6


def test_cyclic_kl_identities():
    rng = np.random.default_rng(1)
    a = Value(rng.normal(size=(5, 4)))
    b = Value(rng.normal(size=(5, 4)))

    assert abs(cyclic_kl(a, a).item()) < 1e-12, "Divergence of a distribution with itself must vanish."
    assert abs(cyclic_kl(a, b).item() - cyclic_kl(b, a).item()) < 1e-12, "Cyclic KL must be symmetric."
    assert cyclic_kl(a, b).item() > 0


def test_loss_gradients():
    rng = np.random.default_rng(2)
    a = Value(rng.normal(size=(4, 3)), requires_grad=True)
    b = Value(rng.normal(size=(4, 3)), requires_grad=True)
    labels = np.array([0, 2, 1, 2])

    assert_gradients_match(lambda g: cross_entropy(a, labels, g), {'a': a})
    assert_gradients_match(lambda g: negative_entropy(a, g), {'a': a})
    assert_gradients_match(lambda g: cyclic_kl(a, b, g), {'a': a, 'b': b})


def test_extreme_logits_stay_finite():
    logits = Value([[1000.0, -1000.0, 0.0], [-800.0, 900.0, 50.0]])
    labels = np.array([1, 0])
    for loss in (cross_entropy(logits, labels), negative_entropy(logits),
                 cyclic_kl(logits, Value(-logits.data))):
        assert np.isfinite(loss.item())


def test_label_out_of_range():
    with pytest.raises(DataError):
        cross_entropy(Value(np.zeros((2, 3))), np.array([0, 3]))


def test_total_loss_combines_terms():
    dims = ModelDims(input_dim=6, feature_dim=8, num_classes=3)
    model = init_model(dims, seed=1)
    x = Value(np.random.default_rng(3).normal(size=(4, 6)))
    out = model.forward(x, mode='train', rng=np.random.default_rng(0))
    w = LossWeights(lambda_lce=10.0, lambda_ent=0.001, lambda_dis=10.0)

    total, parts = total_loss(out, np.array([0, 1, 2, 0]), w)

    expected = parts.gce + 10.0 * parts.lce + 0.001 * parts.ent + 10.0 * parts.dis
    assert np.isclose(total.item(), expected)
    assert parts.as_dict()['loss_total'] == total.item()
    with pytest.raises(ConfigurationError):
        LossWeights(lambda_ent=-1.0)


if __name__ == "__main__":
    test_cross_entropy_of_uniform_logits()
    test_negative_entropy_minimum_is_minus_log_c()
    test_cyclic_kl_identities()
    test_loss_gradients()
