import numpy as np

from simulator import functional as F
from simulator.gradcheck import check_gradients
from simulator.graph import Graph
from simulator.losses import LossWeights, total_loss
from simulator.model import ModelDims, init_model
from simulator.value import Value


def test_total_loss_gradients_through_the_whole_model(monkeypatch):
    dims = ModelDims(input_dim=6, feature_dim=8, num_classes=3, hidden_dims=(7,))
    model = init_model(dims, seed=3)
    x = Value(np.random.default_rng(0).normal(size=(4, 6)))
    labels = np.array([0, 1, 2, 1])
    weights = LossWeights(lambda_lce=1.0, lambda_ent=0.001, lambda_dis=1.0)
    params = model.parameters()

    def loss(graph=None):
        # a fresh generator per call replays the same Gumbel noise
        out = model.forward(x, mode='train', rng=np.random.default_rng(11), graph=graph)
        return total_loss(out, labels, weights, graph)[0]

    graph = Graph()
    graph.backward(loss(graph))
    analytic = {name: value.grad.copy() for name, value in params.items()}

    # Finite differences see the mask through its straight-through surrogate:
    # the binary value at the reference point plus the drift of the soft mask.
    reference = model.forward(x, mode='train', rng=np.random.default_rng(11))
    hard0, soft0 = reference.mask_hard.data.copy(), reference.mask_soft.data.copy()

    def frozen_threshold(ms, eps, graph=None):
        return F.add_constant(ms, hard0 - soft0, graph)

    monkeypatch.setattr(F, 'hard_threshold_ste', frozen_threshold)
    errors = check_gradients(lambda: loss().item(), params, analytic, h=1e-5)

    worst = max(errors, key=errors.get)
    assert errors[worst] < 1e-4, f"Gradient of {worst} is off by {errors[worst]:.2e}."
    assert any(np.any(analytic[name] != 0) for name in params if name.startswith('pfsm.gate')), \
        "The gate network should receive gradient through the mask."
