"""Differentiable array functions.

Every function takes an optional ``graph``. With a graph the call is
recorded for :func:`simulator.graph.backward`; without one it only computes
the forward value, which is how evaluation runs.
"""
from simulator import ops
from simulator.errors import ConfigurationError
from simulator.graph import run_op


def apply_op(op, graph, *inputs):
    """Run ``op``, recording it on ``graph`` when one is given."""
    if graph is None:
        return run_op(op, *inputs)
    return graph.apply(op, *inputs)


def affine(x, W, b, graph=None):
    return apply_op(ops.Affine(), graph, x, W, b)


def relu(x, graph=None):
    return apply_op(ops.ReLU(), graph, x)


def sigmoid(x, graph=None):
    return apply_op(ops.Sigmoid(), graph, x)


def softmax(x, graph=None):
    return apply_op(ops.Softmax(), graph, x)


def hadamard(a, b, graph=None):
    return apply_op(ops.Hadamard(), graph, a, b)


def add(a, b, graph=None):
    return apply_op(ops.Add(), graph, a, b)


def scale(x, factor, graph=None):
    return apply_op(ops.Scale(factor), graph, x)


def add_constant(x, constant, graph=None):
    return apply_op(ops.Shift(constant), graph, x)


def complement(x, graph=None):
    """``1 - x``; exact for 0/1 entries."""
    return add_constant(scale(x, -1.0, graph), 1.0, graph)


def sum_all(x, graph=None):
    return apply_op(ops.Sum(), graph, x)


def weighted_sum(values, weights, graph=None):
    return apply_op(ops.WeightedSum(weights), graph, *values)


def hard_threshold_ste(ms, eps, graph=None):
    """
    Binary mask ``ms >= eps`` with a pass-through gradient.

    :param ms: Soft mask with entries in [0, 1].
    :param eps: Selection threshold; a tie selects the feature.
    """
    return apply_op(ops.HardThreshold(eps), graph, ms)


def batchnorm(x, state, mode, graph=None):
    """
    Normalise ``x`` with ``state`` and, in train mode, update its running stats.

    :param x: Value of shape [B, k].
    :param state: BNState owning gamma/beta and the running statistics.
    :param mode: 'train' or 'eval'.
    """
    if mode not in ('train', 'eval'):
        raise ConfigurationError(f"mode must be 'train' or 'eval', got {mode!r}.")
    op = ops.BatchNorm(mode, eps=state.eps, running_mean=state.running_mean, running_var=state.running_var)
    out = apply_op(op, graph, x, state.gamma, state.beta)
    if mode == 'train':
        batch = x.shape[0]
        state.update_running(op.batch_mean, op.batch_var * batch / (batch - 1))
    return out
