import numpy as np
import pytest

from simulator import functional as F
from simulator.errors import TrainingError, UsageError
from simulator.graph import Graph, backward
from simulator.value import Value


def test_shared_leaf_accumulates_both_branches():
    # x feeds both operands, so d(sum x*x)/dx = 2x
    x = Value([1.0, -2.0, 3.0], requires_grad=True)
    graph = Graph()
    loss = F.sum_all(F.hadamard(x, x, graph), graph)
    backward(loss, graph)

    assert np.allclose(x.grad, 2 * x.data), "Shared leaf did not accumulate both branches."


def test_leaf_grads_add_up_across_backward_calls():
    x = Value([0.5, 1.5], requires_grad=True)
    for _ in range(2):
        graph = Graph()
        graph.backward(F.sum_all(x, graph))

    assert np.array_equal(x.grad, [2.0, 2.0]), "Second backward should add into the existing gradient."
    x.zero_grad()
    assert x.grad is None


def test_unreached_leaf_gets_zero_gradient():
    a = Value([1.0, -1.0], requires_grad=True)
    b = Value([2.0, 3.0], requires_grad=True)
    graph = Graph()
    F.relu(a, graph)  # recorded but not part of the loss
    graph.backward(F.sum_all(b, graph))

    assert np.array_equal(a.grad, np.zeros(2)), "A leaf outside the loss should receive zeros."
    assert np.array_equal(b.grad, np.ones(2))


def test_backward_rejects_non_scalar_loss():
    x = Value(np.ones((2, 2)), requires_grad=True)
    graph = Graph()
    y = F.scale(x, 2.0, graph)
    with pytest.raises(UsageError):
        graph.backward(y)


def test_constant_inputs_are_not_recorded():
    graph = Graph()
    F.relu(Value([1.0, -1.0]), graph)
    assert len(graph) == 0, "Ops on constants should not be taped."


def test_non_finite_output_raises():
    with pytest.raises(TrainingError):
        F.add_constant(Value([1.0]), np.inf)


def test_value_copies_input_and_is_float64():
    data = np.array([1, 2, 3])
    v = Value(data)
    data[0] = 99
    assert v.data.dtype == np.float64
    assert v.data[0] == 1.0, "Value should own a copy of its data."
    assert Value([[4.0]]).item() == 4.0
    with pytest.raises(ValueError):
        Value([1.0, 2.0]).item()


if __name__ == "__main__":
    test_shared_leaf_accumulates_both_branches()
    test_leaf_grads_add_up_across_backward_calls()
    test_unreached_leaf_gets_zero_gradient()
    test_constant_inputs_are_not_recorded()
