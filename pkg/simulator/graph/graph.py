from dataclasses import dataclass

import numpy as np

from simulator.errors import TrainingError, UsageError
from simulator.value import Value


@dataclass
class Node:
    op: object
    inputs: tuple
    output: Value


class Graph:
    def __init__(self):
        """Tape of recorded operations, in the order they were applied."""
        self.nodes = []

    def apply(self, op, *inputs):
        """
        Run ``op`` on the input Values and record it.

        :param op: An Op instance, used once.
        :param inputs: Operand Values.
        :return: The output Value.
        """
        output = run_op(op, *inputs)
        if output.requires_grad:
            self.nodes.append(Node(op=op, inputs=inputs, output=output))
        return output

    def reset(self):
        """Forget every recorded node."""
        self.nodes = []

    def backward(self, loss):
        """
        Populate gradients of ``loss`` on every Value that requires them.

        Recorded outputs get their gradient assigned; leaf Values (parameters)
        accumulate into any gradient they already hold. Leaves the loss does
        not reach receive zeros.

        :param loss: Scalar Value produced by this graph.
        """
        if loss.size != 1:
            raise UsageError(f"backward needs a scalar loss, got shape {loss.shape}.")

        grads = {id(loss): np.ones_like(loss.data)}
        produced = {id(node.output) for node in self.nodes}
        leaves = {}

        for node in reversed(self.nodes):
            for value in node.inputs:
                if value.requires_grad and id(value) not in produced:
                    leaves[id(value)] = value
            grad = grads.get(id(node.output))
            node.output.grad = grad
            if grad is None:
                continue
            input_grads = node.op.backward(grad)
            for value, value_grad in zip(node.inputs, input_grads):
                if not value.requires_grad or value_grad is None:
                    continue
                key = id(value)
                if key in grads:
                    grads[key] = grads[key] + value_grad
                else:
                    grads[key] = np.array(value_grad, dtype=np.float64)

        for key, value in leaves.items():
            value.accumulate_grad(grads.get(key, np.zeros_like(value.data)))

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"Graph(nodes={[node.op.name for node in self.nodes]})"


def run_op(op, *inputs):
    """Run ``op`` without recording it; the output still carries requires_grad."""
    op.validate(*(value.shape for value in inputs))
    data = op.forward(*(value.data for value in inputs))
    if not np.all(np.isfinite(data)):
        raise TrainingError(f"{op.name} produced non-finite values.")
    return Value(data, requires_grad=any(value.requires_grad for value in inputs), copy=False)


def backward(loss, graph):
    """Functional form of :meth:`Graph.backward`."""
    graph.backward(loss)
