import numpy as np

from simulator.errors import ConfigurationError


class Op:
    def __init__(self, name, arity):
        """
        Base class for differentiable operations.

        :param name: Name of the op (e.g., 'Affine', 'ReLU').
        :param arity: Number of Value inputs the op consumes.
        """
        self.name = name
        self.arity = arity
        self.cache = None  # Filled by forward, read by backward

    def forward(self, *inputs):
        """
        Compute the output array from the input arrays.

        :param inputs: numpy arrays, one per operand.
        :return: The output array.
        """
        raise NotImplementedError(f"{self.name} does not define forward.")

    def backward(self, grad):
        """
        Map the gradient of the output to gradients of every input.

        :param grad: Upstream gradient, same shape as the forward output.
        :return: Tuple with one array (or None) per input.
        """
        raise NotImplementedError(f"{self.name} does not define backward.")

    def validate(self, *shapes):
        """
        Validate operand shapes before the forward pass.

        :param shapes: Shapes of the operands in call order.
        :raises ConfigurationError: If the operand count or shapes are invalid.
        """
        if len(shapes) != self.arity:
            raise ConfigurationError(f"{self.name} expects {self.arity} operands, got {len(shapes)}.")

    def require_same_shape(self, a, b):
        if tuple(a) != tuple(b):
            raise ConfigurationError(f"{self.name} needs identical shapes, got {tuple(a)} and {tuple(b)}.")

    def __repr__(self):
        return f"Op(name={self.name}, arity={self.arity})"


def reduce_to_shape(grad, shape):
    """Sum a broadcast gradient back down to ``shape``."""
    grad = np.asarray(grad)
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad
