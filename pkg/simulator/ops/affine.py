from .op import Op
from simulator.errors import ConfigurationError


class Affine(Op):
    def __init__(self):
        """Fully connected layer: ``x @ W + b``."""
        super().__init__(name='Affine', arity=3)

    def validate(self, *shapes):
        super().validate(*shapes)
        x_shape, w_shape, b_shape = shapes
        if len(x_shape) != 2 or len(w_shape) != 2 or len(b_shape) != 1:
            raise ConfigurationError(
                f"Affine expects x[B, n], W[n, k], b[k]; got {x_shape}, {w_shape}, {b_shape}.")
        if x_shape[1] != w_shape[0]:
            raise ConfigurationError(f"Affine inner dimensions disagree: x has {x_shape[1]}, W has {w_shape[0]}.")
        if b_shape[0] != w_shape[1]:
            raise ConfigurationError(f"Affine bias width {b_shape[0]} does not match W output width {w_shape[1]}.")

    def forward(self, x, w, b):
        self.cache = (x, w)
        return x @ w + b

    def backward(self, grad):
        x, w = self.cache
        return grad @ w.T, x.T @ grad, grad.sum(axis=0)
