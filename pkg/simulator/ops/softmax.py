import numpy as np
from scipy.special import softmax

from .op import Op
from simulator.errors import ConfigurationError


class Softmax(Op):
    def __init__(self):
        """
        Row-wise softmax over the last axis.

        scipy subtracts the row maximum before exponentiating.
        """
        super().__init__(name='Softmax', arity=1)

    def validate(self, *shapes):
        super().validate(*shapes)
        (x_shape,) = shapes
        if len(x_shape) == 0 or x_shape[-1] < 1:
            raise ConfigurationError(f"Softmax needs at least one class column, got shape {x_shape}.")

    def forward(self, x):
        out = softmax(x, axis=-1)
        self.cache = out
        return out

    def backward(self, grad):
        s = self.cache
        return (s * (grad - np.sum(grad * s, axis=-1, keepdims=True)),)
