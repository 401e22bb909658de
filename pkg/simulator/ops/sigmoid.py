from scipy.special import expit

from .op import Op


class Sigmoid(Op):
    def __init__(self):
        """Elementwise logistic function, evaluated without overflow."""
        super().__init__(name='Sigmoid', arity=1)

    def forward(self, x):
        out = expit(x)
        self.cache = out
        return out

    def backward(self, grad):
        s = self.cache
        return (grad * s * (1.0 - s),)
