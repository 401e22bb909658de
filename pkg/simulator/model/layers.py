import numpy as np

from simulator import functional as F
from simulator.value import Value


class Linear:
    def __init__(self, in_dim, out_dim, rng=None, name="linear"):
        """
        Fully connected layer with Glorot-uniform weights and zero bias.

        :param in_dim: Input width.
        :param out_dim: Output width.
        :param rng: numpy Generator; None gives all-zero weights.
        :param name: Parameter name prefix.
        """
        self.name = name
        if rng is None:
            weights = np.zeros((in_dim, out_dim))
        else:
            limit = np.sqrt(6.0 / (in_dim + out_dim))
            weights = rng.uniform(-limit, limit, size=(in_dim, out_dim))
        self.W = Value(weights, requires_grad=True, name=f"{name}.W")
        self.b = Value(np.zeros(out_dim), requires_grad=True, name=f"{name}.b")

    @property
    def in_dim(self):
        return self.W.shape[0]

    @property
    def out_dim(self):
        return self.W.shape[1]

    def __call__(self, x, graph=None):
        return F.affine(x, self.W, self.b, graph)

    def parameters(self):
        yield self.W.name, self.W
        yield self.b.name, self.b

    def __repr__(self):
        return f"Linear(name={self.name}, {self.in_dim}->{self.out_dim})"


# A classifier head is a single linear layer emitting logits.
ClassifierParams = Linear
