from simulator import functional as F
from simulator.errors import ConfigurationError
from simulator.ops import BNState

from .layers import Linear


class Encoder:
    def __init__(self, widths, batch_norm=True, rng=None):
        """
        MLP encoder: affine -> BN -> ReLU per hidden layer, affine -> BN last.

        :param widths: [n, hidden..., k]; a single entry gives the identity encoder.
        :param batch_norm: Insert a BN layer after every affine map.
        :param rng: numpy Generator for weight initialisation.
        """
        if len(widths) < 1 or any(w < 1 for w in widths):
            raise ConfigurationError(f"Encoder widths must be positive, got {widths}.")
        self.widths = list(widths)
        self.layers = []
        for i, (fan_in, fan_out) in enumerate(zip(widths[:-1], widths[1:])):
            linear = Linear(fan_in, fan_out, rng, name=f"encoder.{i}")
            bn = BNState.create(fan_out, name=f"encoder.{i}.bn") if batch_norm else None
            self.layers.append((linear, bn))

    @property
    def input_dim(self):
        return self.widths[0]

    @property
    def feature_dim(self):
        return self.widths[-1]

    def __call__(self, x, mode, graph=None):
        h = x
        last = len(self.layers) - 1
        for i, (linear, bn) in enumerate(self.layers):
            h = linear(h, graph)
            if bn is not None:
                h = F.batchnorm(h, bn, mode, graph)
            if i < last:
                h = F.relu(h, graph)
        return h

    def parameters(self):
        for linear, bn in self.layers:
            yield from linear.parameters()
            if bn is not None:
                yield bn.gamma.name, bn.gamma
                yield bn.beta.name, bn.beta

    def bn_states(self):
        for i, (_, bn) in enumerate(self.layers):
            if bn is not None:
                yield f"encoder.{i}.bn", bn
