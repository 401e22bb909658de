from dataclasses import dataclass, field

import numpy as np

from simulator.errors import ConfigurationError


@dataclass
class OptimizerState:
    lr: float = 0.01
    momentum: float = 0.5
    velocity: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lr < 0:
            raise ConfigurationError(f"lr must be non-negative, got {self.lr}.")
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigurationError(f"momentum must lie in [0, 1), got {self.momentum}.")


def sgd_momentum_step(params, grads, opt):
    """
    One SGD-with-momentum update, in place.

    v <- momentum * v + g, then p <- p - lr * v. A missing gradient counts as zero.

    :param params: Mapping name -> Value.
    :param grads: Mapping name -> gradient array (same shape as the parameter).
    :param opt: OptimizerState holding the velocities.
    """
    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            grad = np.zeros_like(param.data)
        elif np.shape(grad) != param.shape:
            raise ConfigurationError(f"Gradient for {name} has shape {np.shape(grad)}, expected {param.shape}.")
        velocity = opt.velocity.get(name)
        if velocity is None:
            velocity = np.zeros_like(param.data)
        velocity = opt.momentum * velocity + grad
        opt.velocity[name] = velocity
        param.data -= opt.lr * velocity
    return params


class SGD:
    def __init__(self, params, lr=0.01, momentum=0.5):
        """
        Optimizer bound to a fixed set of named parameters.

        :param params: Mapping name -> Value.
        """
        self.params = dict(params)
        self.state = OptimizerState(lr=lr, momentum=momentum)

    def zero_grad(self):
        for param in self.params.values():
            param.zero_grad()

    def step(self):
        grads = {name: param.grad for name, param in self.params.items()}
        sgd_momentum_step(self.params, grads, self.state)
