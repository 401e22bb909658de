from dataclasses import dataclass

import numpy as np

from .op import Op
from simulator.errors import ConfigurationError, TrainingError
from simulator.value import Value


@dataclass
class BNState:
    """Per-feature affine parameters and running statistics of one BN layer."""
    gamma: Value
    beta: Value
    running_mean: np.ndarray
    running_var: np.ndarray
    momentum: float = 0.1
    eps: float = 1e-5

    @classmethod
    def create(cls, width, name="bn", momentum=0.1, eps=1e-5):
        """
        Fresh state: gamma=1, beta=0, running mean 0 and running var 1.

        :param width: Number of features normalised.
        :param name: Prefix for the parameter names.
        """
        return cls(
            gamma=Value(np.ones(width), requires_grad=True, name=f"{name}.gamma"),
            beta=Value(np.zeros(width), requires_grad=True, name=f"{name}.beta"),
            running_mean=np.zeros(width),
            running_var=np.ones(width),
            momentum=momentum,
            eps=eps,
        )

    @property
    def width(self):
        return self.gamma.shape[0]

    def update_running(self, batch_mean, batch_var_unbiased):
        m = self.momentum
        self.running_mean = (1.0 - m) * self.running_mean + m * batch_mean
        self.running_var = (1.0 - m) * self.running_var + m * batch_var_unbiased


class BatchNorm(Op):
    def __init__(self, mode, eps=1e-5, running_mean=None, running_var=None):
        """
        Batch normalisation over the batch axis of a [B, k] input.

        :param mode: 'train' normalises with batch statistics, 'eval' with the running ones.
        :param eps: Variance floor added before the square root.
        :param running_mean: Required in eval mode.
        :param running_var: Required in eval mode.
        """
        super().__init__(name='BatchNorm', arity=3)
        if mode not in ('train', 'eval'):
            raise ConfigurationError(f"BatchNorm mode must be 'train' or 'eval', got {mode!r}.")
        self.mode = mode
        self.eps = eps
        self.running_mean = running_mean
        self.running_var = running_var
        self.batch_mean = None
        self.batch_var = None

    def validate(self, *shapes):
        super().validate(*shapes)
        x_shape, gamma_shape, beta_shape = shapes
        if len(x_shape) != 2:
            raise ConfigurationError(f"BatchNorm expects a [B, k] input, got {x_shape}.")
        if gamma_shape != (x_shape[1],) or beta_shape != (x_shape[1],):
            raise ConfigurationError(
                f"BatchNorm parameters {gamma_shape}/{beta_shape} do not match feature width {x_shape[1]}.")
        if self.mode == 'train' and x_shape[0] < 2:
            raise TrainingError(f"BatchNorm in train mode needs a batch of at least 2, got {x_shape[0]}.")

    def forward(self, x, gamma, beta):
        if self.mode == 'train':
            mean = x.mean(axis=0)
            var = x.var(axis=0)
            self.batch_mean, self.batch_var = mean, var
        else:
            mean, var = self.running_mean, self.running_var
        inv_std = 1.0 / np.sqrt(var + self.eps)
        x_hat = (x - mean) * inv_std
        self.cache = (x_hat, inv_std, gamma)
        return gamma * x_hat + beta

    def backward(self, grad):
        x_hat, inv_std, gamma = self.cache
        grad_gamma = np.sum(grad * x_hat, axis=0)
        grad_beta = np.sum(grad, axis=0)
        d_xhat = grad * gamma
        if self.mode == 'eval':
            return d_xhat * inv_std, grad_gamma, grad_beta
        batch = grad.shape[0]
        grad_x = (inv_std / batch) * (
            batch * d_xhat
            - np.sum(d_xhat, axis=0)
            - x_hat * np.sum(d_xhat * x_hat, axis=0)
        )
        return grad_x, grad_gamma, grad_beta
