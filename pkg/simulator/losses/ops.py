import numpy as np
from scipy.special import log_softmax

from simulator.errors import ConfigurationError, DataError
from simulator.ops import Op

# Log-probabilities come from log_softmax, which stays finite for finite
# logits; p * log p is then exactly 0 wherever p underflows.


class CrossEntropy(Op):
    def __init__(self, labels):
        """
        Mean over the batch of -log softmax(logits)[label].

        :param labels: Integer class indices, one per row.
        """
        super().__init__(name='CrossEntropy', arity=1)
        self.labels = np.asarray(labels)

    def validate(self, *shapes):
        super().validate(*shapes)
        (logits_shape,) = shapes
        if len(logits_shape) != 2:
            raise ConfigurationError(f"CrossEntropy expects logits [B, C], got {logits_shape}.")
        batch, classes = logits_shape
        if self.labels.shape != (batch,):
            raise ConfigurationError(f"Expected {batch} labels, got shape {self.labels.shape}.")
        if batch and (self.labels.min() < 0 or self.labels.max() >= classes):
            raise DataError(f"Labels must lie in [0, {classes}), got range "
                            f"[{self.labels.min()}, {self.labels.max()}].")

    def forward(self, logits):
        log_p = log_softmax(logits, axis=1)
        self.cache = log_p
        rows = np.arange(len(self.labels))
        return np.asarray(-log_p[rows, self.labels].mean())

    def backward(self, grad):
        log_p = self.cache
        batch = log_p.shape[0]
        d_logits = np.exp(log_p)
        d_logits[np.arange(batch), self.labels] -= 1.0
        return (d_logits * (float(grad) / batch),)


class NegativeEntropy(Op):
    def __init__(self):
        """Mean over the batch of sum_c p_c ln p_c, p = softmax(logits)."""
        super().__init__(name='NegativeEntropy', arity=1)

    def forward(self, logits):
        log_p = log_softmax(logits, axis=1)
        p = np.exp(log_p)
        row = np.sum(p * log_p, axis=1)
        self.cache = (p, log_p, row)
        return np.asarray(row.mean())

    def backward(self, grad):
        p, log_p, row = self.cache
        batch = p.shape[0]
        return (p * (log_p - row[:, None]) * (float(grad) / batch),)


class SymmetricKL(Op):
    def __init__(self):
        """
        Mean over the batch of KL(p||q) + KL(q||p), with p and q the softmax
        of the two operands. Both operands receive gradients.
        """
        super().__init__(name='SymmetricKL', arity=2)

    def validate(self, *shapes):
        super().validate(*shapes)
        a_shape, b_shape = shapes
        self.require_same_shape(a_shape, b_shape)
        if len(a_shape) != 2:
            raise ConfigurationError(f"SymmetricKL expects logits [B, C], got {a_shape}.")

    def forward(self, logits_a, logits_b):
        log_p = log_softmax(logits_a, axis=1)
        log_q = log_softmax(logits_b, axis=1)
        p, q = np.exp(log_p), np.exp(log_q)
        diff_log = log_p - log_q
        self.cache = (p, q, diff_log)
        return np.asarray(np.sum((p - q) * diff_log, axis=1).mean())

    def backward(self, grad):
        p, q, u = self.cache
        scale = float(grad) / p.shape[0]
        grad_a = p * (u - np.sum(p * u, axis=1, keepdims=True)) + (p - q)
        grad_b = q * (np.sum(q * u, axis=1, keepdims=True) - u) + (q - p)
        return grad_a * scale, grad_b * scale
