import numpy as np

from .op import Op


class HardThreshold(Op):
    def __init__(self, eps=0.5):
        """
        Hard mask with a straight-through gradient.

        Forward emits 1.0 where the input is >= eps (ties select), else 0.0.
        Backward hands the upstream gradient to the input unchanged.

        :param eps: Selection threshold.
        """
        super().__init__(name='HardThreshold', arity=1)
        self.eps = eps

    def forward(self, ms):
        return (ms >= self.eps).astype(np.float64)

    def backward(self, grad):
        return (np.array(grad, dtype=np.float64),)
