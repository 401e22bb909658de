import numpy as np

from .op import Op, reduce_to_shape


class Add(Op):
    def __init__(self):
        super().__init__(name='Add', arity=2)

    def validate(self, *shapes):
        super().validate(*shapes)
        a_shape, b_shape = shapes
        self.require_same_shape(a_shape, b_shape)

    def forward(self, a, b):
        return a + b

    def backward(self, grad):
        return grad, grad


class Scale(Op):
    def __init__(self, factor):
        """Multiply by a constant scalar."""
        super().__init__(name='Scale', arity=1)
        self.factor = float(factor)

    def forward(self, x):
        return x * self.factor

    def backward(self, grad):
        return (grad * self.factor,)


class Shift(Op):
    def __init__(self, constant):
        """
        Add a constant (not differentiated) to the operand.

        :param constant: Scalar or array broadcastable to the operand.
        """
        super().__init__(name='Shift', arity=1)
        self.constant = np.asarray(constant, dtype=np.float64)

    def validate(self, *shapes):
        super().validate(*shapes)
        (x_shape,) = shapes
        np.broadcast_shapes(x_shape, self.constant.shape)

    def forward(self, x):
        self.cache = x.shape
        return x + self.constant

    def backward(self, grad):
        return (reduce_to_shape(grad, self.cache),)


class Sum(Op):
    def __init__(self):
        """Sum of all entries, producing a scalar."""
        super().__init__(name='Sum', arity=1)

    def forward(self, x):
        self.cache = x.shape
        return np.asarray(x.sum())

    def backward(self, grad):
        return (np.full(self.cache, float(grad)),)


class WeightedSum(Op):
    def __init__(self, weights):
        """
        Weighted sum of scalar operands, accumulated left to right.

        :param weights: One constant weight per operand.
        """
        super().__init__(name='WeightedSum', arity=len(weights))
        self.weights = [float(w) for w in weights]

    def forward(self, *scalars):
        total = 0.0
        for w, s in zip(self.weights, scalars):
            total = total + w * float(s)
        return np.asarray(total)

    def backward(self, grad):
        return tuple(np.asarray(w * float(grad)) for w in self.weights)
