from .op import Op


class Hadamard(Op):
    def __init__(self):
        """Elementwise product of two equally shaped operands."""
        super().__init__(name='Hadamard', arity=2)

    def validate(self, *shapes):
        super().validate(*shapes)
        a_shape, b_shape = shapes
        self.require_same_shape(a_shape, b_shape)

    def forward(self, a, b):
        self.cache = (a, b)
        return a * b

    def backward(self, grad):
        a, b = self.cache
        return grad * b, grad * a
