import numpy as np


class Value:
    def __init__(self, data, requires_grad=False, name=None, copy=True):
        """
        Dense float64 array taking part in reverse-mode differentiation.

        :param data: Array-like contents.
        :param requires_grad: Whether backward should populate ``grad``.
        :param name: Optional label used in error messages and checkpoints.
        :param copy: Copy ``data``; ops pass False for arrays they just computed.
        """
        if copy:
            self.data = np.array(data, dtype=np.float64)
        else:
            self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self.name = name

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def zero_grad(self):
        """Drop any accumulated gradient."""
        self.grad = None

    def accumulate_grad(self, grad):
        """
        Add ``grad`` into the stored gradient.

        :param grad: Array broadcastable to ``self.shape``.
        """
        grad = np.broadcast_to(grad, self.shape)
        if self.grad is None:
            self.grad = np.array(grad, dtype=np.float64)
        else:
            self.grad = self.grad + grad

    def item(self):
        if self.data.size != 1:
            raise ValueError(f"item() needs a single-element Value, got shape {self.shape}.")
        return float(self.data.reshape(()))

    def numpy(self):
        """Copy of the underlying array."""
        return self.data.copy()

    def __len__(self):
        return len(self.data)

    def __repr__(self):
        label = f", name={self.name}" if self.name else ""
        return f"Value(shape={self.shape}, requires_grad={self.requires_grad}{label})"
