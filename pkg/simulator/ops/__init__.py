from .op import Op
from .affine import Affine
from .relu import ReLU
from .sigmoid import Sigmoid
from .softmax import Softmax
from .hadamard import Hadamard
from .threshold import HardThreshold
from .batchnorm import BatchNorm, BNState
from .arithmetic import Add, Scale, Shift, Sum, WeightedSum

__all__ = ['Op', 'Affine', 'ReLU', 'Sigmoid', 'Softmax', 'Hadamard', 'HardThreshold',
           'BatchNorm', 'BNState', 'Add', 'Scale', 'Shift', 'Sum', 'WeightedSum']
