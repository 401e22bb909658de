from .ops import CrossEntropy, NegativeEntropy, SymmetricKL
from .terms import LossBreakdown, LossWeights, cross_entropy, cyclic_kl, negative_entropy, total_loss

__all__ = ['CrossEntropy', 'NegativeEntropy', 'SymmetricKL', 'LossBreakdown', 'LossWeights',
           'cross_entropy', 'cyclic_kl', 'negative_entropy', 'total_loss']
