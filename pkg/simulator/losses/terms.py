from dataclasses import dataclass

import numpy as np

from simulator import functional as F
from simulator.errors import ConfigurationError
from simulator.functional import apply_op

from .ops import CrossEntropy, NegativeEntropy, SymmetricKL


@dataclass(frozen=True)
class LossWeights:
    lambda_lce: float = 1.0
    lambda_ent: float = 0.001
    lambda_dis: float = 1.0

    def __post_init__(self):
        for label in ('lambda_lce', 'lambda_ent', 'lambda_dis'):
            value = getattr(self, label)
            if not np.isfinite(value) or value < 0:
                raise ConfigurationError(f"{label} must be finite and non-negative, got {value}.")


@dataclass(frozen=True)
class LossBreakdown:
    gce: float
    lce: float
    ent: float
    dis: float
    total: float

    def as_dict(self):
        return {'loss_gce': self.gce, 'loss_lce': self.lce, 'loss_ent': self.ent,
                'loss_dis': self.dis, 'loss_total': self.total}


def cross_entropy(logits, labels, graph=None):
    return apply_op(CrossEntropy(labels), graph, logits)


def negative_entropy(logits_u, graph=None):
    return apply_op(NegativeEntropy(), graph, logits_u)


def cyclic_kl(logits_p, logits_g, graph=None):
    return apply_op(SymmetricKL(), graph, logits_p, logits_g)


def total_loss(out, labels, w, graph=None):
    """
    Weighted sum of the four loss terms.

    :param out: ForwardOutput carrying all three logit arrays.
    :param labels: Integer labels of the batch.
    :param w: LossWeights.
    :return: Tuple (total Value, LossBreakdown).
    """
    if out.logits_p is None or out.logits_u is None:
        raise ConfigurationError("total_loss needs a forward pass with the feature selection module.")
    gce = cross_entropy(out.logits_g, labels, graph)
    lce = cross_entropy(out.logits_p, labels, graph)
    ent = negative_entropy(out.logits_u, graph)
    dis = cyclic_kl(out.logits_p, out.logits_g, graph)
    total = F.weighted_sum([gce, lce, ent, dis], [1.0, w.lambda_lce, w.lambda_ent, w.lambda_dis], graph)
    breakdown = LossBreakdown(gce=gce.item(), lce=lce.item(), ent=ent.item(), dis=dis.item(),
                              total=total.item())
    return total, breakdown
