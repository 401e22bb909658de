import numpy as np

from simulator import functional as F
from simulator.errors import ConfigurationError

from .layers import Linear

_GUMBEL_EPS = 1e-20


class GateNet:
    def __init__(self, d, rng=None, name="pfsm.gate"):
        """
        Gate network Linear(d, d/2) -> ReLU -> Linear(d/2, d): one logit per feature.

        :param d: Feature width.
        """
        hidden = max(d // 2, 1)
        self.fc1 = Linear(d, hidden, rng, name=f"{name}.0")
        self.fc2 = Linear(hidden, d, rng, name=f"{name}.1")

    @property
    def width(self):
        return self.fc1.in_dim

    def __call__(self, z, graph=None):
        return self.fc2(F.relu(self.fc1(z, graph), graph), graph)

    def parameters(self):
        yield from self.fc1.parameters()
        yield from self.fc2.parameters()


class PFSM:
    def __init__(self, d, num_classes, tau=1.0, eps_mask=0.5, rng=None):
        """
        Personalized feature selection module: gate net plus the classifiers
        for the selected and the discarded features.

        :param d: Feature width.
        :param num_classes: Number of classes C.
        :param tau: Gumbel-Sigmoid temperature, > 0.
        :param eps_mask: Hard-mask threshold in (0, 1).
        """
        if tau <= 0:
            raise ConfigurationError(f"tau must be positive, got {tau}.")
        if not 0.0 < eps_mask < 1.0:
            raise ConfigurationError(f"eps_mask must lie in (0, 1), got {eps_mask}.")
        self.tau = tau
        self.eps_mask = eps_mask
        self.gate = GateNet(d, rng)
        self.h_p = Linear(d, num_classes, rng, name="pfsm.h_p")
        self.h_u = Linear(d, num_classes, rng, name="pfsm.h_u")

    def parameters(self):
        yield from self.gate.parameters()
        yield from self.h_p.parameters()
        yield from self.h_u.parameters()


def sample_gumbel(shape, rng):
    u = rng.random(shape)
    return -np.log(-np.log(u + _GUMBEL_EPS) + _GUMBEL_EPS)


def gumbel_sigmoid(z_l, tau, mode, rng, graph=None):
    """
    Soft mask sigma((z_l + G' - G'') / tau).

    In eval mode the noise is switched off, leaving sigma(z_l / tau).

    :param z_l: Gate logits.
    :param tau: Temperature, > 0.
    :param mode: 'train' or 'eval'.
    :param rng: numpy Generator; two fresh noise draws per element per call.
    """
    if tau <= 0:
        raise ConfigurationError(f"tau must be positive, got {tau}.")
    if mode == 'train':
        noise = sample_gumbel(z_l.shape, rng) - sample_gumbel(z_l.shape, rng)
        z_l = F.add_constant(z_l, noise, graph)
    elif mode != 'eval':
        raise ConfigurationError(f"mode must be 'train' or 'eval', got {mode!r}.")
    return F.sigmoid(F.scale(z_l, 1.0 / tau, graph), graph)


def pfsm_forward(pfsm, z_g, mode, rng, graph=None, soft_mask=False):
    """
    Split the global features into task-relevant and task-irrelevant parts.

    :param pfsm: PFSM parameters.
    :param z_g: Global features [B, d].
    :param soft_mask: Re-weight with the soft mask instead of the hard one.
    :return: Tuple (z_p, z_u, mask_soft, mask_hard).
    """
    if z_g.shape[-1] != pfsm.gate.width:
        raise ConfigurationError(f"PFSM expects feature width {pfsm.gate.width}, got {z_g.shape[-1]}.")
    z_l = pfsm.gate(z_g, graph)
    mask_soft = gumbel_sigmoid(z_l, pfsm.tau, mode, rng, graph)
    if soft_mask:
        mask_hard = F.hard_threshold_ste(mask_soft, pfsm.eps_mask)
        mask = mask_soft
    else:
        mask_hard = F.hard_threshold_ste(mask_soft, pfsm.eps_mask, graph)
        mask = mask_hard
    z_p = F.hadamard(z_g, mask, graph)
    z_u = F.hadamard(z_g, F.complement(mask, graph), graph)
    return z_p, z_u, mask_soft, mask_hard
