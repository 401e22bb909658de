import copy
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from simulator import functional as F
from simulator.errors import ConfigurationError
from simulator.value import Value

from .encoder import Encoder
from .layers import Linear
from .pfsm import PFSM, pfsm_forward

ROLES = ('encoder_weights', 'encoder_bn', 'classifier_g', 'pfsm')

_BN_BUFFERS = ('running_mean', 'running_var')


def role_of(name):
    """Parameter role of a qualified array name."""
    if name.startswith('pfsm.'):
        return 'pfsm'
    if name.startswith('h_g.'):
        return 'classifier_g'
    if name.startswith('encoder.'):
        return 'encoder_bn' if '.bn.' in name else 'encoder_weights'
    raise ConfigurationError(f"Array name {name!r} has no parameter role.")


@dataclass(frozen=True)
class ModelDims:
    input_dim: int
    feature_dim: int
    num_classes: int
    hidden_dims: tuple = ()
    batch_norm: bool = True
    identity_encoder: bool = False

    def __post_init__(self):
        for label, width in (('input_dim', self.input_dim), ('feature_dim', self.feature_dim),
                             ('num_classes', self.num_classes)):
            if int(width) < 1:
                raise ConfigurationError(f"{label} must be at least 1, got {width}.")
        if any(int(w) < 1 for w in self.hidden_dims):
            raise ConfigurationError(f"hidden_dims must be positive, got {list(self.hidden_dims)}.")
        if self.identity_encoder and (self.hidden_dims or self.feature_dim != self.input_dim):
            raise ConfigurationError("An identity encoder needs feature_dim == input_dim and no hidden layers.")

    @property
    def widths(self):
        if self.identity_encoder:
            return [self.input_dim]
        return [self.input_dim, *self.hidden_dims, self.feature_dim]


@dataclass
class ForwardOutput:
    z_g: Value
    logits_g: Value
    z_p: Optional[Value] = None
    z_u: Optional[Value] = None
    mask_soft: Optional[Value] = None
    mask_hard: Optional[Value] = None
    logits_p: Optional[Value] = None
    logits_u: Optional[Value] = None


@dataclass
class ClientModel:
    dims: ModelDims
    encoder: Encoder
    h_g: Linear
    pfsm: Optional[PFSM] = None
    rng: np.random.Generator = field(default_factory=np.random.default_rng)

    def __post_init__(self):
        k = self.encoder.feature_dim
        if self.h_g.in_dim != k:
            raise ConfigurationError(f"Global classifier expects width {self.h_g.in_dim}, encoder emits {k}.")
        if self.pfsm is not None and self.pfsm.gate.width != k:
            raise ConfigurationError(f"Gate net expects width {self.pfsm.gate.width}, encoder emits {k}.")

    def forward(self, x, mode='train', rng=None, graph=None, soft_mask=False):
        """
        Encode, select features and classify one batch.

        :param x: Value [B, n].
        :param mode: 'train' (batch BN statistics, Gumbel noise on) or 'eval'.
        :param rng: Generator for the Gumbel noise; defaults to the model's own stream.
        :param graph: Graph to record on; None for a forward-only pass.
        :param soft_mask: Use the soft mask to split the features.
        """
        z_g = encode(self, x, mode, graph)
        out = ForwardOutput(z_g=z_g, logits_g=classify(self.h_g, z_g, graph))
        if self.pfsm is None:
            return out
        z_p, z_u, mask_soft, mask_hard = pfsm_forward(
            self.pfsm, z_g, mode, self.rng if rng is None else rng, graph, soft_mask)
        out.z_p, out.z_u = z_p, z_u
        out.mask_soft, out.mask_hard = mask_soft, mask_hard
        out.logits_p = classify(self.pfsm.h_p, z_p, graph)
        out.logits_u = classify(self.pfsm.h_u, z_u, graph)
        return out

    def predict(self, x, use_ensemble=True):
        """Class probabilities in eval mode (ensemble when the PFSM is present)."""
        out = self.forward(as_value(x), mode='eval')
        if self.pfsm is not None and use_ensemble:
            return ensemble_logits(out.logits_g, out.logits_p).data
        return F.softmax(out.logits_g).data

    def features(self, x):
        """Global features of ``x`` in eval mode, as an array."""
        return encode(self, as_value(x), 'eval').data

    def parameters(self):
        """Trainable parameters as an ordered name -> Value mapping."""
        params = dict(self.encoder.parameters())
        params.update(self.h_g.parameters())
        if self.pfsm is not None:
            params.update(self.pfsm.parameters())
        return params

    def roles(self):
        """Roles with at least one array in this model."""
        return {role_of(name) for name in self.arrays()}

    def arrays(self, roles=None):
        """
        Copies of every parameter and BN buffer, optionally restricted to roles.

        :param roles: Iterable of role names, or None for everything.
        :return: Ordered mapping name -> array.
        """
        out = {name: value.data.copy() for name, value in self.parameters().items()}
        for prefix, bn in self.encoder.bn_states():
            for buffer in _BN_BUFFERS:
                out[f"{prefix}.{buffer}"] = getattr(bn, buffer).copy()
        if roles is not None:
            roles = set(roles)
            out = {name: array for name, array in out.items() if role_of(name) in roles}
        return dict(sorted(out.items()))

    def load_arrays(self, arrays):
        """
        Overwrite the named arrays in place; names not given are left alone.

        :raises ConfigurationError: On unknown names or shape mismatches.
        """
        params = self.parameters()
        buffers = {}
        for prefix, bn in self.encoder.bn_states():
            for buffer in _BN_BUFFERS:
                buffers[f"{prefix}.{buffer}"] = (bn, buffer)
        for name, array in arrays.items():
            array = np.asarray(array, dtype=np.float64)
            if name in params:
                target = params[name]
                if target.shape != array.shape:
                    raise ConfigurationError(f"{name}: expected shape {target.shape}, got {array.shape}.")
                target.data[...] = array
            elif name in buffers:
                bn, buffer = buffers[name]
                if getattr(bn, buffer).shape != array.shape:
                    raise ConfigurationError(
                        f"{name}: expected shape {getattr(bn, buffer).shape}, got {array.shape}.")
                setattr(bn, buffer, array.copy())
            else:
                raise ConfigurationError(f"Model has no array named {name!r}.")

    def copy(self):
        return copy.deepcopy(self)


def as_value(x):
    return x if isinstance(x, Value) else Value(x)


def encode(model, x, mode, graph=None):
    """
    Global features z_g of a batch.

    :raises ConfigurationError: If the input width differs from the encoder's.
    """
    if len(x.shape) != 2 or x.shape[1] != model.encoder.input_dim:
        raise ConfigurationError(f"Encoder expects inputs [B, {model.encoder.input_dim}], got {x.shape}.")
    return model.encoder(x, mode, graph)


def classify(classifier, z, graph=None):
    """Raw logits of a classifier head."""
    return classifier(z, graph)


def ensemble_logits(logits_g, logits_p, graph=None):
    """Probabilities softmax(logits_g + logits_p)."""
    return F.softmax(F.add(logits_g, logits_p, graph), graph)


def init_model(dims, seed, with_pfsm=True, tau=1.0, eps_mask=0.5):
    """
    Build a model with deterministic Glorot-uniform weights.

    :param dims: ModelDims.
    :param seed: Integer seed; equal seeds give bit-identical models.
    :param with_pfsm: Attach the feature selection module.
    """
    rng = np.random.default_rng(seed)
    encoder = Encoder(dims.widths, batch_norm=dims.batch_norm, rng=rng)
    h_g = Linear(encoder.feature_dim, dims.num_classes, rng, name="h_g")
    pfsm = PFSM(encoder.feature_dim, dims.num_classes, tau, eps_mask, rng) if with_pfsm else None
    return ClientModel(dims=dims, encoder=encoder, h_g=h_g, pfsm=pfsm, rng=rng)
