from .layers import Linear, ClassifierParams
from .encoder import Encoder
from .pfsm import GateNet, PFSM, gumbel_sigmoid, pfsm_forward
from .client_model import (ROLES, ClientModel, ForwardOutput, ModelDims, classify, encode,
                           ensemble_logits, init_model, role_of)
from .checkpoint import read_checkpoint, write_checkpoint

__all__ = ['Linear', 'ClassifierParams', 'Encoder', 'GateNet', 'PFSM', 'gumbel_sigmoid',
           'pfsm_forward', 'ROLES', 'ClientModel', 'ForwardOutput', 'ModelDims', 'classify',
           'encode', 'ensemble_logits', 'init_model', 'role_of', 'read_checkpoint',
           'write_checkpoint']
