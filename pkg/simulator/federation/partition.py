from dataclasses import dataclass

from simulator.errors import ConfigurationError
from simulator.model import ROLES

ALGORITHMS = ('fedpick', 'fedavg', 'fedbn', 'fedper', 'singleset')


@dataclass(frozen=True)
class Ablations:
    soft_mask: bool = False
    share_bn: bool = False
    share_pfsm: bool = False
    no_ensemble: bool = False
    no_lce: bool = False
    no_ent: bool = False
    no_dis: bool = False

    def selection_flags(self):
        """Flags that only make sense with the feature selection module."""
        return [name for name in ('soft_mask', 'share_pfsm', 'no_ensemble', 'no_lce', 'no_ent', 'no_dis')
                if getattr(self, name)]


@dataclass(frozen=True)
class PartitionSpec:
    shared: frozenset
    local: frozenset

    def __post_init__(self):
        overlap = self.shared & self.local
        if overlap:
            raise ConfigurationError(f"Roles {sorted(overlap)} cannot be both shared and local.")
        unknown = (self.shared | self.local) - set(ROLES)
        if unknown:
            raise ConfigurationError(f"Unknown parameter roles {sorted(unknown)}.")

    @property
    def roles(self):
        return self.shared | self.local

    @property
    def aggregates(self):
        return bool(self.shared)


_BASE = {
    'fedpick': ({'encoder_weights', 'classifier_g'}, {'encoder_bn', 'pfsm'}),
    'fedavg': ({'encoder_weights', 'encoder_bn', 'classifier_g'}, set()),
    'fedbn': ({'encoder_weights', 'classifier_g'}, {'encoder_bn'}),
    'fedper': ({'encoder_weights', 'encoder_bn'}, {'classifier_g'}),
    'singleset': (set(), {'encoder_weights', 'encoder_bn', 'classifier_g'}),
}


def make_partition(algorithm, ablations=None):
    """
    Shared/local split of the parameter roles for an algorithm.

    :param algorithm: One of ALGORITHMS.
    :param ablations: Optional Ablations; share_bn and share_pfsm move roles to shared.
    :raises ConfigurationError: On an unknown tag or a selection ablation without PFSM.
    """
    if algorithm not in _BASE:
        raise ConfigurationError(f"Unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}.")
    ablations = ablations or Ablations()
    if algorithm != 'fedpick' and ablations.selection_flags():
        raise ConfigurationError(
            f"Ablations {ablations.selection_flags()} need algorithm 'fedpick', got {algorithm!r}.")
    shared, local = (set(s) for s in _BASE[algorithm])
    moved = set()
    if ablations.share_bn:
        moved.add('encoder_bn')
    if ablations.share_pfsm:
        moved.add('pfsm')
    shared |= moved
    local -= moved
    return PartitionSpec(shared=frozenset(shared), local=frozenset(local))
