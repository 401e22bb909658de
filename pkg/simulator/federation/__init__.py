from .partition import ALGORITHMS, Ablations, PartitionSpec, make_partition
from .server import ServerState, aggregate
from .client import ClientResult, ClientState, client_update
from .evaluation import accuracy_from_probs, evaluate
from .metrics import COLUMNS, MetricRow, MetricsLog
from .trainer import RoundConfig, client_rng, diagnostic_features, run_training

__all__ = ['ALGORITHMS', 'Ablations', 'PartitionSpec', 'make_partition', 'ServerState', 'aggregate',
           'ClientResult', 'ClientState', 'client_update', 'accuracy_from_probs', 'evaluate',
           'COLUMNS', 'MetricRow', 'MetricsLog', 'RoundConfig', 'client_rng', 'diagnostic_features',
           'run_training']
