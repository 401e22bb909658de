import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from simulator.analysis import mask_selection_ratio, sparsity_ratio
from simulator.errors import ConfigurationError, TrainingError

from .client import client_update
from .evaluation import evaluate
from .metrics import MetricsLog
from .partition import Ablations, make_partition
from .server import ServerState, aggregate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoundConfig:
    T: int = 50
    E: int = 1
    B: int = 64
    algorithm: str = 'fedpick'
    ablations: Ablations = field(default_factory=Ablations)

    def __post_init__(self):
        for label in ('T', 'E', 'B'):
            if int(getattr(self, label)) < 1:
                raise ConfigurationError(f"{label} must be at least 1, got {getattr(self, label)}.")
        make_partition(self.algorithm, self.ablations)

    def partition(self):
        return make_partition(self.algorithm, self.ablations)

    def effective_weights(self, weights):
        """Loss weights with the ablated auxiliary terms set to zero."""
        zeroed = {}
        if self.ablations.no_lce:
            zeroed['lambda_lce'] = 0.0
        if self.ablations.no_ent:
            zeroed['lambda_ent'] = 0.0
        if self.ablations.no_dis:
            zeroed['lambda_dis'] = 0.0
        return replace(weights, **zeroed) if zeroed else weights


def client_rng(seed, client_id, round):
    """Stream owned by one client in one round; independent of scheduling."""
    return np.random.default_rng([seed, client_id, round])


def diagnostic_features(client):
    """
    Rectified global features of the client's test split.

    The encoder output is signed, so sparsity is measured on relu(z_g),
    where inactive dimensions are exact zeros.
    """
    return np.maximum(client.model.features(client.test_data.features), 0.0)


def run_training(clients, cfg, seed, workers=1):
    """
    Federated training loop.

    Every round runs all client updates (concurrently when ``workers`` > 1),
    aggregates the shared roles weighted by sample count, broadcasts them
    back and evaluates each client on its test split.

    :param clients: List of ClientState, all built from one initial model.
    :param cfg: RoundConfig.
    :param seed: Master seed for the per-client per-round streams.
    :param workers: Thread pool size.
    :return: MetricsLog.
    """
    if not clients:
        raise ConfigurationError("run_training needs at least one client.")
    if workers < 1:
        raise ConfigurationError(f"workers must be at least 1, got {workers}.")
    dims = {(c.model.dims.input_dim, c.model.dims.num_classes) for c in clients}
    if len(dims) > 1:
        raise ConfigurationError(f"Clients disagree on (input_dim, num_classes): {sorted(dims)}.")

    partition = cfg.partition()
    logger.debug("algorithm %s: shared %s, local %s", cfg.algorithm,
                 sorted(partition.shared), sorted(partition.local))
    server = ServerState(shared_params={}, client_sizes=[c.num_samples for c in clients])
    log = MetricsLog()

    def update(client, round):
        try:
            return client_update(client, server.shared_params, cfg, client_rng(seed, client.id, round))
        except TrainingError as exc:
            raise TrainingError(f"round {round} client {client.id}: {exc}") from exc

    with ThreadPoolExecutor(max_workers=workers) as pool:
        for t in range(1, cfg.T + 1):
            results = list(pool.map(lambda c: update(c, t), clients))
            for client, result in zip(clients, results):
                log.extend(t, client.id, 'train', result.last_losses())

            if partition.aggregates:
                pre = [sparsity_ratio(diagnostic_features(c)) for c in clients]
                server.shared_params = aggregate(server, [r.upload for r in results])
                for client in clients:
                    client.model.load_arrays(server.shared_params)
                for client, value in zip(clients, pre):
                    log.append(t, client.id, 'test', 'sparsity_pre_agg', value)
                    log.append(t, client.id, 'test', 'sparsity_post_agg', sparsity_ratio(diagnostic_features(client)))
            else:
                for client in clients:
                    log.append(t, client.id, 'test', 'sparsity', sparsity_ratio(diagnostic_features(client)))
            server.round = t

            accuracies = []
            for client in clients:
                metrics = evaluate(client, cfg)
                log.extend(t, client.id, 'test', metrics)
                if client.model.pfsm is not None:
                    log.append(t, client.id, 'test', 'selection_ratio',
                               mask_selection_ratio(client.model, client.test_data))
                accuracies.append(metrics['accuracy'])
            logger.info("round %d/%d: mean test accuracy %.4f", t, cfg.T, float(np.mean(accuracies)))
    return log
