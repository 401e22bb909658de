import logging
from dataclasses import dataclass, field

import numpy as np

from simulator.datasets import batches
from simulator.errors import ConfigurationError, TrainingError
from simulator.graph import Graph
from simulator.losses import LossWeights, cross_entropy, total_loss
from simulator.optim import SGD
from simulator.value import Value

logger = logging.getLogger(__name__)


@dataclass
class ClientState:
    id: int
    model: object
    train_data: object
    test_data: object
    optimizer: SGD = None
    weights: LossWeights = field(default_factory=LossWeights)

    def __post_init__(self):
        num_classes = self.model.dims.num_classes
        for split, data in (('train', self.train_data), ('test', self.test_data)):
            if data is not None and len(data) and data.labels.max() >= num_classes:
                raise ConfigurationError(
                    f"Client {self.id} {split} label {data.labels.max()} is outside [0, {num_classes}).")
        if self.optimizer is None:
            self.optimizer = SGD(self.model.parameters())

    @property
    def num_samples(self):
        return len(self.train_data)


@dataclass
class ClientResult:
    client_id: int
    upload: dict
    epoch_losses: list
    steps: int

    def last_losses(self):
        return self.epoch_losses[-1] if self.epoch_losses else {}


def _mean_losses(breakdowns):
    keys = breakdowns[0].keys()
    return {key: float(np.mean([b[key] for b in breakdowns])) for key in keys}


def _batch_loss(client, x, y, cfg, rng, graph):
    out = client.model.forward(Value(x), mode='train', rng=rng, graph=graph,
                               soft_mask=cfg.ablations.soft_mask)
    if client.model.pfsm is None:
        loss = cross_entropy(out.logits_g, y, graph)
        return loss, {'loss_gce': loss.item(), 'loss_total': loss.item()}
    loss, breakdown = total_loss(out, y, cfg.effective_weights(client.weights), graph)
    return loss, breakdown.as_dict()


def client_update(client, shared_snapshot, cfg, rng):
    """
    Local training of one client for cfg.E epochs.

    Loads the shared roles from ``shared_snapshot`` (None keeps the current
    weights), then runs mini-batch SGD with momentum over every parameter of
    the model jointly.

    :param client: ClientState, owned by the caller for the duration.
    :param shared_snapshot: Mapping name -> array of the shared roles, or None.
    :param cfg: RoundConfig.
    :param rng: Generator for batch order and Gumbel noise.
    :return: ClientResult with the shared arrays to upload.
    """
    if client.train_data is None or len(client.train_data) == 0:
        raise ConfigurationError(f"Client {client.id} has no training data.")
    partition = cfg.partition()
    if shared_snapshot:
        client.model.load_arrays(shared_snapshot)

    uses_bn = any(True for _ in client.model.encoder.bn_states())
    epoch_losses = []
    steps = 0
    for epoch in range(cfg.E):
        breakdowns = []
        for x, y in batches(client.train_data, cfg.B, rng):
            if uses_bn and len(y) < 2:
                logger.debug("client %d epoch %d: skipped a batch of one sample", client.id, epoch)
                continue
            graph = Graph()
            loss, breakdown = _batch_loss(client, x, y, cfg, rng, graph)
            if not np.isfinite(loss.item()):
                raise TrainingError(f"Loss is {loss.item()} at epoch {epoch}.")
            client.optimizer.zero_grad()
            graph.backward(loss)
            client.optimizer.step()
            breakdowns.append(breakdown)
            steps += 1
        if breakdowns:
            epoch_losses.append(_mean_losses(breakdowns))
            logger.debug("client %d epoch %d: %s", client.id, epoch, epoch_losses[-1])

    upload = client.model.arrays(partition.shared) if partition.aggregates else {}
    return ClientResult(client_id=client.id, upload=upload, epoch_losses=epoch_losses, steps=steps)
