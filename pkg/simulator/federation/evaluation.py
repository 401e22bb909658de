import numpy as np

from simulator.errors import ConfigurationError
from simulator.losses import cross_entropy, total_loss
from simulator.value import Value


def accuracy_from_probs(probs, labels):
    """Share of rows whose argmax equals the label."""
    labels = np.asarray(labels)
    if len(labels) == 0:
        raise ConfigurationError("Accuracy of an empty split is undefined.")
    return float(np.mean(np.argmax(probs, axis=1) == labels))


def evaluate(client, cfg, split='test'):
    """
    Accuracy and loss terms of a client's model on one of its splits.

    Runs in eval mode: BN uses its running statistics and the Gumbel noise
    is off, so repeated calls give identical results.

    :param client: ClientState.
    :param cfg: RoundConfig; no_ensemble switches prediction to the global head.
    :param split: 'test' or 'train'.
    :return: Mapping metric name -> value.
    """
    data = client.test_data if split == 'test' else client.train_data
    if data is None or len(data) == 0:
        raise ConfigurationError(f"Client {client.id} has an empty {split} split.")
    model = client.model
    probs = model.predict(data.features, use_ensemble=not cfg.ablations.no_ensemble)
    metrics = {'accuracy': accuracy_from_probs(probs, data.labels)}

    out = model.forward(Value(data.features), mode='eval')
    if model.pfsm is None:
        metrics['loss_gce'] = cross_entropy(out.logits_g, data.labels).item()
        metrics['loss_total'] = metrics['loss_gce']
    else:
        _, breakdown = total_loss(out, data.labels, cfg.effective_weights(client.weights))
        metrics.update(breakdown.as_dict())
    return metrics
