import numpy as np
import pytest

from simulator.cli.commands import build_clients, round_config
from simulator.errors import ConfigurationError
from simulator.federation import accuracy_from_probs, evaluate
from simulator.tests.helpers import small_config


def test_accuracy_oracles():
    labels = np.arange(100) % 10
    assert accuracy_from_probs(np.eye(10)[labels], labels) == 1.0
    constant = np.tile(np.eye(10)[3], (100, 1))
    assert accuracy_from_probs(constant, labels) == 0.1, "A constant guess hits exactly 1/C of a balanced split."
    with pytest.raises(ConfigurationError):
        accuracy_from_probs(np.zeros((0, 3)), [])


def test_repeated_evaluation_is_identical():
    cfg = small_config()
    client = build_clients(cfg)[0]
    rc = round_config(cfg)
    assert evaluate(client, rc) == evaluate(client, rc)


def test_evaluation_reports_loss_terms():
    cfg = small_config()
    metrics = evaluate(build_clients(cfg)[0], round_config(cfg))
    assert {'accuracy', 'loss_gce', 'loss_lce', 'loss_ent', 'loss_dis', 'loss_total'} <= set(metrics)
    assert 0.0 <= metrics['accuracy'] <= 1.0

    baseline = small_config(algorithm='fedbn')
    metrics = evaluate(build_clients(baseline)[0], round_config(baseline))
    assert set(metrics) == {'accuracy', 'loss_gce', 'loss_total'}


def test_no_ensemble_predicts_with_the_global_head():
    cfg = small_config(ablations={'no_ensemble': True})
    client = build_clients(cfg)[0]
    probs = client.model.predict(client.test_data.features, use_ensemble=False)
    expected = accuracy_from_probs(probs, client.test_data.labels)
    assert evaluate(client, round_config(cfg))['accuracy'] == expected


if __name__ == "__main__":
    test_accuracy_oracles()
    test_repeated_evaluation_is_identical()
    test_evaluation_reports_loss_terms()
