import numpy as np
import pytest

import simulator.federation.trainer as trainer
from simulator.cli.commands import build_clients, load_datasets, round_config
from simulator.errors import TrainingError
from simulator.analysis import sparsity_ratio
from simulator.federation import (ServerState, aggregate, client_rng, client_update, diagnostic_features,
                                  run_training)
from simulator.tests.helpers import assert_arrays_equal, small_config


def test_one_accuracy_row_per_round_and_client():
    cfg = small_config(hyper={'T': 3})
    log = run_training(build_clients(cfg), round_config(cfg), cfg.seed)
    rows = log.select('accuracy', split='test')
    assert len(rows) == 3 * 2
    assert [r.round for r in rows] == [1, 1, 2, 2, 3, 3]
    assert len(log.select('selection_ratio')) == 6, "fedpick should log its selection ratio every round."


def test_sparsity_metrics_follow_the_algorithm():
    fedavg = small_config(algorithm='fedavg')
    log = run_training(build_clients(fedavg), round_config(fedavg), 0)
    assert len(log.select('sparsity_pre_agg')) == len(log.select('sparsity_post_agg')) == 4
    assert not log.select('selection_ratio')

    single = small_config(algorithm='singleset')
    log = run_training(build_clients(single), round_config(single), 0)
    assert len(log.select('sparsity')) == 4 and not log.select('sparsity_pre_agg')


def test_sparsity_is_measured_on_rectified_features():
    cfg = small_config(algorithm='fedavg')
    clients = build_clients(cfg)
    log = run_training(clients, round_config(cfg), cfg.seed)
    for client in clients:
        z = diagnostic_features(client)
        raw = client.model.features(client.test_data.features)
        assert (z >= 0).all() and np.array_equal(z, np.maximum(raw, 0.0))
        # the encoder output is centred by BN, so some units are off for every sample
        assert (raw < 0).any()
        last = log.select('sparsity_post_agg', client_id=client.id)[-1]
        assert last.round == cfg.hyper.T
        assert last.value == sparsity_ratio(z), "The post-aggregation ratio should describe the broadcast model."
        assert last.value > 0.0


def test_single_client_fedavg_is_local_training():
    cfg = small_config(algorithm='fedavg', dataset={'n_clients': 1}, hyper={'T': 1, 'E': 2})
    federated = build_clients(cfg)
    run_training(federated, round_config(cfg), cfg.seed)

    local = build_clients(cfg)
    client_update(local[0], None, round_config(cfg), client_rng(cfg.seed, 0, 1))

    assert_arrays_equal(federated[0].model.arrays(), local[0].model.arrays(),
                        "one client, one round of fedavg should equal plain local training")


def test_identical_data_fedavg_converges_to_one_model():
    cfg = small_config(algorithm='fedavg', hyper={'T': 1, 'B': 64})
    pair = load_datasets(cfg)[0]
    clients = build_clients(cfg, datasets=[pair, pair])
    rc = round_config(cfg)
    results = [client_update(c, None, rc, client_rng(cfg.seed, c.id, 1)) for c in clients]
    merged = aggregate(ServerState(shared_params={}, client_sizes=[20, 20]), [r.upload for r in results])

    for name, value in merged.items():
        assert np.allclose(value, results[0].upload[name], atol=1e-12, rtol=0), f"{name} drifted."
    for client in clients:
        client.model.load_arrays(merged)
    assert_arrays_equal(clients[0].model.arrays(), clients[1].model.arrays(), "broadcast left clients apart")


def test_local_roles_are_never_transmitted():
    cfg = small_config()
    clients = build_clients(cfg)
    rc = round_config(cfg)
    results = [client_update(c, None, rc, client_rng(cfg.seed, c.id, 1)) for c in clients]
    local_before = clients[0].model.arrays(['pfsm', 'encoder_bn'])

    merged = aggregate(ServerState(shared_params={}, client_sizes=[20, 20]), [r.upload for r in results])
    clients[0].model.load_arrays(merged)

    assert_arrays_equal(local_before, clients[0].model.arrays(['pfsm', 'encoder_bn']),
                        "broadcast overwrote a local role")


def test_worker_count_does_not_change_results():
    cfg = small_config(hyper={'T': 2})
    serial = run_training(build_clients(cfg), round_config(cfg), cfg.seed, workers=1)
    parallel = run_training(build_clients(cfg), round_config(cfg), cfg.seed, workers=4)
    assert serial.rows == parallel.rows, "Scheduling changed the metrics."


def test_training_errors_name_round_and_client(monkeypatch):
    def failing_update(client, snapshot, cfg, rng):
        raise TrainingError("loss is nan")

    monkeypatch.setattr(trainer, 'client_update', failing_update)
    cfg = small_config()
    with pytest.raises(TrainingError, match=r"^round 1 client 0: loss is nan"):
        run_training(build_clients(cfg), round_config(cfg), cfg.seed)


if __name__ == "__main__":
    test_one_accuracy_row_per_round_and_client()
    test_single_client_fedavg_is_local_training()
    test_identical_data_fedavg_converges_to_one_model()
    test_local_roles_are_never_transmitted()
