import copy
import csv
import json
import logging
import os

import numpy as np

from simulator.analysis import (fisher_contrast, fisher_probe, important_feature_overlap,
                                mask_selection_ratio, selection_frequencies)
from simulator.datasets import gen_synthetic_domains, load_csv
from simulator.errors import AnalysisError, ConfigurationError, UsageError
from simulator.federation import ClientState, RoundConfig, run_training
from simulator.losses import LossWeights
from simulator.model import ModelDims, init_model, read_checkpoint, write_checkpoint
from simulator.optim import SGD

from .config import dump_config, from_dict, parse_override, read_config_file, to_dict

logger = logging.getLogger(__name__)

CHECKPOINT_DIR = 'checkpoints'


def checkpoint_path(directory, client_id):
    return os.path.join(directory, f"client_{client_id}.ckpt")


def load_datasets(cfg):
    """List of (train, test) Datasets, one pair per client."""
    ds = cfg.dataset
    if ds.type == 'synthetic':
        return gen_synthetic_domains(ds.n_clients, ds.n, ds.C, ds.samples_per_client,
                                     test_fraction=ds.test_fraction, seed=cfg.seed,
                                     nuisance_dims=ds.nuisance_dims,
                                     domain_magnitudes=ds.domain_magnitudes,
                                     class_sep=ds.class_sep, noise_sigma=ds.noise_sigma)
    pairs = []
    for client_id, entry in enumerate(ds.files):
        for split in ('train', 'test'):
            if not os.path.exists(entry[split]):
                raise ConfigurationError(f"dataset.files[{client_id}].{split}: {entry[split]} does not exist.")
        train = load_csv(entry['train'], num_classes=ds.C, domain_id=client_id)
        test = load_csv(entry['test'], num_classes=ds.C, domain_id=client_id)
        if train.input_dim != test.input_dim:
            raise ConfigurationError(f"dataset.files[{client_id}]: train and test widths differ "
                                     f"({train.input_dim} vs {test.input_dim}).")
        pairs.append((train, test))
    return pairs


def round_config(cfg, rounds=None):
    h = cfg.hyper
    return RoundConfig(T=rounds or h.T, E=h.E, B=h.B, algorithm=cfg.algorithm, ablations=cfg.ablations)


def build_clients(cfg, datasets=None):
    """
    Clients sharing one initial model, each with its own optimizer state.

    :param cfg: RunConfig.
    :param datasets: Optional (train, test) pairs; generated from cfg otherwise.
    """
    datasets = load_datasets(cfg) if datasets is None else datasets
    widths = {train.input_dim for train, _ in datasets}
    if len(widths) > 1:
        raise ConfigurationError(f"Client datasets disagree on input width: {sorted(widths)}.")
    dims = ModelDims(input_dim=widths.pop(), feature_dim=cfg.model.feature_dim,
                     num_classes=cfg.dataset.C, hidden_dims=cfg.model.hidden_dims,
                     batch_norm=cfg.model.batch_norm)
    initial = init_model(dims, cfg.seed, with_pfsm=cfg.algorithm == 'fedpick',
                         tau=cfg.hyper.tau, eps_mask=cfg.hyper.eps_mask)
    weights = LossWeights(cfg.hyper.lambda_lce, cfg.hyper.lambda_ent, cfg.hyper.lambda_dis)
    clients = []
    for client_id, (train, test) in enumerate(datasets):
        model = initial.copy()
        clients.append(ClientState(id=client_id, model=model, train_data=train, test_data=test,
                                   optimizer=SGD(model.parameters(), cfg.hyper.lr, cfg.hyper.momentum),
                                   weights=weights))
    return clients


def train(cfg, rounds=None):
    clients = build_clients(cfg)
    log = run_training(clients, round_config(cfg, rounds), cfg.seed, cfg.workers)
    return clients, log


def summarize(cfg, clients, log):
    best = log.best('accuracy')
    accuracies = np.array([best[c.id] for c in clients])
    summary = {
        'algorithm': cfg.algorithm,
        'best_accuracy': {str(c.id): best[c.id] for c in clients},
        'mean_best_accuracy': float(accuracies.mean()),
        'std_best_accuracy': float(accuracies.std()),
    }
    if cfg.algorithm == 'fedpick':
        ratios = log.last('selection_ratio')
        summary['selection_ratio'] = {str(c.id): ratios[c.id] for c in clients}
    summary['config'] = to_dict(cfg)
    return summary


def write_checkpoints(clients, directory):
    os.makedirs(directory, exist_ok=True)
    for client in clients:
        write_checkpoint(client.model.arrays(), checkpoint_path(directory, client.id))


def load_checkpoints(clients, directory):
    for client in clients:
        path = checkpoint_path(directory, client.id)
        if not os.path.exists(path):
            raise UsageError(f"Missing checkpoint {path}.")
        client.model.load_arrays(read_checkpoint(path))


def cmd_run(cfg):
    """
    Train, then write metrics.csv, summary.json, config.yaml and checkpoints.

    :param cfg: Resolved RunConfig.
    :return: Exit code 0; failures raise.
    """
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    dump_config(cfg, os.path.join(out, 'config.yaml'))
    clients, log = train(cfg)
    log.write_csv(os.path.join(out, 'metrics.csv'))
    with open(os.path.join(out, 'summary.json'), 'w', encoding='utf-8') as fh:
        json.dump(summarize(cfg, clients, log), fh, indent=2)
        fh.write('\n')
    write_checkpoints(clients, os.path.join(out, CHECKPOINT_DIR))
    logger.info("wrote metrics, summary and %d checkpoints to %s", len(clients), out)
    return 0


def probe_rows(cfg, clients):
    rows = []
    for client in clients:
        z_train = client.model.features(client.train_data.features)
        z_test = client.model.features(client.test_data.features)
        accuracies = fisher_probe(z_train, client.train_data.labels, z_test, client.test_data.labels,
                                  cfg.probe.ratios, K=cfg.probe.K)
        rows.extend((client.id, ratio, acc) for ratio, acc in zip(cfg.probe.ratios, accuracies))
    return rows


def cmd_probe(cfg):
    """
    Freeze the encoders of a trained federation and probe Fisher-selected features.

    The encoders come from ``probe.checkpoint_dir`` when set, otherwise from
    ``probe.pretrain_rounds`` (default hyper.T) rounds of training.
    """
    if cfg.probe.checkpoint_dir is not None:
        clients = build_clients(cfg)
        load_checkpoints(clients, cfg.probe.checkpoint_dir)
    else:
        clients, _ = train(cfg, rounds=cfg.probe.pretrain_rounds)
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, 'probe.csv')
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['client_id', 'ratio', 'accuracy'])
        for client_id, ratio, accuracy in probe_rows(cfg, clients):
            writer.writerow([client_id, repr(ratio), repr(accuracy)])
    logger.info("wrote %s", path)
    return 0


def analysis_rows(clients):
    rows = []
    frequencies = []
    for client in clients:
        rows.append(('selection_ratio', client.id, client.id,
                     mask_selection_ratio(client.model, client.test_data)))
        selected, unselected = fisher_contrast(client.model, client.test_data)
        rows.append(('fisher_selected', client.id, client.id, selected))
        rows.append(('fisher_unselected', client.id, client.id, unselected))
        frequencies.append(selection_frequencies(client.model, client.test_data))
    overlap = important_feature_overlap(frequencies)
    for a in range(len(clients)):
        for b in range(len(clients)):
            rows.append(('overlap', clients[a].id, clients[b].id, float(overlap[a, b])))
    return rows


def cmd_analyze(run_dir):
    """
    Mask diagnostics of a finished fedpick run, written to analysis.csv.

    Rebuilds the clients from the run's config echo, loads their
    checkpoints and evaluates on each client's test split.
    """
    config_path = os.path.join(run_dir, 'config.yaml')
    if not os.path.exists(config_path):
        raise UsageError(f"Missing artifact {config_path}.")
    cfg = from_dict(read_config_file(config_path))
    if cfg.algorithm != 'fedpick':
        raise AnalysisError(f"analyze needs a fedpick run, {run_dir} used {cfg.algorithm!r}.")
    clients = build_clients(cfg)
    load_checkpoints(clients, os.path.join(run_dir, CHECKPOINT_DIR))
    path = os.path.join(run_dir, 'analysis.csv')
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['analysis', 'client_a', 'client_b', 'value'])
        for name, a, b, value in analysis_rows(clients):
            writer.writerow([name, a, b, repr(float(value))])
    logger.info("wrote %s", path)
    return 0


def sweep_point(base, param, value):
    """RunConfig equal to ``base`` except for one dotted key."""
    raw = copy.deepcopy(base)
    node = raw
    parts = param.split('.')
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            raise ConfigurationError(f"Sweep key {param!r} does not name a config field.")
        node = node[part]
    if parts[-1] not in node:
        raise ConfigurationError(f"Sweep key {param!r} does not name a config field.")
    node[parts[-1]] = value
    return from_dict(raw)


def cmd_sweep(cfg, param, values):
    """
    Rerun training for each value of one dotted config key.

    :param cfg: Base RunConfig.
    :param param: Dotted key, e.g. ``hyper.lambda_ent``.
    :param values: Raw value strings, each read as a YAML scalar.
    """
    if not values:
        raise ConfigurationError("sweep needs at least one value.")
    base = to_dict(cfg)
    points = [sweep_point(base, param, parse_override(f"{param}={text}")[1]) for text in values]
    os.makedirs(cfg.output_dir, exist_ok=True)
    path = os.path.join(cfg.output_dir, 'sweep.csv')
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['param', 'value', 'client_id', 'best_accuracy'])
        for text, point in zip(values, points):
            logger.info("sweep %s=%s", param, text)
            clients, log = train(point)
            best = log.best('accuracy')
            for client in clients:
                writer.writerow([param, text, client.id, repr(best[client.id])])
            writer.writerow([param, text, 'mean', repr(float(np.mean(list(best.values()))))])
    logger.info("wrote %s", path)
    return 0
