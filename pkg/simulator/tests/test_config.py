import pytest
import yaml

from simulator.cli.config import RunConfig, dump_config, from_dict, load_config, read_config_file, to_dict
from simulator.errors import ConfigurationError


def test_defaults():
    cfg = load_config()
    assert cfg == RunConfig()
    assert cfg.hyper.T == 50 and cfg.hyper.B == 64 and cfg.hyper.lr == 0.01 and cfg.hyper.momentum == 0.5
    assert cfg.dataset.n_clients == 4 and cfg.algorithm == 'fedpick'
    assert cfg.probe.ratios == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def test_unknown_keys_are_rejected_with_their_path():
    with pytest.raises(ConfigurationError, match=r"hyper\.tauu"):
        from_dict({'hyper': {'tauu': 1.0}})
    with pytest.raises(ConfigurationError, match="colour"):
        from_dict({'colour': 'red'})


def test_out_of_range_values_name_the_field():
    with pytest.raises(ConfigurationError, match=r"hyper\.T"):
        from_dict({'hyper': {'T': 0}})
    with pytest.raises(ConfigurationError, match=r"hyper\.B"):
        from_dict({'hyper': {'B': 8.5}})
    with pytest.raises(ConfigurationError, match=r"hyper\.eps_mask"):
        from_dict({'hyper': {'eps_mask': 1.0}})
    with pytest.raises(ConfigurationError, match="algorithm"):
        from_dict({'algorithm': 'fedprox'})
    with pytest.raises(ConfigurationError, match="ablations"):
        from_dict({'algorithm': 'fedbn', 'ablations': {'share_pfsm': True}})
    with pytest.raises(ConfigurationError, match=r"dataset\.domain_magnitudes"):
        from_dict({'dataset': {'n_clients': 2, 'domain_magnitudes': [1.0]}})


def test_preset_and_overrides():
    cfg = load_config(preset='digits', overrides=['hyper.lr=0.1', 'dataset.domain_magnitudes=[0, 0, 1, 1]',
                                                  'seed=7'])
    assert (cfg.hyper.tau, cfg.hyper.lambda_lce, cfg.hyper.lambda_ent, cfg.hyper.lambda_dis) == (10.0, 10.0, 0.001, 10.0)
    assert cfg.hyper.lr == 0.1 and cfg.seed == 7
    assert cfg.dataset.domain_magnitudes == (0.0, 0.0, 1.0, 1.0)
    with pytest.raises(ConfigurationError):
        load_config(preset='imagenet')
    with pytest.raises(ConfigurationError):
        load_config(overrides=['hyper.lr'])


def test_echo_reproduces_the_config(tmp_path):
    cfg = load_config(preset='office', overrides=['algorithm=fedbn', 'model.hidden_dims=[16, 8]'])
    assert from_dict(to_dict(cfg)) == cfg

    path = tmp_path / "config.yaml"
    dump_config(cfg, path)
    assert from_dict(read_config_file(path)) == cfg
    assert yaml.safe_load(path.read_text())['model']['hidden_dims'] == [16, 8]


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigurationError, match="does not exist"):
        load_config(tmp_path / "missing.yaml")
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigurationError):
        load_config(path)


if __name__ == "__main__":
    test_defaults()
    test_unknown_keys_are_rejected_with_their_path()
    test_out_of_range_values_name_the_field()
    test_preset_and_overrides()
