import struct

import numpy as np
import pytest

from simulator.errors import DataError
from simulator.model import ModelDims, init_model, read_checkpoint, write_checkpoint


def test_arrays_survive_a_round_trip(tmp_path):
    arrays = {'scalar': np.array(2.5), 'vector': np.arange(3.0), 'matrix': np.random.default_rng(0).normal(size=(2, 4))}
    path = tmp_path / "a.ckpt"
    write_checkpoint(arrays, path)
    loaded = read_checkpoint(path)

    assert list(loaded) == list(arrays)
    for name in arrays:
        assert loaded[name].shape == arrays[name].shape
        assert np.array_equal(loaded[name], arrays[name])


def test_file_layout(tmp_path):
    path = tmp_path / "a.ckpt"
    write_checkpoint({'w': np.array([1.0, -1.0])}, path)
    payload = path.read_bytes()
    assert payload[:4] == b'FPCK'
    assert struct.unpack_from('<HI', payload, 4) == (1, 1)
    # header 10 + name length 2 + name 1 + ndim 1 + shape 4 + payload 16
    assert len(payload) == 34


def test_scalar_and_transposed_arrays_keep_their_shape(tmp_path):
    path = tmp_path / "a.ckpt"
    matrix = np.arange(6.0).reshape(2, 3)
    write_checkpoint({'s': np.float64(-1.5), 't': matrix.T}, path)
    payload = path.read_bytes()
    # header 10 + name 3 + ndim 1 + one float
    assert payload[13] == 0, "A scalar is stored with ndim 0."
    assert len(payload) == 10 + 3 + 1 + 8 + 3 + 1 + 8 + 48

    loaded = read_checkpoint(path)
    assert loaded['s'].shape == () and loaded['s'] == -1.5
    assert np.array_equal(loaded['t'], matrix.T)


def test_model_restored_from_checkpoint(tmp_path):
    dims = ModelDims(input_dim=4, feature_dim=6, num_classes=3, hidden_dims=(5,))
    trained, fresh = init_model(dims, seed=1), init_model(dims, seed=2)
    trained.encoder.layers[0][1].running_mean += 0.5
    path = tmp_path / "model.ckpt"
    write_checkpoint(trained.arrays(), path)

    fresh.load_arrays(read_checkpoint(path))
    x = np.random.default_rng(3).normal(size=(7, 4))
    assert np.array_equal(fresh.predict(x), trained.predict(x))


def test_corrupt_checkpoints(tmp_path):
    path = tmp_path / "bad.ckpt"
    path.write_bytes(b'NOPE' + bytes(10))
    with pytest.raises(DataError, match="magic"):
        read_checkpoint(path)

    write_checkpoint({'w': np.ones((3, 3))}, path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(DataError, match="truncated"):
        read_checkpoint(path)

    path.write_bytes(b'FPCK' + struct.pack('<HI', 9, 0))
    with pytest.raises(DataError, match="version"):
        read_checkpoint(path)
