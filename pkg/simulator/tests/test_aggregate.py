import numpy as np
import pytest

from simulator.errors import ProtocolError
from simulator.federation import ServerState, aggregate


def scalar_uploads(values):
    return [{'w': np.array(v, dtype=np.float64)} for v in values]


def test_weighted_mean_oracles():
    # (1*1 + 2*2 + 5*3) / 8
    server = ServerState(shared_params={}, client_sizes=[1, 2, 5])
    assert abs(aggregate(server, scalar_uploads([1.0, 2.0, 3.0]))['w'] - 2.5) < 1e-12

    server = ServerState(shared_params={}, client_sizes=[1, 3])
    assert abs(aggregate(server, scalar_uploads([0.0, 4.0]))['w'] - 3.0) < 1e-12


def test_weights_sum_to_one():
    server = ServerState(shared_params={}, client_sizes=[7, 11, 13, 1])
    assert abs(server.weights().sum() - 1.0) < 1e-12


def test_identical_uploads_are_a_fixed_point():
    rng = np.random.default_rng(0)
    upload = {'a': rng.normal(size=(3, 2)), 'b': rng.normal(size=4)}
    server = ServerState(shared_params={}, client_sizes=[3, 9, 4])
    merged = aggregate(server, [upload, upload, upload])
    for name in upload:
        assert np.allclose(merged[name], upload[name], atol=1e-12, rtol=0)


def test_single_client_returns_its_upload():
    upload = {'a': np.array([[1.5, -2.0]])}
    merged = aggregate(ServerState(shared_params={}, client_sizes=[10]), [upload])
    assert np.array_equal(merged['a'], upload['a'])


def test_mismatched_uploads():
    server = ServerState(shared_params={}, client_sizes=[1, 1])
    with pytest.raises(ProtocolError):
        aggregate(server, [{'a': np.ones(2)}, {'a': np.ones(3)}])
    with pytest.raises(ProtocolError):
        aggregate(server, [{'a': np.ones(2)}, {'b': np.ones(2)}])
    with pytest.raises(ProtocolError):
        aggregate(server, [{'a': np.ones(2)}])
    with pytest.raises(ProtocolError):
        ServerState(shared_params={}, client_sizes=[0, 4])


if __name__ == "__main__":
    test_weighted_mean_oracles()
    test_weights_sum_to_one()
    test_identical_uploads_are_a_fixed_point()
    test_single_client_returns_its_upload()
