from dataclasses import dataclass

import numpy as np

from simulator.errors import ProtocolError


@dataclass
class ServerState:
    shared_params: dict
    client_sizes: list
    round: int = 0

    def __post_init__(self):
        if not self.client_sizes or min(self.client_sizes) < 1:
            raise ProtocolError(f"Client sizes must all be at least 1, got {self.client_sizes}.")

    def weights(self):
        sizes = np.asarray(self.client_sizes, dtype=np.float64)
        return sizes / sizes.sum()


def aggregate(server, client_uploads):
    """
    Sample-size weighted mean of the clients' shared arrays.

    :param server: ServerState with one size M_i per upload.
    :param client_uploads: List of mappings name -> array, in client order.
    :return: New shared snapshot.
    :raises ProtocolError: On missing uploads, mismatched names or shapes.
    """
    if not client_uploads:
        raise ProtocolError("aggregate needs at least one client upload.")
    if len(client_uploads) != len(server.client_sizes):
        raise ProtocolError(f"Got {len(client_uploads)} uploads for {len(server.client_sizes)} clients.")
    names = list(client_uploads[0])
    for i, upload in enumerate(client_uploads):
        if list(upload) != names:
            raise ProtocolError(f"Client {i} uploaded arrays {sorted(upload)}, expected {sorted(names)}.")
        for name in names:
            if np.shape(upload[name]) != np.shape(client_uploads[0][name]):
                raise ProtocolError(f"Client {i} uploaded {name} with shape {np.shape(upload[name])}, "
                                    f"expected {np.shape(client_uploads[0][name])}.")
            if name in server.shared_params and np.shape(upload[name]) != np.shape(server.shared_params[name]):
                raise ProtocolError(f"{name} changed shape from {np.shape(server.shared_params[name])}.")

    weights = server.weights()
    snapshot = {}
    for name in names:
        total = np.zeros_like(np.asarray(client_uploads[0][name], dtype=np.float64))
        for w, upload in zip(weights, client_uploads):
            total = total + w * upload[name]
        snapshot[name] = total
    return snapshot
