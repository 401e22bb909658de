"""Flat binary checkpoints.

Layout (little-endian): magic ``FPCK``, uint16 version, uint32 record count,
then per record a uint16 name length, the UTF-8 name, a uint8 ndim, one
uint32 per dimension and the float64 payload in row-major order.
"""
import logging
import struct

import numpy as np

from simulator.errors import DataError

logger = logging.getLogger(__name__)

MAGIC = b'FPCK'
VERSION = 1


def write_checkpoint(arrays, path):
    """
    :param arrays: Mapping name -> array (e.g. ``ClientModel.arrays()``).
    :param path: Destination file.
    """
    with open(path, 'wb') as fh:
        fh.write(MAGIC)
        fh.write(struct.pack('<HI', VERSION, len(arrays)))
        for name, array in arrays.items():
            array = np.asarray(array, dtype='<f8')
            encoded = name.encode('utf-8')
            fh.write(struct.pack('<H', len(encoded)))
            fh.write(encoded)
            fh.write(struct.pack('<B', array.ndim))
            fh.write(struct.pack(f'<{array.ndim}I', *array.shape))
            fh.write(array.tobytes())
    logger.debug("wrote %d arrays to %s", len(arrays), path)


def read_checkpoint(path):
    """
    :return: Mapping name -> float64 array, in file order.
    :raises DataError: On a bad magic, unknown version or truncated file.
    """
    with open(path, 'rb') as fh:
        payload = fh.read()
    if payload[:4] != MAGIC:
        raise DataError(f"{path} is not a checkpoint (bad magic).")
    offset = 4
    try:
        version, count = struct.unpack_from('<HI', payload, offset)
        offset += 6
        if version != VERSION:
            raise DataError(f"{path}: unsupported checkpoint version {version}.")
        arrays = {}
        for _ in range(count):
            (name_len,) = struct.unpack_from('<H', payload, offset)
            offset += 2
            name = payload[offset:offset + name_len].decode('utf-8')
            offset += name_len
            (ndim,) = struct.unpack_from('<B', payload, offset)
            offset += 1
            shape = struct.unpack_from(f'<{ndim}I', payload, offset)
            offset += 4 * ndim
            size = int(np.prod(shape, dtype=np.int64))
            data = np.frombuffer(payload, dtype='<f8', count=size, offset=offset)
            offset += 8 * size
            arrays[name] = data.astype(np.float64).reshape(shape)
    except (struct.error, ValueError) as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"{path}: truncated or corrupt checkpoint ({exc}).") from exc
    return arrays
