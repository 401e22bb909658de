import csv

import numpy as np

from simulator.errors import DataError, ParseError

from .dataset import Dataset


def load_csv(path, num_classes=None, domain_id=0):
    """
    Read a dataset with header ``f0,...,f{n-1},label``.

    :param path: UTF-8, comma-separated file.
    :param num_classes: Optional C for label range checks.
    :raises ParseError: On a malformed row, with its line number.
    :raises DataError: On a missing label column or a non-integer label.
    """
    with open(path, newline='', encoding='utf-8') as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError(f"{path} is empty.", line=1)
        header = [h.strip() for h in header]
        if 'label' not in header:
            raise DataError(f"{path}: missing column 'label'.")
        label_col = header.index('label')
        feature_cols = [i for i in range(len(header)) if i != label_col]
        expected = [f"f{i}" for i in range(len(feature_cols))]
        if [header[i] for i in feature_cols] != expected:
            raise ParseError(f"{path}: feature columns must be named {','.join(expected)}.", line=1)

        features, labels = [], []
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(f"{path}: expected {len(header)} fields, got {len(row)}.", line=line)
            try:
                features.append([float(row[i]) for i in feature_cols])
            except ValueError as exc:
                raise ParseError(f"{path}: {exc}.", line=line) from exc
            raw = row[label_col].strip()
            try:
                labels.append(int(raw, 10))
            except ValueError:
                raise DataError(f"{path} line {line}: label {raw!r} is not an integer.") from None
    if not labels:
        raise DataError(f"{path} has no data rows.")
    return Dataset(np.array(features), np.array(labels, dtype=np.int64), domain_id, num_classes)


def write_csv(ds, path):
    """Write ``ds`` in the format read by :func:`load_csv`."""
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i}" for i in range(ds.input_dim)] + ['label'])
        for row, label in zip(ds.features, ds.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(label)])
