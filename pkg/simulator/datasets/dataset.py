from dataclasses import dataclass
from typing import Optional

import numpy as np

from simulator.errors import ConfigurationError, DataError


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    domain_id: int = 0
    num_classes: Optional[int] = None

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels)
        if features.ndim != 2:
            raise DataError(f"features must be a [M, n] matrix, got shape {features.shape}.")
        if len(features) < 1:
            raise DataError("A dataset needs at least one sample.")
        if labels.shape != (len(features),):
            raise DataError(f"Expected {len(features)} labels, got shape {labels.shape}.")
        if not np.issubdtype(labels.dtype, np.integer):
            raise DataError(f"Labels must be integers, got dtype {labels.dtype}.")
        if not np.all(np.isfinite(features)):
            raise DataError("features contain NaN or Inf.")
        if labels.min() < 0:
            raise DataError(f"Labels must be non-negative, got {labels.min()}.")
        if self.num_classes is not None and labels.max() >= self.num_classes:
            raise DataError(f"Label {labels.max()} is outside [0, {self.num_classes}).")
        object.__setattr__(self, 'features', features)
        object.__setattr__(self, 'labels', labels.astype(np.int64))

    @property
    def input_dim(self):
        return self.features.shape[1]

    def __len__(self):
        return len(self.labels)

    def subset(self, indices):
        return Dataset(self.features[indices], self.labels[indices], self.domain_id, self.num_classes)

    def class_counts(self, num_classes=None):
        num_classes = num_classes or self.num_classes or int(self.labels.max()) + 1
        return np.bincount(self.labels, minlength=num_classes)


class BatchIter:
    def __init__(self, dataset, batch_size, rng):
        """
        Shuffled mini-batches; every pass over the iterator is one epoch.

        :param dataset: Dataset to iterate.
        :param batch_size: Samples per batch; the last batch may be short.
        :param rng: Generator drawing a fresh permutation each epoch.
        """
        if batch_size < 1:
            raise ConfigurationError(f"Batch size must be at least 1, got {batch_size}.")
        self.dataset = dataset
        self.batch_size = int(batch_size)
        self.rng = rng
        self.order = None

    def __iter__(self):
        self.order = self.rng.permutation(len(self.dataset))
        for start in range(0, len(self.order), self.batch_size):
            idx = self.order[start:start + self.batch_size]
            yield self.dataset.features[idx], self.dataset.labels[idx]

    def __len__(self):
        return -(-len(self.dataset) // self.batch_size)


def batches(ds, B, rng):
    return BatchIter(ds, B, rng)
