from dataclasses import dataclass

import numpy as np

from simulator.errors import AnalysisError

_DELTA = 1e-12


@dataclass(frozen=True, eq=False)
class FisherReport:
    scores: np.ndarray
    ranking: np.ndarray

    def top(self, count):
        """Indices of the ``count`` highest-scoring dimensions."""
        return self.ranking[:count]


def fisher_scores(z, labels):
    """
    Per-dimension Fisher score S_b / S_w.

    S_b = sum_j m_j (mu_j - mu)^2 and S_w = sum_j m_j var_j with population
    class variances. Dimensions with S_b == 0 score exactly 0.

    :param z: Feature matrix [M, k].
    :param labels: Class index per row.
    :return: FisherReport; ranking is descending, ties broken by lower index.
    """
    z = np.asarray(z, dtype=np.float64)
    labels = np.asarray(labels)
    if z.ndim != 2 or len(z) != len(labels):
        raise AnalysisError(f"Features {z.shape} and labels {labels.shape} do not align.")
    classes = np.unique(labels)
    if len(classes) < 2:
        raise AnalysisError("Fisher scores need at least two classes.")
    mean = z.mean(axis=0)
    s_b = np.zeros(z.shape[1])
    s_w = np.zeros(z.shape[1])
    for c in classes:
        members = z[labels == c]
        s_b += len(members) * (members.mean(axis=0) - mean) ** 2
        s_w += len(members) * members.var(axis=0)
    scores = np.where(s_b == 0, 0.0, s_b / (s_w + _DELTA))
    ranking = np.argsort(-scores, kind='stable')
    return FisherReport(scores=scores, ranking=ranking)
