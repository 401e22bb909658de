import numpy as np

from simulator.errors import AnalysisError

DEFAULT_EPS = 1e-5


def sparsity_ratio(z, eps_sparse=DEFAULT_EPS):
    """
    Mean share of entries with |z| <= eps in the L2-normalised feature rows.

    A zero-norm row counts as fully sparse.

    :param z: Feature matrix [M, k].
    :param eps_sparse: Threshold, > 0.
    :return: Float in [0, 1].
    """
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 2 or len(z) == 0:
        raise AnalysisError(f"sparsity_ratio needs a non-empty [M, k] matrix, got shape {z.shape}.")
    if eps_sparse <= 0:
        raise AnalysisError(f"eps_sparse must be positive, got {eps_sparse}.")
    norms = np.linalg.norm(z, axis=1)
    per_sample = np.ones(len(z))
    nonzero = norms > 0
    normalized = z[nonzero] / norms[nonzero, None]
    per_sample[nonzero] = np.mean(np.abs(normalized) <= eps_sparse, axis=1)
    return float(per_sample.mean())
