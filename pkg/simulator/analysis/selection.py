import math

import numpy as np

from simulator.errors import AnalysisError
from simulator.value import Value

from .fisher import fisher_scores


def _eval_masks(model, data):
    if model.pfsm is None:
        raise AnalysisError("Mask diagnostics need a model with the feature selection module.")
    out = model.forward(Value(data.features), mode='eval')
    return out.mask_hard.data, out.z_g.data


def mask_selection_ratio(model, data):
    """Mean of the eval-mode hard mask over all samples and dimensions."""
    masks, _ = _eval_masks(model, data)
    return float(masks.mean())


def selection_frequencies(model, data):
    """Share of samples selecting each feature dimension (eval mode)."""
    masks, _ = _eval_masks(model, data)
    return masks.mean(axis=0)


def fisher_contrast(model, data, threshold=0.5):
    """
    Mean Fisher score of the dimensions the model selects vs the ones it drops.

    A dimension counts as selected when its selection frequency is >= threshold.
    A side with no dimensions reports NaN.

    :return: Tuple (selected_mean, unselected_mean).
    """
    masks, z_g = _eval_masks(model, data)
    scores = fisher_scores(z_g, data.labels).scores
    chosen = masks.mean(axis=0) >= threshold
    selected = float(scores[chosen].mean()) if chosen.any() else float('nan')
    unselected = float(scores[~chosen].mean()) if (~chosen).any() else float('nan')
    return selected, unselected


def important_set(frequencies, top_fraction=0.5):
    frequencies = np.asarray(frequencies, dtype=np.float64)
    count = max(1, math.ceil(round(top_fraction * len(frequencies), 9)))
    return set(np.argsort(-frequencies, kind='stable')[:count].tolist())


def important_feature_overlap(masks_by_domain, top_fraction=0.5):
    """
    Pairwise Jaccard overlap of each domain's most frequently selected features.

    :param masks_by_domain: Sequence of per-dimension selection frequencies.
    :param top_fraction: Share of dimensions counted as important, in (0, 1].
    :return: Symmetric [D, D] matrix with ones on the diagonal.
    """
    if not 0.0 < top_fraction <= 1.0:
        raise AnalysisError(f"top_fraction must lie in (0, 1], got {top_fraction}.")
    widths = {len(f) for f in masks_by_domain}
    if len(widths) > 1:
        raise AnalysisError(f"Selection frequency vectors differ in width: {sorted(widths)}.")
    sets = [important_set(f, top_fraction) for f in masks_by_domain]
    overlap = np.ones((len(sets), len(sets)))
    for a in range(len(sets)):
        for b in range(a + 1, len(sets)):
            union = sets[a] | sets[b]
            overlap[a, b] = overlap[b, a] = len(sets[a] & sets[b]) / len(union)
    return overlap
