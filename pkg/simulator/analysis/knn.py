import math

import numpy as np
from scipy.spatial.distance import cdist

from simulator.errors import AnalysisError

from .fisher import fisher_scores


def knn_classify(train_z, train_labels, query_z, K=10):
    """
    Majority vote among the K nearest training points (Euclidean).

    Vote ties go to the class with the smallest summed neighbour distance,
    then to the lowest class index.

    :return: Predicted label per query row.
    """
    train_z = np.asarray(train_z, dtype=np.float64)
    train_labels = np.asarray(train_labels)
    query_z = np.asarray(query_z, dtype=np.float64)
    if len(train_z) == 0:
        raise AnalysisError("knn_classify needs a non-empty training set.")
    if not 1 <= K <= len(train_z):
        raise AnalysisError(f"K must lie in [1, {len(train_z)}], got {K}.")
    classes = np.unique(train_labels)
    distances = cdist(query_z, train_z)
    nearest = np.argsort(distances, axis=1, kind='stable')[:, :K]
    near_dist = np.take_along_axis(distances, nearest, axis=1)
    near_labels = train_labels[nearest]

    votes = np.stack([(near_labels == c).sum(axis=1) for c in classes], axis=1)
    dist_sums = np.stack([np.where(near_labels == c, near_dist, 0.0).sum(axis=1) for c in classes], axis=1)
    predictions = np.empty(len(query_z), dtype=train_labels.dtype)
    for i in range(len(query_z)):
        # lexsort: last key is primary
        order = np.lexsort((classes, dist_sums[i], -votes[i]))
        predictions[i] = classes[order[0]]
    return predictions


def selected_count(ratio, width):
    """Number of dimensions kept at selection ratio ``ratio``."""
    return max(1, min(width, math.ceil(round(ratio * width, 9))))


def fisher_probe(z_train, labels_train, z_test, labels_test, ratios, K=10):
    """
    Test accuracy of KNN on the top-Fisher feature subsets.

    For every ratio the top ceil(ratio * k) dimensions by training-set Fisher
    score are kept and the rest are zeroed.

    :param ratios: Selection ratios in (0, 1].
    :return: List of accuracies, one per ratio.
    """
    z_train = np.asarray(z_train, dtype=np.float64)
    z_test = np.asarray(z_test, dtype=np.float64)
    labels_test = np.asarray(labels_test)
    for ratio in ratios:
        if not 0.0 < ratio <= 1.0:
            raise AnalysisError(f"Selection ratios must lie in (0, 1], got {ratio}.")
    report = fisher_scores(z_train, labels_train)
    width = z_train.shape[1]
    accuracies = []
    for ratio in ratios:
        mask = np.zeros(width)
        mask[report.top(selected_count(ratio, width))] = 1.0
        predicted = knn_classify(z_train * mask, labels_train, z_test * mask, K)
        accuracies.append(float(np.mean(predicted == labels_test)))
    return accuracies
