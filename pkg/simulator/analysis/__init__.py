from .sparsity import sparsity_ratio
from .fisher import FisherReport, fisher_scores
from .knn import fisher_probe, knn_classify
from .selection import (fisher_contrast, important_feature_overlap, mask_selection_ratio,
                        selection_frequencies)

__all__ = ['sparsity_ratio', 'FisherReport', 'fisher_scores', 'fisher_probe', 'knn_classify',
           'fisher_contrast', 'important_feature_overlap', 'mask_selection_ratio',
           'selection_frequencies']
