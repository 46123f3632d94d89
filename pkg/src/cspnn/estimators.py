"""scikit-learn compatible wrappers.

>>> from cspnn import CSPNNClassifier
>>> clf = CSPNNClassifier().fit([[0.0], [1.0]], ["a", "b"])
>>> clf.predict([[0.1]]).tolist()
['a']
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .baseline import build_static
from .core import CsPnnModel
from .data_io import NormalizationParams
from .dataset import LabeledDataset
from .learning import construct, predict_indices, unlearn_classes, unlearn_units
from .validation import check_labels, check_matrix


def _as_dataset(X, y) -> LabeledDataset:
    X = check_matrix(X, allow_empty=False)
    return LabeledDataset(X, check_labels(y, X.shape[0]))


def _label_array(labels) -> np.ndarray:
    if all(isinstance(v, (int, np.integer)) and not isinstance(v, bool) for v in labels):
        return np.array(labels, dtype=np.int64)
    out = np.empty(len(labels), dtype=object)
    out[:] = labels
    return out


class CSPNNClassifier(ClassifierMixin, BaseEstimator):
    """Compact-sized probabilistic neural network.

    Hyperparameter free: the network grows only on misclassified training
    patterns and the shared radius adapts to every presented pattern.
    ``partial_fit`` continues construction on the current network, which
    covers both instance-wise and class-incremental learning.

    Attributes
    ----------
    model_ : CsPnnModel
        The underlying network.
    classes_ : ndarray
        Class labels in output-unit order (arrival order, not sorted).
    n_features_in_ : int
    """

    def fit(self, X, y):
        data = _as_dataset(X, y)
        self.model_ = construct(CsPnnModel(data.dimension), data)
        self.n_features_in_ = data.dimension
        return self

    def partial_fit(self, X, y):
        if not hasattr(self, "model_"):
            return self.fit(X, y)
        data = _as_dataset(X, y)
        construct(self.model_, data)
        return self

    @property
    def classes_(self):
        check_is_fitted(self, "model_")
        return _label_array(self.model_.labels)

    @property
    def n_hidden_(self) -> int:
        check_is_fitted(self, "model_")
        return self.model_.n_hidden

    def decision_function(self, X):
        """Unnormalized class scores, columns ordered like ``classes_``."""
        check_is_fitted(self, "model_")
        _, scores = predict_indices(self.model_, X)
        return scores

    def predict(self, X):
        check_is_fitted(self, "model_")
        winners, _ = predict_indices(self.model_, X)
        return self.classes_[winners]

    def unlearn_classes(self, labels):
        """Drop whole classes from the fitted network."""
        check_is_fitted(self, "model_")
        unlearn_classes(self.model_, labels)
        return self

    def unlearn_units(self, ids):
        """Drop individual hidden units by id (see ``model_.unit_ids``)."""
        check_is_fitted(self, "model_")
        unlearn_units(self.model_, ids)
        return self


class StaticPNNClassifier(ClassifierMixin, BaseEstimator):
    """Original PNN: every training pattern is a centroid.

    Parameters
    ----------
    sigma : float, optional
        Fixed radius. ``None`` uses the largest pairwise training distance
        divided by the number of classes.
    """

    def __init__(self, sigma=None):
        self.sigma = sigma

    def fit(self, X, y):
        data = _as_dataset(X, y)
        self.model_ = build_static(data)
        self.sigma_ = self.model_.sigma if self.sigma is None else float(self.sigma)
        self.d_max_ = self.model_.d_max
        self.n_features_in_ = data.dimension
        return self

    @property
    def classes_(self):
        check_is_fitted(self, "model_")
        return _label_array(self.model_.labels)

    def decision_function(self, X):
        check_is_fitted(self, "model_")
        _, scores = predict_indices(self.model_.network, X, sigma=self.sigma_)
        return scores

    def predict(self, X):
        check_is_fitted(self, "model_")
        winners, _ = predict_indices(self.model_.network, X, sigma=self.sigma_)
        return self.classes_[winners]


class MinMaxNormalizer(TransformerMixin, BaseEstimator):
    """Map every feature's training range onto [-1, 1].

    Unlike :class:`sklearn.preprocessing.MinMaxScaler`, constant features
    map to 0 (the centre of the range). Values outside the training range
    are extrapolated, not clipped.
    """

    def fit(self, X, y=None):
        X = check_matrix(X, allow_empty=False)
        self.params_ = NormalizationParams(X.min(axis=0), X.max(axis=0))
        self.data_min_ = self.params_.minimum
        self.data_max_ = self.params_.maximum
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        return self.params_.transform(X)
