import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from cspnn import CSPNNClassifier, MinMaxNormalizer, StaticPNNClassifier


@pytest.fixture
def blobs(rng):
    centers = np.array([[0.0, 0.0], [3.0, 3.0], [0.0, 3.0]])
    y = np.repeat([0, 1, 2], 40)
    X = centers[y] + rng.normal(scale=0.4, size=(120, 2))
    order = rng.permutation(120)
    return X[order], y[order]


def test_fit_predict_blobs(blobs):
    X, y = blobs
    clf = CSPNNClassifier().fit(X, y)
    assert clf.score(X, y) > 0.95
    assert clf.n_hidden_ < len(X)
    assert clf.n_features_in_ == 2
    assert clf.classes_.dtype == np.int64


def test_string_labels_round_trip():
    clf = CSPNNClassifier().fit([[0.0], [1.0]], ["neg", "pos"])
    assert clf.predict([[0.9], [0.2]]).tolist() == ["pos", "neg"]


def test_decision_function_columns_follow_classes(blobs):
    X, y = blobs
    clf = CSPNNClassifier().fit(X, y)
    scores = clf.decision_function(X[:5])
    assert scores.shape == (5, 3)
    assert np.array_equal(clf.classes_[scores.argmax(axis=1)], clf.predict(X[:5]))


def test_partial_fit_adds_classes():
    clf = CSPNNClassifier()
    clf.partial_fit([[0.0], [1.0]], ["a", "b"])
    clf.partial_fit([[5.0]], ["c"])
    assert clf.classes_.tolist() == ["a", "b", "c"]


def test_unlearn_classes_never_predicted(blobs):
    X, y = blobs
    clf = CSPNNClassifier().fit(X, y).unlearn_classes([1])
    assert 1 not in set(clf.predict(X).tolist())


def test_not_fitted():
    with pytest.raises(NotFittedError):
        CSPNNClassifier().predict([[0.0]])


def test_clone_and_params():
    assert CSPNNClassifier().get_params() == {}
    est = StaticPNNClassifier(sigma=0.5)
    assert clone(est).get_params() == {"sigma": 0.5}


def test_static_classifier(blobs):
    X, y = blobs
    clf = StaticPNNClassifier().fit(X, y)
    assert clf.model_.n_hidden == len(X)
    assert clf.sigma_ == pytest.approx(clf.d_max_ / 3)
    assert clf.score(X, y) > 0.9


def test_pipeline_with_normalizer(blobs):
    X, y = blobs
    pipe = make_pipeline(MinMaxNormalizer(), CSPNNClassifier()).fit(X * 100 + 7, y)
    assert pipe.score(X * 100 + 7, y) > 0.95


def test_normalizer_constant_feature():
    out = MinMaxNormalizer().fit_transform([[1.0, 2.0], [3.0, 2.0]])
    assert out.tolist() == [[-1.0, 0.0], [1.0, 0.0]]
