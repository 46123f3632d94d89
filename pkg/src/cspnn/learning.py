"""One-pass construction, unlearning and testing of a CS-PNN."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import CsPnnModel, check_model_input, forward_rows
from .dataset import LabeledDataset
from .exceptions import ContractViolation, NotFoundError
from .validation import as_label

# rows per evaluation chunk are capped so chunk * n_hidden stays near this
_CHUNK_ELEMENTS = 1 << 21


@dataclass
class EvalReport:
    """Outcome of testing a model on one labeled dataset."""

    total: int
    correct: int
    per_class: dict = field(default_factory=dict)
    predictions: list = field(default_factory=list)
    hidden_count: int = 0
    wall_time: float = 0.0

    @property
    def accuracy(self) -> float:
        """Percentage of correctly classified samples (NaN when empty)."""
        if self.total == 0:
            return float("nan")
        return 100.0 * self.correct / self.total

    def class_accuracy(self, label) -> float:
        count, correct = self.per_class[label]
        return 100.0 * correct / count


def construct(model: CsPnnModel | None, data: LabeledDataset) -> CsPnnModel:
    """Grow (or regrow) a CS-PNN in a single pass over ``data``.

    For each presented pattern ``x`` with label ``t``:

    * if ``t`` has no output unit, add one together with an RBF centred
      at ``x`` (this also seeds an empty model);
    * otherwise classify ``x`` with the adaptive radius. A miss adds an RBF
      at ``x`` to the subnet of ``t``; a hit moves the most activated RBF
      of the winning subnet halfway towards ``x``.

    The model is updated in place and returned. Passing ``None`` starts from
    an empty network of the dataset's dimension.
    """
    if model is None:
        model = CsPnnModel(max(data.dimension, 1))
    if len(data) == 0:
        return model
    if data.dimension != model.dimension:
        raise ContractViolation(
            f"data has {data.dimension} features, model expects {model.dimension}")

    for x, t in zip(data.X, data.y.tolist()):
        if not model.has_label(t):
            model.add_unit(x, model.add_output(t))
            continue
        target = model.output_index(t)
        if model.is_empty():
            # outputs survived instance-wise unlearning of every unit
            model.add_unit(x, target)
            continue
        _, winners, _, d2 = forward_rows(model, x[None, :])
        winner = int(winners[0])
        if winner != target:
            model.add_unit(x, target)
        else:
            members = np.flatnonzero(model.subnets == winner)
            best = members[np.argmin(d2[0, members])]
            model.move_centroid_to_midpoint(int(best), x)
    return model


def unlearn_units(model: CsPnnModel, ids) -> CsPnnModel:
    """Remove the hidden units with the given ids.

    Output units are kept even when their subnet becomes empty. Raises
    :class:`NotFoundError` (model untouched) for unknown ids.
    """
    ids = [int(i) for i in ids]
    if len(set(ids)) != len(ids):
        raise ContractViolation("duplicate unit ids")
    position = {int(uid): row for row, uid in enumerate(model.unit_ids)}
    missing = [i for i in ids if i not in position]
    if missing:
        raise NotFoundError(f"unknown unit id(s): {missing}")
    if ids:
        model.remove_rows([position[i] for i in ids])
    return model


def unlearn_classes(model: CsPnnModel, labels) -> CsPnnModel:
    """Remove whole class subnets (output unit plus every RBF it owns)."""
    labels = [as_label(v) for v in labels]
    if len(set(labels)) != len(labels):
        raise ContractViolation("duplicate class labels")
    missing = [v for v in labels if not model.has_label(v)]
    if missing:
        raise NotFoundError(f"unknown class label(s): {missing}")
    if labels:
        model.remove_outputs([model.output_index(v) for v in labels])
    return model


def predict_indices(model: CsPnnModel, X, *, sigma=None, radius_scale=None):
    """Winning output index and class scores for every row of ``X``."""
    X = check_model_input(model, X)
    k = model.n_outputs
    winners = np.empty(X.shape[0], dtype=np.intp)
    scores = np.empty((X.shape[0], k))
    step = max(1, _CHUNK_ELEMENTS // max(model.n_hidden, 1))
    for start in range(0, X.shape[0], step):
        stop = start + step
        s, w, _, _ = forward_rows(model, X[start:stop], sigma=sigma,
                                  radius_scale=radius_scale)
        scores[start:stop] = s
        winners[start:stop] = w
    return winners, scores


def evaluate(model: CsPnnModel, data: LabeledDataset, *, radius_scale=None,
             sigma=None) -> EvalReport:
    """Classify every sample of ``data``; the model is not modified."""
    start = time.perf_counter()
    X = data.X if len(data) else np.empty((0, model.dimension))
    winners, _ = predict_indices(model, X, sigma=sigma, radius_scale=radius_scale)
    labels = model.labels
    per_class: dict = {}
    predictions = []
    correct = 0
    for t, w in zip(data.y.tolist(), winners):
        t = as_label(t)
        p = labels[w]
        hit = p == t
        correct += hit
        count, good = per_class.get(t, (0, 0))
        per_class[t] = (count + 1, good + hit)
        predictions.append((t, p))
    return EvalReport(total=len(data), correct=int(correct), per_class=per_class,
                      predictions=predictions, hidden_count=model.n_hidden,
                      wall_time=time.perf_counter() - start)
