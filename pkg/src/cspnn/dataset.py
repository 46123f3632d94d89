"""Labeled dataset value type."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ContractViolation
from .validation import as_label, check_labels, check_matrix


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Ordered sequence of ``(pattern, label)`` pairs.

    Presentation order is part of the value: construction is order
    sensitive, so every helper here preserves relative order.

    Parameters
    ----------
    X : array_like, shape (n_samples, n_features)
    y : array_like, shape (n_samples,)
        Class labels, compared by equality only.
    name : str, optional
    """

    X: np.ndarray
    y: np.ndarray
    name: str = ""
    dimension: int = field(init=False)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim == 1 and X.size == 0:
            X = X.reshape(0, 0)
        X = check_matrix(X)
        y = check_labels(self.y, X.shape[0])
        X = X.copy()
        X.flags.writeable = False
        y = y.copy()
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "dimension", X.shape[1])

    def __len__(self):
        return self.X.shape[0]

    def __iter__(self):
        return zip(self.X, self.y)

    def classes(self) -> list:
        """Distinct labels in order of first appearance."""
        return [as_label(v) for v in dict.fromkeys(self.y.tolist())]

    def take(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices)
        return LabeledDataset(self.X[idx], self.y[idx], self.name)

    def only(self, labels) -> "LabeledDataset":
        """Samples whose label is in ``labels``, original order kept."""
        wanted = set(as_label(v) for v in labels)
        mask = np.fromiter((as_label(v) in wanted for v in self.y.tolist()),
                           dtype=bool, count=len(self))
        return self.take(np.flatnonzero(mask))

    def with_X(self, X) -> "LabeledDataset":
        return LabeledDataset(X, self.y, self.name)

    @staticmethod
    def concat(parts) -> "LabeledDataset":
        parts = list(parts)
        if not parts:
            raise ContractViolation("nothing to concatenate")
        dims = {p.dimension for p in parts}
        if len(dims) != 1:
            raise ContractViolation(f"datasets disagree on dimension: {sorted(dims)}")
        return LabeledDataset(np.vstack([p.X for p in parts]),
                              np.concatenate([p.y for p in parts]), parts[0].name)
