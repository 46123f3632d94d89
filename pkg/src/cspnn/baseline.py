"""Original (static) PNN: one RBF per training pattern, fixed radius.

The radius is ``D_max / N_c`` with ``D_max`` the largest distance between
any two training patterns and ``N_c`` the number of classes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CsPnnModel, sq_distances
from .dataset import LabeledDataset
from .exceptions import ContractViolation
from .learning import EvalReport, evaluate

_BLOCK_ROWS = 512


@dataclass
class StaticPnnModel:
    network: CsPnnModel
    d_max: float
    sigma: float

    @property
    def n_hidden(self) -> int:
        return self.network.n_hidden

    @property
    def labels(self) -> tuple:
        return self.network.labels


def max_pairwise_distance(X: np.ndarray) -> float:
    """Largest Euclidean distance over all pairs of rows of ``X``.

    Rows are scanned in blocks against the upper triangle, so memory stays
    at ``_BLOCK_ROWS * n`` distances instead of ``n * n``.
    """
    X = np.asarray(X, dtype=np.float64)
    best = 0.0
    n = X.shape[0]
    for start in range(0, n, _BLOCK_ROWS):
        block = X[start:start + _BLOCK_ROWS]
        d2 = sq_distances(block, X[start:])
        if d2.size:
            best = max(best, float(d2.max()))
    return float(np.sqrt(best))


def build_static(data: LabeledDataset) -> StaticPnnModel:
    """Store every training pattern as a centroid and fix the radius."""
    if len(data) == 0:
        raise ContractViolation("cannot build a PNN from an empty dataset")
    net = CsPnnModel(data.dimension)
    for x, t in zip(data.X, data.y.tolist()):
        if not net.has_label(t):
            net.add_output(t)
        net.add_unit(x, net.output_index(t))
    d_max = max_pairwise_distance(data.X)
    return StaticPnnModel(net, d_max, d_max / net.n_outputs)


def evaluate_static(model: StaticPnnModel, data: LabeledDataset, *,
                    sigma: float | None = None) -> EvalReport:
    """Test with the fixed radius (``sigma`` overrides it, e.g. for limit checks).

    A radius of zero (all training patterns identical) takes the exact-match
    fallback.
    """
    radius = model.sigma if sigma is None else float(sigma)
    return evaluate(model.network, data, sigma=radius)
