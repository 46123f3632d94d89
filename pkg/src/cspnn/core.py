"""Network data structures and the feed-forward mathematics.

A CS-PNN is a three-layer RBF network whose hidden-to-output weights are
binary: every hidden unit belongs to exactly one output unit (its *subnet*).
All hidden units share one radius, recomputed for every presented pattern as

    sigma = d_max / k

where ``d_max`` is the largest Euclidean distance between the pattern and
any stored centroid and ``k`` the number of output units. Class scores are
plain sums of the Gaussian activations of each subnet.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import ContractViolation, ModelEmptyError, NotFoundError
from .validation import as_label, check_matrix, check_positive, check_vector

#: ``d_max`` at or below this value takes the nearest-centroid fallback.
EPS = 1e-12

#: Sentinel returned by :func:`unique_radius` for a degenerate radius.
DEGENERATE_RADIUS = 0.0

# Below this best-class score the raw sums may have lost the winner to
# underflow; the argmax is then taken on distance-shifted activations.
_UNDERFLOW_GUARD = 1e-250


@dataclass(frozen=True)
class RbfUnit:
    """Read-only view of one hidden unit."""

    id: int
    subnet: int
    centroid: np.ndarray


@dataclass(frozen=True)
class OutputUnit:
    """Read-only view of one output unit."""

    index: int
    label: object


class ForwardResult(NamedTuple):
    scores: np.ndarray
    winner: int
    d_max: float


class CsPnnModel:
    """Growable collection of RBF units grouped into class subnets.

    Centroids live in a capacity-doubling buffer so appending a unit is
    amortised O(d). Unit ids are assigned from a monotone counter and never
    reused, so they stay valid across unrelated removals.

    Parameters
    ----------
    dimension : int
        Number of input features ``d``.
    """

    def __init__(self, dimension: int):
        dimension = int(dimension)
        if dimension < 1:
            raise ContractViolation(f"dimension must be >= 1, got {dimension}")
        self.dimension = dimension
        self.next_unit_id = 0
        self._labels: list = []
        self._label_index: dict = {}
        self._size = 0
        self._centroids = np.empty((8, dimension), dtype=np.float64)
        self._subnets = np.empty(8, dtype=np.intp)
        self._ids = np.empty(8, dtype=np.int64)

    # -- read access -----------------------------------------------------
    @property
    def n_hidden(self) -> int:
        return self._size

    @property
    def n_outputs(self) -> int:
        return len(self._labels)

    @property
    def labels(self) -> tuple:
        return tuple(self._labels)

    @property
    def centroids(self) -> np.ndarray:
        view = self._centroids[:self._size]
        view.flags.writeable = False
        return view

    @property
    def subnets(self) -> np.ndarray:
        view = self._subnets[:self._size]
        view.flags.writeable = False
        return view

    @property
    def unit_ids(self) -> np.ndarray:
        view = self._ids[:self._size]
        view.flags.writeable = False
        return view

    @property
    def hidden_units(self) -> list[RbfUnit]:
        return [RbfUnit(int(i), int(s), c.copy())
                for i, s, c in zip(self.unit_ids, self.subnets, self.centroids)]

    @property
    def output_units(self) -> list[OutputUnit]:
        return [OutputUnit(k, label) for k, label in enumerate(self._labels)]

    def is_empty(self) -> bool:
        return self._size == 0

    def has_label(self, label) -> bool:
        return as_label(label) in self._label_index

    def output_index(self, label) -> int:
        try:
            return self._label_index[as_label(label)]
        except KeyError:
            raise NotFoundError(f"no output unit for class {label!r}") from None

    def subnet_sizes(self) -> np.ndarray:
        return np.bincount(self.subnets, minlength=self.n_outputs)

    # -- mutation (single writer) ---------------------------------------
    def add_output(self, label) -> int:
        label = as_label(label)
        if label in self._label_index:
            raise ContractViolation(f"class {label!r} already has an output unit")
        self._label_index[label] = len(self._labels)
        self._labels.append(label)
        return len(self._labels) - 1

    def add_unit(self, centroid, subnet: int) -> int:
        """Append a hidden unit owned by output ``subnet``; return its id."""
        if not 0 <= subnet < self.n_outputs:
            raise ContractViolation(f"subnet {subnet} does not exist")
        centroid = check_vector(centroid, self.dimension, "centroid")
        if self._size == self._centroids.shape[0]:
            self._grow()
        row = self._size
        self._centroids[row] = centroid
        self._subnets[row] = subnet
        self._ids[row] = self.next_unit_id
        self.next_unit_id += 1
        self._size += 1
        return int(self._ids[row])

    def move_centroid_to_midpoint(self, row: int, x: np.ndarray) -> None:
        self._centroids[row] = (self._centroids[row] + x) / 2.0

    def remove_rows(self, rows) -> None:
        """Drop the hidden units at the given row positions."""
        keep = np.ones(self._size, dtype=bool)
        keep[np.asarray(rows, dtype=np.intp)] = False
        n = int(keep.sum())
        self._centroids[:n] = self._centroids[:self._size][keep]
        self._subnets[:n] = self._subnets[:self._size][keep]
        self._ids[:n] = self._ids[:self._size][keep]
        self._size = n

    def remove_outputs(self, indices) -> None:
        """Drop output units (and every hidden unit they own); reindex the rest."""
        drop = set(int(i) for i in indices)
        owned = np.flatnonzero(np.isin(self.subnets, list(drop)))
        self.remove_rows(owned)
        remap = np.full(self.n_outputs, -1, dtype=np.intp)
        kept = [k for k in range(self.n_outputs) if k not in drop]
        remap[kept] = np.arange(len(kept))
        self._subnets[:self._size] = remap[self._subnets[:self._size]]
        self._labels = [self._labels[k] for k in kept]
        self._label_index = {label: k for k, label in enumerate(self._labels)}

    def _grow(self) -> None:
        cap = 2 * self._centroids.shape[0]
        for name in ("_centroids", "_subnets", "_ids"):
            old = getattr(self, name)
            new = np.empty((cap,) + old.shape[1:], dtype=old.dtype)
            new[:self._size] = old[:self._size]
            setattr(self, name, new)

    # -- misc --------------------------------------------------------------
    def copy(self) -> "CsPnnModel":
        other = CsPnnModel(self.dimension)
        other.next_unit_id = self.next_unit_id
        other._labels = list(self._labels)
        other._label_index = dict(self._label_index)
        other._size = self._size
        other._centroids = self._centroids.copy()
        other._subnets = self._subnets.copy()
        other._ids = self._ids.copy()
        return other

    def same_as(self, other: "CsPnnModel") -> bool:
        """Bit-exact structural equality (labels, ids, subnets, centroids)."""
        return (self.dimension == other.dimension
                and self.next_unit_id == other.next_unit_id
                and self._labels == other._labels
                and np.array_equal(self.unit_ids, other.unit_ids)
                and np.array_equal(self.subnets, other.subnets)
                and self.centroids.tobytes() == other.centroids.tobytes())

    def __repr__(self):
        return (f"CsPnnModel(dimension={self.dimension}, n_hidden={self.n_hidden}, "
                f"n_outputs={self.n_outputs})")


def activation(x, c, sigma: float) -> float:
    """Gaussian RBF activation ``exp(-||x - c||^2 / sigma^2)``."""
    x = check_vector(x, name="x")
    c = check_vector(c, x.shape[0], name="c")
    sigma = check_positive(sigma, "sigma")
    diff = x - c
    return float(np.exp(-np.dot(diff, diff) / (sigma * sigma)))


def unique_radius(d_max: float, k: int) -> float:
    """Shared radius ``d_max / k``.

    Returns :data:`DEGENERATE_RADIUS` when ``d_max <= EPS``; callers then
    fall back to exact-match (nearest-centroid) activations.
    """
    if int(k) != k or k < 1:
        raise ContractViolation(f"class count k must be a positive integer, got {k}")
    d_max = float(d_max)
    if d_max < 0 or not np.isfinite(d_max):
        raise ContractViolation(f"d_max must be a finite non-negative number, got {d_max}")
    if d_max <= EPS:
        return DEGENERATE_RADIUS
    return d_max / k


def sq_distances(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Squared Euclidean distances, shape ``(len(X), len(centroids))``."""
    return cdist(X, centroids, "sqeuclidean")


def max_centroid_distance(model: CsPnnModel, x) -> float:
    """Largest Euclidean distance between ``x`` and any centroid."""
    _require_units(model)
    x = check_vector(x, model.dimension)
    d2 = sq_distances(x[None, :], model.centroids)[0]
    return float(np.sqrt(d2.max()))


def forward(model: CsPnnModel, x, *, radius_scale: float | None = None) -> ForwardResult:
    """Feed one pattern through the network.

    Parameters
    ----------
    model : CsPnnModel
    x : array_like, shape (d,)
    radius_scale : float, optional
        Replace the adaptive radius ``d_max / k`` by ``radius_scale * d_max``.
        Only meant for limit experiments (e.g. the nearest-centroid limit).

    Returns
    -------
    ForwardResult
        ``scores`` (one per output unit), the winning output index (smallest
        index on ties) and the ``d_max`` used for the radius.
    """
    _require_units(model)
    x = check_vector(x, model.dimension)
    scores, winners, d_max, _ = forward_rows(model, x[None, :], radius_scale=radius_scale)
    return ForwardResult(scores[0], int(winners[0]), float(d_max[0]))


def forward_rows(model: CsPnnModel, X: np.ndarray, *, sigma: float | None = None,
                 radius_scale: float | None = None):
    """Vectorised forward pass over the rows of ``X`` (already validated).

    With ``sigma`` given the radius is fixed (static PNN); otherwise it is
    recomputed per row from that row's ``d_max``.

    Returns ``(scores, winners, d_max, d2)``.
    """
    d2 = sq_distances(X, model.centroids)
    d_max = np.sqrt(d2.max(axis=1))
    if sigma is not None:
        radius = np.full(X.shape[0], float(sigma))
    elif radius_scale is not None:
        radius = np.where(d_max > EPS, radius_scale * d_max, DEGENERATE_RADIUS)
    else:
        k = model.n_outputs
        radius = np.where(d_max > EPS, d_max / k, DEGENERATE_RADIUS)
    scores, winners = class_scores(d2, model.subnets, model.n_outputs, radius)
    return scores, winners, d_max, d2


def class_scores(d2: np.ndarray, subnets: np.ndarray, k: int, radius: np.ndarray):
    """Sum subnet activations for each row of squared distances ``d2``.

    Rows whose radius equals :data:`DEGENERATE_RADIUS` use the sigma -> 0
    limit: activation 1 for an exact centroid match, 0 otherwise.
    """
    m = d2.shape[0]
    degenerate = radius <= DEGENERATE_RADIUS
    regular = ~degenerate
    z = np.zeros_like(d2)
    if regular.any():
        z[regular] = d2[regular] / (radius[regular, None] ** 2)
    with np.errstate(under="ignore"):
        h = np.exp(-z)
    if degenerate.any():
        h[degenerate] = (d2[degenerate] == 0.0)

    members = [subnets == c for c in range(k)]
    scores = _sum_by_subnet(h, members)
    winners = scores.argmax(axis=1) if k else np.zeros(m, dtype=np.intp)

    weak = regular & (scores.max(axis=1, initial=0.0) < _UNDERFLOW_GUARD)
    if weak.any():
        zs = z[weak] - z[weak].min(axis=1, keepdims=True)
        with np.errstate(under="ignore"):
            shifted = _sum_by_subnet(np.exp(-zs), members)
        winners[weak] = shifted.argmax(axis=1)
    return scores, winners


def _sum_by_subnet(h: np.ndarray, members: list) -> np.ndarray:
    out = np.zeros((h.shape[0], len(members)))
    for c, cols in enumerate(members):
        if cols.any():
            out[:, c] = h[:, cols].sum(axis=1)
    return out


def check_model_input(model: CsPnnModel, X) -> np.ndarray:
    _require_units(model)
    return check_matrix(X, model.dimension)


def _require_units(model: CsPnnModel) -> None:
    if model.is_empty():
        raise ModelEmptyError("the model has no hidden units")
