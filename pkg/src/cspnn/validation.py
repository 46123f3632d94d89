"""Input validation helpers.

These raise :class:`~cspnn.exceptions.ContractViolation` rather than the
generic ``ValueError`` so callers (and the CLI) can tell bad input apart from
parse or I/O failures.
"""
from __future__ import annotations

import numpy as np

from .exceptions import ContractViolation


def as_label(value):
    """Return a hashable plain-Python label (numpy scalars are unwrapped)."""
    if isinstance(value, np.generic):
        return value.item()
    return value


def check_vector(x, dimension: int | None = None, name: str = "x") -> np.ndarray:
    """Validate a single feature vector and return it as a float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ContractViolation(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dimension is not None and arr.shape[0] != dimension:
        raise ContractViolation(
            f"{name} has dimension {arr.shape[0]}, expected {dimension}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation(f"{name} contains NaN or infinite values")
    return arr


def check_matrix(X, dimension: int | None = None, name: str = "X",
                 allow_empty: bool = True) -> np.ndarray:
    """Validate a 2-D sample matrix (rows are patterns)."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, dimension or 0)
    if arr.ndim != 2:
        raise ContractViolation(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not allow_empty and arr.shape[0] == 0:
        raise ContractViolation(f"{name} is empty")
    if dimension is not None and arr.shape[1] != dimension:
        raise ContractViolation(
            f"{name} has {arr.shape[1]} features, expected {dimension}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation(f"{name} contains NaN or infinite values")
    return arr


def check_labels(y, n_samples: int) -> np.ndarray:
    """Validate a label vector; labels are opaque tokens compared by equality."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ContractViolation(f"labels must be one-dimensional, got shape {arr.shape}")
    if arr.shape[0] != n_samples:
        raise ContractViolation(
            f"got {arr.shape[0]} labels for {n_samples} samples")
    return arr


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0 or not np.isfinite(value):
        raise ContractViolation(f"{name} must be a positive finite number, got {value}")
    return value
