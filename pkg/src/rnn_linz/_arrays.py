"""Input coercion and validation helpers (internal)."""

from __future__ import annotations

import numpy as np

from .errors import NonFiniteError, ShapeMismatchError


def as_float_vector(v, n=None, name="vector"):
    """Coerce to a finite 1-d float64 array, optionally of length n."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ShapeMismatchError(f"{name} must be 1-d, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ShapeMismatchError(f"{name} has length {arr.shape[0]}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr


def as_float_matrix(m, shape=None, name="matrix"):
    """Coerce to a finite 2-d float64 array, optionally of a given shape."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-d, got shape {arr.shape}")
    if shape is not None and arr.shape != shape:
        raise ShapeMismatchError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite entries")
    return arr
