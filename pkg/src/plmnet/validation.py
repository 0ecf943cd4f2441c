"""Input validation helpers shared by the functional layer and the estimators."""

import numpy as np

from .exceptions import DimensionError, IngestionError


def as_1d_float(a, name):
    """Coerce to a contiguous 1-d float64 array, rejecting non-finite values."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise IngestionError(f"{name} contains a non-finite value at index {bad}", row=bad)
    return arr


def as_2d_float(a, name):
    """Coerce to a contiguous 2-d float64 array, rejecting non-finite values."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        i, j = np.argwhere(~np.isfinite(arr))[0]
        raise IngestionError(
            f"{name} contains a non-finite value at row {int(i)}, column {int(j)}",
            row=int(i),
            column=int(j),
        )
    return arr


def check_same_length(n, *pairs):
    """Check that each (length, name) pair matches n observations."""
    for length, name in pairs:
        if length != n:
            raise DimensionError(f"{name} has length {length}, expected {n}")


def check_positive(value, name):
    if not (value > 0):
        raise ValueError(f"{name} must be positive, got {value}")
    return float(value)


def check_nonnegative(value, name):
    if not (value >= 0):
        raise ValueError(f"{name} must be nonnegative, got {value}")
    return float(value)
