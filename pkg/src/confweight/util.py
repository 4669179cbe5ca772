"""Small shared helpers: seeds, deterministic reductions, float formatting."""
from __future__ import annotations

import os

import numpy as np

DEFAULT_SEED = 0x5EED


def default_seed() -> int:
    """Seed for all randomized families; the CW_SEED env var overrides it."""
    raw = os.environ.get("CW_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw, 0)
    except ValueError:
        raise ValueError(
            f"CW_SEED must be an integer (decimal or 0x-prefixed hex), got {raw!r}"
        ) from None


def pairwise_sum(values: np.ndarray) -> float:
    """Sum a 1-d array by explicit binary-tree halving.

    The reduction order is fixed by the array layout, so repeated runs on
    identical inputs are bit-identical regardless of how numpy was built.
    """
    flat = np.ascontiguousarray(values, dtype=float).ravel()
    if flat.size == 0:
        return 0.0
    while flat.size > 1:
        if flat.size % 2:
            flat = np.concatenate([flat[0:-1:2] + flat[1::2], flat[-1:]])
        else:
            flat = flat[0::2] + flat[1::2]
    return float(flat[0])


def fmt17(x: float) -> str:
    """Format with 17 significant digits (enough to round-trip binary64)."""
    return format(float(x), ".17g")


def as_complex_array(z) -> tuple[np.ndarray, bool]:
    """Coerce scalars/arrays to a complex ndarray, rejecting NaN/Inf.

    Returns the array and a flag telling whether the input was scalar.
    """
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError("complex input must have finite components")
    return arr, arr.ndim == 0
