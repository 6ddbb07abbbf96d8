"""Dense symmetric matrix helpers.

Matrices are plain float64 numpy arrays flagged read-only once validated.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

ASYMMETRY_TOL = 1e-12


def symmat(a, name: str = "matrix") -> np.ndarray:
    """Validate and symmetrize ``a`` into a read-only ``(k, k)`` array.

    Raises ``ValueError`` if ``a`` is not square, has non-finite entries,
    or deviates from symmetry by more than ``ASYMMETRY_TOL`` in max-norm.
    """
    M = np.array(a, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise ValueError(f"{name}: expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name}: non-finite entries")
    asym = np.max(np.abs(M - M.T))
    if asym > ASYMMETRY_TOL:
        raise ValueError(f"{name}: asymmetry {asym:.3g} exceeds {ASYMMETRY_TOL:g}")
    M = 0.5 * (M + M.T)
    M.flags.writeable = False
    return M


def lambda_min(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(M)[0])


def is_psd(M: np.ndarray, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return lambda_min(M) >= -tol


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    """Direct sum of square blocks."""
    if len(blocks) == 0:
        raise ValueError("no blocks")
    blocks = [np.atleast_2d(np.asarray(b, dtype=float)) for b in blocks]
    k = sum(b.shape[0] for b in blocks)
    out = np.zeros((k, k))
    o = 0
    for b in blocks:
        d = b.shape[0]
        out[o:o + d, o:o + d] = b
        o += d
    return out
