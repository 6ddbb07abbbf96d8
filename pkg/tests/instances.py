"""Shared test instances: the hyperbola and origin sets, and random small spectrahedra."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from specproj.sdr import SDRep
from specproj.symcore import lambda_min

DATA = Path(__file__).resolve().parents[1] / "src" / "specproj" / "data"


def hyperbola() -> SDRep:
    # [[x, 1], [1, y]] >= 0  <=>  x >= 0, y >= 0, xy >= 1
    return SDRep(
        A=[[0, 1], [1, 0]],
        B=[[[1, 0], [0, 0]], [[0, 0], [0, 1]]],
        ambient_labels=("x", "y"),
        provenance="hyperbola",
    )


def origin() -> SDRep:
    # diag(x, -x, y, -y) >= 0  <=>  x = y = 0
    return SDRep(
        A=np.zeros((4, 4)),
        B=[np.diag([1.0, -1, 0, 0]), np.diag([0.0, 0, 1, -1])],
        ambient_labels=("x", "y"),
        provenance="origin",
    )


def halfline(a: float, sign: float = 1.0) -> SDRep:
    """``{x in R : sign * (x - a) >= 0}``."""
    return SDRep(A=[[-sign * a]], B=[[[sign]]])


def random_sym(rng, k, lo=-2.0, hi=2.0):
    M = rng.uniform(lo, hi, (k, k))
    return np.triu(M) + np.triu(M, 1).T


def random_spectrahedron(rng, k, n=2):
    return SDRep(A=random_sym(rng, k), B=[random_sym(rng, k) for _ in range(n)])


def sample_members(R: SDRep, rng, count, box=3.0, draws=2000):
    """Rejection-sample points with ``lambda_min(pencil) >= 0`` (requires m = 0)."""
    pts = rng.uniform(-box, box, (draws, R.n))
    mats = R.A + np.tensordot(pts, R.B, axes=1)
    ok = np.linalg.eigvalsh(mats)[:, 0] >= 0
    return pts[ok][:count]


def spectrahedra_with_members(seed, count, members=3, kmax=4):
    """``count`` random spectrahedra in the plane, each with sampled members."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        R = random_spectrahedron(rng, int(rng.integers(1, kmax + 1)))
        pts = sample_members(R, rng, members)
        if len(pts):
            out.append((R, pts))
    return out


def margin0(R: SDRep, x) -> float:
    return lambda_min(R.base_matrix(np.asarray(x, dtype=float)))
