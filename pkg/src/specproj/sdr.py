"""Semidefinite representations and the constructions between them.

A representation ``R`` describes the set

    S = {x in R^n : exists z in R^m with A + sum_i x_i B_i + sum_j z_j C_j >= 0}

where every coefficient is a symmetric ``k x k`` matrix. Every construction
here is a pure function from representations to a new representation; no
numerical optimization happens in this module.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from specproj.symcore import ASYMMETRY_TOL, block_diag

_OFFDIAG = np.array([[0.0, 1.0], [1.0, 0.0]])


def _stack(mats, k: int, name: str) -> np.ndarray:
    arr = np.array(mats, dtype=float)
    if arr.size == 0:
        return np.zeros((0, k, k))
    if arr.ndim != 3 or arr.shape[1:] != (k, k):
        raise ValueError(f"{name}: expected a list of {k}x{k} matrices, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: non-finite entries")
    asym = np.max(np.abs(arr - arr.transpose(0, 2, 1)))
    if asym > ASYMMETRY_TOL:
        raise ValueError(f"{name}: asymmetry {asym:.3g} exceeds {ASYMMETRY_TOL:g}")
    return 0.5 * (arr + arr.transpose(0, 2, 1))


@dataclass(frozen=True, eq=False)
class SDRep:
    """Projection of a spectrahedron.

    ``A`` is ``(k, k)``, ``B`` is ``(n, k, k)`` and ``C`` is ``(m, k, k)``.
    ``blocks`` records the sizes of the diagonal blocks when the pencil is a
    known direct sum; it must be consistent with the sparsity of every
    coefficient.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray = field(default_factory=lambda: np.zeros((0, 1, 1)))
    ambient_labels: tuple[str, ...] | None = None
    lifted_labels: tuple[str, ...] | None = None
    blocks: tuple[int, ...] | None = None
    provenance: str = ""

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise ValueError(f"A: expected a non-empty square matrix, got shape {A.shape}")
        k = A.shape[0]
        A = _stack([A], k, "A")[0]
        B = _stack(self.B, k, "B")
        C = _stack(self.C, k, "C")
        if B.shape[0] < 1:
            raise ValueError("B: ambient dimension n must be at least 1")
        for arr in (A, B, C):
            arr.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

        n, m = B.shape[0], C.shape[0]
        amb = self.ambient_labels
        amb = tuple(f"x{i + 1}" for i in range(n)) if amb is None else tuple(amb)
        lif = self.lifted_labels
        lif = tuple(f"z{j + 1}" for j in range(m)) if lif is None else tuple(lif)
        if len(amb) != n:
            raise ValueError(f"ambient_labels: expected {n} names, got {len(amb)}")
        if len(lif) != m:
            raise ValueError(f"lifted_labels: expected {m} names, got {len(lif)}")
        object.__setattr__(self, "ambient_labels", amb)
        object.__setattr__(self, "lifted_labels", lif)

        blocks = (k,) if self.blocks is None else tuple(int(b) for b in self.blocks)
        if any(b < 1 for b in blocks) or sum(blocks) != k:
            raise ValueError(f"blocks: sizes {blocks} do not partition dimension {k}")
        if len(blocks) > 1:
            mask = block_diag([np.ones((b, b)) for b in blocks]) == 0
            for name, arr in (("A", A[None]), ("B", B), ("C", C)):
                if arr.size and np.any(arr[:, mask] != 0):
                    raise ValueError(f"{name}: nonzero entries outside the declared blocks {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def k(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def m(self) -> int:
        return self.C.shape[0]

    def __repr__(self):
        tag = f" {self.provenance}" if self.provenance else ""
        return f"<SDRep k={self.k} n={self.n} m={self.m}{tag}>"

    def base_matrix(self, x) -> np.ndarray:
        """``A + sum_i x_i B_i``, the pencil with the lifted part dropped."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"point has length {x.size}, representation has n={self.n}")
        return self.A + np.tensordot(x, self.B, axes=1)

    def pencil(self, x, z=()) -> np.ndarray:
        return pencil_eval(self, x, z)


def pencil_eval(R: SDRep, x, z=()) -> np.ndarray:
    """``A + sum_i x_i B_i + sum_j z_j C_j``."""
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.shape != (R.m,):
        raise ValueError(f"lifted vector has length {z.size}, representation has m={R.m}")
    M = R.base_matrix(x)
    if R.m:
        M = M + np.tensordot(z, R.C, axes=1)
    return M


def _name(R: SDRep) -> str:
    return R.provenance or "R"


def _fresh(name: str, taken) -> str:
    if name not in taken:
        return name
    i = 2
    while f"{name}{i}" in taken:
        i += 1
    return f"{name}{i}"


def _conic_lift(R: SDRep):
    # Block 0 keeps the original pencil; slot i (2x2) holds [[lam, x_i], [x_i, r]].
    k, n = R.k, R.n
    K = k + 2 * n
    B = np.zeros((n, K, K))
    B[:, :k, :k] = R.B
    C = np.zeros((R.m, K, K))
    C[:, :k, :k] = R.C
    lam = np.zeros((K, K))
    lam[:k, :k] = R.A
    r = np.zeros((K, K))
    for i in range(n):
        o = k + 2 * i
        B[i, o:o + 2, o:o + 2] = _OFFDIAG
        lam[o, o] = 1.0
        r[o + 1, o + 1] = 1.0
    return B, C, lam, r, R.blocks + (2,) * n


def cone_hull(R: SDRep) -> SDRep:
    """Conic hull of ``R``; the scale ``lam`` and the shared bound ``r`` are lifted."""
    B, C, lam, r, blocks = _conic_lift(R)
    lifted = list(R.lifted_labels)
    lifted.append(_fresh("lam", lifted))
    lifted.append(_fresh("r", lifted))
    return SDRep(
        A=np.zeros_like(lam),
        B=B,
        C=np.concatenate([C, lam[None], r[None]]),
        ambient_labels=R.ambient_labels,
        lifted_labels=tuple(lifted),
        blocks=blocks,
        provenance=f"cone_hull({_name(R)})",
    )


def homogenize(R: SDRep) -> SDRep:
    """Conic hull of ``S x {1}``, with the homogenizing scale as coordinate n+1."""
    B, C, lam, r, blocks = _conic_lift(R)
    lifted = list(R.lifted_labels)
    lifted.append(_fresh("r", lifted))
    return SDRep(
        A=np.zeros_like(lam),
        B=np.concatenate([B, lam[None]]),
        C=np.concatenate([C, r[None]]),
        ambient_labels=R.ambient_labels + (_fresh("lam", R.ambient_labels),),
        lifted_labels=tuple(lifted),
        blocks=blocks,
        provenance=f"homogenize({_name(R)})",
    )


def slice_last_at_one(R: SDRep) -> SDRep:
    """``{x in R^(n-1) : (x, 1) in S}``."""
    if R.n == 1:
        raise ValueError("cannot slice to ambient dimension 0")
    return SDRep(
        A=R.A + R.B[-1],
        B=R.B[:-1],
        C=R.C,
        ambient_labels=R.ambient_labels[:-1],
        lifted_labels=R.lifted_labels,
        blocks=R.blocks,
        provenance=f"slice({_name(R)})",
    )


def _check_same_n(R1: SDRep, R2: SDRep):
    if R1.n != R2.n:
        raise ValueError(f"ambient dimension mismatch: {R1.n} != {R2.n}")


def _pad(mats: np.ndarray, before: int, after: int) -> np.ndarray:
    return np.pad(mats, ((0, 0), (before, after), (before, after)))


def _minkowski2(R1: SDRep, R2: SDRep) -> SDRep:
    # x = u + (x - u): u is lifted, the second summand reads x - u.
    _check_same_n(R1, R2)
    k1, k2 = R1.k, R2.k
    u = _pad(R1.B, 0, k2) + _pad(-R2.B, k1, 0)
    lifted = [f"u_{a}" for a in R1.ambient_labels]
    for prefix, labels in (("a.", R1.lifted_labels), ("b.", R2.lifted_labels)):
        for lab in labels:
            lifted.append(_fresh(prefix + lab, lifted))
    return SDRep(
        A=block_diag([R1.A, R2.A]),
        B=_pad(R2.B, k1, 0),
        C=np.concatenate([u, _pad(R1.C, 0, k2), _pad(R2.C, k1, 0)]),
        ambient_labels=R1.ambient_labels,
        lifted_labels=tuple(lifted),
        blocks=R1.blocks + R2.blocks,
        provenance=f"minkowski({_name(R1)}, {_name(R2)})",
    )


def minkowski_sum(first: SDRep, *rest: SDRep) -> SDRep:
    """Minkowski sum, folding pairwise from the left."""
    out = first
    for R in rest:
        out = _minkowski2(out, R)
    return out


def _merge_lifted(R1: SDRep, R2: SDRep) -> tuple[str, ...]:
    lifted = list(R1.lifted_labels)
    for lab in R2.lifted_labels:
        lifted.append(_fresh(lab, lifted))
    return tuple(lifted)


def intersection(R1: SDRep, R2: SDRep) -> SDRep:
    _check_same_n(R1, R2)
    k1, k2 = R1.k, R2.k
    return SDRep(
        A=block_diag([R1.A, R2.A]),
        B=_pad(R1.B, 0, k2) + _pad(R2.B, k1, 0),
        C=np.concatenate([_pad(R1.C, 0, k2), _pad(R2.C, k1, 0)]),
        ambient_labels=R1.ambient_labels,
        lifted_labels=_merge_lifted(R1, R2),
        blocks=R1.blocks + R2.blocks,
        provenance=f"intersect({_name(R1)}, {_name(R2)})",
    )


def product(R1: SDRep, R2: SDRep) -> SDRep:
    """Cartesian product ``S1 x S2`` over ``R^(n1 + n2)``."""
    k1, k2 = R1.k, R2.k
    ambient = list(R1.ambient_labels)
    for lab in R2.ambient_labels:
        ambient.append(_fresh(lab, ambient))
    return SDRep(
        A=block_diag([R1.A, R2.A]),
        B=np.concatenate([_pad(R1.B, 0, k2), _pad(R2.B, k1, 0)]),
        C=np.concatenate([_pad(R1.C, 0, k2), _pad(R2.C, k1, 0)]),
        ambient_labels=tuple(ambient),
        lifted_labels=_merge_lifted(R1, R2),
        blocks=R1.blocks + R2.blocks,
        provenance=f"product({_name(R1)}, {_name(R2)})",
    )


def convex_hull_union(reps: Sequence[SDRep]) -> SDRep:
    """Convex hull of the union of the sets, via homogenize / sum / slice."""
    reps = list(reps)
    if not reps:
        raise ValueError("convex_hull_union needs at least one representation")
    for R in reps[1:]:
        _check_same_n(reps[0], R)
    out = slice_last_at_one(minkowski_sum(*[homogenize(R) for R in reps]))
    names = ", ".join(_name(R) for R in reps)
    return _with_provenance(out, f"conv_union({names})")


def _with_provenance(R: SDRep, provenance: str) -> SDRep:
    return SDRep(
        A=R.A, B=R.B, C=R.C,
        ambient_labels=R.ambient_labels,
        lifted_labels=R.lifted_labels,
        blocks=R.blocks,
        provenance=provenance,
    )
