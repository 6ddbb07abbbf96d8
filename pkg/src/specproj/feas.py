"""Numerical membership oracle for semidefinite representations.

For a fixed point ``x`` the margin

    g(z) = lambda_min(A + sum_i x_i B_i + sum_j z_j C_j)

is concave in ``z``; ``x`` is a member iff ``sup_z g(z) >= 0`` (up to
closure effects). The oracle maximizes ``g`` over the box
``|z_j| <= radius`` in two phases:

1. ascent on the log-sum-exp smoothing
   ``f_beta(z) = -(1/beta) log sum_i exp(-beta lambda_i(z))`` with
   continuation over ``beta`` and Armijo backtracking, projected on the box;
2. a primal log-barrier Newton method on ``max t s.t. M(z) - t I >= 0``,
   which also yields a dual matrix ``W >= 0, tr W = 1`` and with it an upper
   bound on the supremum over the box.

Phase 1 alone stalls at an accuracy of about ``log(k)/beta``; phase 2 is what
resolves points whose margin sits within a few ``tol`` of zero.

Projections need not be closed. At a limit point that is not a member the
margin tends to 0 from below only as ``|z|`` grows, so such points come back
as EpsFeasible (or EpsInfeasible when the box is small enough for the
certificate to separate them), never StrictlyFeasible.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
import scipy.linalg

from specproj.sdr import SDRep
from specproj.symcore import lambda_min

DEFAULT_TOL = 1e-6
DEFAULT_RADIUS = 1e6
# Fraction of the radius beyond which a witness counts as touching the box.
RADIUS_HIT_FRACTION = 1 - 1e-3


class Status(str, Enum):
    STRICTLY_FEASIBLE = "StrictlyFeasible"
    EPS_FEASIBLE = "EpsFeasible"
    EPS_INFEASIBLE = "EpsInfeasible"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SmoothingSchedule:
    betas: tuple[float, ...] = (1.0, 10.0, 100.0, 1000.0)
    steps_per_stage: int = 500
    backtrack: float = 0.5
    armijo: float = 1e-4


@dataclass(frozen=True)
class FeasibilityReport:
    status: Status
    margin: float
    witness: np.ndarray
    iterations: int
    radius_hit: bool
    upper_bound: float

    @property
    def member(self) -> bool:
        return self.status is not Status.EPS_INFEASIBLE


class LambdaStar(NamedTuple):
    value: float
    witness: np.ndarray
    upper_bound: float
    iterations: int
    capped: bool


def softmin(eigs: np.ndarray, beta: float) -> float:
    """``-(1/beta) log sum exp(-beta * eigs)``, evaluated stably."""
    lo = float(np.min(eigs))
    return lo - math.log(float(np.sum(np.exp(-beta * (eigs - lo))))) / beta


def _softmin_parts(M0, C, z, beta):
    M = M0 + np.tensordot(z, C, axes=1) if len(C) else M0
    w, V = np.linalg.eigh(M)
    p = np.exp(-beta * (w - w[0]))
    s = p.sum()
    f = w[0] - math.log(s) / beta
    W = (V * (p / s)) @ V.T
    grad = np.einsum("jab,ab->j", C, W)
    return f, grad, float(w[0])


def surrogate(R: SDRep, x, z, beta: float) -> tuple[float, np.ndarray]:
    """Value and gradient in ``z`` of the smoothed minimum eigenvalue.

    The gradient component ``j`` is ``trace(W C_j)`` with ``W`` the
    softmax-weighted eigenprojector sum.
    """
    z = np.asarray(z, dtype=float).reshape(R.m)
    f, g, _ = _softmin_parts(R.base_matrix(x), R.C, z, beta)
    return f, g


def _smooth_ascent(M0, C, radius, z, schedule: SmoothingSchedule, stop_above):
    best_val, best_z = -math.inf, z
    evals = 0
    for beta in schedule.betas:
        f, g, lam = _softmin_parts(M0, C, z, beta)
        evals += 1
        if lam > best_val:
            best_val, best_z = lam, z
        step = 1.0 / beta
        # Progress below the surrogate's own resolution ends the stage.
        resolution = 1e-3 * math.log(max(M0.shape[0], 2)) / beta
        history = [f]
        for _ in range(schedule.steps_per_stage):
            accepted = False
            while step > 1e-16:
                zn = np.clip(z + step * g, -radius, radius)
                d = zn - z
                if not d.any():
                    break
                fn, gn, lamn = _softmin_parts(M0, C, zn, beta)
                evals += 1
                if fn >= f + schedule.armijo * float(g @ d):
                    accepted = True
                    break
                step *= schedule.backtrack
            if not accepted:
                break
            z, f, g = zn, fn, gn
            if lamn > best_val:
                best_val, best_z = lamn, z
            if best_val > stop_above:
                return best_val, best_z, evals
            step /= schedule.backtrack
            history.append(f)
            if len(history) > 10 and f - history[-11] < resolution:
                break
    return best_val, best_z, evals


def _dual_bound(W, M0, C, radius):
    # For W >= 0 with tr W = 1 and any |z'| <= radius:
    # lambda_min(M(z')) <= tr(W M(z')) <= tr(W M0) + radius * sum_j |tr(W C_j)|.
    g = np.einsum("jab,ab->j", C, W)
    return float(np.sum(W * M0) + radius * np.sum(np.abs(g)))


def _barrier(M0, C, radius, z0, *, lo, hi, gap_tol=1e-9, max_newton=600):
    """Log-barrier path following for ``max t : M(z) - t I >= 0, |z| < radius``."""
    m, k = C.shape[0], M0.shape[0]
    eye = np.eye(k)
    nu = k + 2 * m
    z = np.clip(z0, -0.99 * radius, 0.99 * radius)
    lam = lambda_min(M0 + np.tensordot(z, C, axes=1))
    t = lam - 1.0 - 1e-3 * abs(lam)
    mu = nu / max(1.0, abs(lam))

    best_val, best_z, upper = lam, z, math.inf
    newton = 0
    capped = False

    def factor(z, t):
        S = M0 + np.tensordot(z, C, axes=1) - t * eye
        try:
            L = np.linalg.cholesky(S)
        except np.linalg.LinAlgError:
            return None
        return L, 2.0 * float(np.sum(np.log(np.diag(L))))

    fac = factor(z, t)
    while True:
        stuck = False
        for _ in range(50):
            if newton >= max_newton:
                capped = True
                break
            newton += 1
            L, logdet = fac
            Linv = scipy.linalg.solve_triangular(L, eye, lower=True)
            Si = Linv.T @ Linv
            G = np.matmul(Si, C)
            up, dn = radius - z, radius + z
            grad = np.empty(m + 1)
            grad[:m] = -np.einsum("jaa->j", G) + 1.0 / up - 1.0 / dn
            grad[m] = -mu + np.trace(Si)
            H = np.empty((m + 1, m + 1))
            H[:m, :m] = np.einsum("jab,lba->jl", G, G) + np.diag(1.0 / up**2 + 1.0 / dn**2)
            H[:m, m] = H[m, :m] = -np.einsum("jab,ba->j", G, Si)
            H[m, m] = np.sum(Si * Si)
            scale = 1.0 / np.sqrt(np.diag(H))
            try:
                step = scale * np.linalg.solve(H * np.outer(scale, scale), -grad * scale)
            except np.linalg.LinAlgError:
                step = scale * np.linalg.lstsq(H * np.outer(scale, scale), -grad * scale, rcond=None)[0]
            decrement = -float(grad @ step)
            if decrement <= 1e-10:
                break
            dz, dt = step[:m], step[m]
            s = 1.0
            moving = dz != 0
            if moving.any():
                room = np.where(dz[moving] > 0, up[moving], dn[moving]) / np.abs(dz[moving])
                s = min(1.0, 0.99 * float(room.min()))
            accepted = False
            while s > 1e-14:
                zn, tn = z + s * dz, t + s * dt
                fn = factor(zn, tn)
                if fn is not None:
                    dphi = (
                        -mu * s * dt
                        - (fn[1] - logdet)
                        - np.sum(np.log1p(-s * dz / up) + np.log1p(s * dz / dn))
                    )
                    if dphi <= -0.25 * s * decrement:
                        accepted = True
                        break
                s *= 0.5
            if not accepted:
                stuck = True
                break
            z, t, fac = zn, tn, fn

        val = lambda_min(M0 + np.tensordot(z, C, axes=1))
        if val > best_val:
            best_val, best_z = val, z
        L = fac[0]
        Linv = scipy.linalg.solve_triangular(L, eye, lower=True)
        Si = Linv.T @ Linv
        upper = min(upper, _dual_bound(Si / np.trace(Si), M0, C, radius))
        if best_val > hi or upper < lo or capped or stuck:
            break
        if upper - best_val <= gap_tol * max(1.0, abs(best_val)) or nu / mu <= 1e-3 * gap_tol:
            break
        mu *= 10.0
    return best_val, best_z, max(upper, best_val), newton, capped


def _maximize(R: SDRep, x, radius, schedule, seed, lo=-math.inf, hi=math.inf):
    x = np.asarray(x, dtype=float)
    if x.shape != (R.n,):
        raise ValueError(f"point has length {x.size}, representation has n={R.n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("point has non-finite coordinates")
    if not radius > 0:
        raise ValueError("radius must be positive")
    M0 = R.base_matrix(x)
    if R.m == 0:
        val = lambda_min(M0)
        return LambdaStar(val, np.zeros(0), val, 0, False)

    schedule = schedule or SmoothingSchedule()
    C = R.C
    rng = np.random.default_rng(seed)
    starts = [np.zeros(R.m), rng.uniform(-1.0, 1.0, R.m) * min(1.0, radius)]
    best_val, best_z, iters = -math.inf, starts[0], 0
    upper, capped = math.inf, False
    for z0 in starts:
        val, z, evals = _smooth_ascent(M0, C, radius, z0, schedule, hi)
        iters += evals
        if val > best_val:
            best_val, best_z = val, z
        if best_val > hi:
            return LambdaStar(best_val, best_z, math.inf, iters, False)
        val, z, ub, newton, capped = _barrier(M0, C, radius, best_z, lo=lo, hi=hi)
        iters += newton
        upper = min(upper, ub)
        if val > best_val:
            best_val, best_z = val, z
        # The restart only runs when the barrier phase could not close the gap.
        if best_val > hi or upper < lo or upper - best_val <= 1e-6 * max(1.0, abs(best_val)):
            break
    # Recompute so the reported value is exactly the margin at the witness.
    best_val = lambda_min(M0 + np.tensordot(best_z, C, axes=1))
    return LambdaStar(best_val, best_z, max(upper, best_val), iters, capped)


def lambda_star(
    R: SDRep,
    x,
    radius: float = DEFAULT_RADIUS,
    schedule: SmoothingSchedule | None = None,
    seed: int = 0,
) -> LambdaStar:
    """Approximate ``sup_{|z|_inf <= radius} lambda_min(pencil(x, z))``.

    Returns the value at the witness (recomputed), the witness, a dual upper
    bound valid over the box, the iteration count and whether the Newton
    iteration cap was hit.
    """
    return _maximize(R, x, radius, schedule, seed)


def classify(margin: float, upper: float, radius_hit: bool, tol: float) -> Status:
    if margin > tol:
        return Status.STRICTLY_FEASIBLE
    if margin >= -tol:
        return Status.EPS_FEASIBLE
    if upper < -tol or not radius_hit:
        return Status.EPS_INFEASIBLE
    # The search ran into the box without an infeasibility bound: inconclusive.
    return Status.EPS_FEASIBLE


def membership(
    R: SDRep,
    x,
    tol: float = DEFAULT_TOL,
    radius: float = DEFAULT_RADIUS,
    seed: int = 0,
    schedule: SmoothingSchedule | None = None,
) -> FeasibilityReport:
    """Decide whether ``x`` lies in the set represented by ``R``, up to ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    res = _maximize(R, x, radius, schedule, seed, lo=-tol, hi=tol)
    radius_hit = bool(R.m) and float(np.max(np.abs(res.witness))) >= RADIUS_HIT_FRACTION * radius
    return FeasibilityReport(
        status=classify(res.value, res.upper_bound, radius_hit, tol),
        margin=res.value,
        witness=res.witness,
        iterations=res.iterations,
        radius_hit=radius_hit,
        upper_bound=res.upper_bound,
    )


def grid_feasibility(R: SDRep, x, radius: float, steps_per_axis: int) -> tuple[bool, float]:
    """Exhaustive search over a uniform grid on ``[-radius, radius]^m``.

    Ground truth for small ``m``; cost is ``steps_per_axis ** m`` eigenvalue
    computations.
    """
    if R.m > 6:
        raise ValueError("grid oracle infeasible: m > 6")
    if steps_per_axis < 2:
        raise ValueError("steps_per_axis must be at least 2")
    M0 = R.base_matrix(x)
    if R.m == 0:
        best = lambda_min(M0)
        return best >= -1e-9, best
    axis = np.linspace(-radius, radius, steps_per_axis)
    best = -math.inf
    chunk = max(1, 200_000 // (R.k * R.k))
    points = itertools.product(axis, repeat=R.m)
    while True:
        Z = np.array(list(itertools.islice(points, chunk)))
        if Z.size == 0:
            break
        mats = M0 + np.tensordot(Z, R.C, axes=1)
        best = max(best, float(np.linalg.eigvalsh(mats)[:, 0].max()))
    return best >= -1e-9, best
