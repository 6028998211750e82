"""Geometry kernel: Minkowski arithmetic, Hausdorff distances, hull-distance
oracles with certificates, and error-controlled pruning.

Bounded sets are represented as finite point clouds; the convex hull of a set
is represented implicitly by the same generators, and every hull query goes
through a distance oracle (no facet or vertex enumeration anywhere).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from . import simplex
from .errors import InvalidArgumentError, ResourceLimitError, SolverFailureError
from .spaces import SpaceDescriptor, cdist_metric, space_from_json, space_to_json

#: Dedup / point-equality tolerance, absolute per coordinate.
DEDUP_TOL = 1e-12

#: Memory guard for pairwise enumeration inside a single Minkowski sum.
_PAIR_LIMIT = 20_000_000

_CHUNK = 2048


def _canonicalize(points: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    """Sort rows lexicographically and drop (near-)duplicates.

    Exact duplicates are removed by np.unique; a row that agrees with its
    predecessor to within ``tol`` in every coordinate is also dropped.
    """
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if pts.shape[0] > 1 and tol > 0:
        close = np.abs(np.diff(pts, axis=0)).max(axis=1) <= tol
        if close.any():
            keep = np.ones(pts.shape[0], dtype=bool)
            keep[1:] = ~close
            pts = pts[keep]
    return pts


@dataclass(frozen=True)
class PointSet:
    """Nonempty finite point cloud in a space; stored deduplicated and sorted."""

    space: SpaceDescriptor
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.ndim != 2 or pts.shape[1] != self.space.dim:
            raise InvalidArgumentError(
                f"points of shape {pts.shape} do not match space dimension {self.space.dim}"
            )
        if pts.shape[0] == 0:
            raise InvalidArgumentError("a point set must be nonempty")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("point coordinates must be finite")
        pts = _canonicalize(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]

    def diameter(self) -> float:
        metric = cdist_metric(self.space)
        best = 0.0
        pts = self.points
        for i in range(0, pts.shape[0], _CHUNK):
            d = cdist(pts[i:i + _CHUNK], pts, metric=metric)
            best = max(best, float(d.max()))
        return best

    def same_set(self, other: "PointSet") -> bool:
        return (
            self.points.shape == other.points.shape
            and bool(np.array_equal(self.points, other.points))
        )


@dataclass(frozen=True)
class PrunedSet:
    """A point cloud plus a certified Hausdorff error bound to the exact set it
    stands for (the pruning ledger of a Riemann sum)."""

    base: PointSet
    err_bound: float = 0.0

    def __post_init__(self):
        if self.err_bound < 0:
            raise InvalidArgumentError("error bound must be nonnegative")


def _check_same_space(a: PointSet, b: PointSet):
    if a.space != b.space:
        raise InvalidArgumentError(f"space mismatch: {a.space} vs {b.space}")


def scale(lam: float, a: PointSet) -> PointSet:
    return PointSet(a.space, float(lam) * a.points)


def translate(a: PointSet, c) -> PointSet:
    return PointSet(a.space, a.points + np.asarray(c, dtype=float))


def minkowski(a: PointSet, b: PointSet) -> PointSet:
    """All pairwise sums, deduplicated."""
    _check_same_space(a, b)
    npairs = len(a) * len(b)
    if npairs > _PAIR_LIMIT:
        raise ResourceLimitError(
            f"Minkowski sum would enumerate {npairs} pairs; prune the operands first"
        )
    sums = (a.points[:, None, :] + b.points[None, :, :]).reshape(npairs, a.space.dim)
    return PointSet(a.space, sums)


def _min_dists_to(a_pts: np.ndarray, b_pts: np.ndarray, metric: str) -> np.ndarray:
    """For each row of b_pts, the distance to the nearest row of a_pts."""
    out = np.full(b_pts.shape[0], np.inf)
    for j in range(0, b_pts.shape[0], _CHUNK):
        block = b_pts[j:j + _CHUNK]
        best = np.full(block.shape[0], np.inf)
        for i in range(0, a_pts.shape[0], 8 * _CHUNK):
            d = cdist(block, a_pts[i:i + 8 * _CHUNK], metric=metric)
            np.minimum(best, d.min(axis=1), out=best)
        out[j:j + _CHUNK] = best
    return out


def one_sided_hausdorff(a: PointSet, b: PointSet) -> float:
    """sup over b in B of the distance from b to A (how far B sticks out of A)."""
    _check_same_space(a, b)
    return float(_min_dists_to(a.points, b.points, cdist_metric(a.space)).max())


def hausdorff(a: PointSet, b: PointSet) -> float:
    _check_same_space(a, b)
    metric = cdist_metric(a.space)
    d_ab = _min_dists_to(a.points, b.points, metric).max()
    d_ba = _min_dists_to(b.points, a.points, metric).max()
    return float(max(d_ab, d_ba))


def dist_point_to_set(x, a: PointSet) -> float:
    x = np.asarray(x, dtype=float)
    return float(_min_dists_to(a.points, x[None, :], cdist_metric(a.space))[0])


# ---------------------------------------------------------------------------
# Distance from a point to a convex hull of generators.


def dist_point_to_hull(space: SpaceDescriptor, x, a: PointSet, tol: float = 1e-8):
    """Distance from x to conv(a), with a certificate.

    Returns (value, gap) with |value - exact| <= gap <= tol.  For the l2 norm a
    conditional-gradient (Gilbert-style) iteration with away steps and a
    duality-gap stopping certificate is used; for l1/linf the problem reduces
    exactly to a small LP solved by the built-in dense simplex (gap = 0).
    """
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")
    if a.space != space:
        raise InvalidArgumentError("generator set does not live in the given space")
    x = np.asarray(x, dtype=float)
    if x.shape != (space.dim,):
        raise InvalidArgumentError("query point dimension mismatch")
    # Fast path: x coincides with a generator.
    nearest = dist_point_to_set(x, a)
    if nearest <= DEDUP_TOL:
        return 0.0, 0.0
    if space.norm == "l2":
        return _hull_dist_l2(x, a.points, tol)
    return _hull_dist_lp(space, x, a.points), 0.0


def _hull_dist_l2(x: np.ndarray, pts: np.ndarray, tol: float, max_iter: int = 10_000):
    """Min-norm-point iteration on the shifted generators p_i = a_i - x.

    Major cycles add the conditional-gradient vertex to a corral, minor cycles
    re-solve the affine minimum over the corral and drop atoms that would go
    negative; on a quadratic this terminates after finitely many corral
    changes.  The gap g = <y, y - p_s> bounds f(y) - f* for f = 1/2 ||.||^2,
    hence value - exact <= 2 g / value; that quotient is the certificate.
    """
    p = pts - x
    start = int(np.argmin((p * p).sum(axis=1)))
    idx = [start]
    w = np.array([1.0])
    value = cert = None
    for _ in range(max_iter):
        y = w @ p[idx]
        value = float(np.linalg.norm(y))
        scores = p @ y
        s_idx = int(np.argmin(scores))
        gap = float(y @ y - scores[s_idx])
        cert = min(value, 2.0 * gap / value) if value > 0 else 0.0
        if value <= 1e-14 or cert <= tol:
            return max(value, 0.0), max(cert, 0.0)
        if s_idx in idx:
            # numerically stationary corral; the certificate stays honest
            return value, max(cert, 0.0)
        idx.append(s_idx)
        w = np.append(w, 0.0)
        while True:
            a = p[idx]
            k = len(idx)
            # affine minimizer over the corral: KKT system of
            # min ||v @ a|| subject to sum v = 1 (signs free)
            lhs = np.zeros((k + 1, k + 1))
            lhs[:k, :k] = a @ a.T
            lhs[:k, k] = 1.0
            lhs[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            v = np.linalg.lstsq(lhs, rhs, rcond=None)[0][:k]
            if np.all(v >= -1e-12):
                w = np.clip(v, 0.0, None)
                w /= w.sum()
                break
            neg = np.where(v < 0)[0]
            theta = float((w[neg] / (w[neg] - v[neg])).min())
            w = (1.0 - theta) * w + theta * v
            keep = w > 1e-14
            keep[neg[np.argmin(w[neg] / (w[neg] - v[neg]))]] = False
            idx = [j for j, k_ in zip(idx, keep) if k_]
            w = w[keep]
            w /= w.sum()
    raise SolverFailureError(
        "hull-distance iteration did not certify within the iteration cap",
        value=value,
        gap=cert,
    )


def _hull_dist_lp(space: SpaceDescriptor, x: np.ndarray, pts: np.ndarray) -> float:
    """Exact l1/linf hull distance as an LP over hull coefficients and
    per-coordinate deviation bounds."""
    g, d = pts.shape
    if space.norm == "l1":
        nvar = g + d  # lambda, u_j with |x_j - (A^T lam)_j| <= u_j
        c = np.zeros(nvar)
        c[g:] = 1.0
        a_ub = np.zeros((2 * d, nvar))
        b_ub = np.zeros(2 * d)
        for j in range(d):
            a_ub[2 * j, :g] = pts[:, j]
            a_ub[2 * j, g + j] = -1.0
            b_ub[2 * j] = x[j]
            a_ub[2 * j + 1, :g] = -pts[:, j]
            a_ub[2 * j + 1, g + j] = -1.0
            b_ub[2 * j + 1] = -x[j]
    else:  # linf: single deviation bound u
        nvar = g + 1
        c = np.zeros(nvar)
        c[g] = 1.0
        a_ub = np.zeros((2 * d, nvar))
        b_ub = np.zeros(2 * d)
        for j in range(d):
            a_ub[2 * j, :g] = pts[:, j]
            a_ub[2 * j, g] = -1.0
            b_ub[2 * j] = x[j]
            a_ub[2 * j + 1, :g] = -pts[:, j]
            a_ub[2 * j + 1, g] = -1.0
            b_ub[2 * j + 1] = -x[j]
    a_eq = np.zeros((1, nvar))
    a_eq[0, :g] = 1.0
    sol, _ = simplex.solve_lp(c, a_ub, b_ub, a_eq, [1.0])
    y = pts.T @ sol[:g]
    delta = x - y
    if space.norm == "l1":
        return float(np.abs(delta).sum())
    return float(np.abs(delta).max())


def hausdorff_hulls(a: PointSet, b: PointSet, tol: float = 1e-8) -> float:
    """Hausdorff distance between conv(a) and conv(b) within tol.

    The supremum of the (convex) distance-to-a-hull function over a hull is
    attained at generators, so it suffices to query each generator against the
    opposite hull.  Generators that already appear in the other cloud are
    skipped.
    """
    _check_same_space(a, b)
    metric = cdist_metric(a.space)

    def side(target: PointSet, queries: PointSet) -> float:
        near = _min_dists_to(target.points, queries.points, metric)
        worst = 0.0
        for i in np.argsort(-near):
            if near[i] <= DEDUP_TOL:
                break  # sorted: the rest are generators of the target too
            val, _ = dist_point_to_hull(a.space, queries.points[i], target, tol)
            worst = max(worst, val)
        return worst

    return max(side(a, b), side(b, a))


def prune(a: PointSet, delta: float) -> PrunedSet:
    """Greedy delta-net over the canonical point order.

    A point is kept iff it is more than delta away from every kept point, so
    every dropped point is within delta of the result and the Hausdorff error
    is certified by delta.
    """
    if delta < 0:
        raise InvalidArgumentError("delta must be nonnegative")
    if delta == 0 or len(a) == 1:
        return PrunedSet(a, float(delta))
    metric = cdist_metric(a.space)
    pts = a.points
    kept = [pts[0]]
    i = 1
    n = pts.shape[0]
    while i < n:
        block = pts[i:i + _CHUNK]
        kept_arr = np.asarray(kept)
        near = _min_dists_to(kept_arr, block, metric)
        survivors = block[near > delta]
        # Survivors may still exclude each other; resolve sequentially.
        for p in survivors:
            d = cdist(p[None, :], np.asarray(kept), metric=metric)
            if d.min() > delta:
                kept.append(p)
        i += _CHUNK
    return PrunedSet(PointSet(a.space, np.asarray(kept)), float(delta))


def pointset_to_json(a: PointSet) -> dict:
    return {"space": space_to_json(a.space), "points": a.points.tolist()}


def pointset_from_json(obj) -> PointSet:
    if not isinstance(obj, dict) or "space" not in obj or "points" not in obj:
        raise InvalidArgumentError('point set JSON must have "space" and "points"')
    return PointSet(space_from_json(obj["space"]), np.asarray(obj["points"], dtype=float))
