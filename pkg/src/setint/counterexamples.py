"""The two explicit constructions.

1. The Hilbert-space map t -> e_t into an orthonormal continuum: its Riemann
   sums have closed-form norm (sum of squared interval lengths) ** 1/2, so the
   map integrates to zero without ever materializing infinite-dimensional
   vectors.

2. The l1 family F(t) = {first N basis vectors}: its convex hull (the
   probability simplex) integrates trivially to itself, while the sums of F
   over m = 2**(n-1) - 1 equal parts stay at distance >= 2(K - m)/K from the
   simplex witness supported on K = 2**n - 1 coordinates.  This exceeds the
   general lower bound 1/24 and tends to 1.  Sums are never materialized:
   distances to them go through an integer program over atom counts, solved in
   closed form and certified against a brute-force oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .partition import CounterexampleL1, Multifunction, TaggedPartition
from .setops import PointSet
from .spaces import SpaceDescriptor

#: The general-space lower bound from the divergence argument.
DIVERGENCE_BOUND = 1.0 / 24.0

_ORACLE_CAP = 1_000_000


def hilbert_example_sum_norm(t: TaggedPartition, distinct_tags: bool = True) -> float:
    """Norm of the Riemann sum of the orthonormal-continuum map.

    With pairwise distinct tags the sum is a combination of orthonormal
    vectors, so its norm is (sum |interval|**2) ** 1/2 exactly.  If tags may
    coincide, coefficients of equal tags are added before squaring.
    """
    w = t.widths
    if not distinct_tags:
        _, inverse = np.unique(t.tags, return_inverse=True)
        w = np.bincount(inverse, weights=w)
    return float(math.sqrt(float((w * w).sum())))


@dataclass(frozen=True)
class L1CounterexampleConfig:
    """Partition exponent n (m = 2**(n-1) - 1 equal parts) and truncation
    dimension N >= 2**n - 1 (so the witness fits)."""

    n: int
    trunc_dim: int

    def __post_init__(self):
        if self.n < 2:
            raise InvalidArgumentError("n must be >= 2")
        if self.trunc_dim < self.witness_support:
            raise InvalidArgumentError(
                f"truncation dimension {self.trunc_dim} is below the witness "
                f"support {self.witness_support}"
            )

    @property
    def parts(self) -> int:
        return 2 ** (self.n - 1) - 1

    @property
    def witness_support(self) -> int:
        return 2 ** self.n - 1


def l1_counterexample_eval(cfg: L1CounterexampleConfig) -> Multifunction:
    """The constant multifunction whose value is the first N l1 basis vectors
    (unit norm bound, diameter 2)."""
    space = SpaceDescriptor(cfg.trunc_dim, "l1")
    return Multifunction(
        space, CounterexampleL1(cfg.n, cfg.trunc_dim), bound_m=1.0, diam_bound=2.0
    )


def simplex_generators(cfg: L1CounterexampleConfig) -> PointSet:
    """Generators of the value's hull: the probability simplex."""
    return PointSet(SpaceDescriptor(cfg.trunc_dim, "l1"), np.eye(cfg.trunc_dim))


def witness_distance(n: int, trunc_dim: int, parts: int) -> float:
    """Exact l1 distance from the uniform witness on K = 2**n - 1 coordinates
    to the set of averages of ``parts`` basis vectors.

    The objective separates per coordinate and is convex in each atom count,
    so the even split of the atoms over the witness support is optimal (atoms
    off the support only add cost).  For parts <= K this is 2(K - parts)/K.
    """
    k = 2 ** n - 1
    if trunc_dim < k:
        raise InvalidArgumentError("truncation dimension too small for the witness")
    if parts < 1:
        raise InvalidArgumentError("need at least one part")
    q, r = divmod(parts, k)
    cost = r * abs(1.0 / k - (q + 1) / parts) + (k - r) * abs(1.0 / k - q / parts)
    return float(cost)


def l1_counterexample_lower_bound(cfg: L1CounterexampleConfig) -> float:
    """Certified lower bound on the Hausdorff distance between the sum over
    the canonical partition and the simplex: the witness lies in the simplex,
    the sum inside it, so the point-to-sum distance bounds the set distance."""
    return witness_distance(cfg.n, cfg.trunc_dim, cfg.parts)


def l1_counterexample_bruteforce(cfg: L1CounterexampleConfig, parts: int | None = None) -> float:
    """Independent oracle: full enumeration of atom-count vectors."""
    m = cfg.parts if parts is None else parts
    n_coords = cfg.trunc_dim
    n_vectors = math.comb(n_coords + m - 1, m)
    if n_vectors > _ORACLE_CAP:
        raise ResourceLimitError(
            f"{n_vectors} count vectors exceed the oracle cap {_ORACLE_CAP}"
        )
    k = cfg.witness_support
    y = np.zeros(n_coords)
    y[:k] = 1.0 / k
    best = np.inf
    for combo in itertools.combinations_with_replacement(range(n_coords), m):
        counts = np.bincount(np.asarray(combo), minlength=n_coords)
        best = min(best, float(np.abs(y - counts / m).sum()))
    return best


def reverse_orthogonality_constant(eps: float) -> float:
    """(1 - eps) / (2 - eps): the constant with which eps-orthogonality of G
    to E transfers back from E to G.  eps = 1/2 gives 1/3."""
    if not 0.0 <= eps < 1.0:
        raise InvalidArgumentError("eps must lie in [0, 1)")
    return (1.0 - eps) / (2.0 - eps)


def eps_orthogonality_check(
    block_e: tuple[int, int],
    block_g: tuple[int, int],
    dim: int,
    samples: int = 1000,
    seed: int = 0,
):
    """Empirical orthogonality defect between two disjoint l1 coordinate blocks.

    Samples random pairs supported on the blocks and measures the worst defect
    of ||e + g|| >= (1 - eps) ||e||.  Disjoint supports make the l1 norm
    additive, so the defect is zero and the reverse constant is 1/2.  Both
    inequalities are asserted on every sample.  Blocks are half-open index
    ranges.  Returns (eps_hat, reverse constant).
    """
    e0, e1 = block_e
    g0, g1 = block_g
    if not (0 <= e0 < e1 <= dim and 0 <= g0 < g1 <= dim):
        raise InvalidArgumentError("blocks must be nonempty index ranges inside the space")
    if max(e0, g0) < min(e1, g1):
        raise InvalidArgumentError("blocks must be disjoint")
    rng = np.random.default_rng(seed)
    eps_hat = 0.0
    for _ in range(samples):
        e = np.zeros(dim)
        g = np.zeros(dim)
        e[e0:e1] = rng.standard_normal(e1 - e0)
        g[g0:g1] = rng.standard_normal(g1 - g0)
        norm_e = np.abs(e).sum()
        norm_g = np.abs(g).sum()
        norm_sum = np.abs(e + g).sum()
        if norm_e > 0:
            eps_hat = max(eps_hat, 1.0 - norm_sum / norm_e)
    eps_hat = max(eps_hat, 0.0)
    rev = reverse_orthogonality_constant(eps_hat)
    # Re-verify both inequalities with the measured defect on a fresh stream.
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        e = np.zeros(dim)
        g = np.zeros(dim)
        e[e0:e1] = rng.standard_normal(e1 - e0)
        g[g0:g1] = rng.standard_normal(g1 - g0)
        norm_sum = np.abs(e + g).sum()
        if norm_sum + 1e-12 < (1.0 - eps_hat) * np.abs(e).sum():
            raise InvalidArgumentError("forward orthogonality inequality failed")
        if norm_sum + 1e-12 < rev * np.abs(g).sum():
            raise InvalidArgumentError("reverse orthogonality inequality failed")
    return eps_hat, rev
