"""Measured convergence rate of sums toward the hull sum.

For a moving finite set in l2^4, the greedy point selector bounds the
one-sided distance from the raw sum to the hull sum without materializing
either.  The guarantee is C1 * M * mesh**0.5 with C1 = 2/(sqrt(2)-1); the
log-log slope of the measured distance against the mesh should be about 0.5
or better.
"""

import math

import numpy as np

from setint.balance import hull_sum_onesided_greedy
from setint.partition import ConvexHullOf, MovingFinite, Multifunction, uniform_partition
from setint.spaces import hilbert_c1, l2

rng = np.random.default_rng(42)
curves = tuple(rng.standard_normal((3, 4)) * 0.3 for _ in range(3))
inner = Multifunction(l2(4), MovingFinite(curves), bound_m=3.0, diam_bound=3.0)
f = Multifunction(l2(4), ConvexHullOf(inner), bound_m=3.0, diam_bound=3.0)

c1 = hilbert_c1()
meshes, dists = [], []
print(f"{'mesh':>10} {'measured':>12} {'guarantee':>12}")
for k in range(1, 9):
    t = uniform_partition(2 ** k)
    worst, m = hull_sum_onesided_greedy(f, t, n_samples=200, seed=1000 + k)
    meshes.append(t.mesh)
    dists.append(worst)
    print(f"{t.mesh:>10.4f} {worst:>12.6f} {c1 * m * math.sqrt(t.mesh):>12.6f}")

slope = np.polyfit(np.log(meshes), np.log(dists), 1)[0]
print()
print(f"log-log slope: {slope:.3f} (exponent 1/2 predicts >= 0.5)")
