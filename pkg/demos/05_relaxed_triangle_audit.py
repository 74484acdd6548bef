"""
Auditing the relaxed triangle inequality
========================================

A b-metric only needs d(x, z) <= c (d(x, y) + d(y, z)). The audit measures
the largest ratio over many triples and lists every triple that breaks a
given bound.
"""

import math

import numpy as np

from nemsigma import (audit_nem_r_bound, generate_shape, relaxation_modulus,
                      theoretical_bound_nem_r, verify_relaxed_triangle)

# Squared differences of reals: the ratio reaches 2 at (0, 1, 2).
xs = [0.0, 1.0, 2.0]
est = relaxation_modulus(lambda x, y: (x - y) ** 2, xs)
print("squared difference, largest ratio:", est.theta_hat,
      f"at ({est.witness.x}, {est.witness.y}, {est.witness.z})")

# A point-dependent factor x + z + 2 also holds on a grid of nonnegative reals.
grid = np.arange(0, 10.0001, 0.5)
rep = verify_relaxed_triangle(lambda x, y: (x - y) ** 2, grid, lambda x, z: x + z + 2)
print(f"factor x + z + 2: {len(rep.violations)} violations in {rep.triples_checked} triples")

# Constant-penalty elastic matching on twelve random outlines.
shapes = [generate_shape("perturbed", 64, noise=0.35, seed=s, name=f"blob{s}")
          for s in range(12)]
for r in (math.pi / 4, math.pi / 2, math.pi):
    rep = audit_nem_r_bound(shapes, r, n_points=32)
    print(f"r = {r:.3f}: largest ratio {rep.max_ratio:.3f},"
          f" bound {theoretical_bound_nem_r(r):.3f}, violations {len(rep.violations)}")
