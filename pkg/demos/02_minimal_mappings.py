"""
Correspondences, stretches and minimality
=========================================

A correspondence between indices 1..m and 1..n must cover every index and
must not cross. A minimal one has no removable edge. Such correspondences
are exactly the staircase paths that never turn a corner without a
diagonal step.
"""

from nemsigma import (CostModel, Mapping, delannoy, enumerate_minimal_mappings,
                      enumerate_monotone_paths, is_minimal, mapping_cost,
                      stretch_edges, validate_mapping)
from nemsigma.contour import FeatureSequence

# A 12-edge staircase between two 9-point sequences.
M = Mapping(9, 9, [(1, 1), (2, 2), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6),
                   (6, 6), (7, 6), (8, 7), (9, 8), (9, 9)])
print("valid:", validate_mapping(M).valid, " minimal:", is_minimal(M))
print("stretched edges:", sorted(tuple(e) for e in stretch_edges(M)))

# With a constant penalty r, the six stretched edges cost 6r.
flat = FeatureSequence([0.0] * 9)
for r in (1.0, 2.5):
    print(f"r = {r}: stretch cost {mapping_cost(M, flat, flat, CostModel.constant(r)).stretch_part}")

# Adding a corner makes the correspondence redundant.
corner = Mapping(3, 3, [(1, 1), (2, 2), (2, 3), (3, 3)])
print("corner path minimal:", is_minimal(corner))

# Counting: all staircase paths follow the Delannoy numbers, minimal ones
# are the corner-free subset.
for n in (2, 4, 6):
    paths = sum(1 for _ in enumerate_monotone_paths(n, n))
    minimal = sum(1 for _ in enumerate_minimal_mappings(n, n))
    print(f"{n}x{n}: {paths} paths (Delannoy {delannoy(n - 1, n - 1)}), {minimal} minimal")
