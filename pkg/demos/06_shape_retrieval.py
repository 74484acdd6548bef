"""
Nearest-neighbour shape retrieval
=================================

A small corpus of outlines is resampled, matched pairwise and queried. The
distance matrix can be saved as CSV and reloaded.
"""

import tempfile
from pathlib import Path

from nemsigma import (build_corpus, distance_matrix, generate_shape, knn_query,
                      load_matrix, save_matrix)

corpus = build_corpus([
    {"kind": "ellipse", "name": "almost round", "a": 1.1, "b": 1.0},
    {"kind": "ellipse", "name": "long ellipse", "a": 2.0, "b": 1.0},
    {"kind": "regular_polygon", "name": "square", "sides": 4},
    {"kind": "regular_polygon", "name": "hexagon", "sides": 6},
    {"kind": "perturbed", "name": "blob", "noise": 0.3, "seed": 3},
], resample_n=32)

query = generate_shape("circle", 64)
for name, d in knn_query(corpus, query, 3):
    print(f"{name:>14}: {d:.4f}")

# The full matrix, computed on two threads.
m = distance_matrix(corpus, n_jobs=2)
print(m.values.round(3))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "matrix.csv"
    save_matrix(path, m)
    print("reloaded names:", load_matrix(path).names)
