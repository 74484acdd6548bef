"""
How the stretch penalty shapes the distance
===========================================

Sweeping the constant penalty r shows the trade-off between stretching and
angle mismatch. At r = 0 stretching is free; as r grows the matcher
stretches less and accepts larger angle gaps. The rows are written as CSV
for external plotting.
"""

import csv
import sys

from nemsigma import feature_sequence, generate_shape
from nemsigma.cli import parse_range, sweep_r

circle = feature_sequence(generate_shape("circle", 32))
ellipse = feature_sequence(generate_shape("ellipse", 32, a=2, b=1))

rows = sweep_r(circle, ellipse, parse_range("0:2:0.25"))
writer = csv.writer(sys.stdout)
writer.writerow(["r", "total", "stretch_part", "distance_part"])
for r, total, stretch, dist in rows:
    writer.writerow([r, round(total, 6), round(stretch, 6), round(dist, 6)])

# The totals never decrease as the penalty grows.
totals = [row[1] for row in rows]
print("nondecreasing:", all(a <= b for a, b in zip(totals, totals[1:])))
