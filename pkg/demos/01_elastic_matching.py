"""
Elastic matching of tangent-angle sequences
===========================================

Two shapes are compared through the tangent angles along their contours.
A correspondence may stretch one contour against the other; every stretched
pair pays a penalty, and every matched pair pays its angle difference.
"""

import math

from nemsigma import (CostModel, FeatureSequence, StretchFn, feature_sequence,
                      generate_shape, nem, nem_r, nem_sigma)

# Start with hand-made angle sequences. Repeating the last angle costs one
# stretch and nothing else.
X = FeatureSequence([0.0, math.pi / 2])
Y = FeatureSequence([0.0, math.pi / 2, math.pi / 2])
print("one repeated angle:", nem(X, Y).total)

# Inserting an intermediate angle costs a stretch plus a pi/4 angle gap.
Z = FeatureSequence([0.0, math.pi / 4, math.pi / 2])
rep = nem(X, Z)
print(f"one inserted angle: {rep.total:.4f} = stretch {rep.stretch_part}"
      f" + angles {rep.distance_part:.4f}")
print("optimal correspondence:", [tuple(e) for e in rep.optimal_mapping])

# Real contours: a circle and an ellipse, both sampled at 32 points.
circle = feature_sequence(generate_shape("circle", 32))
ellipse = feature_sequence(generate_shape("ellipse", 32, a=2, b=1))
for r in (0.0, 0.5, 1.0, 2.0):
    print(f"penalty r = {r}: distance {nem_r(circle, ellipse, r).total:.4f}")

# The penalty can depend on the matched points. Here it grows with the
# velocity difference of the two objects.
slow = feature_sequence(generate_shape("ellipse", 32, a=2, b=1, attrs={"velocity": 0.0}))
fast = feature_sequence(generate_shape("circle", 32, attrs={"velocity": 2.0}))
cm = CostModel(stretch=StretchFn("feature-scaled", r0=1.0, r1=1.0))
print("velocity-aware distance:", round(nem_sigma(slow, fast, cm).total, 4))
