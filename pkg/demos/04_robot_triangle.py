"""
Three robots on a line
======================

The smallest gap between two boundaries seems a natural dissimilarity, yet it
breaks the triangle inequality. With unit circles at x = 0, 4 and 8 the
outer pair is 6 apart while each neighbouring gap is 2.
"""

from nemsigma import RobotSpec, SceneSpec, robot_scenario

res = robot_scenario(SceneSpec())
g = res.gaps
print(f"gap(green, blue) + gap(blue, purple) = {g[0, 1] + g[1, 2]:.6f}")
print(f"gap(green, purple)                   = {g[0, 2]:.6f}")
for w in res.gap_audit.violations:
    print(f"  violated: {w.x} -> {w.y} -> {w.z}: {w.lhs:.3f} > {w.rhs:.3f}")

# Move the blue robot one unit to the right. The gaps change but the
# violation stays.
robots = tuple(RobotSpec(rb.name, rb.shape, rb.x, v)
               for rb, v in zip(SceneSpec().robots, (0.0, 1.0, 0.0)))
moved = robot_scenario(SceneSpec(robots, t=1.0))
print("gaps at t = 1:", moved.gaps[0, 1], moved.gaps[1, 2], moved.gaps[0, 2])

# Elastic distance with a velocity-scaled stretch penalty passes its
# relaxed triangle check. Identical circles are all at distance zero, so
# the check is more telling on three different outlines.
distinct = (RobotSpec("green", {"kind": "ellipse", "a": 1.5, "b": 1.0}, 0.0, 0.2),
            RobotSpec("blue", {"kind": "regular_polygon", "sides": 5}, 4.0, 1.0),
            RobotSpec("purple", {"kind": "superellipse", "a": 1, "b": 1, "p": 4}, 8.0))
res = robot_scenario(SceneSpec(distinct))
print("elastic distances:\n", res.nem_sigma.round(4))
print("relaxed triangle violations:", len(res.nem_sigma_audit.violations),
      " empirical theta:", round(res.theta_hat, 4))
