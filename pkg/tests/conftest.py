import math

import numpy as np
import pytest

from nemsigma.contour import FeatureSequence
from nemsigma.elastic import CostModel, GroundCost, Modulus, StretchFn
from nemsigma.mapping import Mapping

# 12-edge minimal (9, 9) staircase whose stretched edges are
# (2,3) (3,5) (5,6) (6,6) (7,6) (9,9)
STAIRCASE_EDGES = [(1, 1), (2, 2), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6),
                   (6, 6), (7, 6), (8, 7), (9, 8), (9, 9)]
STAIRCASE_STRETCH = {(2, 3), (3, 5), (5, 6), (6, 6), (7, 6), (9, 9)}


@pytest.fixture
def staircase():
    return Mapping(9, 9, STAIRCASE_EDGES)


def random_sequence(rng, n, features=("velocity", "value")):
    return FeatureSequence(
        rng.uniform(0, 2 * math.pi, n),
        {f: rng.uniform(0, 2, n) for f in features},
        source=f"rand{n}",
    )


def cost_models():
    """Every registered cost model kind, keyed by a readable id."""
    out = {}
    for ground in ("angular-abs", "angular-squared"):
        for r in (0.0, 0.5, 1.0, 2.0):
            out[f"{ground}-r{r}"] = CostModel.constant(r, ground)
        out[f"{ground}-feature"] = CostModel(
            GroundCost(ground), Modulus(), StretchFn("feature-scaled", r0=0.5, r1=1.0))
    out["scalar-squared-r1"] = CostModel(
        GroundCost("scalar-squared", feature="value"), Modulus("scalar-sum"),
        StretchFn("constant", r=1.0))
    out["scalar-squared-feature"] = CostModel(
        GroundCost("scalar-squared", feature="value"), Modulus("scalar-sum"),
        StretchFn("feature-scaled", r0=0.2, r1=2.0))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
