"""Cost models and elastic matching solvers.

A :class:`CostModel` bundles three pointwise functions of sequence
elements: the ground cost paid on every matched pair, its relaxation
modulus (the factor by which the ground cost may break the triangle
inequality), and the stretch penalty paid on every stretched pair.

The solvers find the cheapest monotone alignment by dynamic programming::

    T[i, j] = B[i, j] + min(T[i-1, j-1],
                            T[i-1, j] + S[i, j],
                            T[i, j-1] + S[i, j])

where ``B`` and ``S`` are the ground-cost and stretch matrices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

from .contour import Element, FeatureSequence, angular_difference
from .mapping import Mapping, enumerate_minimal_mappings, mapping_cost

__all__ = [
    "CostModel",
    "DistanceReport",
    "GroundCost",
    "Modulus",
    "StretchFn",
    "brute_force_nem_sigma",
    "evaluate_ground",
    "evaluate_modulus",
    "evaluate_sigma",
    "load_cost_model",
    "nem",
    "nem_r",
    "nem_sigma",
    "nem_sigma_cyclic",
]


def _kind(kind):
    return kind.replace("_", "-").lower()


def _table(table, X, Y):
    t = np.asarray(table, dtype=float)
    if t.shape[0] < len(X) or t.shape[1] < len(Y):
        raise ValueError(f"cost table {t.shape} too small for {len(X)}x{len(Y)}")
    return t[: len(X), : len(Y)]


@dataclass(frozen=True)
class GroundCost:
    """Per-pair alignment cost.

    ``angular-abs`` and ``angular-squared`` compare tangent angles;
    ``scalar-squared`` compares the named feature; ``table`` looks costs up
    by position.
    """

    kind: str = "angular-abs"
    feature: str = "value"
    table: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        if self.kind not in ("angular-abs", "angular-squared", "scalar-squared", "table"):
            raise ValueError(f"unknown ground cost {self.kind!r}")
        if self.kind == "table" and self.table is None:
            raise ValueError("a table ground cost needs a table")

    def matrix(self, X: FeatureSequence, Y: FeatureSequence) -> np.ndarray:
        if self.kind == "table":
            return _table(self.table, X, Y)
        if self.kind == "scalar-squared":
            g, h = X.feature(self.feature), Y.feature(self.feature)
            return (g[:, None] - h[None, :]) ** 2
        d = angular_difference(X.angles[:, None], Y.angles[None, :])
        return d if self.kind == "angular-abs" else d * d


@dataclass(frozen=True)
class Modulus:
    """Relaxation factor of the ground cost, always at least 1.

    ``constant`` returns ``c``; ``scalar-sum`` returns ``g(x) + g(y) + 2`` on
    the named (nonnegative) feature; ``custom`` calls ``func(x, y)`` on
    :class:`~nemsigma.contour.Element` pairs.
    """

    kind: str = "constant"
    c: float = 1.0
    feature: str = "value"
    func: Callable[[Element, Element], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        if self.kind not in ("constant", "scalar-sum", "custom"):
            raise ValueError(f"unknown modulus {self.kind!r}")
        if self.kind == "constant" and not self.c >= 1:
            raise ValueError(f"constant modulus must be >= 1, got {self.c}")
        if self.kind == "custom" and self.func is None:
            raise ValueError("a custom modulus needs func")

    def matrix(self, X: FeatureSequence, Y: FeatureSequence) -> np.ndarray:
        if self.kind == "constant":
            return np.full((len(X), len(Y)), float(self.c))
        if self.kind == "scalar-sum":
            g, h = X.feature(self.feature), Y.feature(self.feature)
            return g[:, None] + h[None, :] + 2.0
        return np.array([[self.func(X.element(i), Y.element(j))
                          for j in range(len(Y))] for i in range(len(X))],
                        dtype=float)


@dataclass(frozen=True)
class StretchFn:
    """Penalty charged on stretched pairs.

    ``constant``: ``r`` everywhere. ``feature-scaled``:
    ``r0 + r1 * |g(x) - g(y)|`` on the named feature. ``position``: looked
    up from ``table[i, j]``.
    """

    kind: str = "constant"
    r: float = 1.0
    r0: float = 1.0
    r1: float = 1.0
    feature: str = "velocity"
    table: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        if self.kind == "constant":
            if not self.r >= 0:
                raise ValueError(f"stretch penalty must be >= 0, got {self.r}")
        elif self.kind == "feature-scaled":
            if not (self.r0 >= 0 and self.r1 >= 0):
                raise ValueError("r0 and r1 must be >= 0")
        elif self.kind == "position":
            if self.table is None:
                raise ValueError("a position stretch needs a table")
            if np.any(np.asarray(self.table) < 0):
                raise ValueError("stretch table entries must be >= 0")
        else:
            raise ValueError(f"unknown stretch function {self.kind!r}")

    def matrix(self, X: FeatureSequence, Y: FeatureSequence) -> np.ndarray:
        if self.kind == "constant":
            return np.full((len(X), len(Y)), float(self.r))
        if self.kind == "feature-scaled":
            g, h = X.feature(self.feature), Y.feature(self.feature)
            return self.r0 + self.r1 * np.abs(g[:, None] - h[None, :])
        return _table(self.table, X, Y)


@dataclass(frozen=True)
class CostModel:
    ground: GroundCost = GroundCost()
    modulus: Modulus = Modulus()
    stretch: StretchFn = StretchFn()

    @classmethod
    def constant(cls, r: float, ground: str = "angular-abs") -> "CostModel":
        return cls(GroundCost(ground), Modulus(), StretchFn("constant", r=r))

    @classmethod
    def from_dict(cls, doc: dict) -> "CostModel":
        """Build from the JSON config layout, e.g.::

            {"ground": "angular-abs",
             "modulus": {"kind": "constant", "c": 2.0},
             "stretch": {"kind": "feature-scaled", "r0": 1, "r1": 0.5,
                         "feature": "velocity"}}

        ``ground`` may also be an object such as
        ``{"kind": "scalar-squared", "feature": "velocity"}``.
        """
        if not isinstance(doc, dict):
            raise ValueError("cost model config must be a JSON object")
        unknown = doc.keys() - {"ground", "modulus", "stretch"}
        if unknown:
            raise ValueError(f"unknown cost model fields {sorted(unknown)}")
        try:
            ground = doc.get("ground", "angular-abs")
            ground = GroundCost(ground) if isinstance(ground, str) else GroundCost(**ground)
            modulus = Modulus(**doc.get("modulus", {}))
            stretch = StretchFn(**doc.get("stretch", {}))
        except TypeError as exc:
            raise ValueError(f"malformed cost model config: {exc}") from exc
        return cls(ground, modulus, stretch)

    def to_dict(self) -> dict:
        g, mo, s = self.ground, self.modulus, self.stretch
        if g.kind == "table" or s.kind == "position" or mo.kind == "custom":
            raise ValueError("table and custom cost models are not serializable")
        ground = g.kind if g.kind != "scalar-squared" else {"kind": g.kind, "feature": g.feature}
        modulus = {"kind": mo.kind}
        modulus.update({"c": mo.c} if mo.kind == "constant" else {"feature": mo.feature})
        stretch = {"kind": s.kind}
        if s.kind == "constant":
            stretch["r"] = s.r
        else:
            stretch.update(r0=s.r0, r1=s.r1, feature=s.feature)
        return {"ground": ground, "modulus": modulus, "stretch": stretch}


def load_cost_model(path) -> CostModel:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed cost model: {exc}") from exc
    return CostModel.from_dict(doc)


def _pointwise(fn, x: Element, y: Element):
    X = FeatureSequence([x.angle], {k: [v] for k, v in x.features.items()})
    Y = FeatureSequence([y.angle], {k: [v] for k, v in y.features.items()})
    return float(fn.matrix(X, Y)[0, 0])


def evaluate_ground(cm: CostModel, x: Element, y: Element) -> float:
    if cm.ground.kind == "table":
        return float(cm.ground.table[x.index, y.index])
    return _pointwise(cm.ground, x, y)


def evaluate_sigma(cm: CostModel, x: Element, y: Element) -> float:
    if cm.stretch.kind == "position":
        return float(cm.stretch.table[x.index, y.index])
    return _pointwise(cm.stretch, x, y)


def evaluate_modulus(cm: CostModel, x: Element, y: Element) -> float:
    if cm.modulus.kind == "custom":
        return float(cm.modulus.func(x, y))
    return _pointwise(cm.modulus, x, y)


# --------------------------------------------------------------------------
# solvers


class DistanceReport(NamedTuple):
    total: float
    stretch_part: float
    distance_part: float
    optimal_mapping: Mapping
    m: int
    n: int


def _solve(ground: np.ndarray, sigma: np.ndarray) -> DistanceReport:
    m, n = ground.shape
    B = ground.tolist()
    S = sigma.tolist()
    T = [[0.0] * n for _ in range(m)]
    # 0 = diagonal, 1 = from (i-1, j), 2 = from (i, j-1)
    step = [[0] * n for _ in range(m)]
    T[0][0] = B[0][0]
    for i in range(1, m):
        T[i][0] = T[i - 1][0] + S[i][0] + B[i][0]
        step[i][0] = 1
    row0 = T[0]
    for j in range(1, n):
        row0[j] = row0[j - 1] + S[0][j] + B[0][j]
        step[0][j] = 2
    for i in range(1, m):
        prev, cur, Bi, Si, st = T[i - 1], T[i], B[i], S[i], step[i]
        for j in range(1, n):
            best, how = prev[j - 1], 0
            up = prev[j] + Si[j]
            if up < best:
                best, how = up, 1
            left = cur[j - 1] + Si[j]
            if left < best:
                best, how = left, 2
            cur[j] = Bi[j] + best
            st[j] = how

    i, j = m - 1, n - 1
    path = [(i, j)]
    stretch_part = 0.0
    while (i, j) != (0, 0):
        how = step[i][j]
        if how:
            stretch_part += S[i][j]
        if how == 0:
            i, j = i - 1, j - 1
        elif how == 1:
            i -= 1
        else:
            j -= 1
        path.append((i, j))
    path.reverse()
    distance_part = math.fsum(B[a][b] for a, b in path)
    mapping = Mapping(m, n, [(a + 1, b + 1) for a, b in path])
    return DistanceReport(T[m - 1][n - 1], stretch_part, distance_part, mapping, m, n)


def _check_nonempty(X, Y):
    if len(X) == 0 or len(Y) == 0:
        raise ValueError("sequences must be nonempty")


def nem_sigma(X: FeatureSequence, Y: FeatureSequence, cm: CostModel) -> DistanceReport:
    """Minimum stretch-plus-distance cost over all monotone alignments.

    Returns the optimal cost, its split into stretch and distance parts,
    and one optimal mapping. Among equal-cost predecessors the backtrace
    prefers the diagonal, then ``(i-1, j)``, then ``(i, j-1)``.
    """
    _check_nonempty(X, Y)
    return _solve(cm.ground.matrix(X, Y), cm.stretch.matrix(X, Y))


def nem_r(X: FeatureSequence, Y: FeatureSequence, r: float) -> DistanceReport:
    """Elastic matching with a constant stretch penalty ``r`` on tangent angles."""
    if not r >= 0:
        raise ValueError(f"r must be >= 0, got {r}")
    return nem_sigma(X, Y, CostModel.constant(r))


def nem(X: FeatureSequence, Y: FeatureSequence) -> DistanceReport:
    """Classic elastic matching: unit stretch penalty, absolute angle cost."""
    return nem_r(X, Y, 1.0)


def brute_force_nem_sigma(X: FeatureSequence, Y: FeatureSequence, cm: CostModel,
                          cap: int = 7) -> float:
    """Minimum of :func:`mapping_cost` over every minimal mapping.

    Exponential in the lengths; meant as an independent check on
    :func:`nem_sigma` for short sequences.
    """
    _check_nonempty(X, Y)
    return min(mapping_cost(M, X, Y, cm).total
               for M in enumerate_minimal_mappings(len(X), len(Y), cap))


class CyclicResult(NamedTuple):
    report: DistanceReport
    best_rotation: int


def nem_sigma_cyclic(X: FeatureSequence, Y: FeatureSequence, cm: CostModel
                     ) -> CyclicResult:
    """Best :func:`nem_sigma` over every cyclic starting point of ``Y``.

    Ties go to the smallest rotation.
    """
    if not (X.closed and Y.closed):
        raise ValueError("cyclic matching needs closed contours")
    _check_nonempty(X, Y)
    best, best_k = None, 0
    for k in range(len(Y)):
        rep = nem_sigma(X, Y.rotated(k), cm)
        if best is None or rep.total < best.total:
            best, best_k = rep, k
    return CyclicResult(best, best_k)
