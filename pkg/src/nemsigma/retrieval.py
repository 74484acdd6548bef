"""Shape corpora, distance matrices, nearest-neighbour queries and the
three-robot scene.

Every corpus entry is uniformly resampled to a common point count before
its tangent profile is taken, so all sequences are comparable under one
cost model.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .contour import (Contour, FeatureSequence, feature_sequence, generate_shape,
                      load_contour, resample_uniform)
from .elastic import CostModel, GroundCost, Modulus, StretchFn, nem_sigma, nem_sigma_cyclic
from .metric_audit import (AuditReport, audit_dissimilarity, relaxation_modulus,
                           theta_surrogate_nem_sigma)

__all__ = [
    "Corpus",
    "DistanceMatrix",
    "RobotSpec",
    "SceneSpec",
    "build_corpus",
    "distance_matrix",
    "gap_distance",
    "knn_query",
    "load_manifest",
    "load_matrix",
    "robot_scenario",
    "save_matrix",
]


@dataclass(frozen=True)
class Corpus:
    names: tuple
    contours: tuple
    sequences: tuple
    cost_model: CostModel
    resample_n: int
    cyclic: bool = False

    def __len__(self):
        return len(self.names)

    def prepare(self, c: Contour) -> FeatureSequence:
        """Preprocess a query contour the same way as the entries."""
        return feature_sequence(resample_uniform(c, self.resample_n))

    def distance(self, X: FeatureSequence, Y: FeatureSequence) -> float:
        if self.cyclic:
            return nem_sigma_cyclic(X, Y, self.cost_model).report.total
        return nem_sigma(X, Y, self.cost_model).total


def _contour_from_spec(spec, base: Path | None = None) -> Contour:
    if isinstance(spec, Contour):
        return spec
    spec = dict(spec)
    if "file" in spec:
        path = Path(spec.pop("file"))
        if base is not None and not path.is_absolute():
            path = base / path
        c = load_contour(path)
        return c.replace(name=spec["name"]) if "name" in spec else c
    try:
        kind = spec.pop("kind")
        point_count = spec.pop("point_count", 128)
    except KeyError:
        raise ValueError(f"shape spec lacks 'kind': {spec}") from None
    return generate_shape(kind, point_count, **spec)


def build_corpus(specs: Sequence, cost_model: CostModel | None = None,
                 resample_n: int = 32, cyclic: bool = False,
                 base: Path | None = None) -> Corpus:
    """Generate or load every shape, resample it and take its tangent profile.

    ``specs`` items are :class:`Contour` objects, shape descriptors accepted
    by :func:`~nemsigma.contour.generate_shape` (``{"kind": ..., "name": ...,
    "point_count": ..., **params}``) or file references ``{"file": path}``.
    """
    if resample_n < 3:
        raise ValueError("resample_n must be >= 3")
    cost_model = cost_model or CostModel()
    contours = [_contour_from_spec(s, base) for s in specs]
    names = [c.name for c in contours]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ValueError(f"duplicate corpus names: {dupes}")
    seqs = [feature_sequence(resample_uniform(c, resample_n)) for c in contours]
    return Corpus(tuple(names), tuple(contours), tuple(seqs), cost_model,
                  resample_n, cyclic)


def load_manifest(path) -> Corpus:
    """Corpus from a JSON manifest::

        {"shapes": [<shape spec or {"file": ...}>, ...],
         "model": <cost model config>, "resample_n": 32, "cyclic": false}
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed manifest: {exc}") from exc
    if not isinstance(doc, dict) or "shapes" not in doc:
        raise ValueError(f"{path}: manifest needs a 'shapes' list")
    model = CostModel.from_dict(doc.get("model", {}))
    return build_corpus(doc["shapes"], model, int(doc.get("resample_n", 32)),
                        bool(doc.get("cyclic", False)), base=path.parent)


@dataclass(frozen=True)
class DistanceMatrix:
    names: tuple
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (len(self.names), len(self.names)):
            raise ValueError(f"{v.shape} matrix for {len(self.names)} names")
        v.setflags(write=False)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", v)


def distance_matrix(corpus: Corpus, n_jobs: int = 1) -> DistanceMatrix:
    """All pairwise distances of the corpus.

    Each unordered pair is solved once, entry ``i`` against entry ``j`` with
    ``i < j``, and written to both cells. With ``n_jobs > 1`` pairs are
    farmed out to threads; the result is identical to the serial fill.
    """
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    n = len(corpus)
    seqs = corpus.sequences
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def solve(pair):
        i, j = pair
        return corpus.distance(seqs[i], seqs[j])

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            results = list(pool.map(solve, pairs))
    else:
        results = [solve(p) for p in pairs]
    D = np.zeros((n, n))
    for (i, j), v in zip(pairs, results):
        D[i, j] = D[j, i] = v
    return DistanceMatrix(corpus.names, D)


def knn_query(corpus: Corpus, query: Contour, k: int) -> list[tuple[str, float]]:
    """The ``k`` entries closest to ``query``, ties broken by name."""
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    if not 1 <= k <= len(corpus):
        raise ValueError(f"k must lie in [1, {len(corpus)}], got {k}")
    q = corpus.prepare(query)
    scored = [(corpus.distance(q, s), name)
              for name, s in zip(corpus.names, corpus.sequences)]
    scored.sort()
    return [(name, d) for d, name in scored[:k]]


def save_matrix(path, m: DistanceMatrix) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", *m.names])
        for name, row in zip(m.names, m.values):
            w.writerow([name, *(repr(float(v)) for v in row)])


def load_matrix(path, tol: float = 1e-9) -> DistanceMatrix:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "name":
        raise ValueError(f"{path}: header must start with 'name'")
    names = rows[0][1:]
    body = rows[1:]
    if len(body) != len(names):
        raise ValueError(f"{path}: {len(body)} rows for {len(names)} columns")
    values = []
    for k, row in enumerate(body):
        if len(row) != len(names) + 1 or row[0] != names[k]:
            raise ValueError(f"{path}: malformed row {k + 1}")
        try:
            values.append([float(v) for v in row[1:]])
        except ValueError as exc:
            raise ValueError(f"{path}: row {k + 1}: {exc}") from exc
    values = np.array(values).reshape(len(names), len(names))
    if not np.allclose(values, values.T, rtol=0, atol=tol):
        raise ValueError(f"{path}: matrix is not symmetric")
    return DistanceMatrix(names, values)


# --------------------------------------------------------------------------
# the three-robot scene


@dataclass(frozen=True)
class RobotSpec:
    name: str
    shape: dict
    x: float
    velocity: float = 0.0


def _default_robots():
    unit = {"kind": "circle", "radius": 1.0}
    return (RobotSpec("green", unit, 0.0), RobotSpec("blue", unit, 4.0),
            RobotSpec("purple", unit, 8.0))


@dataclass(frozen=True)
class SceneSpec:
    """Robots centred on the x axis, moving along it at constant speed.

    ``gap_samples`` sets the boundary sampling used for the gap
    dissimilarity; ``match_points`` the resampling used for elastic
    matching, with stretch penalty ``r0 + r1 * |v_x - v_y|``.
    """

    robots: tuple = field(default_factory=_default_robots)
    t: float = 0.0
    r0: float = 1.0
    r1: float = 1.0
    gap_samples: int = 256
    match_points: int = 32

    def __post_init__(self):
        if len(self.robots) != 3:
            raise ValueError("a scene has exactly three robots")
        for rb in self.robots:
            if not (np.isfinite(rb.x) and np.isfinite(rb.velocity)):
                raise ValueError(f"robot {rb.name!r} has a non-finite state")

    def contours(self, n_points: int) -> list[Contour]:
        out = []
        for rb in self.robots:
            spec = dict(rb.shape)
            kind = spec.pop("kind")
            x = rb.x + self.t * rb.velocity
            c = generate_shape(kind, n_points, name=rb.name, center=(x, 0.0),
                               attrs={"velocity": rb.velocity}, **spec)
            out.append(resample_uniform(c, n_points))
        return out

    def cost_model(self) -> CostModel:
        return CostModel(GroundCost("angular-abs"), Modulus("constant", c=1.0),
                         StretchFn("feature-scaled", r0=self.r0, r1=self.r1,
                                   feature="velocity"))


def gap_distance(a: Contour, b: Contour) -> float:
    """Smallest Euclidean distance between the boundary samples of two shapes."""
    return float(cdist(a.points, b.points).min())


def _x_extent(c):
    return c.points[:, 0].min(), c.points[:, 0].max()


@dataclass
class RobotScenarioResult:
    gaps: np.ndarray
    nem_sigma: np.ndarray
    gap_audit: AuditReport
    nem_sigma_audit: AuditReport
    theta_hat: float | None
    overlapping: list


def robot_scenario(scene: SceneSpec = SceneSpec()) -> RobotScenarioResult:
    """Audit boundary gaps and elastic distances for the three robots.

    The boundary gap is checked against the plain triangle inequality,
    which collinear separated shapes break. Elastic distances use a
    velocity-scaled stretch penalty and are checked against the surrogate
    relaxation factor of :func:`theta_surrogate_nem_sigma`. Overlapping
    robots are listed, not rejected.
    """
    names = [rb.name for rb in scene.robots]
    dense = scene.contours(scene.gap_samples)
    gap_audit = audit_dissimilarity(gap_distance, dense, 1.0, names=names)
    gaps = np.array([[gap_distance(a, b) for b in dense] for a in dense])

    overlapping = []
    for i in range(3):
        for j in range(i + 1, 3):
            (lo1, hi1), (lo2, hi2) = _x_extent(dense[i]), _x_extent(dense[j])
            if lo1 <= hi2 and lo2 <= hi1:
                overlapping.append((names[i], names[j]))

    cm = scene.cost_model()
    seqs = [feature_sequence(c) for c in scene.contours(scene.match_points)]

    def d(x, y):
        return nem_sigma(x, y, cm).total

    D = np.array([[d(x, y) for y in seqs] for x in seqs])
    nem_audit = audit_dissimilarity(
        d, seqs, lambda x, z: theta_surrogate_nem_sigma(x, z, cm), names=names, D=D)
    theta_hat = relaxation_modulus(d, seqs, names=names, D=D).theta_hat
    return RobotScenarioResult(gaps, D, gap_audit, nem_audit, theta_hat, overlapping)
