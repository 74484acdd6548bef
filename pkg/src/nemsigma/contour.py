"""Ordered contour points, shape generators and tangent-angle profiles.

Contours are polygonal: a closed contour joins its last point back to the
first implicitly. Attributes (e.g. a robot's velocity) may be given once per
contour or once per point; per-contour scalars are broadcast when a
:class:`FeatureSequence` is built.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, NamedTuple, Union

import numpy as np

__all__ = [
    "Contour",
    "Element",
    "FeatureSequence",
    "TangentProfile",
    "angular_difference",
    "feature_sequence",
    "generate_shape",
    "load_contour",
    "resample_uniform",
    "rotate_start",
    "save_contour",
    "tangent_profile",
]

TWO_PI = 2.0 * math.pi

AttrValue = Union[float, tuple]


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Contour:
    """An ordered list of 2-D boundary points.

    Parameters
    ----------
    name : str
    points : array_like, shape (N, 2)
    closed : bool
        When true the boundary wraps from the last point back to the first.
    attrs : mapping
        Attribute name to either a scalar (per contour) or a sequence of
        ``N`` values (per point).
    """

    name: str
    points: np.ndarray
    closed: bool = True
    attrs: Mapping[str, AttrValue] = field(default_factory=dict)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (N, 2), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("contour coordinates must be finite")
        n = len(pts)
        if n < (3 if self.closed else 2):
            raise ValueError(f"contour {self.name!r} has too few points ({n})")
        if np.any(np.all(pts[1:] == pts[:-1], axis=1)):
            raise ValueError("consecutive contour points must differ")
        if self.closed and np.array_equal(pts[0], pts[-1]):
            raise ValueError("closed contour must not repeat its first point")
        attrs = {}
        for key, value in dict(self.attrs).items():
            if np.ndim(value) == 0:
                attrs[key] = float(value)
            else:
                vals = tuple(float(v) for v in value)
                if len(vals) != n:
                    raise ValueError(
                        f"attribute {key!r} has {len(vals)} values for {n} points"
                    )
                attrs[key] = vals
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "attrs", attrs)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, Contour):
            return NotImplemented
        return (
            self.name == other.name
            and self.closed == other.closed
            and np.array_equal(self.points, other.points)
            and self.attrs == other.attrs
        )

    def __hash__(self):
        return hash((self.name, self.closed, self.points.tobytes()))

    def replace(self, **changes) -> "Contour":
        kw = dict(name=self.name, points=self.points, closed=self.closed,
                  attrs=self.attrs)
        kw.update(changes)
        return Contour(**kw)

    def translated(self, dx: float, dy: float = 0.0) -> "Contour":
        return self.replace(points=self.points + np.array([dx, dy]))

    def perimeter(self) -> float:
        return float(_segment_lengths(self.points, self.closed).sum())


class TangentProfile(NamedTuple):
    """Tangent directions in ``[0, 2*pi)``, one per contour point."""

    angles: np.ndarray

    def __len__(self):
        return len(self.angles)


class Element(NamedTuple):
    """A single sequence element handed to pointwise cost functions."""

    index: int
    angle: float
    features: Mapping[str, float]


@dataclass(frozen=True, eq=False)
class FeatureSequence:
    """Tangent angles plus aligned per-point scalar features.

    This is what the elastic solvers consume. ``closed`` records whether the
    source contour wraps, which cyclic matching requires.
    """

    angles: np.ndarray
    features: Mapping[str, np.ndarray] = field(default_factory=dict)
    source: str = ""
    closed: bool = True

    def __post_init__(self):
        angles = _frozen(self.angles)
        if angles.ndim != 1 or len(angles) == 0:
            raise ValueError("a feature sequence needs at least one angle")
        feats = {}
        for key, value in dict(self.features).items():
            arr = np.array(value, dtype=float)
            if arr.ndim == 0:
                arr = np.full(len(angles), float(arr))
            if arr.shape != angles.shape:
                raise ValueError(
                    f"feature {key!r} has {arr.size} values for {angles.size} angles"
                )
            arr.setflags(write=False)
            feats[key] = arr
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "features", feats)

    def __len__(self):
        return len(self.angles)

    def feature(self, name: str) -> np.ndarray:
        try:
            return self.features[name]
        except KeyError:
            raise KeyError(
                f"sequence {self.source!r} has no feature {name!r}"
            ) from None

    def element(self, i: int) -> Element:
        return Element(i, float(self.angles[i]),
                       {k: float(v[i]) for k, v in self.features.items()})

    def rotated(self, k: int) -> "FeatureSequence":
        """Cyclically shift so that element ``k`` comes first."""
        return FeatureSequence(
            np.roll(self.angles, -k),
            {key: np.roll(v, -k) for key, v in self.features.items()},
            source=self.source,
            closed=self.closed,
        )


def _segment_lengths(points, closed):
    nxt = np.roll(points, -1, axis=0) if closed else points[1:]
    cur = points if closed else points[:-1]
    return np.hypot(*(nxt - cur).T)


# --------------------------------------------------------------------------
# generation


def _check_positive(**params):
    for key, value in params.items():
        if not value > 0:
            raise ValueError(f"{key} must be positive, got {value}")


def _polygon_samples(vertices, n):
    # n points equally spaced in arc length around the closed polygon,
    # starting at the first vertex
    lengths = _segment_lengths(vertices, True)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    s = np.arange(n) * (cum[-1] / n)
    return _points_at(vertices, cum, s)


def _points_at(vertices, cum, s):
    idx = np.searchsorted(cum, s, side="right") - 1
    idx = np.clip(idx, 0, len(vertices) - 1)
    start = vertices[idx]
    end = vertices[(idx + 1) % len(vertices)]
    seg = cum[idx + 1] - cum[idx]
    t = np.where(seg > 0, (s - cum[idx]) / np.where(seg > 0, seg, 1.0), 0.0)
    return start + t[:, None] * (end - start)


def generate_shape(
    kind: str,
    point_count: int,
    *,
    name: str | None = None,
    seed: int | None = None,
    rotation: float = 0.0,
    center: tuple[float, float] = (0.0, 0.0),
    attrs: Mapping[str, AttrValue] | None = None,
    **params,
) -> Contour:
    """Generate a closed, counterclockwise contour.

    Supported kinds and their parameters:

    ``circle``
        ``radius`` (default 1).
    ``ellipse``
        semi-axes ``a`` along x and ``b`` along y.
    ``regular_polygon``
        ``sides`` and circumradius ``radius``; samples are spread uniformly
        in arc length starting at the vertex on the positive x axis.
    ``superellipse``
        ``a``, ``b`` and exponent ``p``.
    ``perturbed``
        a circle of ``radius`` whose radial distance is jittered by a
        relative amount drawn uniformly from ``[-noise, noise]``.

    Sampling is deterministic; ``seed`` only matters for ``perturbed``.
    """
    kind = kind.replace("-", "_")
    if point_count < 3:
        raise ValueError(f"point_count must be >= 3, got {point_count}")
    n = int(point_count)
    t = TWO_PI * np.arange(n) / n
    if kind == "circle":
        radius = params.pop("radius", 1.0)
        _check_positive(radius=radius)
        pts = radius * np.column_stack([np.cos(t), np.sin(t)])
    elif kind == "ellipse":
        a, b = params.pop("a", 1.0), params.pop("b", 1.0)
        _check_positive(a=a, b=b)
        pts = np.column_stack([a * np.cos(t), b * np.sin(t)])
    elif kind == "regular_polygon":
        sides = int(params.pop("sides", 4))
        radius = params.pop("radius", 1.0)
        if sides < 3:
            raise ValueError(f"a polygon needs >= 3 sides, got {sides}")
        _check_positive(radius=radius)
        phi = TWO_PI * np.arange(sides) / sides
        verts = radius * np.column_stack([np.cos(phi), np.sin(phi)])
        pts = _polygon_samples(verts, n)
    elif kind == "superellipse":
        a, b = params.pop("a", 1.0), params.pop("b", 1.0)
        p = params.pop("p", 4.0)
        _check_positive(a=a, b=b, p=p)
        c, s = np.cos(t), np.sin(t)
        pts = np.column_stack([
            a * np.sign(c) * np.abs(c) ** (2.0 / p),
            b * np.sign(s) * np.abs(s) ** (2.0 / p),
        ])
    elif kind == "perturbed":
        radius = params.pop("radius", 1.0)
        noise = params.pop("noise", 0.05)
        _check_positive(radius=radius)
        if not 0 <= noise < 1:
            raise ValueError(f"noise must lie in [0, 1), got {noise}")
        rng = np.random.default_rng(seed)
        rad = radius * (1.0 + rng.uniform(-noise, noise, n))
        pts = rad[:, None] * np.column_stack([np.cos(t), np.sin(t)])
    else:
        raise ValueError(f"unknown shape kind {kind!r}")
    if params:
        raise TypeError(f"unexpected parameters for {kind}: {sorted(params)}")

    if rotation:
        rot = np.array([[math.cos(rotation), -math.sin(rotation)],
                        [math.sin(rotation), math.cos(rotation)]])
        pts = pts @ rot.T
    pts = pts + np.asarray(center, dtype=float)
    return Contour(name or kind, pts, True, attrs or {})


# --------------------------------------------------------------------------
# preprocessing


def tangent_profile(c: Contour) -> TangentProfile:
    """Tangent direction at every point by central differences.

    Indices wrap for closed contours; open contours use one-sided
    differences at their two ends.
    """
    pts = c.points
    if len(pts) < 3:
        raise ValueError("tangent estimation needs at least 3 points")
    if c.closed:
        diff = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    else:
        diff = np.empty_like(pts)
        diff[1:-1] = pts[2:] - pts[:-2]
        diff[0] = pts[1] - pts[0]
        diff[-1] = pts[-1] - pts[-2]
    angles = np.mod(np.arctan2(diff[:, 1], diff[:, 0]), TWO_PI)
    # mod can round a tiny negative up to exactly 2*pi
    angles[angles >= TWO_PI] = 0.0
    angles.setflags(write=False)
    return TangentProfile(angles)


def angular_difference(phi1, phi2):
    """Geodesic distance between two directions, in ``[0, pi]``.

    Works elementwise on arrays.
    """
    d = np.mod(np.abs(np.asarray(phi1, dtype=float) - phi2), TWO_PI)
    out = np.minimum(d, TWO_PI - d)
    return float(out) if np.ndim(out) == 0 else out


def resample_uniform(c: Contour, n: int) -> Contour:
    """Place ``n`` points equally spaced in arc length along ``c``.

    The first output point is the original first point. Per-point
    attributes are dropped since they have no natural resampling;
    per-contour ones are kept.
    """
    if not c.closed:
        raise ValueError("resampling is only supported for closed contours")
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")
    pts = _polygon_samples(c.points, n)
    attrs = {k: v for k, v in c.attrs.items() if np.ndim(v) == 0}
    return Contour(c.name, pts, True, attrs)


def rotate_start(c: Contour, k: int) -> Contour:
    """Cyclically rotate the point order so index ``k`` comes first."""
    n = len(c)
    if not 0 <= k < n:
        raise IndexError(f"rotation index {k} outside [0, {n})")
    attrs = {key: (v if np.ndim(v) == 0 else v[k:] + v[:k])
             for key, v in c.attrs.items()}
    return c.replace(points=np.roll(c.points, -k, axis=0), attrs=attrs)


def feature_sequence(c: Contour, features=None) -> FeatureSequence:
    """Tangent profile of ``c`` with its attributes as aligned features.

    ``features`` restricts which attributes are carried; by default all
    are, with per-contour scalars broadcast to every point.
    """
    names = c.attrs.keys() if features is None else features
    feats = {name: c.attrs[name] for name in names}
    return FeatureSequence(tangent_profile(c).angles, feats, c.name, c.closed)


# --------------------------------------------------------------------------
# JSON documents


def contour_to_dict(c: Contour) -> dict:
    return {
        "name": c.name,
        "closed": c.closed,
        "points": c.points.tolist(),
        "attrs": {k: (list(v) if isinstance(v, tuple) else v)
                  for k, v in c.attrs.items()},
    }


def contour_from_dict(doc) -> Contour:
    if not isinstance(doc, dict):
        raise ValueError("contour document must be a JSON object")
    missing = {"name", "closed", "points"} - doc.keys()
    if missing:
        raise ValueError(f"contour document lacks fields {sorted(missing)}")
    attrs = doc.get("attrs", {})
    if not isinstance(attrs, dict):
        raise ValueError("'attrs' must be an object")
    return Contour(str(doc["name"]), doc["points"], bool(doc["closed"]), attrs)


def save_contour(path, c: Contour) -> None:
    # json writes floats with repr, which round-trips exactly
    Path(path).write_text(json.dumps(contour_to_dict(c), indent=1))


def load_contour(path) -> Contour:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed contour document: {exc}") from exc
    return contour_from_dict(doc)
