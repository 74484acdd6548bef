"""Edge-set mappings between two index ranges.

A mapping on an ``m x n`` grid is a set of 1-based edges ``(i, j)``. It is
valid when every row and every column is covered and no two edges cross.

Valid mappings with no valid proper subset are the monotone paths from
``(1, 1)`` to ``(m, n)`` built from ``(+1, 0)``, ``(0, +1)`` and ``(+1, +1)``
steps that never turn a corner: a ``(+1, 0)`` step directly followed or
preceded by a ``(0, +1)`` step leaves a corner edge whose removal keeps
the mapping valid. All D(m-1, n-1) monotone paths (Delannoy number) are
available from :func:`enumerate_monotone_paths`; with nonnegative costs
both families have the same minimum cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "Edge",
    "Mapping",
    "Subdivision",
    "ValidityReport",
    "delannoy",
    "enumerate_minimal_mappings",
    "enumerate_monotone_paths",
    "format_mapping",
    "is_minimal",
    "mapping_cost",
    "parse_mapping",
    "stretch_edges",
    "subdivide",
    "validate_mapping",
]

ENUMERATION_CAP = 7


class Edge(NamedTuple):
    i: int
    j: int


@dataclass(frozen=True)
class Mapping:
    m: int
    n: int
    edges: tuple

    def __post_init__(self):
        edges = sorted({Edge(int(i), int(j)) for i, j in self.edges})
        if not edges:
            raise ValueError("a mapping needs at least one edge")
        for e in edges:
            if not (1 <= e.i <= self.m and 1 <= e.j <= self.n):
                raise ValueError(f"edge {tuple(e)} outside {self.m}x{self.n} grid")
        object.__setattr__(self, "edges", tuple(edges))

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, edge):
        return Edge(*edge) in self._edge_set

    @property
    def _edge_set(self):
        # cached lazily; frozen dataclass forbids normal assignment
        try:
            return self.__dict__["_set"]
        except KeyError:
            s = frozenset(self.edges)
            object.__setattr__(self, "_set", s)
            return s

    def transpose(self) -> "Mapping":
        return Mapping(self.n, self.m, [(j, i) for i, j in self.edges])

    def without(self, edge) -> "Mapping":
        return Mapping(self.m, self.n, [e for e in self.edges if e != edge])


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    missing_first_components: frozenset = frozenset()
    missing_second_components: frozenset = frozenset()
    crossing_pairs: tuple = ()


def validate_mapping(M: Mapping) -> ValidityReport:
    rows = {e.i for e in M.edges}
    cols = {e.j for e in M.edges}
    missing_i = frozenset(set(range(1, M.m + 1)) - rows)
    missing_j = frozenset(set(range(1, M.n + 1)) - cols)
    crossing = []
    edges = M.edges
    for a in edges:
        for b in edges:
            if a.i < b.i and a.j > b.j:
                crossing.append((a, b))
    valid = not (missing_i or missing_j or crossing)
    return ValidityReport(valid, missing_i, missing_j, tuple(crossing))


def _require_valid(M):
    report = validate_mapping(M)
    if not report.valid:
        raise ValueError(f"invalid mapping: {report}")


def is_minimal(M: Mapping) -> bool:
    """True if no edge can be dropped while keeping the mapping valid.

    Checking single removals suffices: if some proper subset ``S`` is
    valid, then so is ``M`` minus any edge outside ``S``, since it still
    covers everything ``S`` covers and edges of ``M`` never cross.
    """
    _require_valid(M)
    if len(M) == 1:
        return True
    return not any(validate_mapping(M.without(e)).valid for e in M.edges)


def stretch_edges(M: Mapping) -> frozenset:
    """Edges sharing a row with the edge below or a column with the edge left."""
    _require_valid(M)
    return frozenset(
        e for e in M.edges
        if (e.i - 1, e.j) in M or (e.i, e.j - 1) in M
    )


def delannoy(a: int, b: int) -> int:
    """Delannoy number D(a, b) by its three-term recurrence."""
    table = [[1] * (b + 1) for _ in range(a + 1)]
    for x in range(1, a + 1):
        for y in range(1, b + 1):
            table[x][y] = table[x - 1][y] + table[x][y - 1] + table[x - 1][y - 1]
    return table[a][b]


def _check_dims(m, n, cap):
    if m < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    if m > cap or n > cap:
        raise ValueError(f"enumeration capped at {cap}x{cap}, got {m}x{n}")


_CORNER = {(1, 0), (0, 1)}


def _paths(m, n, corners):
    def walk(path, last):
        i, j = path[-1]
        if (i, j) == (m, n):
            yield Mapping(m, n, path)
            return
        for step in ((1, 1), (1, 0), (0, 1)):
            if not corners and {step, last} == _CORNER:
                continue
            if i + step[0] <= m and j + step[1] <= n:
                yield from walk(path + [(i + step[0], j + step[1])], step)

    yield from walk([(1, 1)], None)


def enumerate_monotone_paths(m: int, n: int, cap: int = ENUMERATION_CAP
                             ) -> Iterator[Mapping]:
    """Yield all D(m-1, n-1) monotone staircase paths of an ``(m, n)`` grid."""
    _check_dims(m, n, cap)
    yield from _paths(m, n, corners=True)


def enumerate_minimal_mappings(m: int, n: int, cap: int = ENUMERATION_CAP
                               ) -> Iterator[Mapping]:
    """Yield every minimal ``(m, n)`` mapping: the corner-free monotone paths.

    Exponentially many, so dimensions above ``cap`` are refused.
    """
    _check_dims(m, n, cap)
    yield from _paths(m, n, corners=False)


# --------------------------------------------------------------------------
# subdivisions


@dataclass(frozen=True)
class Subdivision:
    breakpoints: np.ndarray

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def __len__(self):
        return len(self.breakpoints) - 1


def subdivide(n: int, breakpoints: Iterable[float] | None = None) -> Subdivision:
    """Split ``[1, n]`` into ``n`` subintervals.

    Without breakpoints this is the unit subdivision, every length 1, which
    weights each edge of a mapping equally. Explicit breakpoints must run
    strictly upward from 1 to ``n``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if breakpoints is None:
        pts = np.arange(n + 1, dtype=float)
    else:
        pts = np.asarray(list(breakpoints), dtype=float)
        if len(pts) != n + 1:
            raise ValueError(f"need {n + 1} breakpoints, got {len(pts)}")
        if pts[0] != 1 or pts[-1] != n:
            raise ValueError("breakpoints must start at 1 and end at n")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
    pts.setflags(write=False)
    return Subdivision(pts)


# --------------------------------------------------------------------------
# costs


class MappingCost(NamedTuple):
    total: float
    stretch_part: float
    distance_part: float


def mapping_cost(M: Mapping, X, Y, cm, x_sub: Subdivision | None = None,
                 y_sub: Subdivision | None = None) -> MappingCost:
    """Stretch plus distance cost of ``M`` aligning ``X`` with ``Y``.

    The distance part sums the ground cost over all edges, the stretch part
    sums the stretch function over :func:`stretch_edges`. Non-unit
    subdivisions scale each edge term by ``dx_i * dy_j``.
    """
    if (len(X), len(Y)) != (M.m, M.n):
        raise ValueError(
            f"mapping is {M.m}x{M.n} but sequences have lengths {len(X)}, {len(Y)}"
        )
    stretched = stretch_edges(M)
    ground = cm.ground.matrix(X, Y)
    sigma = cm.stretch.matrix(X, Y)
    wx = np.ones(M.m) if x_sub is None else x_sub.lengths
    wy = np.ones(M.n) if y_sub is None else y_sub.lengths
    if len(wx) != M.m or len(wy) != M.n:
        raise ValueError("subdivision sizes do not match the mapping")
    dist = stretch = 0.0
    for e in M.edges:
        w = wx[e.i - 1] * wy[e.j - 1]
        dist += w * ground[e.i - 1, e.j - 1]
        if e in stretched:
            stretch += w * sigma[e.i - 1, e.j - 1]
    return MappingCost(stretch + dist, stretch, dist)


# --------------------------------------------------------------------------
# text form


def format_mapping(M: Mapping) -> str:
    lines = [f"{M.m} {M.n}"] + [f"{e.i} {e.j}" for e in M.edges]
    return "\n".join(lines) + "\n"


def parse_mapping(text: str) -> Mapping:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or len(rows[0]) != 2:
        raise ValueError("mapping text needs an 'm n' header line")
    try:
        m, n = map(int, rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise ValueError(f"malformed mapping text: {exc}") from exc
    return Mapping(m, n, edges)
