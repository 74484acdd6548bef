"""Empirical checks of metric, b-metric and extended b-metric axioms.

Every audit works on a finite sample of instances and a dissimilarity
``d(a, b) -> float``. Distances are computed once into a matrix, then
identity, symmetry, nonnegativity and (relaxed) triangle inequalities are
checked over pairs and triples. Audits report what they find; they never
raise on a failed axiom.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .contour import Contour, feature_sequence, resample_uniform
from .elastic import CostModel, nem_r

__all__ = [
    "AuditReport",
    "ModulusEstimate",
    "TripleWitness",
    "audit_dissimilarity",
    "audit_nem_r_bound",
    "check_axioms",
    "pairwise",
    "relaxation_modulus",
    "sample_triples",
    "theoretical_bound_nem_r",
    "theta_surrogate_nem_sigma",
    "verify_relaxed_triangle",
]

DENOMINATOR_FLOOR = 1e-12
VIOLATION_SLACK = 1e-9
EXHAUSTIVE_MAX = 12


@dataclass(frozen=True)
class TripleWitness:
    x: str
    y: str
    z: str
    lhs: float
    rhs: float
    ratio: float | None


@dataclass
class AuditReport:
    identity_ok: bool = True
    symmetry_ok: bool = True
    nonneg_ok: bool = True
    identity_failures: list = field(default_factory=list)
    symmetry_failures: list = field(default_factory=list)
    nonneg_failures: list = field(default_factory=list)
    max_ratio: float | None = None
    worst: TripleWitness | None = None
    bound: float | None = None
    violations: list = field(default_factory=list)
    triples_checked: int = 0

    @property
    def ok(self) -> bool:
        return (self.identity_ok and self.symmetry_ok and self.nonneg_ok
                and not self.violations)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["ok"] = self.ok
        return doc

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


@dataclass(frozen=True)
class ModulusEstimate:
    theta_hat: float | None
    sample_count: int
    floor: float
    witness: TripleWitness | None = None


def _names(samples, names):
    if names is not None:
        if len(names) != len(samples):
            raise ValueError("need one name per sample")
        return [str(n) for n in names]
    out = []
    for k, s in enumerate(samples):
        if isinstance(s, (int, float, np.number)):
            out.append(repr(float(s)))
            continue
        label = getattr(s, "source", None) or getattr(s, "name", None)
        out.append(str(label) if label else str(k))
    return out


def pairwise(d: Callable, samples: Sequence) -> np.ndarray:
    """Full (not assumed symmetric) matrix ``D[a, b] = d(samples[a], samples[b])``."""
    n = len(samples)
    D = np.empty((n, n))
    for a in range(n):
        for b in range(n):
            D[a, b] = d(samples[a], samples[b])
    return D


def sample_triples(n: int, count: int, seed: int = 0,
                   exhaustive_max: int = EXHAUSTIVE_MAX) -> list[tuple[int, int, int]]:
    """Ordered index triples: all of them for small ``n``, else ``count``
    drawn uniformly with replacement."""
    if n <= exhaustive_max:
        return list(itertools.product(range(n), repeat=3))
    rng = np.random.default_rng(seed)
    return [tuple(int(v) for v in t) for t in rng.integers(0, n, size=(count, 3))]


def check_axioms(d: Callable, samples: Sequence, tol: float = 0.0,
                 names: Sequence[str] | None = None,
                 D: np.ndarray | None = None) -> AuditReport:
    """Check ``d(x, x) <= tol``, ``|d(x, y) - d(y, x)| <= tol`` and
    ``d >= -tol`` on every sampled pair, listing every counterexample."""
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    if tol < 0:
        raise ValueError("tol must be >= 0")
    labels = _names(samples, names)
    D = pairwise(d, samples) if D is None else D
    rep = AuditReport()
    n = len(samples)
    for a in range(n):
        if abs(D[a, a]) > tol:
            rep.identity_failures.append((labels[a], float(D[a, a])))
        for b in range(n):
            if D[a, b] < -tol:
                rep.nonneg_failures.append((labels[a], labels[b], float(D[a, b])))
            if b > a and abs(D[a, b] - D[b, a]) > tol:
                rep.symmetry_failures.append(
                    (labels[a], labels[b], float(D[a, b]), float(D[b, a])))
    rep.identity_ok = not rep.identity_failures
    rep.symmetry_ok = not rep.symmetry_failures
    rep.nonneg_ok = not rep.nonneg_failures
    return rep


def _ratio_scan(D, triples, labels, floor):
    best, witness, used = None, None, 0
    for x, y, z in triples:
        den = D[x, y] + D[y, z]
        if den <= floor:
            continue
        used += 1
        ratio = D[x, z] / den
        if best is None or ratio > best:
            best = ratio
            witness = TripleWitness(labels[x], labels[y], labels[z],
                                    float(D[x, z]), float(den), float(ratio))
    return best, witness, used


def relaxation_modulus(d: Callable, samples: Sequence, triples=None, *,
                       names=None, floor: float = DENOMINATOR_FLOOR,
                       D: np.ndarray | None = None) -> ModulusEstimate:
    """Largest ``d(x, z) / (d(x, y) + d(y, z))`` over the triples.

    Triples whose denominator is at most ``floor`` are skipped; when all of
    them are, the estimate is ``None``.
    """
    labels = _names(samples, names)
    D = pairwise(d, samples) if D is None else D
    if triples is None:
        triples = list(itertools.product(range(len(samples)), repeat=3))
    best, witness, used = _ratio_scan(D, triples, labels, floor)
    return ModulusEstimate(None if best is None else float(best), used, floor, witness)


def verify_relaxed_triangle(d: Callable, samples: Sequence, theta, triples=None, *,
                            names=None, D: np.ndarray | None = None,
                            slack: float = VIOLATION_SLACK) -> AuditReport:
    """Find triples with ``d(x, z) > theta(x, z) * (d(x, y) + d(y, z)) + slack``.

    ``theta`` is a number or a function of the two endpoint samples. The
    report also carries the empirical max ratio and its witness; ``bound``
    is filled in when ``theta`` is a constant.
    """
    labels = _names(samples, names)
    D = pairwise(d, samples) if D is None else D
    if triples is None:
        triples = list(itertools.product(range(len(samples)), repeat=3))
    if callable(theta):
        cache = {}

        def th(x, z):
            if (x, z) not in cache:
                cache[(x, z)] = float(theta(samples[x], samples[z]))
            return cache[(x, z)]
        bound = None
    else:
        bound = float(theta)

        def th(x, z):
            return bound

    rep = AuditReport(bound=bound, triples_checked=len(triples))
    for x, y, z in triples:
        den = D[x, y] + D[y, z]
        rhs = th(x, z) * den
        if D[x, z] > rhs + slack:
            ratio = float(D[x, z] / den) if den > DENOMINATOR_FLOOR else None
            rep.violations.append(TripleWitness(labels[x], labels[y], labels[z],
                                                float(D[x, z]), float(rhs), ratio))
    best, witness, _ = _ratio_scan(D, triples, labels, DENOMINATOR_FLOOR)
    rep.max_ratio = None if best is None else float(best)
    rep.worst = witness
    return rep


def audit_dissimilarity(d: Callable, samples: Sequence, theta=1.0, triples=None, *,
                        names=None, tol: float = 1e-12,
                        D: np.ndarray | None = None) -> AuditReport:
    """Axiom check plus relaxed-triangle check in one report."""
    D = pairwise(d, samples) if D is None else D
    rep = verify_relaxed_triangle(d, samples, theta, triples, names=names, D=D)
    axioms = check_axioms(d, samples, tol, names=names, D=D)
    for key in ("identity", "symmetry", "nonneg"):
        setattr(rep, f"{key}_ok", getattr(axioms, f"{key}_ok"))
        setattr(rep, f"{key}_failures", getattr(axioms, f"{key}_failures"))
    return rep


def theoretical_bound_nem_r(r: float, uniform: bool = True) -> float:
    """Relaxation constant of constant-penalty matching: ``1 + pi/(2r)`` for
    uniformly sampled shapes, ``1 + pi/r`` otherwise."""
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    return 1.0 + math.pi / (2.0 * r) if uniform else 1.0 + math.pi / r


def theta_surrogate_nem_sigma(X, Z, cm: CostModel) -> float:
    """``1 + max`` of the ground-cost modulus over all pairs of ``X x Z``.

    A uniform bound on the modulus over the matched domain is what turns
    the pointwise relaxed inequality of the ground cost into one for the
    summed cost.
    """
    return 1.0 + float(np.max(cm.modulus.matrix(X, Z)))


def audit_nem_r_bound(shapes: Sequence[Contour], r: float, n_points: int = 32,
                      trials: int = 200, seed: int = 0) -> AuditReport:
    """Resample every shape to ``n_points`` and test the uniform-case bound.

    All shapes are uniformly resampled to the same count, pairwise
    constant-penalty distances are computed, and ``trials`` triples (every
    triple when there are at most 12 shapes) are checked against
    ``1 + pi/(2r)``. Triples with a vanishing denominator only enter the
    violation check, not the ratio.
    """
    for c in shapes:
        if not c.closed:
            raise ValueError(f"contour {c.name!r} is open")
    seqs = [feature_sequence(resample_uniform(c, n_points)) for c in shapes]
    names = [c.name for c in shapes]
    if len(set(names)) != len(names):
        names = [f"{k}:{nm}" for k, nm in enumerate(names)]
    D = pairwise(lambda a, b: nem_r(a, b, r).total, seqs)
    triples = sample_triples(len(seqs), trials, seed)
    return verify_relaxed_triangle(None, seqs, theoretical_bound_nem_r(r, True),
                                   triples, names=names, D=D)
