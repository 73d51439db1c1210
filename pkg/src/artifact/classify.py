"""Finite-level certification of the arboreal image of a quadratic over Q."""
from __future__ import annotations

from dataclasses import dataclass, field

from .arith import DEFAULT_BUDGET, FactorizationBudget, IncompleteFactorization, joint_signatures
from .f2linalg import Subspace, membership, nullspace, span
from .orbit import (DegenerateEntry, DegenerateOrbit, OrbitData, QuadraticPolynomial,
                    adjusted_orbit, compute_ctilde, detect_pcf, pm_orbit, rational_sqrt)

__all__ = [
    "ClassificationVerdict", "stoll_level", "find_square_relations", "classify_image",
    "stability_certificate", "pm_dimensions",
]

KINDS = ("SurjectiveAtLevel", "IndexTwoCandidate", "NonStableIndexTwoCandidate",
         "SmallerImage", "PCF", "Inconclusive")


@dataclass
class ClassificationVerdict:
    kind: str
    level: int
    vector: tuple | None = None      # 0/1 entries from position 0
    case_tag: str | None = None
    evidence: list = field(default_factory=list)

    def __post_init__(self):
        assert self.kind in KINDS
        if self.kind == "IndexTwoCandidate":
            assert self.vector and any(self.vector)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "level": self.level,
                "vector": None if self.vector is None else _csv(self.vector),
                "case": self.case_tag, "evidence": list(self.evidence)}


def _csv(vec) -> str:
    """Index vector as 0/1 from position 0, trailing zeros dropped."""
    v = list(vec)
    while len(v) > 1 and v[-1] == 0:
        v.pop()
    return ",".join(map(str, v))


def _rows(classes):
    return [c.labels() for c in classes]


def stoll_level(orbit: OrbitData, n: int) -> bool:
    """The first n classes are F2-independent."""
    return span(_rows(orbit.classes[:n])).dim == n


def find_square_relations(orbit: OrbitData, n: int) -> Subspace:
    """Vectors a in F2^n with c_a a square."""
    if n > len(orbit.classes):
        raise ValueError("orbit shorter than window")
    return nullspace(_rows(orbit.classes[:n]))


def stability_certificate(orbit: OrbitData, n: int) -> bool:
    """No c_k with k < n is a square."""
    return all(not c.is_trivial() for c in orbit.classes[:n])


def _vec(mask: int, n: int) -> tuple:
    return tuple(mask >> j & 1 for j in range(n))


def pm_dimensions(f: QuadraticPolynomial, n: int, budget=DEFAULT_BUDGET, strict=False) -> list:
    """(k, dim, 2(k-1)) for k = 2..n, using the +-orbit."""
    entries = pm_orbit(f, n)
    classes = joint_signatures(entries, budget, strict)
    return [(k, span(_rows(classes[:2 * (k - 1)])).dim, 2 * (k - 1)) for k in range(2, n + 1)]


def classify_image(f: QuadraticPolynomial, n: int, budget: FactorizationBudget = DEFAULT_BUDGET,
                   strict: bool = False) -> ClassificationVerdict:
    if n < 2:
        raise ValueError("depth must be >= 2")
    pcf = detect_pcf(f)
    if pcf.is_pcf:
        return ClassificationVerdict("PCF", 0, evidence=[
            f"critical orbit is {pcf.kind}: tail {[str(z) for z in pcf.tail]}, "
            f"cycle {[str(z) for z in pcf.cycle]}"])
    try:
        if rational_sqrt(f.delta) is not None:
            return _nonstable(f, n, budget, strict)
        return _stable(f, n, budget, strict)
    except IncompleteFactorization as e:
        e.depth = n
        raise


def _nonstable(f, n, budget, strict):
    try:
        dims = pm_dimensions(f, n, budget, strict)
    except DegenerateEntry as e:
        return ClassificationVerdict("Inconclusive", 0, evidence=[str(e)])
    ev = [f"dim<+-orbit> at level {k}: {d} (target {t})" for k, d, t in dims]
    for k, d, t in dims:
        if d != t:
            return ClassificationVerdict("SmallerImage", k - 1, evidence=ev + [
                f"+-orbit dependent at level {k}"])
    vec = (1,) + (0,) * (n - 1)
    return ClassificationVerdict("NonStableIndexTwoCandidate", n, vec, "extremal", ev)


def _stable(f, n, budget, strict):
    try:
        orbit = adjusted_orbit(f, n, budget, strict)
    except DegenerateOrbit as e:
        return ClassificationVerdict("Inconclusive", e.k, evidence=[str(e)])
    rel = find_square_relations(orbit, n)
    dim = span(_rows(orbit.classes)).dim
    ev = [f"dim<c_0..c_{n - 1}> = {dim}", f"relations: {rel.dim}"]
    assert (rel.dim == 0) == stoll_level(orbit, n)
    if rel.dim == 0:
        return ClassificationVerdict("SurjectiveAtLevel", n, evidence=ev)
    if rel.dim > 1:
        return ClassificationVerdict("SmallerImage", n, evidence=ev + [
            "relations " + "; ".join(str(_vec(b, n)) for b in rel.basis)])
    a = _vec(rel.basis[0], n)
    support = [i for i in range(n) if a[i]]
    m = support[-1]
    below = span(_rows(orbit.classes[:max(m - 1, 0)])).dim
    ev += [f"unique relation {a}", f"top index {m}"]
    if m >= 2:
        ev.append(f"dim<c_0..c_{m - 2}> = {below} (need {m - 1})")
    if below != max(m - 1, 0):
        return ClassificationVerdict("SmallerImage", n, evidence=ev)
    if m < n - 1:
        ev.append(f"levels beyond {m} checked only for new relations")
    if a[0] == 1:
        return ClassificationVerdict("IndexTwoCandidate", n, a, "1a", ev)
    ct = compute_ctilde(f, orbit, support, budget)
    ev.append(f"norm identity holds: Nm = {ct.norm}")
    classes = joint_signatures(list(orbit.values) + list(ct.candidates), budget, strict)
    S = span(_rows(classes[:n]), labels=sorted({l for c in classes for l in c.labels()}))
    outside = [not membership(c.labels(), S) for c in classes[n:]]
    for v, o in zip(ct.candidates, outside):
        ev.append(f"c~ = {v}: {'outside' if o else 'inside'} span")
    if not ct.candidates:
        return ClassificationVerdict("Inconclusive", n, evidence=ev + ["both c~ branches vanish"])
    if all(outside):
        return ClassificationVerdict("IndexTwoCandidate", n, a, "1b", ev)
    if not any(outside):
        return ClassificationVerdict("SmallerImage", n, evidence=ev)
    return ClassificationVerdict("Inconclusive", n, evidence=ev + ["c~ branches disagree"])
