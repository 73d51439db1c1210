"""F2 linear algebra on rows indexed by an ordered label set.

A row is a sorted tuple of labels (its support). Internally a row over a
fixed label universe is an int whose bit j stands for the j-th label.
Square classes use the labels SIGN < 2 < 3 < 5 < ..., tree layers use node
indices 0 .. 2^N - 1.
"""
from __future__ import annotations

from dataclasses import dataclass
__all__ = [
    "F2Row", "Subspace", "row", "span", "membership", "nullspace", "intersect",
    "subspace_sum", "annihilator", "rank", "reduce_against",
]

F2Row = tuple


def row(labels) -> F2Row:
    """Canonical row from an iterable of labels; repeated labels cancel."""
    out: set = set()
    for lab in labels:
        out ^= {lab}
    return tuple(sorted(out))


def _to_mask(r, index) -> int:
    if isinstance(r, int):
        return r
    m = 0
    for lab in r:
        m ^= 1 << index[lab]
    return m


def _echelon(masks):
    """Fully reduced echelon form; pivot of a row is its top bit."""
    piv: dict = {}
    for v in masks:
        for p in sorted(piv, reverse=True):
            if v >> p & 1:
                v ^= piv[p]
        if v:
            p = v.bit_length() - 1
            for q in piv:
                if piv[q] >> p & 1:
                    piv[q] ^= v
            piv[p] = v
    return tuple(piv[p] for p in sorted(piv, reverse=True))


@dataclass(frozen=True)
class Subspace:
    """Span of rows, stored as its reduced echelon basis over ``labels``."""
    labels: tuple
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self) -> dict:
        return {lab: j for j, lab in enumerate(self.labels)}

    def rows(self) -> list:
        return [self.unmask(b) for b in self.basis]

    def unmask(self, m: int) -> F2Row:
        return tuple(lab for j, lab in enumerate(self.labels) if m >> j & 1)

    def mask(self, r) -> int:
        return _to_mask(r, self.index())

    def reduce(self, v) -> int:
        v = v if isinstance(v, int) else self.mask(v)
        for b in self.basis:
            if v >> (b.bit_length() - 1) & 1:
                v ^= b
        return v

    def __contains__(self, v) -> bool:
        return self.reduce(v) == 0

    def elements(self):
        """All vectors of the subspace as masks (use only for small dims)."""
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return out

    def relabel(self, labels) -> "Subspace":
        """Same subspace viewed in a larger label universe."""
        labels = tuple(labels)
        if labels == self.labels:
            return self
        idx = {lab: j for j, lab in enumerate(labels)}
        return Subspace(labels, _echelon(_to_mask(self.unmask(b), idx) for b in self.basis))


def span(rows, labels=None) -> Subspace:
    rows = list(rows)
    if labels is None:
        labels = sorted({lab for r in rows if not isinstance(r, int) for lab in r})
    labels = tuple(labels)
    idx = {lab: j for j, lab in enumerate(labels)}
    return Subspace(labels, _echelon(_to_mask(r, idx) for r in rows))


def rank(rows) -> int:
    return span(rows).dim


def membership(v, S: Subspace) -> bool:
    if not isinstance(v, int) and any(lab not in S.index() for lab in v):
        return False
    return v in S


def reduce_against(v, S: Subspace) -> int:
    return S.reduce(v)


def nullspace(rows) -> Subspace:
    """Coefficient vectors (e_0..e_{k-1}) with sum e_i row_i = 0, labels 0..k-1."""
    rows = list(rows)
    k = len(rows)
    labels = sorted({lab for r in rows if not isinstance(r, int) for lab in r})
    idx = {lab: j for j, lab in enumerate(labels)}
    masks = [_to_mask(r, idx) for r in rows]
    width = max([m.bit_length() for m in masks] + [0])
    # augment each row with its own coordinate vector above the data bits
    piv: dict = {}
    kernel = []
    for i, m in enumerate(masks):
        v = m | (1 << (width + i))
        for p in sorted(piv, reverse=True):
            if v >> p & 1:
                v ^= piv[p]
        data = v & ((1 << width) - 1)
        if data == 0:
            kernel.append(v >> width)
        else:
            piv[data.bit_length() - 1] = v
    return Subspace(tuple(range(k)), _echelon(kernel))


def _common(S1: Subspace, S2: Subspace):
    labels = tuple(sorted(set(S1.labels) | set(S2.labels)))
    return labels, S1.relabel(labels), S2.relabel(labels)


def subspace_sum(S1: Subspace, S2: Subspace) -> Subspace:
    labels, A, B = _common(S1, S2)
    return Subspace(labels, _echelon(A.basis + B.basis))


def intersect(S1: Subspace, S2: Subspace) -> Subspace:
    labels, A, B = _common(S1, S2)
    ker = nullspace(list(A.basis) + list(B.basis))
    na = len(A.basis)
    out = []
    for c in ker.basis:
        v = 0
        for j in range(na):
            if c >> j & 1:
                v ^= A.basis[j]
        out.append(v)
    return Subspace(labels, _echelon(out))


def annihilator(S: Subspace) -> Subspace:
    """Vectors orthogonal to every row of S under the dot product."""
    n = len(S.labels)
    piv = {b.bit_length() - 1: b for b in S.basis}
    free = [j for j in range(n) if j not in piv]
    out = []
    for f in free:
        v = 1 << f
        for p, b in piv.items():
            if b >> f & 1:
                v |= 1 << p
        out.append(v)
    return Subspace(S.labels, _echelon(out))

