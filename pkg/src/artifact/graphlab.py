"""Graphs of commutativity and the finite-level invariants built on them.

Vertices are packed portraits at a fixed level, or tuples of them for
subgroups of a product of copies of Omega_N.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from .grouplab import FiniteSubgroup, GroupTooLarge, MAX_ORDER, abelianization, lcs_oracle, omega
from .treegroup import (commutator_bits, compose_bits, index_vector, inverse_bits,
                        layer_offset, phi, word_index)

__all__ = [
    "TooFewVertices", "CommutativityGraph", "build_graph", "components", "d_gamma",
    "epsilon", "special_family", "z4_quotient_order", "commute",
    "stuff_dont_commute_counterexamples", "involution_lifts", "center",
    "random_fib_generating_set",
]


class TooFewVertices(ValueError):
    pass


def commute(N: int, g, h) -> bool:
    if isinstance(g, tuple):
        return all(commutator_bits(N, a, b) == 0 for a, b in zip(g, h))
    return commutator_bits(N, g, h) == 0


@dataclass
class CommutativityGraph:
    level: int
    vertices: list
    graph: nx.Graph

    def adjacent(self, i: int, j: int) -> bool:
        return self.graph.has_edge(i, j)


def build_graph(N: int, S) -> CommutativityGraph:
    """Edge between two vertices iff their commutator is nontrivial."""
    S = list(S)
    if len(S) > 10**4:
        raise ValueError("vertex set too large")
    G = nx.Graph()
    G.add_nodes_from(range(len(S)))
    for i, j in combinations(range(len(S)), 2):
        if not commute(N, S[i], S[j]):
            G.add_edge(i, j)
    return CommutativityGraph(N, S, G)


def components(gamma: CommutativityGraph):
    parts = [sorted(c) for c in nx.connected_components(gamma.graph)]
    return len(parts), sorted(parts)


def d_gamma(gamma: CommutativityGraph):
    """min over g of max over g' != g of dist(g, g'); inf if disconnected."""
    if gamma.graph.number_of_nodes() < 2:
        raise TooFewVertices("need at least two vertices")
    if not nx.is_connected(gamma.graph):
        return float("inf")
    return nx.radius(gamma.graph)


def epsilon(w: str) -> int:
    """Integer of a word read with its leftmost letter least significant."""
    return sum((ch == "y") << i for i, ch in enumerate(w))


def _bit(N: int, w: str) -> int:
    return 1 << (layer_offset(len(w)) + word_index(w))


def special_family(N_trunc: int, copies: int) -> list:
    """Diagonal (sigma_{x^n}) plus, per coordinate, sigma_{w1} sigma_{w2} for
    consecutive pairs {w1, w2} of L_n, for 1 <= n < N_trunc."""
    from .treegroup import index_word
    out = []
    for n in range(1, N_trunc):
        out.append(tuple([_bit(N_trunc, "x" * n)] * copies))
    for n in range(1, N_trunc):
        by_eps = sorted((epsilon(w), w) for w in (index_word(j, n) for j in range(1 << n)))
        pairs = [(by_eps[k][1], by_eps[k + 1][1]) for k in range(len(by_eps) - 1)]
        for c in range(copies):
            for w1, w2 in pairs:
                el = compose_bits(N_trunc, _bit(N_trunc, w1), _bit(N_trunc, w2))
                out.append(tuple(el if k == c else 0 for k in range(copies)))
    return out


def z4_quotient_order(G: FiniteSubgroup) -> int:
    """Largest invariant factor of G/[G,G]."""
    if G.order > MAX_ORDER:
        raise GroupTooLarge("order above 2^15")
    return abelianization(G)[1]


def stuff_dont_commute_counterexamples(N: int) -> list:
    """Pairs with phi_0(t1) = 1, t2 outside {t1, id} mod [G,G], yet [t1,t2] = id."""
    G = omega(N)
    D = lcs_oracle(G, depth=2)[1].elements
    bad = []
    for t1 in G.elements:
        if not phi(t1, 0):
            continue
        inv1 = inverse_bits(N, t1)
        for t2 in G.elements:
            if t2 in D or compose_bits(N, inv1, t2) in D:
                continue
            if commutator_bits(N, t1, t2) == 0:
                bad.append((t1, t2))
    return bad


def involution_lifts(N: int, a) -> list:
    """The explicit lifts for a with a_0 = 0 or a extremal, as
    (element, prescribed character vector) pairs."""
    a = index_vector(a)
    if 0 in a and len(a) > 1:
        raise ValueError("no involutive lifts when a_0 = 1 and a has other entries")
    x = lambda n: "x" * n
    y = lambda n: "y" * n
    out = []
    for n in range(N):
        if n not in a:
            out.append((_bit(N, x(n)), tuple(int(k == n) for k in range(N))))
    if len(a) == 1:
        (i0,) = a
        el = compose_bits(N, _bit(N, x(i0)), _bit(N, y(i0)))
        out.append((el, (0,) * N))
    else:
        for i1, i2 in combinations(sorted(a), 2):
            el = compose_bits(N, _bit(N, x(i1)), _bit(N, y(i2)))
            out.append((el, tuple(int(k in (i1, i2)) for k in range(N))))
    return out


def center(N: int) -> set:
    G = omega(N)
    return {g for g in G.elements if all(commutator_bits(N, g, s) == 0 for s in G.generators)}


def random_fib_generating_set(N: int, rng: random.Random, avoid_center: bool = True) -> list:
    """Random generators of (Omega_N)^2_fib, identity excluded.

    Elements with a nontrivial central coordinate are skipped when asked:
    at finite level the center of Omega_N is nontrivial, which is the one
    ingredient the component bound needs from infinite level.
    """
    G = omega(N)
    Z = center(N) - {0}
    by_char: dict = {}
    for g in G.elements:
        by_char.setdefault(tuple(phi(g, k) for k in range(N)), []).append(g)
    target = sum(len(v) ** 2 for v in by_char.values())
    keys = sorted(by_char)
    gens: list = []
    elems = {(0, 0)}
    while len(elems) < target:
        ch = rng.choice(keys)
        g = (rng.choice(by_char[ch]), rng.choice(by_char[ch]))
        if g == (0, 0) or (avoid_center and (g[0] in Z or g[1] in Z)) or g in elems:
            continue
        gens.append(g)
        elems = _pair_closure(N, gens)
    return gens


def _pair_closure(N: int, gens) -> set:
    elems = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = (compose_bits(N, e[0], g[0]), compose_bits(N, e[1], g[1]))
                if h not in elems:
                    elems.add(h)
                    nxt.append(h)
        frontier = nxt
    return elems
