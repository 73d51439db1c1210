"""Automorphisms of the depth-N binary tree in portrait form.

Words are strings over {x, y}; the leftmost letter is the deepest, the empty
word is the root and the children of v are xv and yv. A word of length i is
numbered by reading x=0, y=1 as binary digits with the leftmost letter most
significant, so the rightmost letter is the parity of the index.

A portrait stores one bit per node of depth < N, living at the source node:
sigma(s v) = flip(s, e_v) sigma(v). Layer i occupies bits 2^i - 1 .. 2^(i+1) - 2
of one packed int. compose(s, t) applies t first.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "WordTooLong", "LevelMismatch", "SupportExceedsLevel", "NotInSubgroup",
    "LevelTooLarge", "TreeAutomorphism", "Z4Element", "IndexVector",
    "word_index", "index_word", "words", "layer_offset", "get_layer", "pack_layers",
    "images", "act_index", "compose_bits", "inverse_bits", "commutator_bits",
    "identity", "sigma_w", "act_on_word", "compose", "inverse", "commutator",
    "characters", "phi", "phi_tilde", "is_in_Ma", "psi", "psi_prime",
    "enumerate_omega", "enumerate_omega_bits", "index_vector", "restrict_bits",
]


class WordTooLong(ValueError):
    pass


class LevelMismatch(ValueError):
    pass


class SupportExceedsLevel(ValueError):
    pass


class NotInSubgroup(ValueError):
    pass


class LevelTooLarge(ValueError):
    pass


def word_index(w: str) -> int:
    n = 0
    for ch in w:
        if ch not in "xy":
            raise ValueError(f"bad letter {ch!r}")
        n = 2 * n + (ch == "y")
    return n


def index_word(j: int, length: int) -> str:
    return "".join("y" if j >> (length - 1 - k) & 1 else "x" for k in range(length))


def words(length: int) -> list:
    return [index_word(j, length) for j in range(1 << length)]


def layer_offset(i: int) -> int:
    return (1 << i) - 1


def get_layer(bits: int, i: int) -> int:
    return (bits >> layer_offset(i)) & ((1 << (1 << i)) - 1)


def pack_layers(layers) -> int:
    bits = 0
    for i, lay in enumerate(layers):
        if lay >> (1 << i):
            raise ValueError(f"layer {i} wider than 2^{i}")
        bits |= lay << layer_offset(i)
    return bits


def restrict_bits(bits: int, k: int) -> int:
    """Image in Omega_k: keep layers below k."""
    return bits & ((1 << ((1 << k) - 1)) - 1)


@lru_cache(maxsize=1 << 17)
def images(N: int, bits: int) -> tuple:
    """Per level L <= N, the tuple of images of the nodes of L_L."""
    out = [(0,)]
    for L in range(N):
        lay = get_layer(bits, L)
        prev = out[-1]
        half = 1 << L
        cur = [0] * (2 * half)
        for v in range(half):
            flip = (lay >> v & 1) << L
            cur[v] = prev[v] | flip
            cur[v | half] = prev[v] | (half ^ flip)
        out.append(tuple(cur))
    return tuple(out)


def act_index(N: int, bits: int, j: int, length: int) -> int:
    return images(N, bits)[length][j]


def compose_bits(N: int, s: int, t: int) -> int:
    """Portrait of "t then s": e_w = e^t_w + e^s_{t(w)}."""
    imgs = images(N, t)
    out = t
    for L in range(N):
        lay = get_layer(s, L)
        if not lay:
            continue
        off = layer_offset(L)
        img = imgs[L]
        acc = 0
        for v in range(1 << L):
            if lay >> img[v] & 1:
                acc |= 1 << v
        out ^= acc << off
    return out


def inverse_bits(N: int, s: int) -> int:
    imgs = images(N, s)
    out = 0
    for L in range(N):
        lay = get_layer(s, L)
        if not lay:
            continue
        img = imgs[L]
        acc = 0
        for v in range(1 << L):
            if lay >> v & 1:
                acc |= 1 << img[v]
        out |= acc << layer_offset(L)
    return out


def commutator_bits(N: int, s: int, t: int) -> int:
    """[s, t] = s t s^-1 t^-1."""
    st = compose_bits(N, s, t)
    ts = compose_bits(N, t, s)
    return compose_bits(N, st, inverse_bits(N, ts))


@dataclass(frozen=True)
class TreeAutomorphism:
    level: int
    bits: int = 0

    def layer(self, i: int) -> int:
        return get_layer(self.bits, i)

    def support(self) -> list:
        return [index_word(j, i) for i in range(self.level)
                for j in range(1 << i) if self.layer(i) >> j & 1]

    def __mul__(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        return compose(self, other)

    def __repr__(self):
        return f"TreeAutomorphism({self.level}, {{{', '.join(repr(w) for w in self.support())}}})"


def identity(N: int) -> TreeAutomorphism:
    return TreeAutomorphism(N, 0)


def sigma_w(N: int, w: str) -> TreeAutomorphism:
    """The single-bit portrait at node w."""
    if len(w) >= N:
        raise WordTooLong(f"|{w}| >= {N}")
    return TreeAutomorphism(N, 1 << (layer_offset(len(w)) + word_index(w)))


def act_on_word(s: TreeAutomorphism, w: str) -> str:
    if len(w) > s.level:
        raise WordTooLong(f"|{w}| > {s.level}")
    return index_word(act_index(s.level, s.bits, word_index(w), len(w)), len(w))


def _same(s, t):
    if s.level != t.level:
        raise LevelMismatch(f"levels {s.level} and {t.level}")


def compose(s: TreeAutomorphism, t: TreeAutomorphism) -> TreeAutomorphism:
    _same(s, t)
    return TreeAutomorphism(s.level, compose_bits(s.level, s.bits, t.bits))


def inverse(s: TreeAutomorphism) -> TreeAutomorphism:
    return TreeAutomorphism(s.level, inverse_bits(s.level, s.bits))


def commutator(s: TreeAutomorphism, t: TreeAutomorphism) -> TreeAutomorphism:
    _same(s, t)
    return TreeAutomorphism(s.level, commutator_bits(s.level, s.bits, t.bits))


def _even_mask(i: int) -> int:
    return int("01" * (1 << i), 2) & ((1 << (1 << i)) - 1) if i else 1


def phi(bits: int, i: int) -> int:
    return get_layer(bits, i).bit_count() & 1


def phi_tilde(bits: int, i: int, s: str) -> int:
    """Parity of layer i over words whose rightmost letter is s (i >= 1)."""
    lay = get_layer(bits, i)
    m = _even_mask(i)
    return ((lay & m) if s == "x" else (lay & ~m)).bit_count() & 1


def characters(s: TreeAutomorphism) -> dict:
    """{'phi': [phi_0..], 'phi_x': {i: ..}, 'phi_y': {i: ..}}."""
    N = s.level
    return {
        "phi": [phi(s.bits, i) for i in range(N)],
        "phi_x": {i: phi_tilde(s.bits, i, "x") for i in range(1, N)},
        "phi_y": {i: phi_tilde(s.bits, i, "y") for i in range(1, N)},
    }


IndexVector = frozenset


def index_vector(a) -> frozenset:
    """Support set from an iterable of positions or a 0/1 CSV string."""
    if isinstance(a, str):
        a = [k for k, c in enumerate(a.replace(" ", "").split(",")) if c and int(c) % 2]
    return frozenset(int(k) for k in a)


def _check_support(a, N):
    if any(k < 0 or k >= N for k in a):
        raise SupportExceedsLevel(f"support {sorted(a)} not inside [0,{N})")


def is_in_Ma(s: TreeAutomorphism, a) -> bool:
    a = index_vector(a)
    _check_support(a, s.level)
    return sum(phi(s.bits, k) for k in a) % 2 == 0


@dataclass(frozen=True)
class Z4Element:
    """F2 x F2 with (x1,y1)*(x2,y2) = (x1+x2+y1 y2, y1+y2); cyclic of order 4."""
    x: int = 0
    y: int = 0

    def star(self, other: "Z4Element") -> "Z4Element":
        return Z4Element((self.x + other.x + self.y * other.y) % 2, (self.y + other.y) % 2)

    __mul__ = star

    def to_int(self) -> int:
        """Isomorphism to Z/4 sending (0,1) to 1."""
        return {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}[(self.x, self.y)]


def psi(s: TreeAutomorphism, a) -> int:
    a = index_vector(a)
    if not a or 0 in a:
        raise ValueError("psi needs a nonzero vector with a_0 = 0")
    if not is_in_Ma(s, a):
        raise NotInSubgroup("element not in M_a")
    return sum(phi_tilde(s.bits, k, "x") for k in a) % 2


def psi_prime(s: TreeAutomorphism, a) -> Z4Element:
    a = index_vector(a)
    if 0 not in a or a == {0}:
        raise ValueError("psi' needs a_0 = 1 and a != e_0")
    if not is_in_Ma(s, a):
        raise NotInSubgroup("element not in M_a")
    return Z4Element(sum(phi_tilde(s.bits, k, "x") for k in a if k >= 1) % 2, phi(s.bits, 0))


def enumerate_omega_bits(N: int):
    if N > 4:
        raise LevelTooLarge(f"enumeration capped at N=4, got {N}")
    return range(1 << ((1 << N) - 1))


def enumerate_omega(N: int):
    for b in enumerate_omega_bits(N):
        yield TreeAutomorphism(N, b)
