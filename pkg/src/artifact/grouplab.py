"""Augmentation filtrations, descending central series and their closed forms.

Everything here works inside Omega_N for N <= 4 with portraits packed into
ints (see treegroup). Vectors of F2^{L_N} are ints whose bit j is the node
with index j; Subspace labels are the node indices 0 .. 2^N - 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .f2linalg import Subspace, annihilator, span
from .treegroup import (LevelTooLarge, SupportExceedsLevel, commutator_bits, compose_bits,
                        get_layer, images, index_vector, inverse_bits, layer_offset,
                        pack_layers, phi, restrict_bits)

__all__ = [
    "IndexOutOfRange", "GroupTooLarge", "TruncationTooShallow", "LevelSubspace", "FiniteSubgroup",
    "digits_A", "build_Vi", "psi_functional", "act_vector", "augmentation_oracle",
    "transition_check", "transition_formula", "closure", "normal_closure", "lcs_oracle",
    "lcs_bruteforce", "omega", "omega_generators", "ma_subgroup", "ma_generators",
    "layered_series_term", "ma_series_formula", "expected_ma_series", "shifted_index",
    "beta_pairing", "beta_formula", "relabel_kernel", "fibered_product",
    "fibered_identification_check", "one_index_in_advance_check", "father_son_maps",
    "v2", "abelianization", "check_all",
]

MAX_ORDER = 1 << 15


class IndexOutOfRange(ValueError):
    pass


class GroupTooLarge(ValueError):
    pass


class TruncationTooShallow(ValueError):
    pass


def v2(h: int) -> int:
    return (h & -h).bit_length() - 1


# ---------------------------------------------------------------- subspaces

@dataclass(frozen=True)
class LevelSubspace:
    level: int
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim

    def __contains__(self, v: int) -> bool:
        return v in self.space

    def elements(self):
        return self.space.elements()


def _level(N: int, vectors) -> LevelSubspace:
    return LevelSubspace(N, span(vectors, labels=range(1 << N)))


def digits_A(N: int, i: int) -> list:
    """Positions k in 1..N with i = sum over k of 2^(N-k)."""
    return [k for k in range(1, N + 1) if i >> (N - k) & 1]


def _position_bit(N: int, j: int) -> int:
    """Bit of a node index holding the letter at position j (1 = leftmost)."""
    return N - j


def _d_set(N: int, A: list, k: int, f: dict, wp: int) -> int:
    """Mask of D_{i,k,f}(w'): words w'' w' with w'' in L_k and f(j) at position j."""
    m = 0
    for pre in range(1 << k):
        w = (pre << (N - k)) | wp
        if all((w >> _position_bit(N, j) & 1) == f[j] for j in A if j <= k):
            m |= 1 << w
    return m


def build_Vi(N: int, i: int) -> LevelSubspace:
    """V_i(N) from the binary digits of i; zero once i >= 2^N."""
    if i < 0 or i > (1 << N):
        raise IndexOutOfRange(f"i={i} outside [0, 2^{N}]")
    if i == 1 << N:
        return _level(N, [])
    A = digits_A(N, i)
    rows = []
    for k in A:
        frozen = [j for j in A if j <= k]
        f0 = {j: 0 for j in frozen}
        for choice in product((0, 1), repeat=len(frozen)):
            f = dict(zip(frozen, choice))
            if f == f0:
                continue
            for wp in range(1 << (N - k)):
                rows.append(_d_set(N, A, k, f, wp) ^ _d_set(N, A, k, f0, wp))
    cons = span(rows, labels=range(1 << N))
    return LevelSubspace(N, annihilator(cons))


def psi_functional(N: int, i: int, f: dict | None = None) -> int:
    """Mask of words with letter f(k) at position k for k in A_i (f defaults to all x)."""
    A = digits_A(N, i)
    f = f or {k: 0 for k in A}
    m = 0
    for w in range(1 << N):
        if all((w >> _position_bit(N, k) & 1) == f[k] for k in A):
            m |= 1 << w
    return m


def act_vector(N: int, bits: int, v: int, level: int | None = None) -> int:
    """Permutation action on F2^{L_level}: (s v)_{s(w)} = v_w."""
    level = N if level is None else level
    img = images(N, bits)[level]
    out = 0
    while v:
        low = v & -v
        out |= 1 << img[low.bit_length() - 1]
        v ^= low
    return out


def augmentation_oracle(gens, N: int, i: int, level: int | None = None) -> LevelSubspace:
    """I_G^i F2^{L_level} for G generated by ``gens`` (portraits at level N)."""
    k = N if level is None else level
    S = span([1 << j for j in range(1 << k)], labels=range(1 << k))
    for _ in range(i):
        S = span([b ^ act_vector(N, g, b, k) for g in gens for b in S.basis], labels=range(1 << k))
        if S.dim == 0:
            break
    return LevelSubspace(k, S)


def transition_formula(N: int, i: int, bits: int) -> int:
    return phi(bits, v2(i + 1))


def transition_check(N: int, i: int, bits: int, V: dict | None = None) -> bool:
    """Whether 1 + s maps V_i \\ V_{i+1} into V_{i+1} \\ V_{i+2}.

    1 + s always maps V_i into V_{i+1}, so the quantifier over all v reduces
    to one representative of the one-dimensional quotient.
    """
    if not 0 <= i < (1 << N) - 2:
        raise IndexOutOfRange(f"need 0 <= i < 2^{N} - 2")
    V = V or {j: build_Vi(N, j) for j in (i, i + 1, i + 2)}
    Vi, Vi1, Vi2 = V[i], V[i + 1], V[i + 2]
    for b in Vi.space.basis:
        assert b ^ act_vector(N, bits, b) in Vi1
    rep = next(b for b in Vi.space.basis if b not in Vi1)
    return (rep ^ act_vector(N, bits, rep)) not in Vi2


def father_son_maps(N: int):
    """s_N: F2^{L_{N-1}} -> F2^{L_N} (w -> xw + yw) and f_N: F2^{L_N} -> F2^{L_{N-1}}."""
    half = 1 << (N - 1)

    def s(v: int) -> int:
        return v | (v << half)

    def f(v: int) -> int:
        return (v ^ (v >> half)) & ((1 << half) - 1)

    return s, f


# ---------------------------------------------------------------- subgroups

@dataclass(frozen=True)
class FiniteSubgroup:
    level: int
    elements: frozenset
    generators: tuple = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, FiniteSubgroup) and self.level == other.level \
            and self.elements == other.elements

    def __hash__(self):
        return hash((self.level, self.elements))


def closure(N: int, gens, start=None) -> set:
    """Subgroup generated by ``gens`` (and the elements of ``start``)."""
    gens = [g for g in gens if g]
    elems = set(start or {0})
    frontier = list(elems)
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = compose_bits(N, e, g)
                if h not in elems:
                    elems.add(h)
                    nxt.append(h)
        frontier = nxt
        if len(elems) > MAX_ORDER:
            raise GroupTooLarge("closure exceeded 2^15 elements")
    return elems


def _make(N, elems, gens) -> FiniteSubgroup:
    return FiniteSubgroup(N, frozenset(elems), tuple(gens))


def omega_generators(N: int) -> list:
    return [1 << b for b in range((1 << N) - 1)]


def omega(N: int) -> FiniteSubgroup:
    if N > 4:
        raise LevelTooLarge("N <= 4")
    return _make(N, range(1 << ((1 << N) - 1)), [1 << layer_offset(k) for k in range(N)])


def _check_a(a, N):
    a = index_vector(a)
    if any(k >= N for k in a):
        raise SupportExceedsLevel(f"support {sorted(a)} not inside [0,{N})")
    return a


def ma_generators(N: int, a) -> list:
    """Generators of M_a inside Omega_N: free single bits off the support,
    same-layer pairs on it, and pairs linking the support layers."""
    a = _check_a(a, N)
    gens = []
    for L in range(N):
        off = layer_offset(L)
        if L not in a:
            gens += [1 << (off + j) for j in range(1 << L)]
        else:
            gens += [compose_bits(N, 1 << off, 1 << (off + j)) for j in range(1, 1 << L)]
    sup = sorted(a)
    for L in sup[1:]:
        gens.append(compose_bits(N, 1 << layer_offset(sup[0]), 1 << layer_offset(L)))
    return gens


def ma_subgroup(N: int, a) -> FiniteSubgroup:
    """M_a truncated to Omega_N, by filtering the full group."""
    a = _check_a(a, N)
    elems = [b for b in range(1 << ((1 << N) - 1)) if sum(phi(b, k) for k in a) % 2 == 0]
    return _make(N, elems, ma_generators(N, a))


def normal_closure(N: int, ambient_gens, seeds):
    """Normal closure of ``seeds`` in the group generated by ``ambient_gens``.

    Returns the element set and a generating list for it.
    """
    gens = []
    H = {0}
    queue = []
    for r in seeds:
        if r not in H:
            gens.append(r)
            H = closure(N, gens, H)
            queue.append(r)
    inv = {g: inverse_bits(N, g) for g in ambient_gens}
    while queue:
        r = queue.pop()
        for g in ambient_gens:
            c = compose_bits(N, compose_bits(N, g, r), inv[g])
            if c not in H:
                gens.append(c)
                H = closure(N, gens, H)
                queue.append(c)
    return H, gens


def lcs_oracle(G: FiniteSubgroup, depth: int | None = None) -> list:
    """[G^(0), G^(1), ...] with G^(i+1) = [G, G^(i)], until trivial or depth terms.

    [G, H] for normal H is the normal closure of the commutators of
    generators of G with generators of H.
    """
    if G.order > MAX_ORDER:
        raise GroupTooLarge("order above 2^15")
    N = G.level
    Ggens = list(G.generators) or sorted(G.elements)
    out = [G]
    cur_gens = Ggens
    while (depth is None or len(out) < depth) and out[-1].order > 1:
        seeds = {commutator_bits(N, x, y) for x in Ggens for y in cur_gens}
        H, cur_gens = normal_closure(N, Ggens, sorted(seeds))
        out.append(_make(N, H, cur_gens))
    return out


def lcs_bruteforce(G: FiniteSubgroup) -> list:
    """Descending central series from all commutators [g, h], g in G, h in G^(i)."""
    N = G.level
    out = [G]
    while out[-1].order > 1:
        comms = {commutator_bits(N, g, h) for g in G.elements for h in out[-1].elements}
        out.append(_make(N, closure(N, sorted(comms)), ()))
    return out


def abelianization(G: FiniteSubgroup):
    """(|G/[G,G]|, exponent of G/[G,G]) by brute force."""
    N = G.level
    D = lcs_oracle(G, depth=2)
    D = D[1] if len(D) > 1 else _make(N, {0}, ())
    Dset = D.elements
    exp = 1
    for g in G.elements:
        k, h = 1, g
        while h not in Dset:
            h = compose_bits(N, h, g)
            k += 1
        exp = max(exp, k)
    return G.order // D.order, exp


# ------------------------------------------------------- closed-form series

def _vspaces(N: int, i: int) -> list:
    return [build_Vi(k, min(i, 1 << k)) for k in range(N)]


def layered_series_term(N: int, i: int) -> FiniteSubgroup:
    """{s in Omega_N: layer k in V_i(k) for all k < N}."""
    return ma_series_formula(N, (), i)


def ma_series_formula(N: int, a, i: int) -> FiniteSubgroup:
    """Truncation of {layers in V_i(k), sum_k a_k [layer_k not in V_{i+1}(k)] = 0}."""
    a = _check_a(a, N)
    Vi, Vi1 = _vspaces(N, i), _vspaces(N, i + 1)
    choices = []
    for k in range(N):
        choices.append([(v, int(k in a and v not in Vi1[k])) for v in Vi[k].elements()])
    elems = []
    for combo in product(*choices):
        if sum(p for _, p in combo) % 2 == 0:
            elems.append(pack_layers([v for v, _ in combo]))
    return _make(N, elems, ())


def shifted_index(N: int, i: int) -> int:
    """i + [i / (2^{N+1} - 1)] with [.] the nearest integer."""
    d = (1 << (N + 1)) - 1
    return i + (2 * i + d) // (2 * d)


def expected_ma_series(N: int, a, i: int) -> FiniteSubgroup:
    """Predicted (M_a cap Omega_N)^(i): formula below 2^top, Omega-series or shifted beyond."""
    a = _check_a(a, N)
    if not a:
        return layered_series_term(N, i)
    top = max(a)
    if i < (1 << top):
        return ma_series_formula(N, a, i)
    if len(a) == 1:
        return layered_series_term(N, shifted_index(top, i))
    return layered_series_term(N, i)


# ------------------------------------------------------------------- beta_i

def _rep(N2: int, i: int) -> int:
    Vi, Vi1 = build_Vi(N2, i), build_Vi(N2, i + 1)
    return next(b for b in Vi.space.basis if b not in Vi1)


def beta_formula(N_max: int, i: int, x: dict, y: dict) -> dict:
    m = v2(i + 1)
    out = {}
    for N3 in range(N_max):
        if i + 1 >= 1 << N3:
            continue
        val = x.get(m, 0) * y.get(N3, 0)
        if (i + 1) & i == 0 and N3 > m:
            val += y.get(m, 0) * x.get(N3, 0)
        out[N3] = val % 2
    return out


def beta_pairing(N_max: int, i: int, x: dict, y: dict, check: bool = True) -> dict:
    """Commutator of lifts of x (an abelianization class) and y (a class of
    Omega^(i)/Omega^(i+1)), read layerwise through V_{i+1}/V_{i+2}."""
    levels_out = [N3 for N3 in range(N_max) if i + 1 < 1 << N3]
    if not levels_out:
        raise TruncationTooShallow(f"no level below {N_max} sees step {i + 1}")
    if any(n >= N_max for n, b in x.items() if b) or any(
            n >= N_max or i >= 1 << n for n, b in y.items() if b):
        raise TruncationTooShallow("input class not visible below the truncation")
    U = 0
    for n in sorted(x):
        if x[n]:
            U = compose_bits(N_max, U, 1 << layer_offset(n))
    V = pack_layers([_rep(k, i) if y.get(k, 0) else 0 for k in range(N_max)])
    C = commutator_bits(N_max, U, V)
    out = {}
    for k in range(N_max):
        lay = get_layer(C, k)
        assert lay in build_Vi(k, min(i + 1, 1 << k)), "commutator left Omega^(i+1)"
        if k in levels_out:
            out[k] = (lay & psi_functional(k, i + 1)).bit_count() & 1
    if check:
        assert out == beta_formula(N_max, i, x, y), (i, x, y, out)
    return out


# ------------------------------------------------------- fibered products

def relabel_kernel(N: int, i: int, bits: int) -> tuple:
    """Element of ker(Omega_N -> Omega_i) as a 2^i-tuple of Omega_{N-i} portraits."""
    assert restrict_bits(bits, i) == 0
    out = []
    for w in range(1 << i):
        layers = []
        for j in range(N - i):
            lay = get_layer(bits, i + j)
            layers.append(sum(((lay >> ((u << i) | w)) & 1) << u for u in range(1 << j)))
        out.append(pack_layers(layers))
    return tuple(out)


def fibered_product(M: int, copies: int, base: FiniteSubgroup) -> set:
    """Tuples in base^copies with equal phi-characters across coordinates."""
    by_char: dict = {}
    for g in base.elements:
        by_char.setdefault(tuple(phi(g, k) for k in range(M)), []).append(g)
    out = set()
    for group in by_char.values():
        out.update(product(group, repeat=copies))
    return out


def fibered_identification_check(N: int, a, i: int) -> bool:
    a = _check_a(a, N)
    if i > N:
        raise IndexOutOfRange("need 2^i <= 2^N")
    lhs = {relabel_kernel(N, i, g) for g in ma_series_formula(N, a, (1 << i) - 1).elements}
    sh = {k - i for k in a if k >= i}
    rhs = fibered_product(N - i, 1 << i, ma_subgroup(N - i, sh))
    return lhs == rhs


def one_index_in_advance_check(N: int, k: int, trunc: int) -> bool:
    """M_{e_N}^(2^k (2^{N+1}-1)) against (Omega^(1))^(2^{N+1+k}) at truncation ``trunc``."""
    j = N + 1 + k
    idx = (1 << k) * ((1 << (N + 1)) - 1)
    series = lcs_oracle(ma_subgroup(trunc, {N}))
    term = series[idx].elements if idx < len(series) else frozenset({0})
    lhs = {relabel_kernel(trunc, j, g) for g in term}
    base = layered_series_term(trunc - j, 1).elements
    return lhs == set(product(sorted(base), repeat=1 << j))


# ------------------------------------------------------------ oracle suite

def check_all(N: int) -> dict:
    """Every closed form at level N against its brute-force oracle."""
    if not 1 <= N <= 4:
        raise IndexOutOfRange("level must be in 1..4")
    gens = omega_generators(N)
    out = {}
    out["filtration"] = all(
        build_Vi(N, i).space == augmentation_oracle(gens, N, i).space
        and build_Vi(N, i).dim == (1 << N) - i
        for i in range((1 << N) + 1))
    series = lcs_oracle(omega(N))
    out["omega_series"] = all(
        series[i] == layered_series_term(N, i) if i < len(series)
        else layered_series_term(N, i).order == 1
        for i in range((1 << (N - 1)) + 2))
    out["transition"] = all(
        transition_check(N, i, g) == bool(transition_formula(N, i, g))
        for i in range((1 << N) - 2) for g in gens)
    shift = True
    for e in range(min(N, 2)):
        Mgens = ma_generators(N, {e})
        for i in range((1 << N) + 1):
            want = build_Vi(N, min(shifted_index(e, i), 1 << N)).space
            shift &= augmentation_oracle(Mgens, N, i).space == want
    out["extremal_shift"] = shift
    beta = True
    for i in range(min(4, (1 << (N - 1)) - 1)):
        xs = [{k: 1} for k in range(N)]
        ys = [{k: 1} for k in range(N) if i < 1 << k]
        for x in xs:
            for y in ys:
                try:
                    beta_pairing(N, i, x, y)
                except TruncationTooShallow:
                    pass
                except AssertionError:
                    beta = False
    out["beta_pairing"] = beta
    return out
