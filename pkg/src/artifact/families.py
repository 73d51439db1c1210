"""One-parameter families x^2 + phi(t) over Q(t) and the curves attached to them."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

import sympy
from sympy import Poly, QQ
from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius as _mobius

from .arith import (DEFAULT_BUDGET, FactorizationBudget, IncompleteFactorization, SIGN,
                    _primes_upto, as_rational, is_rational_square, joint_signatures)
from .classify import classify_image
from .f2linalg import intersect, span
from .orbit import QuadraticPolynomial

__all__ = [
    "InexactDivision", "IntPolynomial", "CurveSpec", "cpoly", "bpoly", "curve_catalog",
    "RECORDED_CURVE_FACTS", "family_polynomial", "ScanReport", "scan_specializations",
    "TrickReport", "trick_witness", "induction_claim", "InterReport", "inter_check",
]

T = sympy.Symbol("t")
X = sympy.Symbol("x")


class InexactDivision(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntPolynomial:
    """Dense polynomial in t with rational coefficients, constant term first."""
    coeffs: tuple

    def __post_init__(self):
        c = [as_rational(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_poly(cls, p: Poly) -> "IntPolynomial":
        return cls(tuple(Fraction(int(v.p), int(v.q)) for v in reversed(p.all_coeffs())))

    def poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)) or [0], T, domain=QQ)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, o: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial.from_poly(self.poly() * o.poly())

    def exact_div(self, o: "IntPolynomial") -> "IntPolynomial":
        q, r = self.poly().div(o.poly())
        if not r.is_zero:
            raise InexactDivision(f"{self} is not divisible by {o}")
        return IntPolynomial.from_poly(q)

    def gcd(self, o: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial.from_poly(self.poly().gcd(o.poly()))

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    def is_separable(self) -> bool:
        return self.gcd(self.derivative()).degree == 0

    def __call__(self, t):
        t = as_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __str__(self):
        return str(self.poly().as_expr())


ONE = IntPolynomial((1,))


@lru_cache(maxsize=None)
def cpoly(n: int) -> IntPolynomial:
    """c_1 = -t, c_{n+1} = c_n^2 + t."""
    if n < 1:
        raise ValueError("n >= 1")
    if n == 1:
        return IntPolynomial((0, -1))
    p = cpoly(n - 1).poly()
    return IntPolynomial.from_poly(p * p + Poly(T, T, domain=QQ))


@lru_cache(maxsize=None)
def bpoly(n: int) -> IntPolynomial:
    """Moebius quotient prod_{d | n} c_d^{mu(n/d)}."""
    num, den = ONE, ONE
    for d in divisors(n):
        m = int(_mobius(n // d))
        if m == 1:
            num = num * cpoly(d)
        elif m == -1:
            den = den * cpoly(d)
    return num.exact_div(den)


def _squarefree_part(p: IntPolynomial) -> IntPolynomial:
    lead, facs = p.poly().sqf_list()
    lead = Fraction(int(lead.p), int(lead.q))
    k = lead.numerator * lead.denominator
    sq = 1
    for q, e in sympy.factorint(abs(k)).items():
        sq *= q ** (e // 2)
    out = Poly((1 if k > 0 else -1) * abs(k) // (sq * sq), T, domain=QQ)
    for f, e in facs:
        if e % 2:
            out = out * f
    return IntPolynomial.from_poly(out)


@dataclass(frozen=True)
class CurveSpec:
    index_set: tuple
    rhs: IntPolynomial
    squarefree_part: IntPolynomial
    genus_bound: int


# Facts about ranks and point counts taken from the source computation, not recomputed.
RECORDED_CURVE_FACTS = {
    (1,): "infinitely many rational points",
    (2,): "infinitely many rational points",
    (1, 2): "infinitely many rational points",
    (3,): "elliptic curve of rank 0",
    (1, 3): "elliptic curve of rank 1",
    (2, 3): "elliptic curve of rank 1",
}


def curve_catalog(max_index: int) -> list:
    """Curves y^2 = prod_{i in I} c_i(t) for nonempty I in {1..max_index}."""
    if max_index > 6:
        raise ValueError("max_index <= 6")
    out = []
    idx = range(1, max_index + 1)
    for r in range(1, max_index + 1):
        for I in combinations(idx, r):
            rhs = ONE
            for i in I:
                rhs = rhs * cpoly(i)
            s = _squarefree_part(rhs)
            out.append(CurveSpec(I, rhs, s, (s.degree - 1) // 2))
    return sorted(out, key=lambda c: (max(c.index_set), c.index_set))


def family_polynomial(family: str, t) -> QuadraticPolynomial:
    """phi = x^2 + t, psi = x^2 - 1 - t^2, vartheta = x^2 + 1/(t^2 - 1), custom:EXPR."""
    t = as_rational(t)
    if family == "phi":
        return QuadraticPolynomial(0, -t)
    if family == "psi":
        return QuadraticPolynomial(0, 1 + t * t)
    if family == "vartheta":
        if t * t == 1:
            raise ValueError("t^2 = 1 is a pole")
        return QuadraticPolynomial(0, -1 / (t * t - 1))
    if family.startswith("custom:"):
        expr = sympy.sympify(family[7:], locals={"x": X, "t": T})
        p = Poly(expr.subs(T, sympy.Rational(t.numerator, t.denominator)), X)
        if p.degree() != 2:
            raise ValueError("custom family must be quadratic in x")
        a, b, c = (Fraction(int(v.p), int(v.q)) for v in p.all_coeffs())
        if a != 1:
            raise ValueError("custom family must be monic in x")
        return QuadraticPolynomial.monic(b, c)
    raise ValueError(f"unknown family {family!r}")


@dataclass
class ScanReport:
    family: str
    depth: int
    verdicts: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    def counts(self) -> dict:
        out: dict = {}
        for v in self.verdicts.values():
            key = v.kind if v.vector is None else f"{v.kind}({','.join(map(str, v.vector))})"
            out[key] = out.get(key, 0) + 1
        return out


def scan_specializations(family: str, t_values, depth: int,
                         budget: FactorizationBudget = DEFAULT_BUDGET,
                         strict: bool = False) -> ScanReport:
    rep = ScanReport(family, depth)
    for t in t_values:
        key = str(as_rational(t))
        try:
            rep.verdicts[key] = classify_image(family_polynomial(family, t), depth, budget, strict)
        except (ValueError, ArithmeticError, IncompleteFactorization) as e:
            rep.errors[key] = f"{type(e).__name__}: {e}"
    return rep


def _gamma_sequence(a: Fraction, depth: int) -> list:
    s = 1 if a > 0 else -1
    g = [None, Fraction(1)]
    for _ in range(depth):
        z = g[-1]
        g.append(abs(a) * z * z + s)
    return g


def _minus_one_nonresidue_hint(m: int) -> bool:
    return m > 0 and m % 4 == 3


@dataclass
class TrickReport:
    a: Fraction
    gamma2_square: bool
    witnesses: dict
    beta_nonsquare: dict

    @property
    def hypotheses_hold(self) -> bool:
        return self.gamma2_square and all(w is not None for w in self.witnesses.values())


def trick_witness(a, depth: int, budget: FactorizationBudget = DEFAULT_BUDGET) -> TrickReport:
    """Search m_n | gamma_n + gamma_{n+1} coprime to gamma_n with -1 a non-residue,
    and test directly that the numerators of beta_n are not squares."""
    a = as_rational(a)
    if a == 0:
        raise ValueError("a != 0")
    g = _gamma_sequence(a, depth + 1)
    gamma2_sq = is_rational_square(Fraction(g[2].numerator))
    witnesses = {}
    for n in range(2, depth + 1):
        m = (g[n] + g[n + 1]).numerator
        gn = g[n].numerator
        found = None
        if _minus_one_nonresidue_hint(abs(m)) and gcd(m, gn) == 1:
            found = abs(m)
        else:
            for p in _primes_upto(budget.trial_division_bound):
                if p % 4 == 3 and m % p == 0 and gn % p:
                    found = p
                    break
        witnesses[n] = found
    nonsq = {}
    for n in range(3, depth + 1):
        beta = Fraction(1)
        for d in divisors(n):
            beta *= g[d] ** int(_mobius(n // d))
        nonsq[n] = not is_rational_square(Fraction(beta.numerator))
    return TrickReport(a, gamma2_sq, witnesses, nonsq)


def induction_claim(a, k: int, ell: int) -> bool:
    """u | gamma_k + gamma_{k+1} implies u | gamma_k + gamma_{k+ell}, with u the numerator."""
    g = _gamma_sequence(as_rational(a), k + ell)
    u = (g[k] + g[k + 1]).numerator
    return (g[k] + g[k + ell]).numerator % u == 0


@dataclass
class InterReport:
    u: Fraction
    m: int
    intersection_dim: int
    checked_classes: int
    failures: list

    @property
    def holds(self) -> bool:
        return not self.failures


def _prime_support_inside(label: int, modulus: int) -> bool:
    """Every prime factor of label divides modulus."""
    while label > 1:
        d = gcd(label, modulus)
        if d == 1:
            return False
        label //= d
    return True


def inter_check(u, m: int, budget: FactorizationBudget = DEFAULT_BUDGET) -> InterReport:
    """For f = x^2 - u^2, every prime in a squarefree integer class of
    <c1-u, c2+u, ...> meet <c1+u, c2-u, ...> divides 2 c_1 (numerator or denominator)."""
    u = as_rational(u)
    if u == 0 or m < 2:
        raise ValueError("u != 0 and m >= 2")
    f = QuadraticPolynomial(0, u * u)
    c = [f.delta]
    z = f(Fraction(0))
    for _ in range(1, m):
        z = f(z)
        c.append(z)
    plus = [c[0] - u] + [ck + u for ck in c[1:]]
    minus = [c[0] + u] + [ck - u for ck in c[1:]]
    classes = joint_signatures(plus + minus, budget)
    labels = sorted(set().union(*(cl.labels() for cl in classes)))
    rows = [sum(1 << labels.index(l) for l in cl.labels()) for cl in classes]
    Vp, Vm = span(rows[:m], labels), span(rows[m:], labels)
    W = intersect(Vp, Vm)
    two_c1 = 2 * c[0]
    modulus = abs(two_c1.numerator) * two_c1.denominator
    failures = []
    elems = list(W.elements())
    for e in elems:
        for l in (labels[k] for k in range(len(labels)) if e >> k & 1):
            if l != SIGN and not _prime_support_inside(l, modulus):
                failures.append((e, l))
    return InterReport(u, m, W.dim, len(elems), failures)
