"""Adjusted post-critical orbits of f = (x - gamma)^2 - delta over Q."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (DEFAULT_BUDGET, FactorizationBudget, SquareClass, as_rational,
                    is_rational_square, joint_signatures)

__all__ = [
    "DegenerateOrbit", "NotASquare", "CaseHypothesisViolated", "NotASquareDelta",
    "DegenerateEntry", "QuadraticPolynomial", "OrbitData", "QuadExtElement",
    "adjusted_orbit", "product_ca", "compute_ctilde", "CTilde", "pm_orbit",
    "detect_pcf", "PCFReport", "rational_sqrt",
]


class DegenerateOrbit(ValueError):
    def __init__(self, k):
        super().__init__(f"c_{k} = 0")
        self.k = k


class NotASquare(ValueError):
    pass


class CaseHypothesisViolated(ValueError):
    pass


class NotASquareDelta(ValueError):
    pass


class DegenerateEntry(ValueError):
    def __init__(self, k):
        super().__init__(f"entry {k} of the +-orbit is 0")
        self.k = k


def rational_sqrt(q: Fraction):
    """Non-negative square root of q if it is a rational square, else None."""
    q = as_rational(q)
    if not is_rational_square(q):
        return None
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


@dataclass(frozen=True)
class QuadraticPolynomial:
    gamma: Fraction
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_rational(self.gamma))
        object.__setattr__(self, "delta", as_rational(self.delta))

    def __call__(self, z):
        return (z - self.gamma) ** 2 - self.delta

    @classmethod
    def monic(cls, b, c) -> "QuadraticPolynomial":
        """x^2 + b x + c rewritten as (x - gamma)^2 - delta."""
        b, c = as_rational(b), as_rational(c)
        g = -b / 2
        return cls(g, g * g - c)

    def __str__(self):
        return f"(x - {self.gamma})^2 - {self.delta}"


@dataclass(frozen=True)
class OrbitData:
    values: tuple
    classes: tuple = field(compare=False)


def _orbit_values(f: QuadraticPolynomial, n: int) -> list:
    vals = [f.delta]
    z = f(f.gamma)
    for _ in range(1, n):
        z = f(z)
        vals.append(z)
    return vals


def adjusted_orbit(f: QuadraticPolynomial, n: int, budget: FactorizationBudget = DEFAULT_BUDGET,
                   strict: bool = False) -> OrbitData:
    """c_0 = delta and c_k = f^(k+1)(gamma), with their square classes."""
    if n < 1:
        raise ValueError("depth must be >= 1")
    vals = _orbit_values(f, n)
    for k, v in enumerate(vals):
        if v == 0:
            raise DegenerateOrbit(k)
    return OrbitData(tuple(vals), tuple(joint_signatures(vals, budget, strict)))


def product_ca(orbit: OrbitData, a):
    """c_a = prod c_i^{a_i} together with its square class."""
    a = sorted(a)
    if a and a[-1] >= len(orbit.values):
        raise ValueError("support outside the orbit window")
    val, cls = Fraction(1), SquareClass()
    for i in a:
        val *= orbit.values[i]
        cls = cls + orbit.classes[i]
    return val, cls


@dataclass(frozen=True)
class QuadExtElement:
    """base + coef * sqrt(radicand)."""
    base: Fraction
    coef: Fraction
    radicand: Fraction

    def _chk(self, o):
        if o.radicand != self.radicand:
            raise ValueError("different quadratic fields")

    def __mul__(self, o: "QuadExtElement") -> "QuadExtElement":
        self._chk(o)
        return QuadExtElement(self.base * o.base + self.coef * o.coef * self.radicand,
                              self.base * o.coef + self.coef * o.base, self.radicand)

    def __add__(self, o):
        self._chk(o)
        return QuadExtElement(self.base + o.base, self.coef + o.coef, self.radicand)

    def __sub__(self, o):
        self._chk(o)
        return QuadExtElement(self.base - o.base, self.coef - o.coef, self.radicand)

    def conj(self):
        return QuadExtElement(self.base, -self.coef, self.radicand)

    def norm(self) -> Fraction:
        return self.base ** 2 - self.coef ** 2 * self.radicand

    def trace(self) -> Fraction:
        return 2 * self.base


@dataclass(frozen=True)
class CTilde:
    candidates: tuple      # nonzero values 2(+-d) + T
    d: Fraction
    trace: Fraction
    norm: Fraction
    dropped: tuple = ()    # branches that vanished


def ctilde_factors(f: QuadraticPolynomial, orbit: OrbitData, a) -> list:
    """The elements of Q(sqrt delta) whose product defines c~_a.

    For i = 1 the factor is c_0 + gamma - sqrt(delta), for i >= 2 it is
    c_{i-1} - gamma - sqrt(delta); each has norm c_i.
    """
    out = []
    for i in sorted(a):
        shift = f.gamma if i == 1 else -f.gamma
        out.append(QuadExtElement(orbit.values[i - 1] + shift, Fraction(-1), f.delta))
    return out


def compute_ctilde(f: QuadraticPolynomial, orbit: OrbitData, a,
                   budget: FactorizationBudget = DEFAULT_BUDGET) -> CTilde:
    a = frozenset(a)
    if not a or 0 in a:
        raise ValueError("c~_a needs a nonzero vector with a_0 = 0")
    if max(a) >= len(orbit.values):
        raise ValueError("support outside the orbit window")
    if rational_sqrt(f.delta) is not None:
        raise CaseHypothesisViolated("c_0 = delta is a square")
    ca, _ = product_ca(orbit, a)
    d = rational_sqrt(ca)
    if d is None:
        raise NotASquare(f"c_a = {ca} is not a square")
    prod = QuadExtElement(Fraction(1), Fraction(0), f.delta)
    for fac in ctilde_factors(f, orbit, a):
        prod = prod * fac
    nm = prod.norm()
    assert nm == ca, "norm identity failed"
    T = prod.trace()
    branches = (2 * d + T, -2 * d + T)
    return CTilde(tuple(b for b in branches if b != 0), d, T, nm,
                  tuple(b for b in branches if b == 0))


def pm_orbit(f: QuadraticPolynomial, n: int) -> list:
    """[c_0+gamma+u, c_0+gamma-u, c_1-gamma+u, c_1-gamma-u, ..., c_{n-2}-gamma-u]."""
    if n < 2:
        raise ValueError("need n >= 2")
    u = rational_sqrt(f.delta)
    if u is None:
        raise NotASquareDelta(f"delta = {f.delta} is not a square")
    vals = _orbit_values(f, n - 1)
    out = []
    for k, c in enumerate(vals):
        shift = f.gamma if k == 0 else -f.gamma
        out += [c + shift + u, c + shift - u]
    for k, v in enumerate(out):
        if v == 0:
            raise DegenerateEntry(k)
    return out


@dataclass(frozen=True)
class PCFReport:
    kind: str          # "periodic", "preperiodic" or "no-repeat"
    tail: tuple = ()
    cycle: tuple = ()
    steps: int = 0

    @property
    def is_pcf(self) -> bool:
        return self.kind != "no-repeat"


def detect_pcf(f: QuadraticPolynomial, max_steps: int = 64) -> PCFReport:
    """First repetition in gamma, f(gamma), f^2(gamma), ... within the bound.

    Stops early once the orbit provably escapes: archimedeanly when
    |z - gamma| exceeds the escape radius, or p-adically when the
    denominator of z - gamma squared fails to divide that of delta + gamma.
    """
    c = f.delta + f.gamma
    radius = (1 + math.sqrt(1 + 4 * abs(float(c)))) / 2
    seen: dict = {}
    orbit = []
    z = f.gamma
    for step in range(max_steps + 1):
        if z in seen:
            j = seen[z]
            tail, cycle = tuple(orbit[:j]), tuple(orbit[j:])
            return PCFReport("periodic" if j == 0 else "preperiodic", tail, cycle, step)
        seen[z] = step
        orbit.append(z)
        w = z - f.gamma
        if abs(w) > radius + 1e-9 or c.denominator % (w.denominator ** 2):
            return PCFReport("no-repeat", steps=step)
        z = f(z)
    return PCFReport("no-repeat", steps=max_steps)
