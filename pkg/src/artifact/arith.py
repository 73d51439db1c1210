"""Exact rationals, budgeted integer factorization and square classes of Q^x."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "Rational", "as_rational", "FactorizationBudget", "DEFAULT_BUDGET",
    "IncompleteFactorization", "is_probable_prime", "factor_integer",
    "SquareClass", "squarefree_signature", "joint_signatures", "valuation",
    "is_rational_square", "SIGN",
]

Rational = Fraction

# column label used for the sign of a square class; sorts before every prime
SIGN = -1


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class FactorizationBudget:
    trial_division_bound: int = 10**6
    rho_iteration_cap: int = 10**7
    primality_rounds: int = 8
    seed: int = 0

    def __post_init__(self):
        if min(self.trial_division_bound, self.rho_iteration_cap, self.primality_rounds) <= 0:
            raise ValueError("budget entries must be positive")


DEFAULT_BUDGET = FactorizationBudget()


class IncompleteFactorization(Exception):
    """A composite cofactor survived the budget."""

    def __init__(self, cofactor: int, partial: dict | None = None):
        super().__init__(f"composite cofactor {cofactor} survived the factorization budget")
        self.cofactor = cofactor
        self.partial = dict(partial or {})


@lru_cache(maxsize=4)
def _primes_upto(bound: int) -> tuple:
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytes(len(range(p * p, bound + 1, p)))
    return tuple(i for i in range(bound + 1) if sieve[i])


# deterministic for n < 3.3e24
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 8, seed: int = 0) -> bool:
    """Miller-Rabin with a fixed witness set, plus random rounds for huge n."""
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    if not all(_strong_probable_prime(n, a) for a in _WITNESSES):
        return False
    if n < 3317044064679887385961981:
        return True
    rng = random.Random(seed ^ (n & 0xFFFFFFFF))
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1)) for _ in range(rounds))


def _brent_rho(n: int, cap: int, rng: random.Random) -> int | None:
    """Brent's cycle variant of Pollard rho; a nontrivial factor or None."""
    if n % 2 == 0:
        return 2
    spent = 0
    while spent < cap:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < cap:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def _split(n: int, budget: FactorizationBudget, rng, out: dict, stuck: list):
    if n == 1:
        return
    if is_probable_prime(n, budget.primality_rounds, budget.seed):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, budget, rng, out, stuck)
        _split(r, budget, rng, out, stuck)
        return
    d = _brent_rho(n, budget.rho_iteration_cap, rng)
    if d is None:
        stuck.append(n)
        return
    _split(d, budget, rng, out, stuck)
    _split(n // d, budget, rng, out, stuck)


def _factor_partial(n: int, budget: FactorizationBudget):
    """Prime map of |n| as far as the budget allows, plus surviving composites."""
    out, stuck = _factor_partial_cached(abs(n), budget)
    return dict(out), list(stuck)


@lru_cache(maxsize=4096)
def _factor_partial_cached(n: int, budget: FactorizationBudget):
    # deterministic for a given budget (seeded rng), so repeated orbit work is memoized
    out: dict = {}
    for p in _primes_upto(budget.trial_division_bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    stuck: list = []
    if n > 1:
        if n <= budget.trial_division_bound ** 2:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, budget, random.Random(budget.seed), out, stuck)
    return tuple(out.items()), tuple(stuck)


def factor_integer(n: int, budget: FactorizationBudget = DEFAULT_BUDGET) -> dict:
    """Prime factorization of |n| as {p: e}; the sign is left to the caller."""
    if n == 0:
        raise ValueError("cannot factor 0")
    out, stuck = _factor_partial(n, budget)
    if stuck:
        raise IncompleteFactorization(math.prod(stuck), out)
    return dict(sorted(out.items()))


@dataclass(frozen=True, order=True)
class SquareClass:
    """Element of Q^x/(Q^x)^2: a sign bit and the primes of odd exponent.

    ``opaque`` holds composite labels certified pairwise coprime with every
    other label of the same computation; it is empty whenever full
    factorization succeeded.
    """
    sign: int = 0
    primes: tuple = ()
    opaque: tuple = field(default=())

    def labels(self) -> tuple:
        lab = sorted(self.primes + self.opaque)
        return ((SIGN,) if self.sign else ()) + tuple(lab)

    def is_trivial(self) -> bool:
        return not self.sign and not self.primes and not self.opaque

    def __add__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(
            self.sign ^ other.sign,
            tuple(sorted(set(self.primes) ^ set(other.primes))),
            tuple(sorted(set(self.opaque) ^ set(other.opaque))),
        )


def squarefree_signature(q, budget: FactorizationBudget = DEFAULT_BUDGET) -> SquareClass:
    q = as_rational(q)
    if q == 0:
        raise ValueError("zero has no square class")
    n = q.numerator * q.denominator
    fac = factor_integer(n, budget)
    return SquareClass(int(n < 0), tuple(p for p, e in fac.items() if e % 2))


def _coprime_base(nums):
    """Refine integers > 1 into a pairwise coprime list with the same prime support."""
    base = [x for x in nums if x > 1]
    changed = True
    while changed:
        changed = False
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                g = math.gcd(base[i], base[j])
                if g > 1:
                    a, b = base[i] // g, base[j] // g
                    base = [x for k, x in enumerate(base) if k not in (i, j)]
                    base += [x for x in (a, b, g) if x > 1]
                    changed = True
                    break
            if changed:
                break
    return sorted(set(base))


def _square_root_tower(b: int):
    """Write b = r^(2^k) with r not a perfect square."""
    k = 0
    r = math.isqrt(b)
    while r * r == b and b > 1:
        b, k = r, k + 1
        r = math.isqrt(b)
    return b, k


def joint_signatures(values, budget: FactorizationBudget = DEFAULT_BUDGET, strict: bool = False):
    """Square classes of several rationals computed together.

    Cofactors that resist the factorization budget are refined by gcds
    against each other and against all primes found, then used as opaque
    coprime labels; this keeps every linear relation among the returned
    classes exact. With ``strict`` the first such cofactor raises
    IncompleteFactorization instead.
    """
    values = [as_rational(v) for v in values]
    if any(v == 0 for v in values):
        raise ValueError("zero has no square class")
    facs, stucks = [], []
    for v in values:
        n = v.numerator * v.denominator
        f, stuck = _factor_partial(n, budget)
        if stuck and strict:
            raise IncompleteFactorization(math.prod(stuck), f)
        facs.append(f)
        stucks.append(stuck)
    if not any(stucks):
        return [SquareClass(int(v < 0), tuple(sorted(p for p, e in f.items() if e % 2)))
                for v, f in zip(values, facs)]
    found = sorted({p for f in facs for p in f})
    cleaned = []
    for f, stuck in zip(facs, stucks):
        rest = []
        for c in stuck:
            for p in found:
                while c % p == 0:
                    c //= p
                    f[p] = f.get(p, 0) + 1
            if c > 1:
                rest.append(c)
        cleaned.append(rest)
    base = _coprime_base([c for rest in cleaned for c in rest])
    out = []
    for v, f, rest in zip(values, facs, cleaned):
        odd_opaque = set()
        for c in rest:
            for b in base:
                e = 0
                while c % b == 0:
                    c //= b
                    e += 1
                r, k = _square_root_tower(b)
                if e and k == 0 and e % 2:
                    odd_opaque ^= {r}
            assert c == 1
        primes = tuple(sorted(p for p, e in f.items() if e % 2))
        out.append(SquareClass(int(v < 0), primes, tuple(sorted(odd_opaque))))
    return out


def is_rational_square(q) -> bool:
    """Direct test by integer square roots, independent of factorization."""
    q = as_rational(q)
    if q < 0:
        return False
    a, b = q.numerator, q.denominator
    return math.isqrt(a) ** 2 == a and math.isqrt(b) ** 2 == b


def valuation(q, p: int) -> int:
    q = as_rational(q)
    if q == 0:
        raise ValueError("valuation of zero")
    v = 0
    a, b = q.numerator, q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v
