"""Valued fields K = F(t^(1/M)) with the t-adic valuation.

An element is num/den with num, den polynomials in u = t^(1/M) over the
residue field F. Elements are kept normalized: gcd(num, den) = 1, den monic,
and M minimal. For the integer value group M is always 1; for localized or
rational groups M may carry any prime the group allows.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import _upoly as up
from .errors import DivisionByZero, FieldMismatch, GroupMismatch, NegativeValuation, Unsatisfiable
from .residue_field import FieldDescriptor, FieldElement
from .valgroup import INFINITY, GroupDescriptor, GroupElement, _prime_factors


@dataclass(frozen=True)
class ValuedFieldDescriptor:
    base: FieldDescriptor
    group: GroupDescriptor
    symbol: str = "t"

    @property
    def puiseux(self) -> bool:
        return self.group.kind != "Integers"

    @property
    def residue_field(self) -> FieldDescriptor:
        return self.base

    def zero(self) -> ValuedElement:
        return ValuedElement(self, (), (self.base.one,), 1)

    def one(self) -> ValuedElement:
        return ValuedElement(self, (self.base.one,), (self.base.one,), 1)

    def t(self) -> ValuedElement:
        return ValuedElement(self, (self.base.zero, self.base.one), (self.base.one,), 1)

    def from_base(self, c) -> ValuedElement:
        """Embed an integer, Fraction, raw residue value or FieldElement as a constant."""
        F = self.base
        if isinstance(c, FieldElement):
            if c.field != F:
                raise FieldMismatch(f"{c.field} vs {F}")
            raw = c.raw
        elif isinstance(c, (int, Fraction)):
            raw = F.from_base(c)
        else:
            raw = c
        if raw == F.zero:
            return self.zero()
        return ValuedElement(self, (raw,), (F.one,), 1)

    def coerce(self, x) -> ValuedElement:
        if isinstance(x, ValuedElement):
            if x.K != self:
                raise FieldMismatch(f"{x.K} vs {self}")
            return x
        return self.from_base(x)

    def __str__(self):
        return f"{self.base}(({self.symbol})) with value group {self.group}"


class ValuedElement:
    """Normalized element of a valued field; immutable."""

    __slots__ = ("K", "num", "den", "M", "_hash")

    def __init__(self, K: ValuedFieldDescriptor, num: tuple, den: tuple, M: int):
        # trusted constructor: callers pass normalized data; use make() otherwise
        self.K = K
        self.num = num
        self.den = den
        self.M = M
        self._hash = None

    @classmethod
    def make(cls, K: ValuedFieldDescriptor, num, den, M: int = 1) -> ValuedElement:
        return _normalize(K, tuple(num), tuple(den), M)

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def valuation(self):
        """Exact valuation as a Fraction, or INFINITY for zero."""
        if not self.num:
            return INFINITY
        F = self.K.base
        return Fraction(up.ord_(F, self.num) - up.ord_(F, self.den), self.M)

    def residue_raw(self):
        F = self.K.base
        if not self.num:
            return F.zero
        on, od = up.ord_(F, self.num), up.ord_(F, self.den)
        if on < od:
            raise NegativeValuation(f"{self} has negative valuation")
        if on > od:
            return F.zero
        return F.div(self.num[on], self.den[od])

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ValuedElement):
            if other.K is not self.K and other.K != self.K:
                raise FieldMismatch(f"{other.K} vs {self.K}")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.K.from_base(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            return self
        if not self.num:
            return o
        F = self.K.base
        (a, b), (c, d), M = _common(self, o)
        one = (F.one,)
        g = one if b == one or d == one else up.gcd_fast(F, b, d)
        if g == one:
            num = up.add(F, up.mul(F, a, d), up.mul(F, c, b))
            if not num:
                return self.K.zero()
            return _finish(self.K, num, up.mul(F, b, d), M)
        b1, d1 = up.exact_div(F, b, g), up.exact_div(F, d, g)
        num = up.add(F, up.mul(F, a, d1), up.mul(F, c, b1))
        if not num:
            return self.K.zero()
        den = up.mul(F, b, d1)
        h = up.gcd_fast(F, num, g)
        if h != one:
            num, den = up.exact_div(F, num, h), up.exact_div(F, den, h)
        return _finish(self.K, num, den, M)

    __radd__ = __add__

    def __neg__(self):
        return ValuedElement(self.K, up.neg(self.K.base, self.num), self.den, self.M)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return self.K.zero()
        F = self.K.base
        (a, b), (c, d), M = _common(self, o)
        g1, g2 = up.gcd_fast(F, a, d), up.gcd_fast(F, c, b)
        num = up.mul(F, up.exact_div(F, a, g1), up.exact_div(F, c, g2))
        den = up.mul(F, up.exact_div(F, b, g2), up.exact_div(F, d, g1))
        return _finish(self.K, num, den, M)

    __rmul__ = __mul__

    def inverse(self) -> ValuedElement:
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return _finish(self.K, self.den, self.num, self.M)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise DivisionByZero("division by zero in the valued field")
        if not self.num:
            return self
        F = self.K.base
        (a, b), (c, d), M = _common(self, o)
        g1, g2 = up.gcd_fast(F, a, c), up.gcd_fast(F, d, b)
        num = up.mul(F, up.exact_div(F, a, g1), up.exact_div(F, d, g2))
        den = up.mul(F, up.exact_div(F, b, g2), up.exact_div(F, c, g1))
        return _finish(self.K, num, den, M)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.K.one()
        F = self.K.base
        # coprime num/den stay coprime and a monic den stays monic
        return ValuedElement(self.K, up.power(F, self.num, n), up.power(F, self.den, n), self.M)

    def __eq__(self, other):
        if isinstance(other, ValuedElement):
            return self.K == other.K and self.M == other.M and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.K.from_base(other)
            except ArithmeticError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.K, self.num, self.den, self.M))
        return self._hash

    # -- printing ------------------------------------------------------------

    def to_expr(self) -> str:
        num = _poly_expr(self.K, self.num, self.M)
        if self.den == (self.K.base.one,):
            return num
        return f"{_paren(num, '+')}/{_paren(_poly_expr(self.K, self.den, self.M), '+*/')}"

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"ValuedElement({self.to_expr()})"


def _paren(s: str, ops: str) -> str:
    return f"({s})" if any(ch in s for ch in ops) or s.startswith("-") else s


def _coeff_expr(F: FieldDescriptor, c) -> str:
    s = F.to_str(c)
    if F.degree > 1 and ("+" in s or "*" in s):
        return f"({s})"
    if s.startswith("-") or "/" in s:
        return f"({s})"
    return s


def _poly_expr(K: ValuedFieldDescriptor, poly, M: int) -> str:
    F = K.base
    terms = []
    for i, c in enumerate(poly):
        if c == F.zero:
            continue
        e = Fraction(i, M)
        if e == 0:
            mono = ""
        elif e == 1:
            mono = K.symbol
        elif e.denominator == 1:
            mono = f"{K.symbol}^{e.numerator}"
        else:
            mono = f"{K.symbol}^({e})"
        cs = _coeff_expr(F, c)
        if not mono:
            terms.append(cs)
        elif c == F.one:
            terms.append(mono)
        else:
            terms.append(f"{cs}*{mono}")
    return " + ".join(terms) if terms else "0"


def _common(x: ValuedElement, y: ValuedElement):
    if x.M == y.M:
        return (x.num, x.den), (y.num, y.den), x.M
    F = x.K.base
    L = x.M * y.M // math.gcd(x.M, y.M)
    kx, ky = L // x.M, L // y.M
    return (
        (up.spread(F, x.num, kx), up.spread(F, x.den, kx)),
        (up.spread(F, y.num, ky), up.spread(F, y.den, ky)),
        L,
    )


def _normalize(K: ValuedFieldDescriptor, num: tuple, den: tuple, M: int) -> ValuedElement:
    F = K.base
    num, den = up.trim(F, num), up.trim(F, den)
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return K.zero()
    k = min(up.ord_(F, num), up.ord_(F, den))
    if k:
        num, den = num[k:], den[k:]
    if len(num) > 1 and len(den) > 1:
        g = up.gcd_fast(F, num, den)
        if len(g) > 1:
            num = up.divmod_(F, num, g)[0]
            den = up.divmod_(F, den, g)[0]
    return _finish(K, num, den, M)


def _finish(K: ValuedFieldDescriptor, num: tuple, den: tuple, M: int) -> ValuedElement:
    """Make a coprime pair canonical: monic denominator and minimal M."""
    F = K.base
    lc = den[-1]
    if lc != F.one:
        inv = F.inv(lc)
        num, den = up.scale(F, num, inv), up.scale(F, den, inv)
    if M > 1:
        for p in sorted(_prime_factors(M)):
            while M % p == 0 and _all_exponents_divisible(F, num, p) and _all_exponents_divisible(F, den, p):
                num = num[::p]
                den = den[::p]
                M //= p
    return ValuedElement(K, num, den, M)


def _all_exponents_divisible(F, poly, p) -> bool:
    z = F.zero
    return all(c == z for i, c in enumerate(poly) if i % p)


# -- operations ------------------------------------------------------------------


def kv_valuation(x: ValuedElement):
    v = x.valuation()
    if v is INFINITY:
        return INFINITY
    return GroupElement(v, x.K.group)


def kv_residue(x: ValuedElement) -> FieldElement:
    return FieldElement(x.K.base, x.residue_raw())


def kv_arith(op: str, x: ValuedElement, y: ValuedElement | None = None) -> ValuedElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    if op == "neg":
        return -x
    raise ValueError(f"unknown operation {op!r}")


def monomial(K: ValuedFieldDescriptor, gamma, coeff=None) -> ValuedElement:
    """coeff * t^gamma for gamma in the value group."""
    gamma = Fraction(gamma)
    if not K.group.contains(gamma):
        raise GroupMismatch(f"{gamma} is not in {K.group}")
    F = K.base
    c = F.one if coeff is None else coeff
    M = gamma.denominator
    k = gamma.numerator
    if k >= 0:
        return ValuedElement(K, (F.zero,) * k + (c,), (F.one,), M)
    return _normalize(K, (c,), (F.zero,) * (-k) + (F.one,), M)


def kv_make(gamma, unit_residue, K: ValuedFieldDescriptor | None = None) -> ValuedElement:
    """An element of valuation gamma whose unit part has the given residue."""
    if isinstance(unit_residue, FieldElement):
        if K is None:
            raise ValueError("pass the valued field descriptor")
        if unit_residue.field != K.base:
            raise FieldMismatch(f"{unit_residue.field} vs {K.base}")
        raw = unit_residue.raw
    else:
        raw = K.base.from_base(unit_residue)
    if raw == K.base.zero:
        raise ValueError("unit residue must be nonzero")
    return monomial(K, gamma, raw)


def random_unit(K: ValuedFieldDescriptor, rng: random.Random, residue_raw, terms: int = 2, rational: bool = True):
    """A unit of V with the given residue: (r + c1 t + ... ) / (1 + d t) with random higher terms."""
    F = K.base
    num = [residue_raw] + [F.random(rng) for _ in range(terms)]
    if rational and rng.random() < 0.5:
        den = [F.one, F.random(rng)]
    else:
        den = [F.one]
    return _normalize(K, tuple(num), tuple(den), 1)


def kv_sample(
    rng: random.Random,
    K: ValuedFieldDescriptor,
    valuation=None,
    valuation_range: tuple | None = None,
    residue_avoid: Iterable = (),
    residue_ok: Callable | None = None,
    denominator_bound: int = 16,
    exclusive: bool = False,
    terms: int = 2,
) -> ValuedElement:
    """Pseudorandom element with a prescribed valuation (or one drawn from a range).

    ``residue_avoid`` lists raw residues the unit part must not have; ``residue_ok``
    is an optional extra predicate on the raw residue. Deterministic given ``rng``.
    """
    F = K.base
    if valuation is not None:
        gamma = Fraction(valuation)
        if not K.group.contains(gamma):
            raise Unsatisfiable(f"{gamma} is not in {K.group}")
    elif valuation_range is not None:
        lo, hi = valuation_range
        choices = K.group.elements_between(lo, hi, denominator_bound)
        if exclusive:
            choices = [g for g in choices if lo < g < hi]
        if not choices:
            raise Unsatisfiable(f"no group element in {valuation_range}")
        gamma = rng.choice(choices)
    else:
        gamma = Fraction(0)
    avoid = set(residue_avoid)
    ok = residue_ok or (lambda r: True)
    if F.is_finite:
        allowed = [r for r in F.elements() if r != F.zero and r not in avoid and ok(r)]
        if not allowed:
            raise Unsatisfiable("every residue is excluded")
        r = rng.choice(allowed)
    else:
        for _ in range(1000):
            r = F.random(rng, nonzero=True)
            if r not in avoid and ok(r):
                break
        else:
            raise Unsatisfiable("could not find an admissible residue")
    return random_unit(K, rng, r, terms) * monomial(K, gamma)
