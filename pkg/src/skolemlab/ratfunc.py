"""Univariate polynomials and rational functions in x over a valued field."""

from __future__ import annotations

import itertools
import math
from typing import Iterable

from . import _upoly as up
from .errors import DegreeOverflow, DivisionByZero, FieldMismatch, UndefinedComposite, ZeroDenominator
from .valgroup import INFINITY, GroupElement
from .valued_field import ValuedElement, ValuedFieldDescriptor, _paren

DEFAULT_DEGREE_CAP = 64


class _Pole:
    """Value of a rational function at a pole. A value, not an error."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"

    def __str__(self):
        return "POLE"

    def __reduce__(self):
        return (_Pole, ())


POLE = _Pole()


class Poly:
    """Dense polynomial in x with ValuedElement coefficients, low-to-high; trailing zeros trimmed."""

    __slots__ = ("K", "coeffs")

    def __init__(self, K: ValuedFieldDescriptor, coeffs: Iterable = ()):
        cs = [K.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.K = K
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, K, coeffs: tuple) -> Poly:
        # coeffs already trimmed and in K
        p = object.__new__(cls)
        p.K = K
        p.coeffs = coeffs
        return p

    @classmethod
    def x(cls, K) -> Poly:
        return cls._raw(K, (K.zero(), K.one()))

    @classmethod
    def const(cls, K, c) -> Poly:
        return cls(K, [c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lead(self) -> ValuedElement:
        return self.coeffs[-1]

    def ord_x(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("order of the zero polynomial")

    def is_monomial(self) -> bool:
        return sum(1 for c in self.coeffs if c) == 1

    def _check(self, other: Poly):
        if other.K != self.K:
            raise FieldMismatch(f"{other.K} vs {self.K}")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return _trimmed(self.K, out)

    def __neg__(self) -> Poly:
        return Poly._raw(self.K, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly._raw(self.K, ())
            out = [None] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if not x:
                    continue
                for j, y in enumerate(b):
                    if not y:
                        continue
                    p = x * y
                    out[i + j] = p if out[i + j] is None else out[i + j] + p
            z = self.K.zero()
            return _trimmed(self.K, [z if c is None else c for c in out])
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> Poly:
        c = self.K.coerce(c)
        if not c:
            return Poly._raw(self.K, ())
        return Poly._raw(self.K, tuple(x * c for x in self.coeffs))

    def __pow__(self, n: int) -> Poly:
        result = Poly.const(self.K, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if not other:
            raise DivisionByZero("polynomial division by zero")
        a = list(self.coeffs)
        db = other.degree
        if len(a) - 1 < db:
            return Poly._raw(self.K, ()), self
        inv = other.lead.inverse()
        q = [self.K.zero()] * (len(a) - db)
        bc = other.coeffs
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if not c:
                continue
            c = c * inv
            q[i - db] = c
            for j in range(db):
                if bc[j]:
                    a[i - db + j] = a[i - db + j] - c * bc[j]
            a[i] = self.K.zero()
        return _trimmed(self.K, q), _trimmed(self.K, a[:db])

    def monic(self) -> Poly:
        if not self.coeffs or self.lead == 1:
            return self
        return self.scale(self.lead.inverse())

    def evaluate(self, a: ValuedElement) -> ValuedElement:
        acc = self.K.zero()
        for c in reversed(self.coeffs):
            acc = acc * a + c
        return acc

    def compose_homog(self, P: Poly, Q: Poly, N: int) -> Poly:
        """sum_i a_i P^i Q^(N-i), i.e. Q^N * self(P/Q)."""
        n = self.degree
        if n < 0:
            return self
        powP = [Poly.const(self.K, 1)]
        for _ in range(n):
            powP.append(powP[-1] * P)
        powQ = [Poly.const(self.K, 1)]
        for _ in range(N):
            powQ.append(powQ[-1] * Q)
        out = Poly._raw(self.K, ())
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + (powP[i] * powQ[N - i]).scale(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.K == other.K and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_expr(self, var: str = "x") -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                terms.append(_wrap(c.to_expr()))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{_wrap(c.to_expr())}*{mono}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> list[str]:
        return [c.to_expr() for c in self.coeffs]

    def __repr__(self):
        return f"Poly({self.to_expr()})"


def _wrap(s: str) -> str:
    if any(ch in s for ch in "+*/") or s.startswith("-"):
        return f"({s})"
    return s


def _trimmed(K, out: list) -> Poly:
    n = len(out)
    while n and not out[n - 1]:
        n -= 1
    return Poly._raw(K, tuple(out[:n]))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over K[x].

    Constants and x-monomials are handled directly; otherwise a modular
    coprimality check runs first and Euclid over K is the fallback.
    """
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return Poly.const(a.K, 1)
    if a.is_monomial() or b.is_monomial():
        k = min(a.ord_x(), b.ord_x())
        return Poly._raw(a.K, (a.K.zero(),) * k + (a.K.one(),))
    if certified_coprime(a, b):
        return Poly.const(a.K, 1)
    return _euclid(a, b)


def _euclid(a: Poly, b: Poly) -> Poly:
    while b:
        _, r = a.divmod(b)
        a, b = b, r.monic()
        if b and b.degree == 0:
            return Poly.const(a.K, 1)
    return a.monic()


_MODULI: dict = {}


def _moduli(F) -> list:
    """Deterministic specialization moduli h(u): linear when F is large, else irreducible of degree k with |F|^k >= 64."""
    if F in _MODULI:
        return _MODULI[F]
    if not F.is_finite or F.order >= 64:
        hs = [(F.neg(F.from_base(s)), F.one) for s in (2, 3, 5, 7, 11, 13)]
    else:
        k = 1
        while F.order ** k < 64:
            k += 1
        hs = []
        elems = list(F.elements())
        for low in itertools.product(elems, repeat=k):
            if low[0] == F.zero:
                continue
            h = tuple(low) + (F.one,)
            if up.is_irreducible(F, h):
                hs.append(h)
                if len(hs) == 4:
                    break
    _MODULI[F] = hs
    return hs


def _specialize(polys, h):
    """Images of the polynomials in E[x], E = F[u]/(h); None if some coefficient or leading term degenerates."""
    K = polys[0].K
    F = K.base
    L = 1
    for P in polys:
        for c in P.coeffs:
            if c.M != 1:
                L = L * c.M // math.gcd(L, c.M)
    linear = len(h) == 2
    E = F if linear else up.QuotientField(F, h)
    s = F.neg(h[0])
    out = []
    for P in polys:
        img = []
        for c in P.coeffs:
            if not c:
                img.append(E.zero)
                continue
            k = L // c.M
            n, d = up.spread(F, c.num, k), up.spread(F, c.den, k)
            if linear:
                dv = up.evaluate(F, d, s)
                if dv == F.zero:
                    return None
                img.append(F.div(up.evaluate(F, n, s), dv))
            else:
                dr = E.reduce(d)
                if not dr:
                    return None
                img.append(E.mul(E.reduce(n), E.inv(dr)))
        if img[-1] == E.zero:
            return None
        out.append(tuple(img))
    return E, out


def certified_coprime(a: Poly, b: Poly, attempts: int = 2) -> bool:
    """True only when a specialization proves gcd(a, b) = 1; False means undecided."""
    tried = 0
    for h in _moduli(a.K.base):
        spec = _specialize([a, b], h)
        if spec is None:
            continue
        E, (ia, ib) = spec
        if len(up.gcd(E, ia, ib)) == 1:
            return True
        tried += 1
        if tried >= attempts:
            break
    return False


class RatFunc:
    """Normalized quotient num/den: coprime over K[x] with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        self.num = num
        self.den = den

    @property
    def K(self) -> ValuedFieldDescriptor:
        return self.num.K

    @classmethod
    def from_poly(cls, f: Poly) -> RatFunc:
        return cls(f, Poly.const(f.K, 1))

    @classmethod
    def const(cls, K, c) -> RatFunc:
        return cls.from_poly(Poly.const(K, c))

    @classmethod
    def x(cls, K) -> RatFunc:
        return cls.from_poly(Poly.x(K))

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __add__(self, other):
        o = _as_rf(self.K, other)
        a, b, c, d = self.num, self.den, o.num, o.den
        g = poly_gcd(b, d)
        if g.degree == 0:
            # coprime denominators give a reduced sum
            return _assemble(a * d + c * b, b * d)
        b1, d1 = b.divmod(g)[0], d.divmod(g)[0]
        num, den = a * d1 + c * b1, b * d1
        h = poly_gcd(num, g)
        if h.degree > 0:
            num, den = num.divmod(h)[0], den.divmod(h)[0]
        return _assemble(num, den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(self.K, other))

    def __rsub__(self, other):
        return _as_rf(self.K, other) + (-self)

    def __mul__(self, other):
        o = _as_rf(self.K, other)
        return _cross(self.num, self.den, o.num, o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_rf(self.K, other)
        if o.is_zero():
            raise ZeroDenominator("division by the zero function")
        return _cross(self.num, self.den, o.den, o.num)

    def __rtruediv__(self, other):
        return _as_rf(self.K, other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc.const(self.K, 1) / (self ** (-n))
        if n * max(self.num.degree, self.den.degree) > DEFAULT_DEGREE_CAP:
            raise DegreeOverflow(f"power {n} exceeds the degree cap {DEFAULT_DEGREE_CAP}")
        # coprime stays coprime; den stays monic
        return RatFunc(self.num ** n, self.den ** n)

    def __call__(self, a):
        return rf_eval(self, a)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_expr(self) -> str:
        num = self.num.to_expr()
        if self.den.degree == 0:
            return num
        return f"{_paren(num, '+')}/{_paren(self.den.to_expr(), '+*/')}"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"RatFunc({self.to_expr()})"


def _as_rf(K, x) -> RatFunc:
    if isinstance(x, RatFunc):
        if x.K != K:
            raise FieldMismatch(f"{x.K} vs {K}")
        return x
    if isinstance(x, Poly):
        return RatFunc.from_poly(x)
    return RatFunc.const(K, x)


def _assemble(num: Poly, den: Poly, degree_cap: int = DEFAULT_DEGREE_CAP) -> RatFunc:
    """Wrap an already coprime pair: make den monic and enforce the degree cap."""
    if max(num.degree, den.degree) > degree_cap:
        raise DegreeOverflow(f"degree {max(num.degree, den.degree)} exceeds the cap {degree_cap}")
    if not num:
        return RatFunc(num, Poly.const(num.K, 1))
    lc = den.lead
    if lc != 1:
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return RatFunc(num, den)


def _cross(a: Poly, b: Poly, c: Poly, d: Poly) -> RatFunc:
    """(a/b) * (c/d) for coprime pairs (a, b) and (c, d)."""
    if not a or not c:
        return RatFunc(Poly._raw(a.K, ()), Poly.const(a.K, 1))
    g1, g2 = poly_gcd(a, d), poly_gcd(c, b)
    if g1.degree > 0:
        a, d = a.divmod(g1)[0], d.divmod(g1)[0]
    if g2.degree > 0:
        c, b = c.divmod(g2)[0], b.divmod(g2)[0]
    return _assemble(a * c, b * d)


def rf_normalize(num: Poly, den: Poly, degree_cap: int = DEFAULT_DEGREE_CAP) -> RatFunc:
    if not den:
        raise ZeroDenominator("zero denominator")
    if num.K != den.K:
        raise FieldMismatch(f"{num.K} vs {den.K}")
    if max(num.degree, den.degree) > degree_cap:
        raise DegreeOverflow(f"degree {max(num.degree, den.degree)} exceeds the cap {degree_cap}")
    if not num:
        return RatFunc(num, Poly.const(num.K, 1))
    if den.degree > 0 and num.degree > 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
    lc = den.lead
    if lc != 1:
        inv = lc.inverse()
        num, den = num.scale(inv), den.scale(inv)
    return RatFunc(num, den)


def rf_eval(phi: RatFunc, a):
    """Exact value phi(a), or POLE."""
    a = phi.K.coerce(a)
    d = phi.den.evaluate(a)
    if not d:
        return POLE
    return phi.num.evaluate(a) / d


def rf_val_at(phi: RatFunc, a):
    val = rf_eval(phi, a)
    if val is POLE:
        return POLE
    v = val.valuation()
    if v is INFINITY:
        return INFINITY
    return GroupElement(v, phi.K.group)


def rf_compose(outer: RatFunc, inner: RatFunc, degree_cap: int = DEFAULT_DEGREE_CAP) -> RatFunc:
    """outer(inner(x)), normalized."""
    if outer.K != inner.K:
        raise FieldMismatch(f"{outer.K} vs {inner.K}")
    K = outer.K
    if inner.is_constant():
        val = rf_eval(outer, inner.num.coeffs[0] if inner.num else K.zero())
        if val is POLE:
            raise UndefinedComposite("outer function has a pole at the constant inner value")
        return RatFunc.const(K, val)
    P, Q = inner.num, inner.den
    n, m = outer.num.degree, outer.den.degree
    N = max(n, m, 0)
    if N * max(P.degree, Q.degree) > degree_cap:
        raise DegreeOverflow(f"composite degree would exceed the cap {degree_cap}")
    # with coprime outer and inner parts the homogenized pieces are already coprime
    num = outer.num.compose_homog(P, Q, N)
    den = outer.den.compose_homog(P, Q, N)
    return _assemble(num, den, degree_cap)

