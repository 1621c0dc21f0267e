"""Exact residue-field arithmetic.

Supported fields are F_p, simple extensions F_p[w]/(g) of degree at most 4,
Q, and quadratic extensions Q[w]/(g). Internally an element is a *raw*
value: an ``int`` in ``range(p)`` or a ``Fraction`` for degree-one fields, and
a tuple of base scalars (power-basis coordinates) for extensions. The
:class:`FieldElement` wrapper carries the descriptor and overloads operators.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .errors import DivisionByZero, FieldMismatch, NotFound, NotIrreducible, SubfieldMismatch

KINDS = ("PrimeFinite", "ExtFinite", "Rationals", "QuadraticExt")


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, math.isqrt(n) + 1))


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def _rational_sqrt(q: Fraction) -> Fraction:
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str
    p: int = 0
    minpoly: tuple = ()
    symbol: str = "w"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind in ("PrimeFinite", "ExtFinite") and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind in ("Rationals", "QuadraticExt"):
            object.__setattr__(self, "p", 0)
        if self.kind in ("PrimeFinite", "Rationals"):
            object.__setattr__(self, "minpoly", ())
            object.__setattr__(self, "degree", 1)
            return
        coeffs = tuple(self._bnorm(c) for c in self.minpoly)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if len(coeffs) < 3 or coeffs[-1] != 1:
            raise NotIrreducible("minimal polynomial must be monic of degree >= 2")
        if len(coeffs) - 1 > 4:
            raise ValueError("extension degree is limited to 4")
        if self.kind == "QuadraticExt" and len(coeffs) != 3:
            raise ValueError("QuadraticExt needs a degree-2 minimal polynomial")
        object.__setattr__(self, "minpoly", coeffs)
        # plain attribute, not a property: it sits on every hot arithmetic path
        object.__setattr__(self, "degree", len(coeffs) - 1)
        self._certify_irreducible()

    # -- constructors -------------------------------------------------------

    @classmethod
    def prime(cls, p: int) -> FieldDescriptor:
        return cls("PrimeFinite", p)

    @classmethod
    def extension(cls, p: int, minpoly: Sequence, symbol: str = "w") -> FieldDescriptor:
        return cls("ExtFinite", p, tuple(minpoly), symbol)

    @classmethod
    def rationals(cls) -> FieldDescriptor:
        return cls("Rationals")

    @classmethod
    def quadratic(cls, d=None, symbol: str = "w", minpoly: Sequence | None = None) -> FieldDescriptor:
        """Q(sqrt d), or Q[w]/(minpoly) when a monic quadratic is given."""
        if minpoly is None:
            minpoly = (-Fraction(d), 0, 1)
        return cls("QuadraticExt", 0, tuple(minpoly), symbol)

    # -- base scalars -------------------------------------------------------

    def _bnorm(self, c):
        if self.p:
            if isinstance(c, Fraction):
                if c.denominator % self.p == 0:
                    raise DivisionByZero(f"{c} has no image in F_{self.p}")
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            return int(c) % self.p
        if isinstance(c, float):
            raise TypeError("floats are not exact")
        return Fraction(c)

    def _binv(self, c):
        if c == 0:
            raise DivisionByZero("inverse of zero")
        return pow(c, -1, self.p) if self.p else 1 / c

    def _certify_irreducible(self):
        g = self.minpoly
        k = len(g) - 1
        if self.p:
            p = self.p

            def ev(x):
                acc = 0
                for c in reversed(g):
                    acc = (acc * x + c) % p
                return acc

            if any(ev(x) == 0 for x in range(p)):
                raise NotIrreducible(f"{g} has a root in F_{p}")
            if k == 4:
                for b, c in itertools.product(range(p), repeat=2):
                    if not _base_poly_rem(list(g), [c, b, 1], p):
                        raise NotIrreducible(f"{g} has the quadratic factor x^2+{b}x+{c}")
        else:
            c, b, _ = g
            if _is_rational_square(b * b - 4 * c):
                raise NotIrreducible(f"{g} splits over Q")

    @property
    def is_finite(self) -> bool:
        return self.p != 0

    @property
    def order(self) -> int | None:
        return self.p ** self.degree if self.p else None

    @cached_property
    def base_field(self) -> FieldDescriptor:
        return FieldDescriptor.prime(self.p) if self.p else FieldDescriptor.rationals()

    # -- raw arithmetic -----------------------------------------------------

    @cached_property
    def zero(self):
        if self.degree == 1:
            return 0 if self.p else Fraction(0)
        return (0 if self.p else Fraction(0),) * self.degree

    @cached_property
    def one(self):
        return self.from_base(1)

    def from_base(self, c):
        c = self._bnorm(c)
        if self.degree == 1:
            return c
        return (c,) + self.zero[1:]

    from_int = from_base

    def from_coords(self, coords: Sequence):
        coords = tuple(self._bnorm(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates")
        return coords[0] if self.degree == 1 else coords

    def coords(self, a) -> tuple:
        return (a,) if self.degree == 1 else a

    @cached_property
    def generator(self):
        if self.degree == 1:
            raise ValueError(f"{self} has no extension generator")
        return self.from_coords([0, 1] + [0] * (self.degree - 2))

    def add(self, a, b):
        if self.degree == 1:
            return (a + b) % self.p if self.p else a + b
        if self.p:
            return tuple((x + y) % self.p for x, y in zip(a, b))
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        if self.degree == 1:
            return (a - b) % self.p if self.p else a - b
        if self.p:
            return tuple((x - y) % self.p for x, y in zip(a, b))
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        if self.degree == 1:
            return -a % self.p if self.p else -a
        if self.p:
            return tuple(-x % self.p for x in a)
        return tuple(-x for x in a)

    def mul(self, a, b):
        if self.degree == 1:
            return a * b % self.p if self.p else a * b
        k = self.degree
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        g = self.minpoly
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * g[j]
        if self.p:
            return tuple(c % self.p for c in prod[:k])
        return tuple(Fraction(c) for c in prod[:k])

    def scale(self, a, c):
        """Multiply by a base scalar."""
        c = self._bnorm(c)
        if self.degree == 1:
            return a * c % self.p if self.p else a * c
        if self.p:
            return tuple(x * c % self.p for x in a)
        return tuple(x * c for x in a)

    def inv(self, a):
        if a == self.zero:
            raise DivisionByZero("inverse of zero")
        if self.degree == 1:
            return self._binv(a)
        # columns of the multiplication-by-a matrix are a*w^j
        k = self.degree
        cols = []
        e = self.one
        for _ in range(k):
            cols.append(self.mul(a, e))
            e = self.mul(e, self.generator)
        sol = _base_solve(self, [list(c) for c in cols], list(self.coords(self.one)))
        return tuple(sol)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def is_zero(self, a) -> bool:
        return a == self.zero

    def in_base(self, a) -> bool:
        return self.degree == 1 or all(c == 0 for c in a[1:])

    def elements(self) -> Iterator:
        if not self.p:
            raise ValueError("infinite field")
        if self.degree == 1:
            yield from range(self.p)
        else:
            yield from itertools.product(range(self.p), repeat=self.degree)

    def random(self, rng: random.Random, height: int = 5, nonzero: bool = False):
        while True:
            if self.p:
                coords = [rng.randrange(self.p) for _ in range(self.degree)]
            else:
                coords = [Fraction(rng.randint(-height, height), rng.randint(1, 3)) for _ in range(self.degree)]
            a = self.from_coords(coords)
            if not (nonzero and a == self.zero):
                return a

    def is_square(self, a) -> bool:
        if a == self.zero:
            return True
        if self.p:
            q = self.order
            if self.p == 2:
                return True
            return self.pow(a, (q - 1) // 2) == self.one
        if self.degree == 1:
            return _is_rational_square(a)
        c, b, _ = self.minpoly
        # complete the square: w = z - b/2 with z^2 = dsc/4
        d = (b * b - 4 * c) / 4
        x0, y0 = a
        x, y = x0 - y0 * b / 2, y0  # a = x + y z
        if y == 0:
            return _is_rational_square(x) or _is_rational_square(x / d)
        norm = x * x - d * y * y
        if not _is_rational_square(norm):
            return False
        n = _rational_sqrt(norm)
        return any(_is_rational_square((x + s) / 2) for s in (n, -n) if (x + s) != 0)

    def to_str(self, a) -> str:
        cs = self.coords(a)
        if self.degree == 1:
            return str(cs[0])
        terms = []
        for i, c in enumerate(cs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.symbol if i == 1 else f"{self.symbol}^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        if self.kind == "PrimeFinite":
            return {"kind": self.kind, "p": self.p}
        if self.kind == "Rationals":
            return {"kind": self.kind}
        out = {"kind": self.kind, "minpoly": [str(c) for c in self.minpoly], "symbol": self.symbol}
        if self.p:
            out["p"] = self.p
        return out

    @classmethod
    def from_json(cls, data: dict) -> FieldDescriptor:
        kind = data["kind"]
        if kind == "PrimeFinite":
            return cls.prime(int(data["p"]))
        if kind == "Rationals":
            return cls.rationals()
        symbol = data.get("symbol", "w")
        if kind == "ExtFinite":
            return cls.extension(int(data["p"]), [Fraction(str(c)) for c in data["minpoly"]], symbol)
        if "minpoly" in data:
            return cls.quadratic(symbol=symbol, minpoly=[Fraction(str(c)) for c in data["minpoly"]])
        return cls.quadratic(Fraction(str(data["d"])), symbol=symbol)

    def __str__(self):
        if self.kind == "PrimeFinite":
            return f"F_{self.p}"
        if self.kind == "Rationals":
            return "Q"
        base = f"F_{self.p}" if self.p else "Q"
        return f"{base}[{self.symbol}]/({_poly_str(self.minpoly, self.symbol)})"

    def element(self, value) -> FieldElement:
        """Wrap a raw value, an int, a Fraction or a coordinate sequence."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value} is not in {self}")
            return value
        if isinstance(value, (list, tuple)) and self.degree > 1:
            return FieldElement(self, self.from_coords(value))
        return FieldElement(self, self.from_base(value))


def _poly_str(coeffs, sym) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (sym if i == 1 else f"{sym}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms) or "0"


def _base_poly_rem(a: list, b: list, p: int) -> list:
    """Remainder of base-field polynomials over F_p, b monic."""
    a = [c % p for c in a]
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    rem = a[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _base_solve(F: FieldDescriptor, columns: list[list], target: list):
    """Solve sum x_j columns[j] = target over the base field; None if inconsistent."""
    rows = len(target)
    n = len(columns)
    norm = F._bnorm
    mat = [[norm(columns[j][i]) for j in range(n)] + [norm(target[i])] for i in range(rows)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, rows) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = F._binv(mat[r][col])
        mat[r] = [norm(x * inv) for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [norm(x - f * y) for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in mat):
        return None
    sol = [norm(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = mat[i][n]
    return sol


class FieldElement:
    """An element of a residue field together with its descriptor."""

    __slots__ = ("field", "raw")

    def __init__(self, field: FieldDescriptor, raw):
        self.field = field
        self.raw = raw

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.raw
        if isinstance(other, (int, Fraction)):
            return self.field.from_base(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.raw, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(self.raw, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(o, self.raw))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.raw, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(self.raw, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(o, self.raw))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.raw))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.raw, n))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.raw))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            try:
                return self.raw == self.field.from_base(other)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.raw))

    def __bool__(self):
        return self.raw != self.field.zero

    @property
    def coordinates(self) -> tuple:
        return self.field.coords(self.raw)

    def __repr__(self):
        return f"FieldElement({self.field.to_str(self.raw)} in {self.field})"

    def __str__(self):
        return self.field.to_str(self.raw)


def fld_arith(op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def is_rootless(F: FieldDescriptor, coeffs: Sequence) -> bool:
    """No root in F; raw coefficients low-to-high."""
    coeffs = list(coeffs)
    if F.is_finite:
        for x in F.elements():
            acc = F.zero
            for c in reversed(coeffs):
                acc = F.add(F.mul(acc, x), c)
            if acc == F.zero:
                return False
        return True
    if len(coeffs) != 3:
        raise NotImplementedError("root certification over infinite fields is limited to quadratics")
    c, b, a = coeffs
    disc = F.sub(F.mul(b, b), F.mul(F.from_base(4), F.mul(a, c)))
    return not F.is_square(disc)


def fld_find_rootless_monic(F: FieldDescriptor, max_degree: int = 2) -> list[FieldElement]:
    """A monic polynomial of degree <= max_degree without roots in F (coefficients low-to-high)."""
    if max_degree < 2:
        raise NotFound("no nonconstant rootless polynomial of degree < 2 exists")
    if F.is_finite:
        elems = list(F.elements())
        for b in elems:
            for c in elems:
                cand = [c, b, F.one]
                if is_rootless(F, cand):
                    return [FieldElement(F, r) for r in cand]
        raise NotFound(f"no rootless monic quadratic over {F}")
    candidates = [[F.from_base(1), F.zero, F.one]]
    for h in range(1, 8):
        candidates.append([F.neg(F.from_base(h)), F.zero, F.one])
        candidates.append([F.from_base(h), F.zero, F.one])
        if F.degree == 2:
            candidates.append([F.from_coords([h, 1]), F.zero, F.one])
    for cand in candidates:
        if is_rootless(F, cand):
            return [FieldElement(F, r) for r in cand]
    raise NotFound(f"no small-height rootless quadratic over {F}")


def fld_linear_solve(
    vectors: Sequence[FieldElement], target: FieldElement, subfield: FieldDescriptor | None = None
) -> tuple[FieldElement, ...] | None:
    """Coefficients c_i in the subfield with sum c_i v_i = target, or None when target is outside the span."""
    F = target.field
    for v in vectors:
        if v.field != F:
            raise FieldMismatch(f"{v.field} vs {F}")
    if subfield is None:
        subfield = F.base_field
    if subfield == F:
        for v in vectors:
            if v:
                coeffs = [FieldElement(F, F.zero) for _ in vectors]
                coeffs[vectors.index(v)] = target / v
                return tuple(coeffs)
        return tuple(FieldElement(F, F.zero) for _ in vectors) if not target else None
    if subfield != F.base_field:
        raise SubfieldMismatch(f"{subfield} is not the base field of {F}")
    if not vectors:
        return () if not target else None
    sol = _base_solve(F, [list(F.coords(v.raw)) for v in vectors], list(F.coords(target.raw)))
    if sol is None:
        return None
    return tuple(FieldElement(subfield, subfield.from_base(c)) for c in sol)
