"""Ordered value groups (subgroups of Q) and piecewise-linear minimum-valuation functions.

Every implemented value group is a subgroup of the rationals, so its rational
span is Q itself and span elements are plain :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import GroupMismatch


@total_ordering
class _Infinity:
    """Valuation of zero. Compares above every rational and absorbs addition."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("skolemlab.INFINITY")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("cannot negate INFINITY")

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def _prime_factors(n: int) -> set[int]:
    n = abs(n)
    out = set()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class GroupDescriptor:
    """A subgroup of Q: the integers, the rationals, or Z localized at finitely many primes.

    ``LocalizedIntegers(())`` is normalized to ``Integers``.
    """

    kind: str
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("Integers", "Rationals", "LocalizedIntegers"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        primes = tuple(sorted(set(int(p) for p in self.primes)))
        if self.kind == "LocalizedIntegers" and not primes:
            object.__setattr__(self, "kind", "Integers")
        if self.kind != "LocalizedIntegers":
            primes = ()
        for p in primes:
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "primes", primes)

    @classmethod
    def integers(cls) -> GroupDescriptor:
        return cls("Integers")

    @classmethod
    def rationals(cls) -> GroupDescriptor:
        return cls("Rationals")

    @classmethod
    def localized(cls, primes: Iterable[int]) -> GroupDescriptor:
        return cls("LocalizedIntegers", tuple(primes))

    def allows_denominator(self, m: int) -> bool:
        if self.kind == "Rationals":
            return True
        return _prime_factors(m) <= set(self.primes)

    def contains(self, q) -> bool:
        return self.allows_denominator(Fraction(q).denominator)

    @property
    def is_divisible(self) -> bool:
        return self.kind == "Rationals"

    @property
    def min_positive(self) -> Fraction | None:
        """Smallest positive element, which exists exactly when the maximal ideal is principal."""
        return Fraction(1) if self.kind == "Integers" else None

    def non_divisible_witness(self) -> tuple[Fraction, int]:
        """Some (alpha, m) with alpha in the group and alpha/m outside it."""
        if self.kind == "Rationals":
            raise ValueError("Q is divisible")
        m = 2
        while m in self.primes:
            m += 1
            while not _is_prime(m):
                m += 1
        return Fraction(1), m

    def elements_between(self, lo, hi, denominator_bound: int = 16) -> list[Fraction]:
        """Group elements in the closed interval [lo, hi] with denominator at most the bound."""
        lo, hi = Fraction(lo), Fraction(hi)
        seen = set()
        for den in range(1, denominator_bound + 1):
            if not self.allows_denominator(den):
                continue
            for num in range(math.ceil(lo * den), math.floor(hi * den) + 1):
                seen.add(Fraction(num, den))
        return sorted(seen)

    def to_json(self) -> dict:
        if self.kind == "LocalizedIntegers":
            return {"kind": self.kind, "primes": list(self.primes)}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, data: dict) -> GroupDescriptor:
        return cls(data["kind"], tuple(data.get("primes", ())))

    def __str__(self):
        if self.kind == "LocalizedIntegers":
            return "Z[" + ",".join(f"1/{p}" for p in self.primes) + "]"
        return "Z" if self.kind == "Integers" else "Q"


class GroupElement(Fraction):
    """An exact rational tagged with its value group.

    Span elements (``span=True``) live in the rational span and are exempt from
    the denominator check. Arithmetic returns plain fractions.
    """

    __slots__ = ("group", "span")

    def __new__(cls, value, group: GroupDescriptor, span: bool = False):
        self = super().__new__(cls, Fraction(value))
        if not span and not group.contains(self):
            raise GroupMismatch(f"{Fraction(value)} is not in {group}")
        self.group = group
        self.span = span
        return self

    def __repr__(self):
        return f"GroupElement({Fraction(self)}, {self.group})"

    def __reduce__(self):
        return (GroupElement, (Fraction(self), self.group, self.span))


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


def vg_compare(a, b) -> Ordering:
    if (
        isinstance(a, GroupElement)
        and isinstance(b, GroupElement)
        and not (a.span or b.span)
        and a.group != b.group
    ):
        raise GroupMismatch(f"cannot compare elements of {a.group} and {b.group}")
    if a == b:
        return Ordering.EQ
    return Ordering.LT if a < b else Ordering.GT


def vg_divisible(gamma, n: int, group: GroupDescriptor | None = None) -> bool:
    """True iff gamma/n lies in the group (taken from gamma when it is a GroupElement)."""
    if n < 1:
        raise ValueError("n must be positive")
    if group is None:
        group = gamma.group if isinstance(gamma, GroupElement) else GroupDescriptor.integers()
    if not group.contains(gamma):
        raise GroupMismatch(f"{gamma} is not in {group}")
    return group.contains(Fraction(gamma) / n)


Line = tuple[int, Fraction]


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on Q with integer slopes.

    ``pieces[i]`` is the (slope, intercept) active on ``[breakpoints[i-1], breakpoints[i]]``
    with the outer bounds at minus/plus infinity. ``lines`` keeps the
    non-dominated input lines for envelopes; for differences it equals ``pieces``.
    """

    lines: tuple[Line, ...]
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Line, ...]

    @property
    def canonical_segments(self) -> list[tuple[Fraction | None, Fraction | None, int, Fraction]]:
        bounds = (None,) + self.breakpoints + (None,)
        return [(bounds[i], bounds[i + 1], s, c) for i, (s, c) in enumerate(self.pieces)]

    @property
    def is_concave(self) -> bool:
        return all(a[0] > b[0] for a, b in zip(self.pieces, self.pieces[1:]))

    def slope_left_of(self, beta) -> int:
        return self.pieces[bisect_left(self.breakpoints, Fraction(beta))][0]

    def slope_right_of(self, beta) -> int:
        return self.pieces[bisect_right(self.breakpoints, Fraction(beta))][0]

    def __call__(self, gamma) -> Fraction:
        return pl_eval(self, gamma)

    def to_json(self) -> dict:
        out = {
            "lines": [[s, str(c)] for s, c in sorted(self.lines)],
            "breakpoints": [str(b) for b in self.breakpoints],
        }
        if not self.is_concave:
            out["pieces"] = [[s, str(c)] for s, c in self.pieces]
        return out


def _canonical(pieces: Sequence[Line], breakpoints: Sequence[Fraction], lines=None) -> PLFunction:
    merged_p = [pieces[0]]
    merged_b: list[Fraction] = []
    for b, piece in zip(breakpoints, pieces[1:]):
        if piece == merged_p[-1]:
            continue
        merged_p.append(piece)
        merged_b.append(b)
    merged_p = tuple(merged_p)
    return PLFunction(
        lines=tuple(lines) if lines is not None else merged_p,
        breakpoints=tuple(merged_b),
        pieces=merged_p,
    )


def pl_from_lines(lines: Iterable[tuple[int, object]]) -> PLFunction:
    """Exact lower envelope (pointwise minimum) of integer-sloped lines."""
    best: dict[int, Fraction] = {}
    for s, c in lines:
        s, c = int(s), Fraction(c)
        if s not in best or c < best[s]:
            best[s] = c
    if not best:
        raise ValueError("need at least one line")
    # far left the steepest line is smallest, so sweep slopes in decreasing order
    hull: list[Line] = []
    cuts: list[Fraction] = []
    for s, c in sorted(best.items(), reverse=True):
        while hull:
            s1, c1 = hull[-1]
            x = (c - c1) / (s1 - s)
            if cuts and x <= cuts[-1]:
                hull.pop()
                cuts.pop()
                continue
            cuts.append(x)
            break
        hull.append((s, c))
    return _canonical(hull, cuts, lines=sorted(hull))


def pl_eval(f: PLFunction, gamma) -> Fraction:
    gamma = Fraction(gamma)
    s, c = f.pieces[bisect_left(f.breakpoints, gamma)]
    return s * gamma + c


def pl_eval_on_group(f: PLFunction, gamma, group: GroupDescriptor) -> Fraction:
    """Evaluate at a point of the group itself rather than its rational span."""
    if not group.contains(gamma):
        raise GroupMismatch(f"{gamma} is not in {group}")
    return pl_eval(f, gamma)


def _piece_at(f: PLFunction, x: Fraction) -> Line:
    return f.pieces[bisect_left(f.breakpoints, x)]


def pl_combine(f: PLFunction, g: PLFunction, sign: int) -> PLFunction:
    cuts = sorted(set(f.breakpoints) | set(g.breakpoints))
    if cuts:
        probes = [cuts[0] - 1]
        probes += [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
        probes.append(cuts[-1] + 1)
    else:
        probes = [Fraction(0)]
    pieces = []
    for x in probes:
        (sf, cf), (sg, cg) = _piece_at(f, x), _piece_at(g, x)
        pieces.append((sf + sign * sg, cf + sign * cg))
    return _canonical(pieces, cuts)


def pl_sub(f: PLFunction, g: PLFunction) -> PLFunction:
    return pl_combine(f, g, -1)


def pl_add(f: PLFunction, g: PLFunction) -> PLFunction:
    return pl_combine(f, g, 1)


@dataclass(frozen=True)
class KinkReport:
    left_slope: int
    right_slope: int
    value_at_beta: Fraction


def pl_kink_report(f: PLFunction, beta) -> KinkReport:
    beta = Fraction(beta)
    return KinkReport(f.slope_left_of(beta), f.slope_right_of(beta), pl_eval(f, beta))


def fraction_str(q) -> str:
    q = Fraction(q)
    return str(q)


def parse_fraction(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise TypeError("floats are not accepted; use 'p/q' strings")
    return Fraction(str(s).strip())
