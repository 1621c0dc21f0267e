"""Pointed maximal ideals on a finite set of points: characteristic sets, the finite
intersection property, filters and their limits.

All scenes have a local D, so a pointed maximal ideal is determined by its
point a: it holds the functions phi with phi(a) in m.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .domains import DomainDescriptor, dom_value_ideal
from .errors import FilterError
from .ratfunc import POLE, RatFunc, rf_eval
from .skolem import SampleSet, construct_rho, construct_theta
from .valgroup import INFINITY
from .valued_field import ValuedElement

M_TAG = "m"


@dataclass(frozen=True)
class PointedIndex:
    pairs: tuple  # ((tag, a), ...)
    domain: DomainDescriptor

    def __post_init__(self):
        if len(set(self.pairs)) != len(self.pairs):
            raise ValueError("pointed index pairs must be distinct")
        for tag, _ in self.pairs:
            if tag != M_TAG:
                raise ValueError(f"the domain is local; the only maximal-ideal tag is {M_TAG!r}")

    @classmethod
    def from_points(cls, D: DomainDescriptor, points: Sequence[ValuedElement]) -> PointedIndex:
        seen, pairs = set(), []
        for a in points:
            if a not in seen:
                seen.add(a)
                pairs.append((M_TAG, a))
        return cls(tuple(pairs), D)

    def __len__(self):
        return len(self.pairs)

    @property
    def ground(self) -> frozenset:
        return frozenset(range(len(self.pairs)))

    def point(self, i: int) -> ValuedElement:
        return self.pairs[i][1]

    def label(self, i: int) -> str:
        tag, a = self.pairs[i]
        return f"({tag},{a.to_expr()})"


class CharSet(frozenset):
    """Indices of the pointed ideals containing a function; ``poles`` lists excluded points."""

    poles: tuple = ()

    def __new__(cls, members=(), poles=()):
        obj = super().__new__(cls, members)
        obj.poles = tuple(poles)
        return obj


def sp_chi(phi: RatFunc, Pi: PointedIndex) -> CharSet:
    """{M_(m,a) in Pi : phi(a) in m}; points where phi has a pole are left out and noted."""
    members, poles = [], []
    for i, (_, a) in enumerate(Pi.pairs):
        val = rf_eval(phi, a)
        if val is POLE:
            poles.append(i)
        elif val.valuation() > 0:
            members.append(i)
    return CharSet(members, poles)


@dataclass(frozen=True)
class HasFIP:
    witness: int | None  # a ground element common to every set

    holds = True

    def to_json(self, Pi: PointedIndex | None = None) -> dict:
        w = self.witness
        if Pi is not None and w is not None:
            w = Pi.label(w)
        return {"fip": True, "witness": w}


@dataclass(frozen=True)
class Fails:
    subfamily: tuple  # positions of a minimal family with empty intersection

    holds = False

    def to_json(self, Pi: PointedIndex | None = None) -> dict:
        return {"fip": False, "empty_subfamily": list(self.subfamily)}


def sp_fip(chis: Sequence[frozenset]):
    """Decide the finite intersection property of a finite family of subsets.

    For finitely many sets this is the same as a nonempty total intersection.
    On failure the smallest subfamily with empty intersection is found by
    breadth-first search over subfamily size.
    """
    sets = [frozenset(s) for s in chis]
    if not sets:
        return HasFIP(None)
    common = frozenset.intersection(*sets)
    if common:
        return HasFIP(min(common))
    for k in range(1, len(sets) + 1):
        for combo in itertools.combinations(range(len(sets)), k):
            if not frozenset.intersection(*(sets[i] for i in combo)):
                return Fails(combo)
    raise AssertionError("unreachable: the full family has empty intersection")  # pragma: no cover


@dataclass
class FilterRepr:
    """A filter on the ground of Pi, given by sets whose upward closure it is."""

    ground: PointedIndex
    sets: list = field(default_factory=list)
    is_ultra: bool = False

    def __post_init__(self):
        universe = self.ground.ground
        self.sets = [frozenset(s) for s in self.sets] or [universe]
        for s in self.sets:
            if not s <= universe:
                raise FilterError("filter sets must be subsets of the ground set")
            if not s:
                raise FilterError("the empty set cannot belong to a filter")
        for a, b in itertools.combinations(self.sets, 2):
            if not self.member(a & b):
                raise FilterError("filter sets must be closed under finite intersection")
        if self.is_ultra and len(self.core) != 1:
            raise FilterError("on a finite ground set every ultrafilter is principal; this family is not")

    @classmethod
    def principal(cls, ground: PointedIndex, i: int) -> FilterRepr:
        return cls(ground, [frozenset([i])], True)

    @classmethod
    def generated(cls, ground: PointedIndex, sets: Sequence) -> FilterRepr:
        """Close the given sets under finite intersection; FilterError if that produces the empty set."""
        closed = {frozenset(s) for s in sets}
        changed = True
        while changed:
            changed = False
            for a, b in itertools.combinations(list(closed), 2):
                c = a & b
                if c not in closed:
                    closed.add(c)
                    changed = True
        return cls(ground, sorted(closed, key=lambda s: (len(s), sorted(s))), False)

    @property
    def core(self) -> frozenset:
        return frozenset.intersection(*self.sets)

    def member(self, subset) -> bool:
        subset = frozenset(subset)
        return any(s <= subset for s in self.sets)


def sp_filter_limit_member(r: RatFunc, F: FilterRepr) -> bool:
    """r lies in the limit of the pointed ideals along F exactly when chi_r is in F."""
    return F.member(sp_chi(r, F.ground))


def _proper(J) -> bool:
    if J.kind == "ValuationIdeal":
        return J.gamma is INFINITY or J.gamma > 0
    return not J.is_unit()


@dataclass
class ProbeReport:
    chis: list
    fip: object
    proper_points: list
    consistent: bool
    rho_pairs: int = 0
    rho_points: int = 0
    rho_mismatches: list = field(default_factory=list)
    rho_skipped: int = 0
    labels: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.consistent and not self.rho_mismatches

    def to_json(self, Pi: PointedIndex | None = None) -> dict:
        out = {
            "chis": [sorted(c) for c in self.chis],
            "fip": self.fip.to_json(Pi),
            "proper_value_ideal_points": self.proper_points,
            "consistent": self.consistent,
            "rho_check": {
                "pairs": self.rho_pairs,
                "points": self.rho_points,
                "mismatches": self.rho_mismatches,
                "skipped": self.rho_skipped,
            },
        }
        if self.labels:
            out["ground"] = self.labels
        return out


def sp_ultraskolem_probe(I, E: SampleSet, D: DomainDescriptor) -> ProbeReport:
    """Characteristic sets of the generators, their FIP, and proper value ideals on E.

    On a finite ground the two agree: a point lies in every chi_phi exactly
    when every generator value is in m, i.e. the value ideal there is proper.
    When m is principal, also check chi_phi1 & chi_phi2 = chi_rho on every pair.
    """
    gens = list(I.generators if hasattr(I, "generators") else I)
    Pi = PointedIndex.from_points(D, list(E))
    chis = [sp_chi(phi, Pi) for phi in gens]
    fip = sp_fip(chis)
    proper = []
    for i in range(len(Pi)):
        if _proper(dom_value_ideal(D, gens, Pi.point(i))):
            proper.append(i)
    common = frozenset.intersection(*chis) if chis else Pi.ground
    consistent = (fip.holds == bool(proper)) and frozenset(proper) == common
    rep = ProbeReport(chis, fip, proper, consistent, labels=[Pi.label(i) for i in range(len(Pi))])
    if D.m_principal and len(gens) >= 2:
        theta = construct_theta(D)
        for (i, p1), (j, p2) in itertools.combinations(list(enumerate(gens)), 2):
            if p2.is_zero():
                continue
            rho = construct_rho(p1, p2, D, theta)
            rep.rho_pairs += 1
            for k in range(len(Pi)):
                a = Pi.point(k)
                v2 = rf_eval(p2, a)
                if v2 is POLE or not v2:
                    rep.rho_skipped += 1
                    continue
                r = rf_eval(rho, a)
                rep.rho_points += 1
                lhs = k in chis[i] and k in chis[j]
                if r is POLE or (r.valuation() > 0) != lhs:
                    rep.rho_mismatches.append([i, j, k])
    return rep
