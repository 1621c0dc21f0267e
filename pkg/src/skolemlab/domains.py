"""Valuation domains V and pseudovaluation domains D = pi^-1(F0) inside V.

For a PVD the residue field V/m is an extension of its prime subfield F0 (the
base field of the residue-field descriptor) and D consists of the elements of
positive valuation together with the units whose residue lies in F0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import MNotPrincipal, NotABasis, NotInDomain, PoleAtSample, SubfieldMismatch
from .ratfunc import POLE, RatFunc, rf_eval
from .residue_field import FieldDescriptor, FieldElement, fld_linear_solve
from .valgroup import INFINITY
from .valued_field import ValuedElement, ValuedFieldDescriptor, kv_make, kv_sample


@dataclass(frozen=True)
class DomainDescriptor:
    kind: str  # "Valuation" or "PVD"
    K: ValuedFieldDescriptor
    subfield: FieldDescriptor | None = None
    basis: tuple = ()  # raw residues t_1..t_n, a basis of V/m over the subfield

    def __post_init__(self):
        if self.kind not in ("Valuation", "PVD"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind == "Valuation":
            return
        F = self.K.base
        sub = self.subfield if self.subfield is not None else F.base_field
        if sub == F:
            raise ValueError("a PVD needs a proper subfield of the residue field")
        if sub != F.base_field:
            raise SubfieldMismatch(f"only the prime subfield {F.base_field} is supported as D/m")
        if self.K.group.min_positive is None:
            raise MNotPrincipal("PVDs are supported only when m is principal in V")
        object.__setattr__(self, "subfield", sub)
        basis = tuple(self.basis) if self.basis else tuple(F.from_coords([int(i == j) for j in range(F.degree)]) for i in range(F.degree))
        _check_basis(F, sub, basis)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def valuation(cls, K: ValuedFieldDescriptor) -> DomainDescriptor:
        return cls("Valuation", K)

    @classmethod
    def pvd(cls, K: ValuedFieldDescriptor, subfield: FieldDescriptor | None = None, basis: Sequence = ()) -> DomainDescriptor:
        return cls("PVD", K, subfield, tuple(basis))

    @property
    def is_pvd(self) -> bool:
        return self.kind == "PVD"

    @property
    def m_principal(self) -> bool:
        return self.K.group.min_positive is not None

    def uniformizer(self) -> ValuedElement:
        """Generator t of m in V."""
        gamma = self.K.group.min_positive
        if gamma is None:
            raise MNotPrincipal(f"the maximal ideal is not principal for value group {self.K.group}")
        return kv_make(gamma, 1, self.K)

    def residue_in_subfield(self, r) -> bool:
        return self.K.base.in_base(r)


def _check_basis(F: FieldDescriptor, sub: FieldDescriptor, basis: tuple):
    if len(basis) != F.degree:
        raise NotABasis(f"need {F.degree} residues, got {len(basis)}")
    vecs = [FieldElement(F, b) for b in basis]
    for j in range(F.degree):
        e = FieldElement(F, F.from_coords([int(i == j) for i in range(F.degree)]))
        if fld_linear_solve(vecs, e, sub) is None:
            raise NotABasis("the residues do not span the residue field over the subfield")


def dom_contains(D: DomainDescriptor, x: ValuedElement) -> bool:
    v = x.valuation()
    if v is INFINITY:
        return True
    if v < 0:
        return False
    if D.kind == "Valuation" or v > 0:
        return True
    return D.residue_in_subfield(x.residue_raw())


@dataclass
class IdealGens:
    """Finitely many generators: RatFuncs (ideals of the function ring) or ValuedElements (ideals of D)."""

    generators: list

    def __post_init__(self):
        self.generators = list(self.generators)
        if not self.generators:
            raise ValueError("an ideal needs at least one generator")
        if all(g.is_zero() for g in self.generators):
            raise ValueError("not all generators may be zero")

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    certificate: tuple | None = None  # coefficients a_i in D with sum a_i g_i = c
    depth: int = 0

    def __bool__(self):
        return self.member


def _gens_list(gens) -> list:
    return list(gens.generators if isinstance(gens, IdealGens) else gens)


def dom_ideal_member(D: DomainDescriptor, gens, c: ValuedElement) -> MembershipResult:
    """Decide c in (g_1, ..., g_n)D, with a coefficient certificate on success.

    Let mu be the least generator valuation. Below mu nothing is reachable and
    above it a single generator of valuation mu absorbs c with a coefficient in
    m. At valuation mu a valuation domain always succeeds; a PVD needs the
    residue of c / t^mu in the subfield span of the residues of g_i / t^mu over
    the generators of valuation mu. The remainder after subtracting that
    combination has valuation > mu and is absorbed the same way, so the
    decision is reached at depth 1.
    """
    gens = _gens_list(gens)
    K = D.K
    for g in gens:
        if not dom_contains(D, g):
            raise NotInDomain(f"generator {g} is not in the domain")
    if not dom_contains(D, c):
        raise NotInDomain(f"{c} is not in the domain")
    zero = K.zero()
    if not c:
        return MembershipResult(True, tuple(zero for _ in gens), 0)
    vals = [g.valuation() for g in gens]
    mu = min(vals)
    if mu is INFINITY:
        return MembershipResult(False, None, 0)
    vc = c.valuation()
    if vc < mu:
        return MembershipResult(False, None, 1)
    j = vals.index(mu)
    if vc > mu or D.kind == "Valuation":
        coeffs = [zero] * len(gens)
        coeffs[j] = c / gens[j]
        return MembershipResult(True, tuple(coeffs), 1)
    F = K.base
    T = kv_make(mu, 1, K)
    idx = [i for i, v in enumerate(vals) if v == mu]
    vecs = [FieldElement(F, (gens[i] / T).residue_raw()) for i in idx]
    target = FieldElement(F, (c / T).residue_raw())
    sol = fld_linear_solve(vecs, target, D.subfield)
    if sol is None:
        return MembershipResult(False, None, 1)
    coeffs = [zero] * len(gens)
    rem = c
    for i, s in zip(idx, sol):
        a = K.from_base(D.K.base.from_base(s.raw))
        coeffs[i] = a
        rem = rem - a * gens[i]
    if rem:
        coeffs[j] = coeffs[j] + rem / gens[j]
    return MembershipResult(True, tuple(coeffs), 1)


def verify_certificate(D: DomainDescriptor, gens, c: ValuedElement, cert: Sequence) -> bool:
    """Coefficients lie in D and recombine to c exactly."""
    gens = _gens_list(gens)
    if len(cert) != len(gens):
        return False
    total = D.K.zero()
    for a, g in zip(cert, gens):
        if not dom_contains(D, a):
            return False
        total = total + a * g
    return total == c


@dataclass(frozen=True)
class ValueIdeal:
    kind: str  # "ValuationIdeal" or "PVDIdeal"
    gamma: object = None  # Fraction or INFINITY, for ValuationIdeal
    generators: tuple = field(default=())

    def is_unit(self) -> bool:
        if self.kind == "ValuationIdeal":
            return self.gamma == 0
        return any(g.valuation() == 0 for g in self.generators)

    def to_json(self) -> dict:
        if self.kind == "ValuationIdeal":
            return {"kind": self.kind, "gamma": str(self.gamma)}
        return {"kind": self.kind, "generators": [g.to_expr() for g in self.generators]}


def dom_value_ideal(D: DomainDescriptor, I, a: ValuedElement) -> ValueIdeal:
    """The ideal generated by the values phi_i(a)."""
    gens = _gens_list(I)
    values = []
    poles = []
    for i, phi in enumerate(gens):
        val = rf_eval(phi, a) if isinstance(phi, RatFunc) else phi
        if val is POLE:
            poles.append(i)
        values.append(val)
    if poles:
        raise PoleAtSample(f"generators {poles} have a pole at {a}", poles)
    for val in values:
        if not dom_contains(D, val):
            raise NotInDomain(f"value {val} at {a} is not in the domain")
    if D.kind == "Valuation":
        return ValueIdeal("ValuationIdeal", gamma=min(v.valuation() for v in values))
    return ValueIdeal("PVDIdeal", generators=tuple(values))


def value_ideal_contains(D: DomainDescriptor, J: ValueIdeal, c: ValuedElement) -> MembershipResult:
    if J.kind == "ValuationIdeal":
        vc = c.valuation()
        if J.gamma is INFINITY:
            return MembershipResult(vc is INFINITY)
        return MembershipResult(vc is INFINITY or vc >= J.gamma)
    return dom_ideal_member(D, J.generators, c)


def pvd_m_generators(D: DomainDescriptor, basis: Sequence | None = None) -> IdealGens:
    """m = (t t_1, ..., t t_n) D for residues t_i forming a basis of V/m over D/m."""
    if not D.is_pvd:
        raise ValueError("m-generators are built for PVDs")
    F = D.K.base
    raws = tuple(basis) if basis is not None else D.basis
    _check_basis(F, D.subfield, raws)
    t = D.uniformizer()
    return IdealGens([t * D.K.from_base(r) for r in raws])


def dom_sample(rng: random.Random, D: DomainDescriptor, valuation=None, valuation_range=None, **kw) -> ValuedElement:
    """Random element of D; when a PVD sample may be a unit its residue is drawn from the subfield."""
    if D.is_pvd:
        if valuation is not None:
            may_be_unit = Fraction(valuation) == 0
        elif valuation_range is not None:
            may_be_unit = Fraction(valuation_range[0]) <= 0
        else:
            may_be_unit = True
        if may_be_unit:
            kw.setdefault("residue_ok", D.residue_in_subfield)
    return kv_sample(rng, D.K, valuation=valuation, valuation_range=valuation_range, **kw)
