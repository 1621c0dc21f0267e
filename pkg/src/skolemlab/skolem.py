"""Skolem-closure membership on sample sets, the theta / rho / Lemma-Z constructions,
and ball-branching certification of integer-valuedness."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _upoly as up
from .domains import (
    DomainDescriptor,
    IdealGens,
    ValueIdeal,
    dom_contains,
    dom_sample,
    dom_value_ideal,
    value_ideal_contains,
)
from .errors import NotInDomain, Unsatisfiable, UnsupportedScene, ZeroSecond
from .ratfunc import POLE, Poly, RatFunc, rf_compose, rf_eval, rf_normalize
from .residue_field import fld_find_rootless_monic
from .valgroup import INFINITY
from .valued_field import ValuedElement, kv_make, kv_sample, random_unit

INCONCLUSIVE = "Inconclusive"


@dataclass
class SampleSet:
    points: list
    label: str = "E"
    intended_E: str = "SampleOfV"  # FiniteExact | SampleOfV | SampleOfK

    def __post_init__(self):
        if self.intended_E not in ("FiniteExact", "SampleOfV", "SampleOfK"):
            raise ValueError(f"unknown sample kind {self.intended_E!r}")
        seen, pts = set(), []
        for p in self.points:
            if p not in seen:
                seen.add(p)
                pts.append(p)
        self.points = pts

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class PointResult:
    a: ValuedElement
    value_ideal: ValueIdeal | None
    v_psi: object
    verdict: str  # pass | fail | pole


@dataclass
class SkReport:
    member: object  # True, False or INCONCLUSIVE
    per_point: list
    poles: list
    intended_E: str

    @property
    def all_pass(self) -> bool:
        return all(p.verdict == "pass" for p in self.per_point)

    @property
    def status(self) -> str:
        if not self.all_pass:
            return "fail"
        return "pass" if self.member is True else "evidence"

    def summary(self) -> dict:
        return {
            "member": self.member if isinstance(self.member, bool) else str(self.member),
            "points": len(self.per_point),
            "passed": sum(p.verdict == "pass" for p in self.per_point),
            "poles": len(self.poles),
            "intended_E": self.intended_E,
        }


def sk_member(psi: RatFunc, I, E: SampleSet, D: DomainDescriptor) -> SkReport:
    """Check psi(a) in I(a) at every point of E.

    A pole of psi counts as a failure; a pole of a generator raises PoleAtSample.
    Passing every point of a sample (rather than of E itself) is only evidence.
    """
    per_point, poles = [], []
    for a in E:
        J = dom_value_ideal(D, I, a)
        val = rf_eval(psi, a)
        if val is POLE:
            poles.append(a)
            per_point.append(PointResult(a, J, POLE, "pole"))
            continue
        if not dom_contains(D, val):
            ok = False
        else:
            ok = value_ideal_contains(D, J, val).member
        per_point.append(PointResult(a, J, val.valuation(), "pass" if ok else "fail"))
    if not all(p.verdict == "pass" for p in per_point):
        member = False
    elif E.intended_E == "FiniteExact":
        member = True
    else:
        member = INCONCLUSIVE
    return SkReport(member, per_point, poles, E.intended_E)


def sample_set(rng: random.Random, D: DomainDescriptor, n: int, valuation_range=(0, 3), label="E") -> SampleSet:
    """n distinct random points of D with valuations spread over the range (plus zero)."""
    pts = [D.K.zero()]
    seen = {pts[0]}
    tries = 0
    while len(pts) < n and tries < 20 * n:
        tries += 1
        a = dom_sample(rng, D, valuation_range=valuation_range)
        if a not in seen:
            seen.add(a)
            pts.append(a)
    return SampleSet(pts, label, "SampleOfV")


# -- theta and rho -----------------------------------------------------------------


def construct_theta(D: DomainDescriptor) -> RatFunc:
    """t(1 + x^4) / ((1 + t x^2)(t + x^2)) for the generator t of m."""
    t = D.uniformizer()
    K = D.K
    num = Poly(K, [t, 0, 0, 0, t])
    den = Poly(K, [t, 0, 1 + t * t, 0, t])
    return rf_normalize(num, den)


def theta_check(theta: RatFunc, a: ValuedElement) -> bool:
    """v(a) = 0 gives v(theta(a)) > 0; otherwise theta(a) is 1 mod m."""
    val = rf_eval(theta, a)
    if val is POLE:
        return False
    v = a.valuation()
    if v == 0:
        return val.valuation() > 0
    return (val - 1).valuation() > 0


def construct_rho(phi1: RatFunc, phi2: RatFunc, D: DomainDescriptor, theta: RatFunc | None = None) -> RatFunc:
    """phi1 + theta(phi1/phi2) phi2, whose valuation at a is min(v(phi1(a)), v(phi2(a)))."""
    if phi2.is_zero():
        raise ZeroSecond("the second function must be nonzero")
    theta = theta or construct_theta(D)
    return phi1 + rf_compose(theta, phi1 / phi2) * phi2


# -- Lemma Z -----------------------------------------------------------------------


@dataclass(frozen=True)
class LemZResult:
    phi: RatFunc
    gamma: Fraction
    case: str  # "non-divisible" or "residue"
    n: int
    va: Fraction
    vb: Fraction
    epsilon: Fraction
    c: ValuedElement

    def expected(self, w) -> Fraction:
        """Closed-form v(phi(d)) as a function of w = v(d - c)."""
        if w is INFINITY:
            return self.epsilon
        n, va, vb = self.n, self.va, self.vb
        if self.case == "non-divisible":
            nw = n * w
            if nw < vb:
                return Fraction(0)
            if nw < va:
                return nw - vb
            return va - vb
        if w < vb:
            return Fraction(0)
        if w <= va:
            return n * (w - vb)
        return n * (va - vb)

    def to_json(self) -> dict:
        return {
            "phi": self.phi.to_expr(),
            "gamma": str(self.gamma),
            "case": self.case,
            "n": self.n,
            "v_a": str(self.va),
            "v_b": str(self.vb),
        }


def _element(K, gamma, rng):
    if rng is None:
        return kv_make(gamma, 1, K)
    r = K.base.random(rng, nonzero=True)
    return random_unit(K, rng, r) * kv_make(gamma, 1, K)


def construct_lemz(epsilon, delta, c: ValuedElement, D: DomainDescriptor, rng: random.Random | None = None) -> LemZResult:
    """A function in Int^R(K, V) bounded by epsilon, positive exactly near c, equal to epsilon at c.

    Non-divisible value groups use ((x-c)^n + a)/((x-c)^n + b); divisible ones
    use a^n f((x-c)/a) / (b^n f((x-c)/b)) with f monic and rootless mod m.
    With ``rng`` the elements a, b carry random unit factors; otherwise they
    are monomials in t.
    """
    K = D.K
    G = K.group
    eps, dlt = Fraction(epsilon), Fraction(delta)
    if eps <= 0 or dlt <= 0 or not G.contains(eps) or not G.contains(dlt):
        raise Unsatisfiable("epsilon and delta must be positive group elements")
    x_c = Poly(K, [-c, 1])
    if not G.is_divisible:
        alpha, m = G.non_divisible_witness()
        if G.contains(eps / m):
            va, vb, n = alpha + m * dlt + eps, alpha + m * dlt, m
        else:
            va, vb, n = 2 * eps + 2 * m * dlt, eps + 2 * m * dlt, 2 * m
        a, b = _element(K, va, rng), _element(K, vb, rng)
        p = x_c ** n
        phi = rf_normalize(p + Poly.const(K, a), p + Poly.const(K, b))
        return LemZResult(phi, vb / n, "non-divisible", n, va, vb, eps, c)
    f = [K.from_base(e.raw) for e in fld_find_rootless_monic(K.base)]
    n = len(f) - 1
    vb = dlt + eps / n
    va = vb + eps / n
    a, b = _element(K, va, rng), _element(K, vb, rng)

    def scaled(s):
        # s^n f((x - c)/s) = sum f_i s^(n-i) (x - c)^i
        out = Poly(K, [])
        for i, fi in enumerate(f):
            out = out + (x_c ** i).scale(fi * s ** (n - i))
        return out

    phi = rf_normalize(scaled(a), scaled(b))
    return LemZResult(phi, vb, "residue", n, va, vb, eps, c)


@dataclass
class LemZCheck:
    bounded: bool
    positivity: bool
    at_center: bool
    gamma_above_delta: bool
    profile: bool
    integer_valued: bool
    grid: list = field(default_factory=list)  # (w, value)

    @property
    def ok(self) -> bool:
        return all((self.bounded, self.positivity, self.at_center, self.gamma_above_delta, self.profile, self.integer_valued))


def lemz_grid(res: LemZResult, group, size: int = 40) -> list[Fraction]:
    """Valuations of d - c straddling gamma (at least 30 group elements)."""
    width = 2
    while True:
        pts = group.elements_between(res.gamma - width, res.gamma + width, 8)
        if len(pts) >= 30:
            break
        width *= 2
    if len(pts) > size:
        step = len(pts) / size
        pts = sorted(set(pts[int(i * step)] for i in range(size)) | {p for p in pts if abs(p - res.gamma) <= 1})
    return pts


def lemz_verify(res: LemZResult, delta, D: DomainDescriptor, rng: random.Random) -> LemZCheck:
    """Check the three properties on a grid of d = c + e with prescribed v(e), plus d = c."""
    K = D.K
    phi, c, eps = res.phi, res.c, res.epsilon
    chk = LemZCheck(True, True, True, res.gamma > Fraction(delta), True, True)
    vc = rf_eval(phi, c)
    chk.at_center = vc is not POLE and vc.valuation() == eps
    for w in lemz_grid(res, K.group):
        d = c + kv_sample(rng, K, valuation=w)
        val = rf_eval(phi, d)
        if val is POLE:
            chk.integer_valued = False
            chk.grid.append((w, POLE))
            continue
        v = val.valuation()
        chk.grid.append((w, v))
        if v < 0:
            chk.integer_valued = False
        if v > eps:
            chk.bounded = False
        # strict form: positive exactly when v(d - c) exceeds gamma
        if (v > 0) != (w > res.gamma):
            chk.positivity = False
        if v != res.expected(w):
            chk.profile = False
    return chk


# -- certification -------------------------------------------------------------------


@dataclass
class Certificate:
    outcome: str  # CERTIFIED | COUNTEREXAMPLE | UNKNOWN
    depth: int
    point: ValuedElement | None = None
    value: object = None  # v(phi(point)) or POLE
    branch_tree: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "depth": self.depth}
        if self.point is not None:
            out["point"] = self.point.to_expr()
            out["value"] = str(self.value)
        if self.note:
            out["note"] = self.note
        if self.branch_tree is not None:
            out["branch_tree"] = self.branch_tree
        return out


def _shift(f: Poly, c: ValuedElement, tk: ValuedElement) -> Poly:
    """f(c + tk y) as a polynomial in y."""
    K = f.K
    lin = Poly(K, [c, tk])
    acc = Poly(K, [])
    for coeff in reversed(f.coeffs):
        acc = acc * lin + Poly.const(K, coeff)
    return acc


def _reduced(f: Poly, t: ValuedElement):
    """(mu, residue poly of f / t^mu) with mu the least coefficient valuation."""
    F = f.K.base
    mu = min(c.valuation() for c in f.coeffs if c)
    scale = kv_make(mu, 1, f.K)
    res = []
    for c in f.coeffs:
        if c and c.valuation() == mu:
            res.append((c / scale).residue_raw())
        else:
            res.append(F.zero)
    return mu, up.trim(F, res)


class _Counterexample(Exception):
    def __init__(self, point, value):
        self.point, self.value = point, value


def certify_int_valued(phi: RatFunc, V: DomainDescriptor, depth_limit: int = 8, exhaustive: bool = False,
                       rng: random.Random | None = None, samples: int = 500) -> Certificate:
    """Decide whether v(phi(a)) >= 0 for every a in V by exploring balls c + t^k V.

    On a ball, write f(c + t^k y) and g(c + t^k y) as t^mu times polynomials
    with reduced images fbar, gbar. For y with residue r: if gbar(r) != 0 the
    denominator has exact valuation mu_g, so mu_f >= mu_g settles the class and
    fbar(r) != 0 with mu_f < mu_g yields an exact counterexample. Every other
    residue is a root of fbar or gbar and is refined to the next level.

    Requires Z as value group and a finite residue field; elsewhere the answer
    is sample evidence (UNKNOWN) unless ``exhaustive`` is set, which raises.
    """
    K = V.K
    F = K.base
    if V.is_pvd:
        raise UnsupportedScene("certification targets valuation domains")
    if not F.is_finite or K.group.kind != "Integers":
        if exhaustive:
            raise UnsupportedScene("exhaustive certification needs Z as value group and a finite residue field")
        return _sample_evidence(phi, V, rng or random.Random(0), samples)
    t = K.t()
    f, g = phi.num, phi.den
    if not f:
        return Certificate("CERTIFIED", 0, branch_tree={"center": "0", "k": 0, "settled": "zero function"})
    residues = list(F.elements())
    state = {"depth": 0, "unknown": False}

    def visit(c: ValuedElement, k: int) -> dict:
        state["depth"] = max(state["depth"], k)
        tk = t ** k
        mf, fbar = _reduced(_shift(f, c, tk), t)
        mg, gbar = _reduced(_shift(g, c, tk), t)
        node = {"center": c.to_expr(), "k": k, "mu_num": str(mf), "mu_den": str(mg), "branches": []}
        settled = []
        for r in residues:
            gr = up.evaluate(F, gbar, r)
            fr = up.evaluate(F, fbar, r)
            if gr != F.zero and mf >= mg:
                settled.append(F.to_str(r))
                continue
            point = c + tk * K.from_base(r)
            if gr != F.zero and fr != F.zero:
                raise _Counterexample(point, mf - mg)
            if not g.evaluate(point):
                raise _Counterexample(point, POLE)
            if k + 1 > depth_limit:
                state["unknown"] = True
                node["branches"].append({"center": point.to_expr(), "k": k + 1, "open": True})
                continue
            node["branches"].append(visit(point, k + 1))
        node["settled"] = settled
        return node

    try:
        tree = visit(K.zero(), 0)
    except _Counterexample as ce:
        actual = rf_eval(phi, ce.point)
        value = POLE if actual is POLE else actual.valuation()
        if value is not POLE and value != ce.value:
            raise AssertionError("counterexample valuation mismatch")  # pragma: no cover
        return Certificate("COUNTEREXAMPLE", state["depth"], ce.point, value)
    if state["unknown"]:
        return Certificate("UNKNOWN", depth_limit, branch_tree=tree, note="depth limit reached")
    return Certificate("CERTIFIED", state["depth"], branch_tree=tree)


def _sample_evidence(phi: RatFunc, V: DomainDescriptor, rng: random.Random, samples: int) -> Certificate:
    for _ in range(samples):
        a = dom_sample(rng, V, valuation_range=(0, 4))
        val = rf_eval(phi, a)
        if val is POLE:
            return Certificate("COUNTEREXAMPLE", 0, a, POLE, note="pole found by sampling")
        if val.valuation() < 0:
            return Certificate("COUNTEREXAMPLE", 0, a, val.valuation(), note="found by sampling")
    return Certificate("UNKNOWN", 0, note=f"sample evidence only: {samples} samples, no violation")
