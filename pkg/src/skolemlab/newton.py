"""Minimum-valuation envelopes, local polynomials and exactness of the envelope bound."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _upoly as up
from .errors import InconsistentConstraints, ZeroFunction, ZeroPolynomial
from .ratfunc import Poly, RatFunc
from .residue_field import FieldElement
from .valgroup import INFINITY, PLFunction, _canonical, pl_eval, pl_from_lines, pl_sub
from .valued_field import ValuedElement, kv_make


def nv_minval_poly(f: Poly) -> PLFunction:
    """Lower envelope of the lines (i, v(a_i)) over nonzero coefficients."""
    if not f:
        raise ZeroPolynomial("minval of the zero polynomial")
    return pl_from_lines((i, c.valuation()) for i, c in enumerate(f.coeffs) if c)


def nv_minval_rf(phi: RatFunc) -> PLFunction:
    if phi.is_zero():
        raise ZeroFunction("minval of the zero function")
    return pl_sub(nv_minval_poly(phi.num), nv_minval_poly(phi.den))


@dataclass(frozen=True)
class LocalPolyResult:
    d_index: int
    residue_poly: tuple  # raw residue coefficients, low-to-high, of degree d_index
    minval_at: Fraction

    def residue_elements(self, F) -> list[FieldElement]:
        return [FieldElement(F, c) for c in self.residue_poly]

    def has_root(self, F, r) -> bool:
        return up.evaluate(F, self.residue_poly, r) == F.zero


def nv_local_poly(f: Poly, t: ValuedElement) -> LocalPolyResult:
    """Residue polynomial of f(t x) / (a_d t^d), with d the largest index attaining the minimum."""
    if not f:
        raise ZeroPolynomial("local polynomial of the zero polynomial")
    if not t:
        raise ValueError("t must be nonzero")
    F = f.K.base
    gamma = t.valuation()
    vals = [c.valuation() + i * gamma if c else INFINITY for i, c in enumerate(f.coeffs)]
    m = min(vals)
    d = max(i for i, v in enumerate(vals) if v == m)
    lead = f.coeffs[d] * t ** d
    res = []
    for i in range(d + 1):
        if vals[i] == m:
            res.append((f.coeffs[i] * t ** i / lead).residue_raw())
        else:
            res.append(F.zero)
    return LocalPolyResult(d, tuple(res), m)


@dataclass(frozen=True)
class ExactnessReport:
    predicted: Fraction
    actual: object  # Fraction or INFINITY
    exact: bool
    witness_root: bool
    unit_residue: object

    def to_json(self) -> dict:
        return {
            "predicted": str(self.predicted),
            "actual": str(self.actual),
            "exact": self.exact,
            "witness_root": self.witness_root,
        }


def nv_exactness(f: Poly, a: ValuedElement) -> ExactnessReport:
    """Compare minval_f(v(a)) with v(f(a)) computed directly.

    The monomial of valuation v(a) is t^v(a) with unit residue 1; the unit part
    of a is a / t^v(a) and its residue is tested against the local polynomial.
    """
    if not f:
        raise ZeroPolynomial("exactness of the zero polynomial")
    if not a:
        raise ValueError("a must be nonzero")
    K = f.K
    gamma = a.valuation()
    mono = kv_make(gamma, 1, K)
    r = (a / mono).residue_raw()
    loc = nv_local_poly(f, mono)
    predicted = pl_eval(nv_minval_poly(f), gamma)
    actual = f.evaluate(a).valuation()
    witness = loc.has_root(K.base, r)
    return ExactnessReport(predicted, actual, actual == predicted, witness, r)


@dataclass(frozen=True)
class ConsistentEnvelope:
    envelope: PLFunction
    left_slope: Fraction | None
    value_at_beta: Fraction
    right_slope: Fraction | None

    def to_json(self) -> dict:
        return {
            "kind": "ConsistentEnvelope",
            "left_slope": None if self.left_slope is None else str(self.left_slope),
            "value_at_beta": str(self.value_at_beta),
            "right_slope": None if self.right_slope is None else str(self.right_slope),
        }


@dataclass(frozen=True)
class ContradictionPattern:
    """Left slope -1 into a zero at beta, so every admissible right slope is >= 0."""

    left_slope: int
    right_slope_min: int
    value_at_beta: Fraction
    right_slope: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "kind": "ContradictionPattern",
            "left_slope": self.left_slope,
            "right_slope": f">={self.right_slope_min}",
            "value_at_beta": str(self.value_at_beta),
        }

    def __str__(self):
        return f"ContradictionPattern({self.left_slope}, >={self.right_slope_min})"


def _interpolant(points: Sequence[tuple[Fraction, Fraction]]) -> PLFunction:
    if len(points) == 1:
        return _canonical([(0, points[0][1])], [])
    pieces, cuts = [], []
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        s = (y1 - y0) / (x1 - x0)
        pieces.append((s, y0 - s * x0))
        cuts.append(x1)
    return _canonical(pieces, cuts[:-1])


def _as_int(s: Fraction):
    return int(s) if s.denominator == 1 else s


def nv_forced_profile_check(constraints, beta):
    """Fit the piecewise-linear profile through sampled (gamma, value) constraints near beta.

    The value at beta comes from the constraint there, or by continuing the
    left-hand line when none is given. Returns ContradictionPattern when the
    left slope is -1 and the value at beta is 0: a function that stays
    nonnegative then needs a right slope >= 0.
    """
    beta = Fraction(beta)
    pts: dict[Fraction, Fraction] = {}
    for g, val in constraints:
        g, val = Fraction(g), Fraction(val)
        if g in pts and pts[g] != val:
            raise InconsistentConstraints(f"two values at gamma = {g}")
        pts[g] = val
    left = sorted((g, v) for g, v in pts.items() if g < beta)
    right = sorted((g, v) for g, v in pts.items() if g > beta)
    if beta in pts:
        value = pts[beta]
        if left:
            (g0, v0) = left[-1]
            left_slope = (value - v0) / (beta - g0)
        else:
            left_slope = None
    else:
        if len(left) < 2:
            raise InconsistentConstraints("need two constraints left of beta or a value at beta")
        (g0, v0), (g1, v1) = left[-2], left[-1]
        left_slope = (v1 - v0) / (g1 - g0)
        value = v1 + left_slope * (beta - g1)
    if left_slope is not None and left_slope.denominator != 1:
        raise InconsistentConstraints(f"left slope {left_slope} is not an integer")
    all_left = left + [(beta, value)]
    right_slope = None
    if right:
        g1, v1 = right[0]
        right_slope = (v1 - value) / (g1 - beta)
    envelope = _interpolant(all_left + right)
    if left_slope == -1 and value == 0 and (right_slope is None or right_slope >= 0):
        return ContradictionPattern(-1, 0, value, right_slope)
    return ConsistentEnvelope(
        envelope,
        None if left_slope is None else _as_int(left_slope),
        value,
        None if right_slope is None else _as_int(right_slope),
    )
