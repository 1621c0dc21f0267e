import random
from fractions import Fraction

import pytest

from conftest import rand_elem, rand_poly, rand_rf, scene
from skolemlab.errors import InconsistentConstraints, ZeroFunction, ZeroPolynomial
from skolemlab.expr import parse_element, parse_function
from skolemlab.newton import (
    ConsistentEnvelope,
    ContradictionPattern,
    nv_exactness,
    nv_forced_profile_check,
    nv_local_poly,
    nv_minval_poly,
    nv_minval_rf,
)
from skolemlab.ratfunc import POLE, Poly, RatFunc, rf_val_at
from skolemlab.skolem import construct_theta
from skolemlab.valgroup import INFINITY, pl_eval


def poly(src, sc):
    return parse_function(src, sc).num


def brute_minval(f: Poly, gamma):
    return min(c.valuation() + i * gamma for i, c in enumerate(f.coeffs) if c)


def test_minval_examples(A):
    f = nv_minval_poly(poly("t + x^2", A))
    assert f.to_json() == {"lines": [[0, "1"], [2, "0"]], "breakpoints": ["1/2"]}
    assert nv_minval_poly(poly("2", A)).pieces == ((0, 0),)
    theta = construct_theta(A.D)
    den = poly("t + (1+t^2)*x^2 + t*x^4", A)
    assert nv_minval_poly(den).lines == ((0, 1), (2, 0), (4, 1))
    assert pl_eval(nv_minval_rf(theta), 0) == 1
    assert nv_minval_rf(RatFunc.const(A.K, A.K.t() ** 3)).pieces == ((0, 3),)
    assert nv_minval_rf(RatFunc.x(A.K)).pieces == ((1, 0),)
    with pytest.raises(ZeroPolynomial):
        nv_minval_poly(Poly(A.K, []))
    with pytest.raises(ZeroFunction):
        nv_minval_rf(RatFunc.const(A.K, 0))


def test_local_poly_examples(A):
    t = A.K.t()
    r = nv_local_poly(poly("x^2 - t^2", A), t)
    assert r.d_index == 2 and r.residue_poly == (2, 0, 1)
    assert r.has_root(A.K.base, 1) and r.has_root(A.K.base, 2)
    r = nv_local_poly(poly("t + x^2", A), t)
    assert r.d_index == 0 and r.residue_poly == (1,)
    # normalized by the leading term a_d t^d, so a unit constant gives 1
    r = nv_local_poly(poly("2", A), parse_element("t^5", A))
    assert r.d_index == 0 and r.residue_poly == (1,)


def test_exactness_examples(A):
    f = poly("x^2 - t^2", A)
    r = nv_exactness(f, A.K.t())
    assert (r.predicted, r.actual, r.witness_root, r.exact) == (2, INFINITY, True, False)
    r = nv_exactness(f, parse_element("t*(1+t)", A))
    assert (r.predicted, r.actual, r.witness_root) == (2, 3, True)
    r = nv_exactness(poly("t + x^2", A), A.K.t())
    assert (r.predicted, r.actual, r.witness_root, r.exact) == (1, 1, False, True)


def _cases(name, n, rng):
    """Random (f, a) with a share of adversarial cases where a sits near a root of f."""
    K = scene(name).K
    for k in range(n):
        f = rand_poly(rng, K, 4)
        a = rand_elem(rng, K, -2, 3)
        if k % 3 == 0:
            c = rand_elem(rng, K, -1, 2)
            f = f * Poly(K, [-c, 1])
            a = c + rand_elem(rng, K, 0, 4, zero_prob=0.2) * K.t() ** 2
        if a:
            yield f, a


@pytest.mark.parametrize("name", ["a", "b"])
def test_lower_bound_and_exactness_laws(name):
    rng = random.Random(61)
    n = 0
    for f, a in _cases(name, 1000, rng):
        r = nv_exactness(f, a)
        assert r.predicted == brute_minval(f, a.valuation())
        assert r.actual >= r.predicted
        assert r.exact == (not r.witness_root)
        n += 1
    assert n > 900


@pytest.mark.parametrize("name", ["c", "d"])
def test_exactness_law_extension_scenes(name):
    rng = random.Random(67)
    for f, a in _cases(name, 150, rng):
        r = nv_exactness(f, a)
        assert r.actual >= r.predicted
        assert r.exact == (not r.witness_root)


def test_local_poly_degree_is_d_index(A, B):
    rng = random.Random(71)
    for sc in (A, B):
        for _ in range(200):
            f = rand_poly(rng, sc.K, 4)
            t = rand_elem(rng, sc.K, -2, 3)
            r = nv_local_poly(f, t)
            assert len(r.residue_poly) - 1 == r.d_index
            assert r.residue_poly[-1] != sc.K.base.zero


def test_minval_rf_matches_value_when_both_parts_exact(A, B):
    rng = random.Random(73)
    for sc in (A, B):
        hits = 0
        for _ in range(300):
            phi = rand_rf(rng, sc.K)
            a = rand_elem(rng, sc.K)
            if phi.is_zero() or rf_val_at(phi, a) is POLE:
                continue
            if nv_exactness(phi.num, a).exact and nv_exactness(phi.den, a).exact:
                assert rf_val_at(phi, a) == pl_eval(nv_minval_rf(phi), a.valuation())
                hits += 1
        assert hits > 100


def test_forced_profile_examples():
    pts = [(0, 1), (Fraction(1, 4), Fraction(3, 4)), (Fraction(1, 2), Fraction(1, 2)), (Fraction(3, 4), Fraction(1, 4)), (1, 0)]
    out = nv_forced_profile_check(pts, 1)
    assert isinstance(out, ContradictionPattern)
    assert str(out) == "ContradictionPattern(-1, >=0)"
    flat = nv_forced_profile_check([(0, 2), (1, 2), (2, 2)], 1)
    assert isinstance(flat, ConsistentEnvelope) and flat.left_slope == 0 and flat.right_slope == 0
    line = nv_forced_profile_check([(0, 0), (1, 1)], 1)
    assert isinstance(line, ConsistentEnvelope) and line.left_slope == 1


def test_forced_profile_extrapolates_to_beta():
    out = nv_forced_profile_check([(0, 1), (Fraction(1, 2), Fraction(1, 2))], 1)
    assert isinstance(out, ContradictionPattern) and out.value_at_beta == 0


def test_forced_profile_errors():
    with pytest.raises(InconsistentConstraints):
        nv_forced_profile_check([(0, 1), (0, 2)], 1)
    with pytest.raises(InconsistentConstraints):
        nv_forced_profile_check([(0, 0), (1, Fraction(1, 2))], 1)
    with pytest.raises(InconsistentConstraints):
        nv_forced_profile_check([(0, 0)], 1)
