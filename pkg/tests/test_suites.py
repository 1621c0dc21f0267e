from fractions import Fraction

import pytest

from skolemlab.errors import SceneMismatch
from skolemlab.expr import parse_list
from skolemlab.report import validate_report
from skolemlab.suites import suite_pvd_x2m, suite_vx2t2


@pytest.fixture(scope="module")
def vx2t2_report(B):
    return suite_vx2t2(B, samples=200)


def test_vx2t2_full_run(vx2t2_report):
    rep = vx2t2_report
    assert [c.status for c in rep.checks] == ["pass", "evidence", "pass"]
    assert rep.exit_code() == 0
    fp = rep.check("forced_profile").details
    assert fp["pattern"] == "ContradictionPattern(-1, >=0)"
    table = rep.check("value_ideal_table").details
    assert table["grid_size"] >= 13 and table["observed_boundary"] == "1"
    validate_report(rep.to_json())


def test_vx2t2_table_rows_match_case_split(vx2t2_report):
    for v, expected, actual, ok in vx2t2_report.check("value_ideal_table").details["rows"]:
        assert ok and expected == actual
        if v != "inf":
            g = Fraction(v)
            assert Fraction(actual) == (2 * g if g <= 1 else 2)


def test_vx2t2_tampered_ideal(B):
    rep = suite_vx2t2(B, samples=40, ideal=parse_list("x^2, t^3", B))
    table = rep.check("value_ideal_table")
    assert table.status == "fail"
    # the boundary moves from v(t) to 3/2; the first grid point past v(t) disagrees
    assert table.details["first_mismatch"] == "9/8"
    assert table.details["observed_boundary"] == "3/2"
    assert rep.exit_code() == 1


def test_vx2t2_rejects_principal_m(A, Q, C):
    with pytest.raises(SceneMismatch):
        suite_vx2t2(A)
    with pytest.raises(SceneMismatch):
        suite_vx2t2(Q)
    with pytest.raises(SceneMismatch):
        suite_vx2t2(C)


def test_vx2t2_is_deterministic(B):
    a = suite_vx2t2(B, samples=30, seed=3).dumps()
    assert a == suite_vx2t2(B, samples=30, seed=3).dumps()


def test_pvd_x2m_scene_c(C):
    rep = suite_pvd_x2m(C, samples=60, negatives=20)
    status = {c.name: c.status for c in rep.checks}
    assert status == {
        "m_generators": "pass",
        "value_ideals_x2_m": "pass",
        "sk_member x in (x^2, m)": "evidence",
        "x_not_in_x2_m": "theorem-level",
    }
    assert rep.check("m_generators").details["generators"] == ["t", "i*t"]
    nm = rep.check("x_not_in_x2_m").details
    assert nm["decided"] is False and nm["residue_field_infinite"] is True
    assert rep.exit_code() == 0
    validate_report(rep.to_json())


def test_pvd_x2m_finite_residue_field(D):
    rep = suite_pvd_x2m(D, samples=100, negatives=30)
    assert rep.exit_code() == 0
    nm = rep.check("x_not_in_x2_m").details
    assert nm["residue_field_infinite"] is False and "undecided" in nm["note"]


def test_pvd_x2m_rejects_valuation_scene(A):
    with pytest.raises(SceneMismatch):
        suite_pvd_x2m(A)
