import copy
import json

import pytest

from skolemlab.errors import SchemaError
from skolemlab.report import Check, Report, validate_report
from skolemlab.scenes import load_scene, preset, scene_digest, scene_from_dict


def doc(name):
    return copy.deepcopy(preset(name).document)


def test_presets_load():
    a, b, c, d, q = (preset(n) for n in "abcdq")
    assert (a.field.kind, a.group.kind, a.D.kind, a.puiseux) == ("PrimeFinite", "Integers", "Valuation", False)
    assert b.group.primes == (2,) and b.puiseux and not b.D.m_principal
    assert c.D.is_pvd and [c.field.to_str(r) for r in c.D.basis] == ["1", "i"]
    assert d.D.is_pvd and d.field.order == 9
    assert q.group.is_divisible
    assert len({s.digest for s in (a, b, c, d, q)}) == 5


def test_load_scene_paths(tmp_path):
    assert load_scene("scenes/a.json").digest == preset("a").digest
    assert load_scene("c").name == "C"
    p = tmp_path / "mine.json"
    p.write_text(json.dumps(doc("b")))
    assert load_scene(p).digest == preset("b").digest
    with pytest.raises(SchemaError):
        load_scene(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        load_scene(bad)


def test_puiseux_flag_must_match_group():
    d = doc("a")
    d["puiseux"] = True
    with pytest.raises(SchemaError) as e:
        scene_from_dict(d)
    assert e.value.path == "puiseux"
    d = doc("b")
    d["puiseux"] = False
    with pytest.raises(SchemaError):
        scene_from_dict(d)


@pytest.mark.parametrize(
    "mutate,path",
    [
        (lambda d: d.pop("field"), ""),
        (lambda d: d["field"].update(p="three"), "field.p"),
        (lambda d: d["samples"].update(count=-1), "samples.count"),
        (lambda d: d["domain"].update(kind="Dedekind"), "domain.kind"),
        (lambda d: d.update(seed="seven"), "seed"),
    ],
)
def test_schema_errors_carry_paths(mutate, path):
    d = doc("a")
    mutate(d)
    with pytest.raises(SchemaError) as e:
        scene_from_dict(d)
    assert e.value.path == path


def test_semantic_errors_carry_paths():
    d = doc("c")
    d["domain"]["basis"] = ["1", "2"]
    with pytest.raises(SchemaError) as e:
        scene_from_dict(d)
    assert e.value.path == "domain.basis"
    d = doc("a")
    d["constants"] = {"c": "t^(1/2)"}
    with pytest.raises(SchemaError) as e:
        scene_from_dict(d)
    assert e.value.path == "constants.c"
    d = doc("d")
    d["field"]["minpoly"] = ["-1", "0", "1"]  # x^2 - 1 is reducible
    with pytest.raises(SchemaError) as e:
        scene_from_dict(d)
    assert e.value.path == "field"


def test_constants_resolve():
    d = doc("a")
    d["constants"] = {"u": "1 + t", "s": "t^3"}
    sc = scene_from_dict(d)
    assert sc.constants["s"].valuation() == 3


def test_digest_is_canonical():
    d = doc("a")
    shuffled = dict(reversed(list(d.items())))
    assert scene_digest(d) == scene_digest(shuffled) == preset("a").digest
    d["seed"] = 8
    assert scene_digest(d) != preset("a").digest


def test_report_schema_and_stability():
    rep = Report("demo", preset("a").to_json(), seed=7)
    rep.add("one", "pass", {"b": 1, "a": [1, 2]})
    rep.add("two", "evidence", {"outcome": "UNKNOWN"})
    validate_report(rep.to_json())
    s = rep.dumps()
    assert s.index('"checks"') < s.index('"scene"') < s.index('"seed"') < s.index('"suite"')
    assert json.loads(s) == rep.to_json()
    assert rep.exit_code() == 0 and rep.exit_code(strict=True) == 3
    rep.add("three", "fail")
    assert rep.exit_code(strict=True) == 1


def test_report_schema_rejects_bad_documents():
    good = Report("demo", preset("a").to_json(), seed=None).to_json()
    validate_report(good)
    for mutate in (
        lambda d: d["checks"].append({"name": "x", "status": "maybe", "details": {}}),
        lambda d: d["scene"].update(digest="xyz"),
        lambda d: d.pop("version"),
    ):
        d = copy.deepcopy(good)
        mutate(d)
        with pytest.raises(SchemaError):
            validate_report(d)
    with pytest.raises(ValueError):
        Check("x", "maybe")


def test_published_schemas_match_package_copies():
    from importlib import resources
    from pathlib import Path

    docs = Path(__file__).resolve().parents[1] / "docs"
    for name in ("scene.schema.json", "report.schema.json"):
        shipped = resources.files("skolemlab").joinpath("schemas", name).read_text()
        assert json.loads((docs / name).read_text()) == json.loads(shipped)
