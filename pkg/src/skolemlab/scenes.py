"""Scene files: a residue field, a value group, a domain, named constants and a sample policy."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import jsonschema

from .domains import DomainDescriptor
from .errors import NotABasis, SchemaError, SkolemLabError
from .residue_field import FieldDescriptor
from .valgroup import GroupDescriptor
from .valued_field import ValuedFieldDescriptor

PRESETS = ("a", "b", "c", "d", "q")


def _schema(name: str) -> dict:
    return json.loads(resources.files("skolemlab").joinpath("schemas", name).read_text())


def validate(doc: dict, schema_name: str):
    """Raise SchemaError carrying the dotted path of the first offending field."""
    validator = jsonschema.Draft202012Validator(_schema(schema_name))
    err = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if err is not None:
        path = ".".join(str(p) for p in err.absolute_path)
        raise SchemaError(err.message if path else f"<root>: {err.message}", path)


@dataclass
class Scene:
    name: str
    K: ValuedFieldDescriptor
    D: DomainDescriptor
    constants: dict = field(default_factory=dict)
    sample_count: int = 200
    valuation_range: tuple = (Fraction(0), Fraction(3))
    seed: int | None = None
    digest: str = ""
    document: dict = field(default_factory=dict)

    @property
    def field(self) -> FieldDescriptor:
        return self.K.base

    @property
    def group(self) -> GroupDescriptor:
        return self.K.group

    @property
    def puiseux(self) -> bool:
        return self.K.puiseux

    def to_json(self) -> dict:
        return {"name": self.name, "digest": self.digest}


def scene_digest(doc: dict) -> str:
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def scene_from_dict(doc: dict) -> Scene:
    validate(doc, "scene.schema.json")
    try:
        F = FieldDescriptor.from_json(doc["field"])
    except (SkolemLabError, ValueError, ArithmeticError) as e:
        raise SchemaError(str(e), "field") from e
    G = GroupDescriptor.from_json(doc["group"])
    puiseux = doc.get("puiseux", G.kind != "Integers")
    if puiseux != (G.kind != "Integers"):
        raise SchemaError("must be true exactly when the value group is not Z", "puiseux")
    K = ValuedFieldDescriptor(F, G, doc.get("symbol", "t"))
    # imported here to keep the parser free of scene dependencies
    from .expr import parse_element

    dom = doc["domain"]
    if dom["kind"] == "Valuation":
        D = DomainDescriptor.valuation(K)
    else:
        basis = []
        for i, s in enumerate(dom.get("basis", [])):
            try:
                basis.append(parse_element(s, K).residue_raw())
            except SkolemLabError as e:
                raise SchemaError(str(e), f"domain.basis.{i}") from e
        try:
            D = DomainDescriptor.pvd(K, F.base_field, basis)
        except NotABasis as e:
            raise SchemaError(str(e), "domain.basis") from e
        except (SkolemLabError, ValueError) as e:
            raise SchemaError(str(e), "domain") from e
    scene = Scene(doc["name"], K, D, seed=doc.get("seed"), digest=scene_digest(doc), document=doc)
    for name, src in doc.get("constants", {}).items():
        try:
            scene.constants[name] = parse_element(src, scene)
        except SkolemLabError as e:
            raise SchemaError(str(e), f"constants.{name}") from e
    samples = doc.get("samples", {})
    scene.sample_count = samples.get("count", 200)
    if "valuation_range" in samples:
        lo, hi = (Fraction(s) for s in samples["valuation_range"])
        if lo > hi:
            raise SchemaError("empty range", "samples.valuation_range")
        scene.valuation_range = (lo, hi)
    return scene


def preset(name: str) -> Scene:
    key = name.lower()
    if key not in PRESETS:
        raise SchemaError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}", "")
    text = resources.files("skolemlab").joinpath("scenes", f"{key}.json").read_text()
    return scene_from_dict(json.loads(text))


def load_scene(path) -> Scene:
    """Load a scene file. Preset names (a, b, c, d, q) and scenes/<name>.json resolve to the shipped presets."""
    path = str(path)
    if os.path.exists(path):
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e}", "") from e
        return scene_from_dict(doc)
    base = os.path.basename(path)
    stem = base[:-5] if base.endswith(".json") else base
    if stem.lower() in PRESETS:
        return preset(stem)
    raise SchemaError(f"scene file {path!r} not found", "")
