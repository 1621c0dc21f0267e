"""Machine-readable reports: a suite name, the scene digest, a list of checks, the seed and the tool version."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__

STATUSES = ("pass", "fail", "evidence", "theorem-level")


@dataclass
class Check:
    name: str
    status: str
    details: object = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "details": self.details}


@dataclass
class Report:
    suite: str
    scene: dict  # {"name", "digest"}
    checks: list = field(default_factory=list)
    seed: int | None = None
    version: str = __version__

    def add(self, name: str, status: str, details=None) -> Check:
        chk = Check(name, status, {} if details is None else details)
        self.checks.append(chk)
        return chk

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)

    @property
    def has_unknown(self) -> bool:
        return any(_mentions_unknown(c.details) for c in self.checks)

    def exit_code(self, strict: bool = False) -> int:
        if self.failed:
            return 1
        if strict and self.has_unknown:
            return 3
        return 0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "scene": dict(self.scene),
            "checks": [c.to_json() for c in self.checks],
            "seed": self.seed,
            "version": self.version,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def summary(self) -> str:
        lines = [f"{self.suite} on scene {self.scene.get('name')} (seed {self.seed})"]
        for c in self.checks:
            lines.append(f"  [{c.status}] {c.name}")
        return "\n".join(lines)


def _mentions_unknown(details) -> bool:
    if isinstance(details, dict):
        if details.get("outcome") == "UNKNOWN":
            return True
        return any(_mentions_unknown(v) for v in details.values())
    if isinstance(details, list):
        return any(_mentions_unknown(v) for v in details)
    return False


def validate_report(doc: dict):
    from .scenes import validate

    validate(doc, "report.schema.json")
