"""Structured outcome of a verification run, with JSON round-tripping."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Mapping

from .series import MultiSeries, TruncationBox

SCHEMA_VERSION = 1


@dataclass
class Mismatch:
    key: Any
    lhs: Any
    rhs: Any


@dataclass
class VerificationReport:
    check: str
    params: dict = field(default_factory=dict)
    box: dict | None = None
    sound_region: dict | None = None
    status: str = "pass"
    mismatch: Mismatch | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.status not in ("pass", "fail"):
            raise ValueError(f"status must be pass or fail, got {self.status!r}")
        if self.status == "pass" and self.mismatch is not None:
            raise ValueError("a passing report cannot carry a mismatch")
        if isinstance(self.mismatch, Mapping):
            self.mismatch = Mismatch(**self.mismatch)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["schema"] = SCHEMA_VERSION
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: Mapping) -> "VerificationReport":
        data = dict(data)
        schema = data.pop("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {schema}")
        mm = data.get("mismatch")
        if mm is not None:
            data["mismatch"] = Mismatch(**mm)
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls.from_dict(json.loads(text))

    def render(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"[{self.status.upper()}] {self.check}" + (f" ({params})" if params else "")
        lines = [line]
        if self.sound_region:
            lines.append(f"    region: {self.sound_region}")
        if self.mismatch is not None:
            m = self.mismatch
            lines.append(f"    first mismatch at {m.key}: lhs={m.lhs} rhs={m.rhs}")
        for note in self.notes:
            lines.append(f"    note: {note}")
        return "\n".join(lines)


def _jsonable(key):
    if isinstance(key, tuple):
        return [_jsonable(k) for k in key]
    return key


def series_mismatch(lhs: MultiSeries, rhs: MultiSeries) -> Mismatch | None:
    """First differing coefficient (lexicographic in exponent vectors), or None."""
    diff = lhs - rhs
    if not diff:
        return None
    exps, _ = diff.terms()[0]
    return Mismatch(key=list(exps), lhs=lhs.coeff(exps), rhs=rhs.coeff(exps))


def table_mismatch(lhs: Mapping, rhs: Mapping, keys: Iterable | None = None) -> Mismatch | None:
    """First key (sorted) where two count maps disagree; missing keys count as zero."""
    if keys is None:
        keys = set(lhs) | set(rhs)
    for key in sorted(keys):
        a, b = lhs.get(key, 0), rhs.get(key, 0)
        if a != b:
            return Mismatch(key=_jsonable(key), lhs=a, rhs=b)
    return None


def from_mismatch(check: str, mismatch: Mismatch | None, params: dict | None = None,
                  box: TruncationBox | None = None, sound_region: dict | None = None,
                  notes: list[str] | None = None) -> VerificationReport:
    return VerificationReport(
        check=check,
        params=dict(params or {}),
        box=box.to_dict() if box is not None else None,
        sound_region=sound_region if sound_region is not None else (box.to_dict() if box else None),
        status="pass" if mismatch is None else "fail",
        mismatch=mismatch,
        notes=list(notes or []),
    )


def compare_series(check: str, lhs: MultiSeries, rhs: MultiSeries, params: dict | None = None,
                   notes: list[str] | None = None) -> VerificationReport:
    box = lhs.box.meet(rhs.box)
    return from_mismatch(check, series_mismatch(lhs, rhs), params, box, notes=notes)


def all_passed(reports: Iterable[VerificationReport]) -> bool:
    return all(r.passed for r in reports)
