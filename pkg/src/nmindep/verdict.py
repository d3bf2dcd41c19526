"""Checker results shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class Verdict:
    """Outcome of exhaustively instantiating one law.

    ``witness`` is present exactly when the law fails; it names the instance
    (sets, formulas, points) that breaks it.
    """

    rule: str
    holds: bool
    witness: dict | None = None
    checked: int = 0
    vacuous: bool = False
    note: str = ""

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("a verdict carries a witness iff the law fails")

    def __bool__(self):
        return self.holds

    @classmethod
    def ok(cls, rule: str, checked: int = 0, note: str = "") -> "Verdict":
        return cls(rule, True, None, checked, vacuous=checked == 0, note=note)

    @classmethod
    def fail(cls, rule: str, witness: dict, checked: int = 0, note: str = "") -> "Verdict":
        return cls(rule, False, witness, checked, note=note)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"rule": self.rule, "holds": self.holds}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        out["checked"] = self.checked
        if self.vacuous:
            out["vacuous"] = True
        if self.note:
            out["note"] = self.note
        return out


def combine(rule: str, parts: Iterable[Verdict]) -> Verdict:
    """First failing part wins; otherwise the instance counts add up."""
    total = 0
    for v in parts:
        total += v.checked
        if not v.holds:
            return Verdict.fail(rule, {"part": v.rule, **(v.witness or {})}, total)
    return Verdict.ok(rule, total)


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        items = [jsonable(x) for x in obj]
        try:
            return sorted(items)
        except TypeError:
            return sorted(items, key=repr)
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)
