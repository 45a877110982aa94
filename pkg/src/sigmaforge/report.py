"""Structured verdicts with witnesses, serializable to deterministic JSON."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .groups import Subgroup
from .perm import Permutation

STATUSES = ("ok", "not-applicable", "inconclusive-at-scale")
# subgroups larger than this are described by generators instead of all elements
ELEMENT_LIST_LIMIT = 200


def describe_subgroup(h: Subgroup) -> dict:
    if h.order <= ELEMENT_LIST_LIMIT:
        return {"order": h.order, "elements": h.descriptor()}
    gens = sorted(str(h.ambient.element(i)) for i in h.gens)
    return {"order": h.order, "generators": gens}


def witness(role: str, value) -> dict:
    """A named reference to a subgroup, an element, or a plain value."""
    if isinstance(value, Subgroup):
        return {"role": role, "subgroup": describe_subgroup(value)}
    if isinstance(value, Permutation):
        return {"role": role, "element": str(value)}
    return {"role": role, "value": value}


@dataclass
class PropertyReport:
    check: str
    verdict: bool | None
    sigma: str | None = None
    witnesses: list = field(default_factory=list)
    sub_reports: list = field(default_factory=list)
    status: str = "ok"
    consistent: bool | None = None
    note: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def __bool__(self):
        return bool(self.verdict)

    def add(self, sub: PropertyReport) -> PropertyReport:
        self.sub_reports.append(sub)
        return sub

    def witness(self, role: str, value):
        self.witnesses.append(witness(role, value))

    def find(self, check: str) -> PropertyReport | None:
        """Depth-first search for a sub-report by check name."""
        if self.check == check:
            return self
        for s in self.sub_reports:
            hit = s.find(check)
            if hit is not None:
                return hit
        return None

    def all_consistent(self) -> bool:
        if self.consistent is False:
            return False
        return all(s.all_consistent() for s in self.sub_reports)

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "verdict": self.verdict,
            "sigma": self.sigma,
            "status": self.status,
            "witnesses": sorted(self.witnesses, key=lambda w: json.dumps(w, sort_keys=True)),
            "sub_reports": [s.to_dict() for s in self.sub_reports],
        }
        if self.consistent is not None:
            out["consistent"] = self.consistent
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    def to_text(self, depth: int = 0) -> str:
        pad = "  " * depth
        verdict = {True: "true", False: "false", None: "n/a"}[self.verdict]
        line = f"{pad}{self.check}: {verdict}"
        if self.status != "ok":
            line += f" [{self.status}]"
        if self.consistent is False:
            line += " [DISAGREES WITH BRUTE FORCE]"
        if self.note:
            line += f" ({self.note})"
        lines = [line]
        for w in sorted(self.witnesses, key=lambda w: json.dumps(w, sort_keys=True)):
            lines.append(f"{pad}  - {_witness_text(w)}")
        lines.extend(s.to_text(depth + 1) for s in self.sub_reports)
        return "\n".join(lines)


def _witness_text(w: dict) -> str:
    if "subgroup" in w:
        d = w["subgroup"]
        body = d.get("elements") or d.get("generators")
        shown = ", ".join(body[:6]) + (", ..." if len(body) > 6 else "")
        kind = "elements" if "elements" in d else "generated by"
        return f"{w['role']}: order {d['order']} ({kind} {shown})"
    if "element" in w:
        return f"{w['role']}: {w['element']}"
    return f"{w['role']}: {w['value']}"
