from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
OUT_OF_CAP = "out-of-cap"
REFUSED = "refused"


@dataclass
class Check:
    """Outcome of one named verification."""

    name: str
    status: str
    witness: Any = None
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    parts: list["Check"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = list(self.notes)
        if self.details:
            out["details"] = self.details
        if self.parts:
            out["parts"] = [c.to_json() for c in self.parts]
        return out

    def part(self, name: str) -> "Check":
        for c in self.parts:
            if c.name == name:
                return c
        raise KeyError(name)


def combine(name: str, parts: list[Check], **details) -> Check:
    """Fail if any part fails, else refuse/out-of-cap if any part does, else pass.

    Notes stay on the parts; the combined check only carries its own.
    """
    statuses = [c.status for c in parts]
    if FAIL in statuses:
        status = FAIL
    elif REFUSED in statuses:
        status = REFUSED
    elif OUT_OF_CAP in statuses:
        status = OUT_OF_CAP
    else:
        status = PASS
    witness = next((c.witness for c in parts if c.status == status and c.witness is not None), None)
    return Check(name, status, witness, [], dict(details), list(parts))


def from_bool(name: str, ok: bool | None, witness=None, **details) -> Check:
    status = OUT_OF_CAP if ok is None else (PASS if ok else FAIL)
    return Check(name, status, witness if status != PASS else None, details=details)
