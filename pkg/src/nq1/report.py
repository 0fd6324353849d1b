"""Small result containers shared by the checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    """Outcome of one mathematical check.

    ``witness`` is JSON-ready (strings and numbers only); ``data`` carries the
    underlying objects for programmatic use and is never serialized.
    """

    name: str
    ok: bool
    witness: dict | None = None
    data: dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict[str, Any] = {"check": self.name, "status": "pass" if self.ok else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def all_ok(checks) -> bool:
    return all(c.ok for c in checks)
