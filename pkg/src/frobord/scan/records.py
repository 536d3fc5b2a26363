"""ScanRecord: one row of experiment output."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

KINDS = ("exceptional", "density", "quadstat", "friable", "cmax", "audit", "order", "forbidden", "equality", "frakp", "bound")


@dataclass(frozen=True)
class ScanRecord:
    kind: str
    p: int
    payload: tuple
    parameters: dict[str, Any] = field(default_factory=dict, compare=True, hash=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")
        object.__setattr__(self, "payload", tuple(self.payload))
