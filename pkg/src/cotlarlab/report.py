"""Structured results of verification runs.

A CheckReport records what was swept (config), how many cases were checked,
and every violation with enough serialized input to replay it.  Reports
merge associatively so sweeps can be partitioned across workers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class CheckReport:
    check: str
    config: dict
    total_checked: int = 0
    violations: list = field(default_factory=list)
    witness: dict | None = None
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add_violation(self, inputs: list, observed: dict) -> None:
        self.violations.append({"inputs": inputs, "observed": observed})

    def merge(self, other: "CheckReport") -> "CheckReport":
        if other.check != self.check:
            raise ValueError(f"cannot merge {other.check!r} into {self.check!r}")
        self.total_checked += other.total_checked
        self.violations.extend(other.violations)
        if self.witness is None:
            self.witness = other.witness
        self.elapsed_ms += other.elapsed_ms
        return self

    def to_dict(self, version: str, config_echo: dict | None = None) -> dict:
        config = dict(self.config)
        if config_echo:
            config.update(config_echo)
        return {
            "check": self.check,
            "config": config,
            "total_checked": self.total_checked,
            "violations": self.violations,
            "witness": self.witness,
            "elapsed_ms": self.elapsed_ms,
            "version": version,
        }


class Stopwatch:
    """Wall-clock timer filling CheckReport.elapsed_ms."""

    def __init__(self):
        self.t0 = time.perf_counter()

    def ms(self) -> int:
        return int((time.perf_counter() - self.t0) * 1000)
