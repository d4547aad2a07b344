"""Custom types for charvar runs."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .const import DEFAULT_FORMAT, DEFAULT_SEED, DEFAULT_TOLERANCE, DEFAULT_WORKERS


@dataclass
class RunConfig:
    """Resolved settings for one CLI invocation."""

    command: str
    group: str | None = None
    target: str | None = None
    presentation_path: Path | None = None
    group_class: str | None = None
    matrices_path: Path | None = None
    mode: str = "check"
    deck: tuple[int, ...] | None = None
    suites: tuple[str, ...] = ()
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOLERANCE
    count: int | None = None
    workers: int = DEFAULT_WORKERS
    format: str = DEFAULT_FORMAT
    output: Path | None = None
    logger: dict[str, Any] = field(default_factory=dict)


@dataclass
class CheckResult:
    """One pass/fail verification with its residual."""

    name: str
    passed: bool
    residual: float | None = None
    detail: str | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "detail": self.detail,
        }


@dataclass
class SuiteResult:
    """Aggregated outcome of one Monte-Carlo suite."""

    name: str
    samples: int = 0
    failures: int = 0
    max_residuals: dict[str, float] = field(default_factory=dict)
    statistics: dict[str, Any] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and not self.errors

    def record(self, key: str, residual: float) -> None:
        """Keep the largest residual seen under key."""
        self.max_residuals[key] = max(self.max_residuals.get(key, 0.0), float(residual))

    def count(self, key: str, amount: int = 1) -> None:
        self.statistics[key] = self.statistics.get(key, 0) + amount

    def fail(self, message: str) -> None:
        self.failures += 1
        if len(self.errors) < 10:
            self.errors.append(message)

    def merge(self, other: SuiteResult) -> None:
        """Fold a batch result into this one."""
        self.samples += other.samples
        self.failures += other.failures
        for key, value in other.max_residuals.items():
            self.record(key, value)
        for key, value in other.statistics.items():
            if isinstance(value, int) and not isinstance(value, bool):
                self.count(key, value)
            else:
                self.statistics[key] = value
        self.errors.extend(other.errors[: max(0, 10 - len(self.errors))])

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples,
            "failures": self.failures,
            "max_residuals": dict(sorted(self.max_residuals.items())),
            "statistics": dict(sorted(self.statistics.items())),
            "errors": list(self.errors),
        }


@dataclass
class VerificationReport:
    """Output of the verify command."""

    mode: str
    target: str | None
    checks: list[CheckResult] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks) and all(
            suite.passed for suite in self.suites
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "target": self.target,
            "passed": self.passed,
            "checks": [check.as_dict() for check in self.checks],
            "data": self.data,
            "suites": [suite.as_dict() for suite in self.suites],
        }
