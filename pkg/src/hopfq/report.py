"""Named pass/fail records for axiom suites."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .exactlin import DimensionError, FactorizationError, Mat, NotIdempotentError, first_difference


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    witness: int | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"label": self.label, "pass": self.passed, "witness": self.witness}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class AxiomReport:
    """Ordered list of checks; a failing check always carries a witness index."""

    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.checks]

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, label: str) -> Check:
        for c in self.checks:
            if c.label == label:
                return c
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(c.label == label for c in self.checks)

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)

    def extend(self, other: "AxiomReport", prefix: str = "") -> "AxiomReport":
        for c in other.checks:
            self.checks.append(Check(prefix + c.label, c.passed, c.witness, c.detail))
        return self

    def to_dict(self) -> dict:
        return {"suite": self.suite, "pass": self.passed, "checks": [c.to_dict() for c in self.checks]}

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            extra = "" if c.passed else f"  witness={c.witness}"
            if c.detail and not c.passed:
                extra += f"  ({c.detail})"
            lines.append(f"{status}  {c.label}{extra}")
        return "\n".join(lines)


class AxiomError(ValueError):
    """A structure failed validation; carries the failing report."""

    def __init__(self, report: AxiomReport):
        self.report = report
        bad = ", ".join(f"{c.label} (witness {c.witness})" for c in report.failures())
        super().__init__(f"{report.suite} failed: {bad}")


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("HOPFQ_THREADS", "1")))
    except ValueError:
        return 1


_EXPECTED = (DimensionError, FactorizationError, NotIdempotentError, ArithmeticError, ValueError)


def compare(label: str, lhs: Mat, rhs: Mat) -> Check:
    if lhs.shape != rhs.shape:
        return Check(label, False, 0, f"shape {lhs.shape} vs {rhs.shape}")
    w = first_difference(lhs, rhs)
    return Check(label, w is None, w)


class Suite:
    """Collects lazily evaluated checks and runs them, optionally in threads.

    Output order always follows registration order.
    """

    def __init__(self, name: str):
        self.name = name
        self._items: list[tuple[str, Callable[[], Check]]] = []

    def equal(self, label: str, lhs: Callable[[], Mat], rhs: Callable[[], Mat]) -> None:
        self._items.append((label, lambda: compare(label, lhs(), rhs())))

    def all_equal(self, label: str, thunks: list[Callable[[], Mat]]) -> None:
        """Register pairwise equality of consecutive composites as separate lines."""
        for k in range(len(thunks) - 1):
            a, b = thunks[k], thunks[k + 1]
            self.equal(f"{label} {k + 1}={k + 2}", a, b)

    def predicate(self, label: str, fn: Callable[[], int | None], detail: str = "") -> None:
        """fn returns None on success or a witness index on failure."""

        def run() -> Check:
            w = fn()
            return Check(label, w is None, w, "" if w is None else detail)

        self._items.append((label, run))

    def run(self, threads: int | None = None) -> AxiomReport:
        threads = thread_count() if threads is None else threads

        def guarded(item: tuple[str, Callable[[], Check]]) -> Check:
            label, fn = item
            try:
                return fn()
            except _EXPECTED as exc:
                return Check(label, False, 0, f"{type(exc).__name__}: {exc}")

        if threads > 1 and len(self._items) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                checks = list(pool.map(guarded, self._items))
        else:
            checks = [guarded(item) for item in self._items]
        return AxiomReport(self.name, checks)
