"""Verification reports: per-case records, CSV emission, and digests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

__all__ = ["CaseResult", "VerificationReport"]


@dataclass(frozen=True)
class CaseResult:
    """One measured case: value against its bound or bracket."""

    case_id: str
    prop: str  # property tag naming the claim being exercised
    value: float
    lo: Optional[float]
    hi: Optional[float]
    tol: float
    passed: bool
    note: str = ""

    def row(self) -> List[str]:
        fmt = lambda v: "" if v is None else repr(float(v))
        return [
            self.case_id,
            self.prop,
            repr(float(self.value)),
            fmt(self.lo),
            fmt(self.hi),
            repr(float(self.tol)),
            "pass" if self.passed else "FAIL",
            self.note,
        ]


@dataclass
class VerificationReport:
    """Suite outcome: environment snapshot plus append-only case rows."""

    suite: str
    env: Dict[str, object] = field(default_factory=dict)
    cases: List[CaseResult] = field(default_factory=list)

    def add(
        self,
        case_id: str,
        prop: str,
        value: float,
        passed: bool,
        lo: Optional[float] = None,
        hi: Optional[float] = None,
        tol: float = 0.0,
        note: str = "",
    ) -> CaseResult:
        case = CaseResult(case_id, prop, value, lo, hi, tol, passed, note)
        self.cases.append(case)
        return case

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> int:
        return sum(1 for c in self.cases if not c.passed)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"SUITE {self.suite} {status} cases={len(self.cases)} failures={self.failures}"

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case_id", "prop", "value", "lo", "hi", "tol", "status", "note"])
        for c in self.cases:
            w.writerow(c.row())
        return buf.getvalue()

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(f"# {self.summary_line()}\n")
            fh.write(f"# env {json.dumps(self.env, sort_keys=True, default=str)}\n")
            fh.write(self.csv_text())

    def digest(self) -> str:
        return hashlib.sha256(self.csv_text().encode()).hexdigest()
