"""
Theorem reports: one CheckResult per sub-check, PASS only when every
non-informational check passes.
"""
from __future__ import annotations

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from automata.io import atomic_write

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INFO = "INFO"


class CheckResult(BaseModel):
    name: str
    verdict: Verdict
    detail: str = ""
    witness: Optional[str] = Field(None, description="counterexample or notable value")

    def line(self) -> str:
        extra = f" [{self.witness}]" if self.witness else ""
        return f"  {self.verdict.value:<4} {self.name}: {self.detail}{extra}".rstrip()


class TheoremReport(BaseModel):
    theorem: str
    title: str
    checks: List[CheckResult] = Field(default_factory=list)
    automata: Dict[str, int] = Field(default_factory=dict, description="live state counts of produced automata")
    seconds: float = 0.0

    @property
    def verdict(self) -> Verdict:
        failed = any(c.verdict is Verdict.FAIL for c in self.checks)
        return Verdict.FAIL if failed or not self.checks else Verdict.PASS

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def add(self, name: str, ok: bool, detail: str = "", witness: Optional[str] = None) -> CheckResult:
        check = CheckResult(name=name, verdict=Verdict.PASS if ok else Verdict.FAIL, detail=detail, witness=witness)
        self.checks.append(check)
        return check

    def info(self, name: str, detail: str, witness: Optional[str] = None) -> CheckResult:
        check = CheckResult(name=name, verdict=Verdict.INFO, detail=detail, witness=witness)
        self.checks.append(check)
        return check

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if c.verdict is Verdict.FAIL]

    def to_text(self) -> str:
        head = f"{self.theorem}: {self.verdict.value} - {self.title} ({self.seconds:.1f}s)"
        lines = [head]
        lines += [c.line() for c in self.checks]
        if self.automata:
            lines.append("  automata: " + ", ".join(f"{k}={v}" for k, v in sorted(self.automata.items())))
        return "\n".join(lines) + "\n"


def write_report(report: TheoremReport, out_dir: Path) -> Path:
    """Write <theorem>.txt and <theorem>.json under out_dir; returns the text path."""
    out_dir = Path(out_dir)
    text_path = out_dir / f"{report.theorem}.txt"
    atomic_write(text_path, report.to_text())
    atomic_write(out_dir / f"{report.theorem}.json", json.dumps(report.model_dump(mode="json"), indent=2) + "\n")
    logger.info(f"report written to {text_path}")
    return text_path
