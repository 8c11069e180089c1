"""Structured check records shared by every verifier."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class CheckResult:
    """One axiom instance. ``witness`` names the basis tuple that was tested."""

    check_id: str
    status: str
    witness: tuple[str, ...] = ()
    lhs: str = ""
    rhs: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def line(self) -> str:
        w = ", ".join(self.witness)
        head = f"[{self.status.upper()}] {self.check_id}"
        if w:
            head += f" @ ({w})"
        if not self.ok:
            head += f"\n    lhs = {self.lhs}\n    rhs = {self.rhs}"
        return head

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["witness"] = list(self.witness)
        return rec


@dataclass
class Report:
    title: str = ""
    results: list[CheckResult] = field(default_factory=list)

    def add(self, check_id: str, ok: bool, witness: Iterable[str] = (), lhs: str = "", rhs: str = "") -> CheckResult:
        res = CheckResult(check_id, PASS if ok else FAIL, tuple(str(w) for w in witness), lhs, rhs)
        self.results.append(res)
        return res

    def extend(self, other: "Report") -> "Report":
        self.results.extend(other.results)
        return self

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.ok]

    def first_failure(self) -> CheckResult | None:
        fails = self.failures()
        return fails[0] if fails else None

    def by_id(self, prefix: str) -> list[CheckResult]:
        return [r for r in self.results if r.check_id == prefix or r.check_id.startswith(prefix + ":")]

    def __iter__(self) -> Iterator[CheckResult]:
        return iter(self.results)

    def __len__(self) -> int:
        return len(self.results)

    def summary(self) -> str:
        n_fail = len(self.failures())
        state = "PASS" if n_fail == 0 else "FAIL"
        return f"{self.title or 'report'}: {state} ({len(self.results) - n_fail}/{len(self.results)} checks passed)"

    def render(self, verbose: bool = False) -> str:
        lines = [self.summary()]
        for r in self.results:
            if verbose or not r.ok:
                lines.append("  " + r.line().replace("\n", "\n  "))
        return "\n".join(lines)

    def to_records(self) -> list[dict]:
        return [r.to_record() for r in self.results]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n" for rec in self.to_records())
