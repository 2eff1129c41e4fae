"""
Reports produced by the CLI and the self-test, with a stable JSON form.

JSON shape::

    {"command": str,
     "checks": [{"name": str, "pass": bool}],
     "tables": [{"dim": int, "group": {"cyclic_2_exponents": [int]},
                 "psi3": {"num": str, "den": str} | null}],
     "values": {str: str | {"num": str, "den": str}}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from v1di4.padic_core import OddRational
from v1di4.types import FinAbGroup2


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = field(default="", compare=False)
    seconds: Optional[float] = field(default=None, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "pass": self.passed}


@dataclass(frozen=True)
class TableRow:
    dim: int
    group: FinAbGroup2
    psi3: Optional[OddRational] = None
    label: str = field(default="", compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "group": self.group.to_dict(),
            "psi3": self.psi3.to_dict() if self.psi3 is not None else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TableRow":
        psi3 = data.get("psi3")
        return cls(
            int(data["dim"]),
            FinAbGroup2.from_dict(data["group"]),
            OddRational.from_dict(psi3) if psi3 is not None else None,
        )


@dataclass
class Report:
    command: str
    checks: List[CheckResult] = field(default_factory=list)
    tables: List[TableRow] = field(default_factory=list)
    values: Dict[str, Any] = field(default_factory=dict)
    # "rows" or "grid8" (one markdown row per i, columns d = 1..8)
    layout: str = field(default="rows", compare=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = "") -> CheckResult:
        result = CheckResult(name, bool(passed), detail)
        self.checks.append(result)
        return result

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "command": self.command,
            "checks": [c.to_dict() for c in self.checks],
            "tables": [t.to_dict() for t in self.tables],
        }
        if self.values:
            out["values"] = self.values
        return out


def serialize_report(report: Report) -> str:
    """Byte-stable JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def parse_report(text: str) -> Report:
    data = json.loads(text)
    return Report(
        command=data["command"],
        checks=[CheckResult(c["name"], bool(c["pass"])) for c in data.get("checks", [])],
        tables=[TableRow.from_dict(t) for t in data.get("tables", [])],
        values=dict(data.get("values", {})),
    )


def _value_text(v: Any) -> str:
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return str(OddRational.from_dict(v))
    return str(v)


def _grid(rows: List[TableRow]) -> List[str]:
    by_i: Dict[int, Dict[int, FinAbGroup2]] = {}
    for row in rows:
        i, d = divmod(row.dim - 1, 8)
        by_i.setdefault(i, {})[d + 1] = row.group
    lines = ["| i | " + " | ".join(f"d={d}" for d in range(1, 9)) + " |", "|---" * 9 + "|"]
    for i in sorted(by_i):
        cells = [str(by_i[i].get(d, "")) for d in range(1, 9)]
        lines.append(f"| {i} | " + " | ".join(cells) + " |")
    return lines


def render_markdown(report: Report) -> str:
    lines = [f"# {report.command}", ""]
    if report.checks:
        lines.append("## Checks")
        lines.append("")
        for c in report.checks:
            mark = "PASS" if c.passed else "FAIL"
            timing = f" ({c.seconds:.3f}s)" if c.seconds is not None else ""
            detail = f": {c.detail}" if c.detail else ""
            lines.append(f"- [{mark}] {c.name}{timing}{detail}")
        lines.append("")
    if report.tables:
        lines.append("## Table")
        lines.append("")
        if report.layout == "grid8":
            lines.extend(_grid(report.tables))
        else:
            lines.append("| dim | group | psi^3 |")
            lines.append("|---|---|---|")
            for row in report.tables:
                dim = row.label or str(row.dim)
                psi3 = str(row.psi3) if row.psi3 is not None else ""
                lines.append(f"| {dim} | {row.group} | {psi3} |")
        lines.append("")
    if report.values:
        lines.append("## Values")
        lines.append("")
        for key in sorted(report.values):
            lines.append(f"- {key}: {_value_text(report.values[key])}")
        lines.append("")
    return "\n".join(lines)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return serialize_report(report)
    if fmt == "md":
        return render_markdown(report)
    raise ValueError(f"unknown format {fmt!r}")
