"""Report rendering and golden tables.

Every command produces one :class:`Report`; markdown and JSON are both derived
from it.  ``write_suite_artifacts`` writes ``latest.md``, ``summary.json`` and
``checks.csv`` into a report directory for ``conifold check --report-dir``.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import pandas as pd

from conifold.codec import canonical_dumps, presentation_to_json, scalar_to_json, zigzag_to_json
from conifold.zigzag import (
    assemble,
    direct_sum_all,
    extension_class,
    general_extension,
    mu_corrected,
    mu_ic,
    mu_skyscraper,
    split_presentation,
)

logger = logging.getLogger(__name__)

TABLE_FILES = {"table1": "table1.jsonl", "table2": "table2.jsonl"}


# ---------------------------------------------------------------------------
# Golden tables
# ---------------------------------------------------------------------------

def table1_rows(r: int = 2) -> list[dict]:
    """Standard zig-zags at an ordinary double point, plus the r-fold point sum."""
    corrected, _ = mu_corrected(1)
    return [
        {"row": "IC", "tuple": zigzag_to_json(mu_ic(1, 1)), "comment": "minimal extension"},
        {"row": "skyscraper", "tuple": zigzag_to_json(mu_skyscraper(1)),
         "comment": "point-supported rank-one object"},
        {"row": "corrected", "tuple": zigzag_to_json(corrected),
         "comment": "unique corrected non-split class"},
        {"row": "r_fold_sum", "tuple": zigzag_to_json(direct_sum_all([mu_skyscraper(1)] * r)),
         "comment": "multi-node local shadow"},
    ]


def _template_row(name: str, e, comment: str) -> dict:
    return {
        "row": name,
        "presentation": presentation_to_json(e),
        "assembled": zigzag_to_json(assemble(e)),
        "class_params": [scalar_to_json(p) for p in e.class_params],
        "extension_class": [[scalar_to_json(x) for x in col] for col in extension_class(e)],
        "comment": comment,
    }


def table2_rows() -> list[dict]:
    """Extension templates: split, general block template with u = 1, corrected."""
    _, corrected = mu_corrected(1)
    return [
        _template_row("split", split_presentation(mu_ic(1, 1), mu_skyscraper(1)),
                      "trivial extension class"),
        _template_row("general", general_extension(1),
                      "off-diagonal u records the extension class modulo Im beta"),
        _template_row("corrected", corrected, "unique nontrivial self-dual class"),
    ]


def table_lines(table_nodes: int = 2) -> dict[str, list[str]]:
    return {
        "table1": [canonical_dumps(row) for row in table1_rows(table_nodes)],
        "table2": [canonical_dumps(row) for row in table2_rows()],
    }


def golden_mismatches(golden_dir: Path, table_nodes: int = 2) -> list[tuple[str, str]]:
    """(table, row) pairs whose golden line differs from the live one."""
    out = []
    for table, lines in table_lines(table_nodes).items():
        path = Path(golden_dir) / TABLE_FILES[table]
        golden = path.read_text(encoding="utf-8").splitlines() if path.exists() else []
        for i, line in enumerate(lines):
            if i >= len(golden) or golden[i] != line:
                out.append((table, json.loads(line)["row"]))
        if len(golden) > len(lines):
            out.append((table, f"extra line {len(lines) + 1}"))
    return out


def write_golden(golden_dir: Path, table_nodes: int = 2) -> list[Path]:
    golden_dir = Path(golden_dir)
    golden_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for table, lines in table_lines(table_nodes).items():
        path = golden_dir / TABLE_FILES[table]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info("  %s -> %s", table, path)
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class Report:
    """One command's result: scalar facts in ``summary``, row tables in ``tables``."""

    command: str
    ok: bool
    summary: dict[str, Any] = field(default_factory=dict)
    tables: dict[str, list[dict]] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "ok": self.ok,
            "summary": self.summary,
            "tables": self.tables,
            "details": self.details,
        }


def render_json(report: Report) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True, default=str, ensure_ascii=False)


def render_markdown(report: Report) -> str:
    lines: list[str] = []
    _h = lines.append
    _h(f"# conifold {report.command}\n")
    _h(f"**Verdict:** {'PASS' if report.ok else 'FAIL'}\n")
    if report.summary:
        _h(_kv_table(report.summary))
        _h("")
    for name, rows in report.tables.items():
        _h(f"## {name}\n")
        _h(_rows_table(rows))
        _h("")
    for name, value in report.details.items():
        _h(f"## {name}\n")
        _h("```json")
        _h(json.dumps(value, indent=2, sort_keys=True, default=str, ensure_ascii=False))
        _h("```\n")
    return "\n".join(lines)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "markdown":
        return render_markdown(report)
    raise ValueError(f"unknown output format {fmt!r}")


def _kv_table(d: dict) -> str:
    lines = ["| Key | Value |", "|-----|-------|"]
    for k, v in d.items():
        lines.append(f"| {k} | {_fmt(v)} |")
    return "\n".join(lines)


def _rows_table(rows: list[dict]) -> str:
    if not rows:
        return "_empty_"
    cols = list(rows[0])
    lines = ["| " + " | ".join(cols) + " |", "|" + "|".join("---" for _ in cols) + "|"]
    for row in rows:
        lines.append("| " + " | ".join(_fmt(row.get(c)) for c in cols) + " |")
    return "\n".join(lines)


def _fmt(v) -> str:
    if v is None:
        return "—"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, sort_keys=True, default=str, ensure_ascii=False)
    return str(v)


def suite_report(checks: pd.DataFrame, seed: int) -> Report:
    per_step = (checks.groupby("step", sort=False)["passed"]
                .agg(["count", "sum"]).reset_index())
    steps = [{"step": r["step"], "checks": int(r["count"]), "passed": int(r["sum"])}
             for _, r in per_step.iterrows()]
    failures = checks[~checks["passed"]].to_dict("records")
    return Report(
        command="check",
        ok=bool(checks["passed"].all()),
        summary={"seed": seed, "checks": len(checks), "failed": len(failures)},
        tables={"steps": steps, "failures": failures} if failures else {"steps": steps},
    )


def write_suite_artifacts(report: Report, checks: pd.DataFrame, out_dir: Path) -> None:
    """latest.md, summary.json and checks.csv, as the pipeline report does."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "latest.md").write_text(render_markdown(report), encoding="utf-8")
    (out_dir / "summary.json").write_text(render_json(report), encoding="utf-8")
    checks.to_csv(out_dir / "checks.csv", index=False)
    logger.info("  report -> %s", out_dir / "latest.md")
