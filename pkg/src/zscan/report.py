"""Candidate reports: JSON, plain text, CSV and figures."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .generator import ClassCatalog
from .minimality import ClassReport, candidate_report, explain_text, survivors
from .store import write_json

CSV_FIELDS = ["level", "key", "status", "excluded_by", "witness_line", "witness_points",
              "n_points", "n_constraints"]


def level_reports(levels: list[ClassCatalog]) -> list[list[ClassReport]]:
    return [candidate_report(c) for c in levels]


def breakdown(reports: list[ClassReport]) -> dict[str, int]:
    out = {"L1": 0, "L2": 0, "L3": 0, "candidate": 0}
    for r in reports:
        out[r.reason.lemma if r.reason else "candidate"] += 1
    return out


def csv_rows(level: int, reports: list[ClassReport]) -> list[dict]:
    rows = []
    for r in reports:
        v = r.reason
        a = r.arrangement
        rows.append({
            "level": level,
            "key": r.key,
            "status": "excluded" if r.excluded else "candidate",
            "excluded_by": v.lemma if v else "",
            "witness_line": "" if v is None or v.witness_line is None else f"L{v.witness_line}",
            "witness_points": " ".join(a.points[k].label() for k in v.witness_points) if v else "",
            "n_points": len(a.points),
            "n_constraints": len(r.to_json()["constraints"]),
        })
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def level_text(level: int, reports: list[ClassReport]) -> str:
    left = survivors(reports)
    parts = [f"level {level}: {len(reports)} classes, {len(left)} surviving candidates", ""]
    for r in reports:
        parts.append(explain_text(r))
        parts.append("")
    return "\n".join(parts)


def write_reports(levels: list[ClassCatalog], out: Path, head: dict, figures: bool = True) -> list[Path]:
    """Write ``report-<j>.json``/``.txt``, ``report.csv`` and, optionally, PNG figures."""
    written = []
    rows = []
    all_reports = level_reports(levels)
    for cat, reports in zip(levels, all_reports):
        j = cat.n
        p = out / f"report-{j}.json"
        write_json(p, {
            "header": head,
            "n": j,
            "survivors": [r.key for r in survivors(reports)],
            "classes": [r.to_json() for r in reports],
        })
        written.append(p)
        t = out / f"report-{j}.txt"
        t.write_text(level_text(j, reports), encoding="utf-8")
        written.append(t)
        rows += csv_rows(j, reports)
    c = out / "report.csv"
    c.write_text(to_csv(rows), encoding="utf-8")
    written.append(c)
    if figures:
        from .plotting import plot_class_counts, plot_filter_breakdown

        written.append(plot_class_counts([len(c) for c in levels], out / "class-counts.png"))
        written.append(plot_filter_breakdown([breakdown(r) for r in all_reports], out / "filters.png"))
    return written
