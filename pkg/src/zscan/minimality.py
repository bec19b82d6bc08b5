"""Line removal and the minimality filters for Zariski-pair candidates.

Each filter looks for a line whose removal, together with the local data at
its constraints, pins down how the line can be added back.  Such a class
cannot carry a *minimal* Zariski pair.  Nothing here says anything about
non-minimal pairs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .model import Arrangement, CharTriple, PointRecord, constraints, validate, _check_line


@dataclass(frozen=True)
class LemmaVerdict:
    lemma: str  # "L1", "L2" or "L3"
    excluded: bool
    witness_line: int | None = None
    witness_points: tuple[int, ...] = ()
    narrative: str = ""
    inconclusive_lines: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "excluded": self.excluded,
            "witness_line": self.witness_line,
            "witness_points": list(self.witness_points),
            "narrative": self.narrative,
            "inconclusive_lines": list(self.inconclusive_lines),
        }


def remove_line_mapped(a: Arrangement, line: int) -> tuple[Arrangement, dict[int, int]]:
    """Remove ``line`` and report where each surviving point went.

    The map sends point indices of ``a`` to point indices of the result.
    """
    _check_line(a, line)

    def shift(x: int) -> int:
        return x - 1 if x > line else x

    kept: list[tuple[int, PointRecord]] = []
    for k, p in enumerate(a.points):
        lines = tuple(shift(x) for x in p.lines if x != line)
        if len(lines) + p.on_conic < 2 or not lines:
            continue
        tangent = None if p.tangent_line in (None, line) else shift(p.tangent_line)
        kept.append((k, PointRecord(lines, p.on_conic, tangent)))
    reduced = validate(a.n - 1, [p for _, p in kept])
    # validate sorts; recover positions (content-identical records are interchangeable)
    slots: dict[tuple, list[int]] = {}
    for j, p in enumerate(reduced.points):
        slots.setdefault(p.sort_key, []).append(j)
    mapping = {k: slots[p.sort_key].pop(0) for k, p in kept}
    return reduced, mapping


def remove_line(a: Arrangement, line: int) -> Arrangement:
    """Delete ``line``; lines above it move down by one."""
    return remove_line_mapped(a, line)[0]


def _constraints_on(a: Arrangement, line: int, cons: set[int]) -> list[int]:
    return [k for k in a.points_on(line) if k in cons]


def lemma1_filter(a: Arrangement) -> LemmaVerdict:
    """Excluded when some line passes through no constraint."""
    if a.n == 0:
        return LemmaVerdict("L1", True, None, (), "no lines, hence no constraints")
    cons = set(constraints(a))
    for line in range(1, a.n + 1):
        if not _constraints_on(a, line, cons):
            text = f"L{line} passes through no constraint"
            if not cons:
                text += " (no constraints)"
            return LemmaVerdict("L1", True, line, (), text)
    return LemmaVerdict("L1", False, None, (), "every line passes through a constraint")


def _chars(a: Arrangement) -> list[CharTriple]:
    return [p.char for p in a.points]


def lemma2_filter(a: Arrangement) -> LemmaVerdict:
    """Excluded when a transverse line has one constraint whose image is unique."""
    cons = set(constraints(a))
    tangents = a.tangent_lines
    skipped = []
    for line in range(1, a.n + 1):
        on = _constraints_on(a, line, cons)
        if len(on) != 1:
            continue
        if line in tangents:
            skipped.append(line)
            continue
        (p,) = on
        reduced, where = remove_line_mapped(a, line)
        chars = _chars(reduced)
        image = chars[where[p]]
        if chars.count(image) == 1:
            text = (
                f"L{line} passes through exactly one constraint, {a.points[p].label()}; "
                f"after removing L{line} its characteristic {image} is unique"
            )
            return LemmaVerdict("L2", True, line, (p,), text, tuple(skipped))
    text = "no transverse line with a single constraint of unique reduced characteristic"
    if skipped:
        text += "; tangent lines " + ", ".join(f"L{x}" for x in skipped) + " inconclusive"
    return LemmaVerdict("L2", False, None, (), text, tuple(skipped))


def pair_multiplicity(chars: list[CharTriple], i: int, j: int) -> int:
    """Number of unordered point pairs whose characteristics match those of ``{i, j}``."""
    want = sorted((chars[i], chars[j]))
    count = Counter(chars)
    if want[0] == want[1]:
        k = count[want[0]]
        return k * (k - 1) // 2
    return count[want[0]] * count[want[1]]


def lemma3_filter(a: Arrangement) -> LemmaVerdict:
    """Excluded when a transverse line has two constraints whose image pair is unique."""
    cons = set(constraints(a))
    tangents = a.tangent_lines
    skipped = []
    for line in range(1, a.n + 1):
        on = _constraints_on(a, line, cons)
        if len(on) != 2:
            continue
        if line in tangents:
            skipped.append(line)
            continue
        p, q = on
        reduced, where = remove_line_mapped(a, line)
        chars = _chars(reduced)
        if pair_multiplicity(chars, where[p], where[q]) == 1:
            text = (
                f"L{line} passes through exactly two constraints, {a.points[p].label()} and "
                f"{a.points[q].label()}; after removing L{line} the pair of characteristics "
                f"{chars[where[p]]}, {chars[where[q]]} occurs at no other pair of points"
            )
            return LemmaVerdict("L3", True, line, (p, q), text, tuple(skipped))
    text = "no transverse line with two constraints of unique reduced characteristic pair"
    if skipped:
        text += "; tangent lines " + ", ".join(f"L{x}" for x in skipped) + " inconclusive"
    return LemmaVerdict("L3", False, None, (), text, tuple(skipped))


FILTERS = (lemma1_filter, lemma2_filter, lemma3_filter)


@dataclass
class ClassReport:
    key: str
    arrangement: Arrangement
    verdicts: list[LemmaVerdict] = field(default_factory=list)

    @property
    def excluded(self) -> bool:
        return any(v.excluded for v in self.verdicts)

    @property
    def reason(self) -> LemmaVerdict | None:
        return next((v for v in self.verdicts if v.excluded), None)

    def status_line(self) -> str:
        v = self.reason
        if v is None:
            return "candidate (survives all filters)"
        lemma = {"L1": "Lemma 1", "L2": "Lemma 2", "L3": "Lemma 3"}[v.lemma]
        if v.witness_line is None:
            return f"excluded by {lemma} (no lines; trivially excluded)"
        if v.lemma == "L1":
            detail = "no constraints" if not constraints(self.arrangement) else "no constraint on the line"
            return f"excluded by {lemma} (witness L{v.witness_line}, {detail})"
        pts = ", ".join(self.arrangement.points[k].label() for k in v.witness_points)
        return f"excluded by {lemma} (witness L{v.witness_line}, {pts})"

    def to_json(self) -> dict:
        a = self.arrangement
        return {
            "key": self.key,
            "n": a.n,
            "excluded": self.excluded,
            "status": self.status_line(),
            "constraints": [a.points[k].label() for k in constraints(a)],
            "verdicts": [v.to_json() for v in self.verdicts],
            "table": [
                {"point": p.label(), "characteristic": list(p.char), "lines": list(p.lines),
                 "tangency": p.tangent_line}
                for p in a.points
            ],
        }


def classify(key: str, a: Arrangement) -> ClassReport:
    return ClassReport(key, a, [f(a) for f in FILTERS])


def candidate_report(catalog) -> list[ClassReport]:
    """Filter verdicts for every class of a catalog, in catalog order."""
    return [classify(c.key, c.representative) for c in catalog.classes]


def survivors(reports: list[ClassReport]) -> list[ClassReport]:
    return [r for r in reports if not r.excluded]


def render_table(a: Arrangement) -> str:
    rows = a.table()
    width = max([len("Point")] + [len(r[0]) for r in rows])
    out = [f"{'Point':<{width}} | Characteristic"]
    out.append("-" * width + "-+-" + "-" * 40)
    out += [f"{p:<{width}} | {d}" for p, d in rows]
    return "\n".join(out)


def explain_text(report: ClassReport) -> str:
    a = report.arrangement
    lines = [f"class {report.key}", f"lines: {a.n}", "", render_table(a), ""]
    cons = [a.points[k].label() for k in constraints(a)]
    lines.append("constraints: " + (", ".join(cons) if cons else "none"))
    for v in report.verdicts:
        mark = "EXCLUDED" if v.excluded else "pass"
        lines.append(f"{v.lemma}: {mark} - {v.narrative}")
    lines.append("")
    lines.append("status: " + report.status_line())
    return "\n".join(lines)
