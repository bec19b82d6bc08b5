"""Combinatorial data model of a conic plus ``n`` lines.

An arrangement is stored as the list of its intersection points.  Each point
knows which lines pass through it, whether it lies on the conic, and which of
its lines (if any) is tangent to the conic there.  Lines are labelled
``1..n``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, NamedTuple, Sequence


class ArrangementError(ValueError):
    """Base class for malformed combinatorial input."""


class IndexOutOfRange(ArrangementError):
    pass


class PairDuplicated(ArrangementError):
    pass


class PairMissing(ArrangementError):
    pass


class TangentConicCount(ArrangementError):
    pass


class TangentNotOnConic(ArrangementError):
    pass


class TangentCollision(ArrangementError):
    pass


class DegeneratePoint(ArrangementError):
    """A record that is not an intersection of at least two components."""


class UnknownPoint(ArrangementError, IndexError):
    pass


class CharTriple(NamedTuple):
    """Local type of an intersection point.

    ``tangency`` is 1 at a tangency point, ``on_conic`` is 1 on the conic and
    ``transverse`` counts the lines through the point that are not tangent
    there.
    """

    tangency: int
    on_conic: int
    transverse: int

    @property
    def components(self) -> int:
        # at most one line is tangent at a point of a smooth conic
        return self.tangency + self.on_conic + self.transverse

    def __str__(self) -> str:
        return f"({self.tangency}, {self.on_conic}, {self.transverse})"


@dataclass(frozen=True)
class PointRecord:
    lines: tuple[int, ...]
    on_conic: bool = False
    tangent_line: int | None = None

    @property
    def sort_key(self) -> tuple:
        return (self.lines, self.on_conic, self.tangent_line or 0)

    @property
    def char(self) -> CharTriple:
        t = 1 if self.tangent_line is not None else 0
        return CharTriple(t, int(self.on_conic), len(self.lines) - t)

    def label(self) -> str:
        return "P(" + ",".join(map(str, self.lines)) + ")"

    def to_json(self) -> dict:
        return {
            "lines": list(self.lines),
            "on_conic": self.on_conic,
            "tangent_line": self.tangent_line,
        }


class LineProfile(NamedTuple):
    is_tangent: bool
    chars: tuple[CharTriple, ...]  # sorted multiset
    n_constraints: int


@dataclass(frozen=True)
class Arrangement:
    """A validated arrangement; build it with :func:`validate`.

    Points are kept in normalized order, so two arrangements compare equal
    exactly when their point multisets coincide.
    """

    n: int
    points: tuple[PointRecord, ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def tangent_lines(self) -> frozenset[int]:
        return frozenset(p.tangent_line for p in self.points if p.tangent_line is not None)

    def points_on(self, line: int) -> list[int]:
        """Indices of the points through ``line``."""
        _check_line(self, line)
        return [i for i, p in enumerate(self.points) if line in p.lines]

    def to_json(self) -> dict:
        return {"n": self.n, "points": [p.to_json() for p in self.points]}

    def table(self) -> list[tuple[str, str]]:
        """(point, description) rows in the style of a characteristic table."""
        rows = []
        for p in self.points:
            text = f"characteristic is {p.char}, lines are " + ", ".join(map(str, p.lines))
            if p.tangent_line is not None:
                text += f", tangency is {p.tangent_line}"
            rows.append((p.label(), text))
        return rows


def _check_line(a: Arrangement, line: int) -> None:
    if not 1 <= line <= a.n:
        raise IndexOutOfRange(f"line {line} not in 1..{a.n}")


def _coerce_point(raw, n: int) -> PointRecord:
    if isinstance(raw, PointRecord):
        lines, on_conic, tangent = raw.lines, raw.on_conic, raw.tangent_line
    else:
        lines = raw.get("lines", ())
        on_conic = bool(raw.get("on_conic", False))
        tangent = raw.get("tangent_line")
    lines = tuple(sorted(int(x) for x in lines))
    for x in lines:
        if not 1 <= x <= n:
            raise IndexOutOfRange(f"line {x} not in 1..{n}")
    if len(set(lines)) != len(lines):
        raise DegeneratePoint(f"repeated line in point {lines}")
    if tangent is not None:
        tangent = int(tangent)
        if not 1 <= tangent <= n:
            raise IndexOutOfRange(f"tangent line {tangent} not in 1..{n}")
        if tangent not in lines:
            raise TangentNotOnConic(f"tangent line {tangent} does not pass through {lines}")
        if not on_conic:
            raise TangentNotOnConic(f"tangency at {lines} off the conic")
    if len(lines) + on_conic < 2:
        raise DegeneratePoint(f"point {lines} (on_conic={on_conic}) meets fewer than two components")
    return PointRecord(lines, on_conic, tangent)


def validate(n: int, raw_points: Iterable) -> Arrangement:
    """Check raw point records and return a normalized :class:`Arrangement`.

    ``raw_points`` may hold :class:`PointRecord` objects or dicts with keys
    ``lines``, ``on_conic`` and ``tangent_line``.
    """
    if n < 0:
        raise IndexOutOfRange(f"negative line count {n}")
    points = [_coerce_point(r, n) for r in raw_points]

    where: dict[tuple[int, int], int] = {}
    for k, p in enumerate(points):
        for pair in combinations(p.lines, 2):
            if pair in where:
                raise PairDuplicated(f"lines {pair} meet at two points")
            where[pair] = k
    for pair in combinations(range(1, n + 1), 2):
        if pair not in where:
            raise PairMissing(f"lines {pair} never meet")

    tangent_at: dict[int, int] = {}
    for k, p in enumerate(points):
        if p.tangent_line is not None:
            if p.tangent_line in tangent_at:
                raise TangentCollision(f"line {p.tangent_line} tangent at two points")
            tangent_at[p.tangent_line] = k

    conic_count = Counter(x for p in points if p.on_conic for x in p.lines)
    for line in range(1, n + 1):
        c = conic_count[line]
        if line in tangent_at:
            if c != 1:
                raise TangentConicCount(f"tangent line {line} has {c} conic points")
        elif c != 2:
            raise TangentConicCount(f"transverse line {line} has {c} conic points")

    points.sort(key=lambda p: p.sort_key)
    return Arrangement(n, tuple(points))


def from_json(data: Mapping) -> Arrangement:
    return validate(int(data["n"]), data.get("points", ()))


def char_of_point(a: Arrangement, p: int) -> CharTriple:
    if not 0 <= p < len(a.points):
        raise UnknownPoint(f"no point {p} (arrangement has {len(a.points)})")
    return a.points[p].char


def constraints(a: Arrangement) -> list[int]:
    """Indices of points lying on at least three components."""
    return [i for i, p in enumerate(a.points) if p.char.components >= 3]


def line_profile(a: Arrangement, line: int) -> LineProfile:
    _check_line(a, line)
    through = [p for p in a.points if line in p.lines]
    return LineProfile(
        line in a.tangent_lines,
        tuple(sorted(p.char for p in through)),
        sum(1 for p in through if p.char.components >= 3),
    )


def weak_numerical_type(a: Arrangement) -> Counter:
    """Multiset of characteristic triples over all points."""
    return Counter(p.char for p in a.points)


def count_identities(a: Arrangement) -> tuple[bool, bool]:
    """The two counting identities every valid arrangement satisfies."""
    pairs = sum(comb(len(p.lines), 2) for p in a.points) == comb(a.n, 2)
    t = len(a.tangent_lines)
    incid = sum(len(p.lines) for p in a.points if p.on_conic) == t + 2 * (a.n - t)
    return pairs, incid


def conic_only() -> Arrangement:
    return Arrangement(0, ())


def points_from_tuples(rows: Sequence[tuple]) -> list[PointRecord]:
    """Shorthand ``(lines, on_conic, tangent)`` rows used by fixtures and tests."""
    out = []
    for row in rows:
        lines, on_conic, *rest = row
        out.append(PointRecord(tuple(lines), bool(on_conic), rest[0] if rest else None))
    return out
