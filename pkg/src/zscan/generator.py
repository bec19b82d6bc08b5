"""Inductive enumeration of arrangements, plus a direct brute-force oracle."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator

from .equivalence import canonical_key
from .model import Arrangement, PointRecord, conic_only, validate

log = logging.getLogger(__name__)


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ExtensionChoice:
    """How a new line is added: tangent or not, and which old points it hits.

    ``through`` holds indices into the parent's normalized point list.
    """

    tangent: bool
    through: tuple[int, ...]

    def to_json(self) -> dict:
        return {"tangent": self.tangent, "through": list(self.through)}

    @classmethod
    def from_json(cls, data: dict) -> "ExtensionChoice":
        return cls(bool(data["tangent"]), tuple(data["through"]))


@dataclass
class ClassEntry:
    key: str
    representative: Arrangement
    parent: str | None = None
    choice: ExtensionChoice | None = None

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "representative": self.representative.to_json(),
            "parent": self.parent,
            "choice": None if self.choice is None else self.choice.to_json(),
        }


@dataclass
class ClassCatalog:
    n: int
    classes: list[ClassEntry] = field(default_factory=list)

    def keys(self) -> list[str]:
        return [c.key for c in self.classes]

    def by_key(self) -> dict[str, ClassEntry]:
        return {c.key: c for c in self.classes}

    def __len__(self) -> int:
        return len(self.classes)

    def to_json(self) -> dict:
        return {"n": self.n, "classes": [c.to_json() for c in self.classes]}

    @classmethod
    def from_json(cls, data: dict) -> "ClassCatalog":
        from .model import from_json

        classes = [
            ClassEntry(
                c["key"],
                from_json(c["representative"]),
                c.get("parent"),
                None if c.get("choice") is None else ExtensionChoice.from_json(c["choice"]),
            )
            for c in data["classes"]
        ]
        return cls(int(data["n"]), classes)


def legal_choices(a: Arrangement) -> Iterator[ExtensionChoice]:
    """Every way a new line can meet the existing points.

    The chosen points must pairwise share no line, since the new line meets
    each old line once.  A tangent new line meets the conic once, either at a
    fresh point or at an existing conic point without a tangent; a
    transverse one meets it at most twice.
    """
    pts = a.points
    m = len(pts)

    def rec(start: int, chosen: list[int], used: set[int]) -> Iterator[tuple[int, ...]]:
        yield tuple(chosen)
        for k in range(start, m):
            lines = pts[k].lines
            if used.isdisjoint(lines):
                chosen.append(k)
                used.update(lines)
                yield from rec(k + 1, chosen, used)
                used.difference_update(lines)
                chosen.pop()

    for through in rec(0, [], set()):
        on_conic = [k for k in through if pts[k].on_conic]
        if len(on_conic) <= 2:
            yield ExtensionChoice(False, through)
        if not on_conic or (len(on_conic) == 1 and pts[on_conic[0]].tangent_line is None):
            yield ExtensionChoice(True, through)


def apply_choice(a: Arrangement, choice: ExtensionChoice) -> Arrangement:
    new = a.n + 1
    pts = list(a.points)
    covered: set[int] = set()
    conic_hits = 0
    for k in choice.through:
        p = pts[k]
        covered.update(p.lines)
        tangent = p.tangent_line
        if p.on_conic:
            conic_hits += 1
            if choice.tangent:
                tangent = new
        pts[k] = PointRecord(p.lines + (new,), p.on_conic, tangent)
    for old in range(1, a.n + 1):
        if old not in covered:
            pts.append(PointRecord((old, new), False, None))
    if choice.tangent:
        if conic_hits == 0:
            pts.append(PointRecord((new,), True, new))
    else:
        for _ in range(2 - conic_hits):
            pts.append(PointRecord((new,), True, None))
    return validate(new, pts)


def extensions(a: Arrangement) -> list[Arrangement]:
    """Distinct arrangements obtained by adding line ``n+1`` to ``a``.

    Choices giving identical records (e.g. through either of two
    interchangeable conic points) are reported once.
    """
    return [child for child, _ in extensions_with_choices(a)]


def extensions_with_choices(a: Arrangement) -> list[tuple[Arrangement, ExtensionChoice]]:
    seen: dict[Arrangement, ExtensionChoice] = {}
    for choice in legal_choices(a):
        child = apply_choice(a, choice)
        if child not in seen:
            seen[child] = choice
    return list(seen.items())


def _expand(entry_key: str, rep: Arrangement) -> list[tuple[str, str, ExtensionChoice, Arrangement]]:
    out = []
    for child, choice in extensions_with_choices(rep):
        out.append((canonical_key(child), entry_key, choice, child))
    return out


def _expand_star(args):
    return _expand(*args)


def _provenance_order(item) -> tuple:
    _, parent, choice, _ = item
    return (parent, not choice.tangent, choice.through)


def next_level(catalog: ClassCatalog, workers: int = 1) -> ClassCatalog:
    """Extend every representative and keep one child per canonical key.

    The kept child is the one with the smallest (parent key, choice), so the
    result does not depend on scheduling.
    """
    jobs = [(c.key, c.representative) for c in catalog.classes]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_expand_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_expand(*job) for job in jobs]
    best: dict[str, tuple] = {}
    for batch in results:
        for item in batch:
            key = item[0]
            if key not in best or _provenance_order(item) < _provenance_order(best[key]):
                best[key] = item
    classes = [
        ClassEntry(key, child, parent, choice)
        for key, (_, parent, choice, child) in sorted(best.items())
    ]
    return ClassCatalog(catalog.n + 1, classes)


def level_zero() -> ClassCatalog:
    a = conic_only()
    return ClassCatalog(0, [ClassEntry(canonical_key(a), a)])


def enumerate_classes(n_max: int, workers: int = 1) -> list[ClassCatalog]:
    """Catalogs for ``j = 0..n_max``, each sorted by key."""
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    levels = [level_zero()]
    for _ in range(n_max):
        levels.append(next_level(levels[-1], workers))
        log.info("level %d: %d classes", levels[-1].n, len(levels[-1]))
    return levels


# ---------------------------------------------------------------------------
# brute-force oracle


def _clique_partitions(n: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions of the edges of K_n into cliques of size >= 2.

    Each clique is a set of lines through one common point; a pair of lines
    lies in exactly one clique.
    """
    pairs = list(combinations(range(1, n + 1), 2))

    def rec(remaining: frozenset, blocks: list[tuple[int, ...]]) -> Iterator[list[tuple[int, ...]]]:
        if not remaining:
            yield list(blocks)
            return
        first = min(remaining)
        # grow a clique containing the smallest uncovered pair
        i, j = first
        others = [x for x in range(1, n + 1) if x not in (i, j)]
        for r in range(len(others) + 1):
            for extra in combinations(others, r):
                clique = tuple(sorted((i, j) + extra))
                cpairs = set(combinations(clique, 2))
                if cpairs <= remaining:
                    blocks.append(clique)
                    yield from rec(remaining - cpairs, blocks)
                    blocks.pop()

    yield from rec(frozenset(pairs), [])


def _raw_structures(n: int) -> Iterator[list[PointRecord]]:
    for cliques in _clique_partitions(n):
        for tangent_flags in product((False, True), repeat=n):
            tangents = {x + 1 for x in range(n) if tangent_flags[x]}
            # each clique: off conic, or on conic with a choice of tangent line
            options = []
            for c in cliques:
                opts = [(False, None), (True, None)]
                opts += [(True, t) for t in c if t in tangents]
                options.append(opts)
            for assign in product(*options):
                pts = []
                conic_count = {x: 0 for x in range(1, n + 1)}
                tangent_seen = set()
                ok = True
                for c, (on, t) in zip(cliques, assign):
                    if on:
                        # a tangent line can only meet the conic at its tangency point
                        if any(x in tangents and x != t for x in c):
                            ok = False
                            break
                        if t is not None:
                            tangent_seen.add(t)
                        for x in c:
                            conic_count[x] += 1
                    pts.append(PointRecord(c, on, t))
                if not ok:
                    continue
                for x in range(1, n + 1):
                    if x in tangents:
                        if conic_count[x] == 0:
                            pts.append(PointRecord((x,), True, x))
                        elif conic_count[x] > 1 or x not in tangent_seen:
                            ok = False
                    else:
                        for _ in range(2 - conic_count[x]):
                            pts.append(PointRecord((x,), True, None))
                        if conic_count[x] > 2:
                            ok = False
                if ok:
                    yield pts


def _order(a: Arrangement) -> tuple:
    return tuple(p.sort_key for p in a.points)


def brute_force_enumerate(n: int, max_n: int = 4) -> ClassCatalog:
    """Enumerate all arrangements with ``n`` lines directly, up to equivalence.

    Independent of :func:`extensions`; used to cross-check the inductive
    generator.  Raises :class:`BudgetExceeded` above ``max_n``.
    """
    if n > max_n:
        raise BudgetExceeded(f"brute force limited to n <= {max_n}, got {n}")
    found: dict[str, Arrangement] = {}
    for pts in _raw_structures(n):
        a = validate(n, pts)
        key = canonical_key(a)
        if key not in found or _order(a) < _order(found[key]):
            found[key] = a
    return ClassCatalog(n, [ClassEntry(k, found[k]) for k in sorted(found)])


def iter_catalog(levels: Iterable[ClassCatalog]) -> Iterator[ClassEntry]:
    for lvl in levels:
        yield from lvl.classes
