"""Combinatorial equivalence: relabelling, canonical keys, witness search."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

from .model import Arrangement, PointRecord, validate, weak_numerical_type

KEY_VERSION = "v1"


class NotAPermutation(ValueError):
    pass


def _as_map(n: int, sigma) -> dict[int, int]:
    """Accept a dict or a sequence whose i-th entry is the image of line i+1."""
    if isinstance(sigma, dict):
        mapping = {int(k): int(v) for k, v in sigma.items()}
    else:
        mapping = {i + 1: int(v) for i, v in enumerate(sigma)}
    if sorted(mapping) != list(range(1, n + 1)) or sorted(mapping.values()) != list(range(1, n + 1)):
        raise NotAPermutation(f"{sigma!r} is not a permutation of 1..{n}")
    return mapping


def _relabel_points(points: Sequence[PointRecord], m) -> list[PointRecord]:
    return [
        PointRecord(
            tuple(sorted(m[x] for x in p.lines)),
            p.on_conic,
            None if p.tangent_line is None else m[p.tangent_line],
        )
        for p in points
    ]


def relabel(a: Arrangement, sigma) -> Arrangement:
    """Replace every line index ``i`` by ``sigma(i)``."""
    m = _as_map(a.n, sigma)
    pts = _relabel_points(a.points, m)
    pts.sort(key=lambda p: p.sort_key)
    return Arrangement(a.n, tuple(pts))


def _record(on_conic: bool, tangent: int, lines: Sequence[int]) -> str:
    return f"({int(on_conic)},{tangent},[{','.join(map(str, lines))}])"


def _serialize(points: Sequence[PointRecord], m: Sequence[int]) -> str:
    # m is 1-based: m[i] is the new label of line i, m[0] unused
    recs = [
        _record(p.on_conic, 0 if p.tangent_line is None else m[p.tangent_line], sorted(m[x] for x in p.lines))
        for p in points
    ]
    recs.sort()
    return "".join(recs)


def _candidate_maps(a: Arrangement, exhaustive: bool) -> Iterator[tuple[int, ...]]:
    n = a.n
    if exhaustive:
        for perm in permutations(range(1, n + 1)):
            yield (0,) + perm
        return
    yield from _block_maps(a)


def _line_signature(a: Arrangement) -> dict[int, tuple]:
    """Relabelling-invariant description of each line, used to order labels."""
    sig = {}
    for line in range(1, a.n + 1):
        chars = []
        for p in a.points:
            if line in p.lines:
                chars.append((p.tangent_line == line, p.char))
        sig[line] = (line in a.tangent_lines, tuple(sorted(chars)))
    return sig


def _block_maps(a: Arrangement) -> Iterator[tuple[int, ...]]:
    """Labelings that give lower labels to lines with smaller signatures.

    Lines with equal signatures form a block; only permutations inside blocks
    are tried.
    """
    sig = _line_signature(a)
    order = sorted(sig.values())
    blocks: list[list[int]] = []
    seen = []
    for s in order:
        if not seen or seen[-1] != s:
            seen.append(s)
            blocks.append([x for x in range(1, a.n + 1) if sig[x] == s])
    starts = []
    pos = 1
    for b in blocks:
        starts.append(pos)
        pos += len(b)

    def rec(k: int, m: list[int]) -> Iterator[tuple[int, ...]]:
        if k == len(blocks):
            yield tuple(m)
            return
        for perm in permutations(blocks[k]):
            for offset, line in enumerate(perm):
                m[line] = starts[k] + offset
            yield from rec(k + 1, m)

    yield from rec(0, [0] * (a.n + 1))


def canonical_key(a: Arrangement, exhaustive: bool = False) -> str:
    """String that is equal for two arrangements iff they are equivalent.

    The default search only ranges over labelings consistent with the
    ordering of line signatures (an invariant), which is enough for a
    complete invariant and much cheaper than all ``n!`` labelings.  With
    ``exhaustive=True`` the minimum over the whole symmetric group is taken
    instead; the two keys agree on equality but are different strings.
    """
    best = None
    for m in _candidate_maps(a, exhaustive):
        s = _serialize(a.points, m)
        if best is None or s < best:
            best = s
    return f"n={a.n}:" + (best or "")


@dataclass(frozen=True)
class Witness:
    sigma: dict[int, int]  # line i of the first arrangement -> line sigma[i] of the second
    bijection: tuple[int, ...]  # point k of the first -> point bijection[k] of the second


def iter_witnesses(a: Arrangement, b: Arrangement) -> Iterator[Witness]:
    """All line relabelings carrying ``a`` onto ``b``, with a point bijection."""
    if a.n != b.n or len(a.points) != len(b.points):
        return
    if weak_numerical_type(a) != weak_numerical_type(b):
        return
    sa, sb = _line_signature(a), _line_signature(b)
    if sorted(sa.values()) != sorted(sb.values()):
        return
    n = a.n
    options = {x: [y for y in range(1, n + 1) if sb[y] == sa[x]] for x in range(1, n + 1)}
    target = Counter(p.sort_key for p in b.points)

    def rec(x: int, m: dict[int, int], used: set[int]) -> Iterator[dict[int, int]]:
        if x > n:
            yield dict(m)
            return
        for y in options[x]:
            if y not in used:
                m[x] = y
                used.add(y)
                yield from rec(x + 1, m, used)
                used.discard(y)
                del m[x]

    for m in rec(1, {}, set()):
        mapped = _relabel_points(a.points, m)
        if Counter(p.sort_key for p in mapped) != target:
            continue
        free: dict[tuple, list[int]] = {}
        for j, p in enumerate(b.points):
            free.setdefault(p.sort_key, []).append(j)
        bij = tuple(free[p.sort_key].pop(0) for p in mapped)
        yield Witness(m, bij)


def are_equivalent(a: Arrangement, b: Arrangement) -> tuple[bool, Witness | None]:
    """Search for a relabeling of ``a`` whose point records coincide with ``b``'s."""
    for w in iter_witnesses(a, b):
        return True, w
    return False, None


def weak_type_key(a: Arrangement) -> tuple:
    return tuple(sorted(weak_numerical_type(a).items()))


def revalidate(a: Arrangement) -> Arrangement:
    return validate(a.n, a.points)
