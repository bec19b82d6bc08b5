import random
from collections import Counter
from itertools import combinations
from math import comb

import pytest

from zscan import fixtures
from zscan.equivalence import relabel
from zscan.generator import ClassCatalog, ClassEntry
from zscan.minimality import (
    candidate_report,
    classify,
    explain_text,
    lemma1_filter,
    lemma2_filter,
    lemma3_filter,
    remove_line,
    remove_line_mapped,
)
from zscan.model import IndexOutOfRange, constraints, count_identities, validate, weak_numerical_type


def chars(a):
    return Counter(p.char for p in a.points)


def test_remove_l4(four_line):
    b, where = remove_line_mapped(four_line, 4)
    assert b.n == 3
    assert chars(b) == Counter({(1, 1, 1): 1, (0, 1, 2): 1, (0, 0, 2): 1, (0, 1, 1): 1})
    p34 = next(k for k, p in enumerate(four_line.points) if p.lines == (3, 4))
    assert b.points[where[p34]].char == (0, 1, 1)


def test_remove_tangent_line(four_line):
    b = remove_line(four_line, 1)
    assert chars(b) == Counter({(0, 1, 1): 2, (0, 0, 2): 1, (0, 1, 2): 2})
    assert count_identities(b) == (True, True)
    assert not b.tangent_lines


def test_remove_only_line():
    assert remove_line(fixtures.one_line("tangent"), 1) == validate(0, [])
    with pytest.raises(IndexOutOfRange):
        remove_line(fixtures.one_line("tangent"), 2)


def test_remove_keeps_invariants(levels):
    for cat in levels[1:5]:
        for entry in cat.classes:
            a = entry.representative
            for line in range(1, a.n + 1):
                b = remove_line(a, line)
                assert validate(b.n, b.points) == b
                assert sum(comb(len(p.lines), 2) for p in b.points) == comb(a.n - 1, 2)


def test_lemma1_examples(four_line, triangle):
    assert not lemma1_filter(four_line).excluded
    v = lemma1_filter(triangle)
    assert v.excluded and v.witness_line in (1, 2, 3)
    assert lemma1_filter(validate(0, [])).excluded
    for name in fixtures.ONE_LINE_CLASSES:
        assert lemma1_filter(fixtures.one_line(name)).excluded


def test_lemma2_four_line(four_line):
    v = lemma2_filter(four_line)
    assert v.excluded
    assert v.witness_line == 4
    assert [four_line.points[k].lines for k in v.witness_points] == [(3, 4)]
    # the tangent line L1 also has a single constraint, P(1,2), but is skipped
    assert v.inconclusive_lines == (1,)


def test_lemma2_tangent_line_skipped(four_line):
    cons = set(constraints(four_line))
    on_l1 = [four_line.points[k].lines for k in four_line.points_on(1) if k in cons]
    assert on_l1 == [(1, 2)]
    assert lemma2_filter(four_line).witness_line == 4


def test_lemma2_needs_single_constraint(levels):
    for cat in levels:
        for entry in cat.classes:
            a = entry.representative
            cons = set(constraints(a))
            if all(len([k for k in a.points_on(x) if k in cons]) != 1 for x in range(1, a.n + 1)):
                assert not lemma2_filter(a).excluded


def brute_pair_unique(a, line, p, q) -> bool:
    b, where = remove_line_mapped(a, line)
    target = sorted((b.points[where[p]].char, b.points[where[q]].char))
    hits = [
        (i, j) for i, j in combinations(range(len(b.points)), 2)
        if sorted((b.points[i].char, b.points[j].char)) == target
    ]
    return hits == [tuple(sorted((where[p], where[q])))]


def brute_lemma3(a) -> bool:
    cons = set(constraints(a))
    for line in range(1, a.n + 1):
        if line in a.tangent_lines:
            continue
        on = [k for k in a.points_on(line) if k in cons]
        if len(on) == 2 and brute_pair_unique(a, line, *on):
            return True
    return False


def test_lemma3_four_line(four_line):
    # L2 and L3 carry two constraints each; both pairs recur after removal
    v = lemma3_filter(four_line)
    assert not v.excluded
    assert brute_lemma3(four_line) is False


def test_lemma3_matches_pair_scan(levels):
    for cat in levels[2:]:
        for entry in cat.classes:
            a = entry.representative
            assert lemma3_filter(a).excluded == brute_lemma3(a)


def test_lemma3_symmetric_double_tangent(levels):
    # three tangent lines; L4 crosses the conic at the tangency points of L1 and L2
    a = validate(4, fixtures.points_from_tuples([
        ((1, 4), True, 1), ((2, 4), True, 2), ((3,), True, 3),
        ((1, 2), False), ((1, 3), False), ((2, 3), False), ((3, 4), False),
    ]))
    from zscan.equivalence import canonical_key

    assert canonical_key(a) in levels[4].keys()
    assert not lemma3_filter(a).excluded
    b, where = remove_line_mapped(a, 4)
    tangency = [k for k, p in enumerate(b.points) if p.char == (1, 1, 0)]
    assert len(list(combinations(tangency, 2))) == 3
    assert not brute_pair_unique(a, 4, *[k for k in constraints(a)])


def test_lemma3_not_applicable():
    for name in fixtures.TWO_LINE_CLASSES:
        a = fixtures.two_line(name)
        cons = set(constraints(a))
        if all(len([k for k in a.points_on(x) if k in cons]) != 2 for x in (1, 2)):
            assert not lemma3_filter(a).excluded


def test_filters_relabel_invariant(levels):
    rng = random.Random(3)
    for cat in levels[2:5]:
        for entry in cat.classes:
            a = entry.representative
            perm = list(range(1, a.n + 1))
            rng.shuffle(perm)
            b = relabel(a, perm)
            for f in (lemma1_filter, lemma2_filter, lemma3_filter):
                assert f(a).excluded == f(b).excluded


def test_never_exclude_on_tangent_witness(levels):
    for cat in levels:
        for entry in cat.classes:
            a = entry.representative
            for f in (lemma2_filter, lemma3_filter):
                v = f(a)
                if v.excluded:
                    assert v.witness_line not in a.tangent_lines
                    assert v.witness_line is not None


def test_report_four_line(four_line):
    from zscan.equivalence import canonical_key

    key = canonical_key(four_line)
    cat = ClassCatalog(4, [ClassEntry(key, four_line)])
    (r,) = candidate_report(cat)
    assert r.excluded
    assert r.status_line() == "excluded by Lemma 2 (witness L4, P(3,4))"
    text = explain_text(r)
    assert "P(3,4)" in text and "(0, 1, 1)" in text


def test_report_small_levels(levels):
    for cat in levels[:2]:
        assert all(r.excluded and r.reason.lemma == "L1" for r in candidate_report(cat))


def test_report_matches_per_class_filters(levels):
    reports = candidate_report(levels[3])
    assert reports == candidate_report(levels[3])
    for r, entry in zip(reports, levels[3].classes):
        assert r.key == entry.key
        a = entry.representative
        expected = lemma1_filter(a).excluded or lemma2_filter(a).excluded or lemma3_filter(a).excluded
        assert r.excluded == expected


def test_level4_contains_four_line_class(levels, four_line):
    from zscan.equivalence import canonical_key

    reports = {r.key: r for r in candidate_report(levels[4])}
    r = reports[canonical_key(four_line)]
    assert r.excluded and r.reason.lemma == "L2"


def test_classify_json(triangle):
    data = classify("k", triangle).to_json()
    assert data["excluded"]
    assert data["status"] == "excluded by Lemma 1 (witness L1, no constraints)"
    assert len(data["table"]) == 6
