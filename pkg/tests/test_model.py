from collections import Counter
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from zscan import fixtures
from zscan.model import (
    CharTriple,
    DegeneratePoint,
    IndexOutOfRange,
    PairDuplicated,
    PairMissing,
    PointRecord,
    TangentCollision,
    TangentConicCount,
    TangentNotOnConic,
    UnknownPoint,
    char_of_point,
    constraints,
    count_identities,
    from_json,
    line_profile,
    validate,
)


def find(a, lines, on_conic=None):
    for k, p in enumerate(a.points):
        if p.lines == tuple(lines) and (on_conic is None or p.on_conic == on_conic):
            return k
    raise LookupError(lines)


def test_four_line_example_validates(four_line):
    assert four_line.n == 4
    assert len(four_line.points) == 7


@pytest.mark.parametrize(
    "lines, expected",
    [((1, 2), (1, 1, 1)), ((4,), (0, 1, 1)), ((2, 4), (0, 0, 2)), ((2, 3), (0, 1, 2)),
     ((3, 4), (0, 1, 2)), ((1, 3), (0, 0, 2)), ((1, 4), (0, 0, 2))],
)
def test_characteristics_match_table(four_line, lines, expected):
    assert char_of_point(four_line, find(four_line, lines)) == CharTriple(*expected)


def test_unknown_point(four_line):
    with pytest.raises(UnknownPoint):
        char_of_point(four_line, 7)


def test_pair_duplicated():
    raw = [((1, 2), False), ((1, 2), False), ((1,), True), ((1,), True), ((2,), True), ((2,), True)]
    with pytest.raises(PairDuplicated):
        validate(2, fixtures.points_from_tuples(raw))


def test_pair_missing():
    raw = [((1,), True), ((1,), True), ((2,), True), ((2,), True)]
    with pytest.raises(PairMissing):
        validate(2, fixtures.points_from_tuples(raw))


def test_tangent_line_meets_conic_once():
    with pytest.raises(TangentConicCount):
        validate(1, fixtures.points_from_tuples([((1,), True, 1), ((1,), True)]))


def test_transverse_line_needs_two_conic_points():
    with pytest.raises(TangentConicCount):
        validate(1, fixtures.points_from_tuples([((1,), True)]))


def test_tangent_off_conic():
    with pytest.raises(TangentNotOnConic):
        validate(1, [{"lines": [1], "on_conic": False, "tangent_line": 1}])


def test_tangent_at_two_points():
    with pytest.raises(TangentCollision):
        validate(1, fixtures.points_from_tuples([((1,), True, 1), ((1,), True, 1)]))


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        validate(1, fixtures.points_from_tuples([((2,), True), ((2,), True)]))


def test_lonely_point_rejected():
    with pytest.raises(DegeneratePoint):
        validate(1, fixtures.points_from_tuples([((1,), False), ((1,), True), ((1,), True)]))


def test_points_are_sorted(four_line):
    keys = [p.sort_key for p in four_line.points]
    assert keys == sorted(keys)


def test_constraints_four_line(four_line):
    got = {four_line.points[k].lines for k in constraints(four_line)}
    assert got == {(1, 2), (2, 3), (3, 4)}


def test_constraints_empty_cases(triangle):
    assert constraints(validate(0, [])) == []
    assert constraints(triangle) == []


def test_line_profiles(four_line):
    prof = line_profile(four_line, 4)
    assert not prof.is_tangent
    assert Counter(prof.chars) == Counter([(0, 1, 1), (0, 0, 2), (0, 1, 2), (0, 0, 2)])
    assert prof.n_constraints == 1
    prof = line_profile(four_line, 1)
    assert prof.is_tangent
    assert Counter(prof.chars) == Counter([(1, 1, 1), (0, 0, 2), (0, 0, 2)])
    assert prof.n_constraints == 1
    single = fixtures.one_line("tangent")
    assert line_profile(single, 1) == (True, ((1, 1, 0),), 0)
    with pytest.raises(IndexOutOfRange):
        line_profile(single, 2)


def test_json_roundtrip(four_line, fixture_dir):
    assert from_json(four_line.to_json()) == four_line
    for name, a in fixtures.all_fixtures().items():
        import json

        assert from_json(json.loads((fixture_dir / f"{name}.json").read_text())) == a


def test_table_rows(four_line):
    rows = dict(four_line.table())
    assert rows["P(1,2)"] == "characteristic is (1, 1, 1), lines are 1, 2, tangency is 1"
    assert rows["P(4)"] == "characteristic is (0, 1, 1), lines are 4"


# --- invariants over every enumerated class


def components_through(p: PointRecord) -> int:
    # independent count: distinct lines plus the conic
    return len(set(p.lines)) + (1 if p.on_conic else 0)


def test_invariants_all_levels(levels):
    for cat in levels:
        for entry in cat.classes:
            a = entry.representative
            assert count_identities(a) == (True, True)
            assert sum(comb(len(p.lines), 2) for p in a.points) == comb(a.n, 2)
            for k, p in enumerate(a.points):
                c = char_of_point(a, k)
                assert not (c.tangency == 1 and c.on_conic == 0)
                assert c.components == components_through(p)
            assert set(constraints(a)) == {k for k, p in enumerate(a.points) if components_through(p) >= 3}
            assert validate(a.n, a.to_json()["points"]) == a


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_validate_idempotent(levels, data):
    cat = data.draw(st.sampled_from(levels[1:]))
    a = data.draw(st.sampled_from(cat.classes)).representative
    raw = list(a.to_json()["points"])
    raw = data.draw(st.permutations(raw))
    once = validate(a.n, raw)
    assert once == a
    assert validate(once.n, once.to_json()["points"]) == once
