"""Small named arrangements shipped with the package."""

from __future__ import annotations

from .model import Arrangement, points_from_tuples, validate

# (lines, on_conic, tangent_line)
FOUR_LINE_EXAMPLE = [
    ((1, 2), True, 1),
    ((4,), True),
    ((2, 4), False),
    ((2, 3), True),
    ((3, 4), True),
    ((1, 3), False),
    ((1, 4), False),
]

TANGENT_TRIANGLE = [
    ((1,), True, 1),
    ((2,), True, 2),
    ((3,), True, 3),
    ((1, 2), False),
    ((1, 3), False),
    ((2, 3), False),
]

TWO_LINE_CLASSES = {
    "tangent-tangent": [((1,), True, 1), ((2,), True, 2), ((1, 2), False)],
    "tangent-through-tangency": [((1, 2), True, 1), ((2,), True)],
    "tangent-missing-tangency": [((1,), True, 1), ((2,), True), ((2,), True), ((1, 2), False)],
    "transverse-shared": [((1, 2), True), ((1,), True), ((2,), True)],
    "transverse-disjoint": [((1,), True), ((1,), True), ((2,), True), ((2,), True), ((1, 2), False)],
}

ONE_LINE_CLASSES = {
    "tangent": [((1,), True, 1)],
    "transverse": [((1,), True), ((1,), True)],
}


def four_line_example() -> Arrangement:
    """Four lines, one tangent, with constraints at P(1,2), P(2,3), P(3,4)."""
    return validate(4, points_from_tuples(FOUR_LINE_EXAMPLE))


def tangent_triangle() -> Arrangement:
    return validate(3, points_from_tuples(TANGENT_TRIANGLE))


def two_line(name: str) -> Arrangement:
    return validate(2, points_from_tuples(TWO_LINE_CLASSES[name]))


def one_line(name: str) -> Arrangement:
    return validate(1, points_from_tuples(ONE_LINE_CLASSES[name]))


def all_fixtures() -> dict[str, Arrangement]:
    out = {"conic-only": validate(0, []), "four-line": four_line_example(),
           "tangent-triangle": tangent_triangle()}
    out.update({f"one-{k}": one_line(k) for k in ONE_LINE_CLASSES})
    out.update({f"two-{k}": two_line(k) for k in TWO_LINE_CLASSES})
    return out
