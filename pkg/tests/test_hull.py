from fractions import Fraction as F
from itertools import combinations

from hypothesis import given, strategies as st
import numpy as np
import pytest

from kdelaunay.exceptions import DegeneracyError
from kdelaunay.geometry import det, lift
from kdelaunay.hull import (WeightedPoint, _certify, _CertificateError, integer_lifts,
                            integer_lower_faces, lower_faces, lower_hull, weighted_delaunay)

from conftest import ball

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def lifted(pts):
    return [tuple(lift(p).base) + (lift(p).height,) for p in pts]


def brute_lower_facets(P):
    """Every (m)-subset whose hyperplane is non-vertical and has all points on or above it."""
    m = len(P[0])
    out = []
    for s in combinations(range(len(P)), m):
        base = P[s[0]]
        rows = [[a - b for a, b in zip(P[i], base)] for i in s[1:]]
        vertical = det([r[:-1] for r in rows[:m - 1]] if m > 1 else [])
        if vertical == 0:
            continue
        signs = set()
        for q in range(len(P)):
            sd = det(rows + [[a - b for a, b in zip(P[q], base)]])
            signs.add((sd > 0) - (sd < 0))
        # the sign of "below" is the sign of the vertical direction
        below = 1 if det(rows + [[0] * (m - 1) + [-1]]) > 0 else -1
        if below not in signs:
            out.append(s)
    return sorted(out)


def test_lower_hull_1d():
    assert lower_hull([(0, 0), (1, 1), (3, 9)]) == [(0, 1), (1, 2)]


def test_cocircular_square_is_one_face_fanned_from_smallest():
    assert lower_faces(lifted(SQUARE)) == [(0, 1, 2, 3)]
    assert lower_hull(lifted(SQUARE)) == [(0, 1, 2), (0, 2, 3)]


def test_weighted_delaunay_examples():
    assert weighted_delaunay([((0,), 0), ((1,), 0), ((3,), 0)]) == [(0, 1), (1, 2)]
    square = weighted_delaunay([(p, 0) for p in SQUARE])
    assert square == [(0, 1, 2), (0, 2, 3)]
    hidden = weighted_delaunay([(p, 0) for p in SQUARE] + [((F(1, 2), F(1, 2)), -100)])
    assert hidden == square


def test_weighted_point_height():
    assert WeightedPoint((1, 2), 3).lifted_height == 2


@pytest.mark.parametrize("seed", range(4))
def test_lower_facets_match_exhaustive_check(seed):
    A = ball(6, 3, seed)
    P = integer_lifts(lifted(A))
    assert lower_hull(lifted(A)) == brute_lower_facets(P)


@pytest.mark.parametrize("seed", range(3))
def test_qhull_and_wrap_agree(seed):
    A = ball(45, 3, 100 + seed)
    P = integer_lifts(lifted(A))
    assert integer_lower_faces(P, "qhull") == integer_lower_faces(P, "wrap")


def test_certificate_rejects_wrong_triangulations():
    A = ball(40, 2, 5)
    P = integer_lifts(lifted(A))
    good = np.array(lower_hull(lifted(A)))
    _certify(P, good)
    with pytest.raises(_CertificateError):
        _certify(P, good[1:])
    # flip one interior edge: the two new triangles are not locally convex
    bad = good.copy()
    for i, j in combinations(range(len(good)), 2):
        shared = set(good[i]) & set(good[j])
        if len(shared) == 2:
            a, = set(good[i]) - shared
            b, = set(good[j]) - shared
            s0, s1 = sorted(shared)
            bad[i], bad[j] = sorted((a, b, s0)), sorted((a, b, s1))
            break
    with pytest.raises(_CertificateError):
        _certify(P, bad)


def test_vertical_input_is_degenerate():
    with pytest.raises(DegeneracyError):
        integer_lower_faces([(0, 0), (0, 1), (0, 2)])


@given(st.lists(st.integers(-30, 30), min_size=2, max_size=8, unique=True))
def test_1d_delaunay_is_consecutive_pairs(xs):
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    expected = sorted(tuple(sorted(p)) for p in zip(order, order[1:]))
    assert lower_hull([(x, x * x) for x in xs]) == expected
