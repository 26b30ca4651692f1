"""Exact rational geometric kernel.

Every predicate and construction here works on :class:`fractions.Fraction`
(or plain ``int``) coordinates, so signs are never wrong and set identities
computed downstream are exact.
"""
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from math import gcd
from numbers import Rational
from typing import NamedTuple, Sequence

from .exceptions import AffineDependence, DimensionMismatch, GeometryError

__all__ = [
    "as_rational", "make_point", "PointSet", "Sphere", "LiftedPoint", "Side",
    "lift", "lift_weighted", "power", "side_of_sphere", "circumsphere",
    "orientation", "det", "solve", "affine_rank", "sq_norm", "dot",
]


def as_rational(value):
    """Convert ``value`` to a reduced :class:`Fraction`.

    Strings may be integers, decimals (``"0.125"``, ``"1e-3"``) or ``"p/q"``.
    Floats go through their shortest decimal repr, so ``0.1`` becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    try:
        # numpy scalars and friends
        if hasattr(value, "item"):
            return as_rational(value.item())
    except (TypeError, ValueError):
        pass
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def make_point(coords):
    return tuple(as_rational(c) for c in coords)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def sq_norm(u):
    return sum(a * a for a in u)


class PointSet:
    """Indexed, duplicate-free collection of points with rational coordinates.

    Indices ``0..n-1`` are fixed at construction and are the labels used by
    every combinatorial structure built from the set.
    """

    def __init__(self, points, dim=None):
        pts = [make_point(p) for p in points]
        if dim is None:
            if not pts:
                raise ValueError("cannot infer the dimension of an empty point set")
            dim = len(pts[0])
        if dim < 1:
            raise ValueError("dimension must be positive")
        for i, p in enumerate(pts):
            if len(p) != dim:
                raise DimensionMismatch(
                    f"point {i} has {len(p)} coordinates, expected {dim}")
        seen = {}
        for i, p in enumerate(pts):
            if p in seen:
                raise ValueError(f"points {seen[p]} and {i} are identical")
            seen[p] = i
        self.points = tuple(pts)
        self.dim = dim

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"PointSet(n={len(self)}, dim={self.dim})"

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    @cached_property
    def integer_coords(self):
        """``(scale, coords)`` with ``coords[i] = scale * points[i]`` all integral.

        Uniform scaling preserves every sphere/hull combinatorics, so the
        heavy predicates run on Python ints instead of fractions.
        """
        scale = 1
        for p in self.points:
            for c in p:
                scale = scale * c.denominator // gcd(scale, c.denominator)
        coords = tuple(tuple(int(c * scale) for c in p) for p in self.points)
        return scale, coords

    def canonical_order(self):
        """Permutation sorting the points lexicographically by coordinates."""
        return sorted(range(len(self)), key=lambda i: self.points[i])


@dataclass(frozen=True)
class Sphere:
    center: tuple
    squared_radius: Fraction

    def __post_init__(self):
        if self.squared_radius < 0:
            raise GeometryError("negative squared radius")

    @property
    def dim(self):
        return len(self.center)


class LiftedPoint(NamedTuple):
    base: tuple
    height: Fraction

    @property
    def coords(self):
        return self.base + (self.height,)


class Side(IntEnum):
    INSIDE = -1
    ON = 0
    OUTSIDE = 1


def lift(p):
    p = make_point(p)
    return LiftedPoint(p, sq_norm(p))


def lift_weighted(p, weight):
    p = make_point(p)
    return LiftedPoint(p, sq_norm(p) - as_rational(weight))


def power(s: Sphere, p):
    if len(p) != s.dim:
        raise DimensionMismatch(f"point of dimension {len(p)} vs sphere of dimension {s.dim}")
    return sum((a - c) ** 2 for a, c in zip(p, s.center)) - s.squared_radius


def side_of_sphere(s: Sphere, p) -> Side:
    value = power(s, make_point(p))
    return Side((value > 0) - (value < 0))


def _sign(x):
    return (x > 0) - (x < 0)


def det(rows):
    """Exact determinant of a square matrix of ints or Fractions.

    Integer matrices use fraction-free Bareiss elimination.
    """
    n = len(rows)
    if n == 0:
        return 1
    if all(isinstance(x, int) for r in rows for x in r):
        return _bareiss(rows)
    m = [[Fraction(x) for x in r] for r in rows]
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        pivot = m[col][col]
        result *= pivot
        for r in range(col + 1, n):
            f = m[r][col] / pivot
            if f:
                row, prow = m[r], m[col]
                for c in range(col + 1, n):
                    row[c] -= f * prow[c]
    return result


def _bareiss(rows):
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pk = m[k][k]
        rowk = m[k]
        for i in range(k + 1, n):
            rowi = m[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pk - mik * rowk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


def solve(a, b):
    """Solve the square system ``a x = b`` exactly; raise if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise AffineDependence("singular linear system")
        m[col], m[piv] = m[piv], m[col]
        pivot = m[col][col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / pivot
                row, prow = m[r], m[col]
                for c in range(col, n + 1):
                    row[c] -= f * prow[c]
    return [m[i][n] / m[i][i] for i in range(n)]


def affine_rank(pts):
    """Dimension of the affine hull of ``pts`` (-1 for the empty set)."""
    pts = list(pts)
    if not pts:
        return -1
    base = pts[0]
    rows = [[Fraction(a) - b for a, b in zip(p, base)] for p in pts[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                f = rows[r][col] / prow[col]
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
        rank += 1
    return rank


def circumsphere(pts: Sequence) -> Sphere:
    """Smallest sphere through all of ``pts``.

    Its center lies in the affine hull of the points; with ``d + 1`` points
    in R^d this is the ordinary circumsphere.
    """
    pts = [make_point(p) for p in pts]
    if not pts:
        raise AffineDependence("circumsphere of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionMismatch("points of different dimensions")
    if len(pts) > d + 1:
        raise AffineDependence(f"{len(pts)} points in R^{d} are affinely dependent")
    p0 = pts[0]
    vs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    if not vs:
        return Sphere(p0, Fraction(0))
    # center = p0 + sum(lam_i v_i) with 2 v_i . (center - p0) = |v_i|^2
    gram = [[2 * dot(u, v) for v in vs] for u in vs]
    rhs = [sq_norm(v) for v in vs]
    try:
        lam = solve(gram, rhs)
    except AffineDependence:
        raise AffineDependence("circumsphere of affinely dependent points") from None
    offset = [sum(l * v[i] for l, v in zip(lam, vs)) for i in range(d)]
    center = tuple(a + o for a, o in zip(p0, offset))
    return Sphere(center, sq_norm(offset))


def orientation(pts) -> int:
    """Sign (-1, 0, 1) of the affine volume spanned by ``d + 1`` points in R^d."""
    pts = [make_point(p) for p in pts]
    if not pts or len(pts) != len(pts[0]) + 1:
        raise DimensionMismatch("orientation needs d + 1 points in R^d")
    p0 = pts[0]
    return _sign(det([[a - b for a, b in zip(p, p0)] for p in pts[1:]]))
