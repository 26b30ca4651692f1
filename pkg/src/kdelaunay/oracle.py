"""Brute-force reference constructions used to verify the main pipeline.

Each routine follows a definition directly and is only meant for small
inputs.  ``brute_orderk`` hulls the barycenters of all k-subsets,
``brute_tiling`` classifies points against the circumsphere of every
(d+1)-subset, and ``brute_radius`` solves one constrained-sphere problem
per rhomboid.
"""
from collections import defaultdict
from itertools import combinations, product

from .exceptions import AffineDependence, DegeneracyError, SizeGuardError
from .geometry import circumsphere, power
from .hull import integer_lower_faces, triangulate_faces
from .orderk import Cell, Mosaic, Rhomboid, as_pointset
from .radius import ConstrainedSphereProblem, RadiusAssignment, constrained_radius
from .tiling import RhomboidTiling

__all__ = ["brute_orderk", "brute_tiling", "brute_radius", "mosaics_equal",
           "merge_simplices", "MAX_ORACLE_POINTS"]

MAX_ORACLE_POINTS = 14


def _guard(n, allow_large):
    if n > MAX_ORACLE_POINTS and not allow_large:
        raise SizeGuardError(
            f"brute-force oracle refuses n={n} > {MAX_ORACLE_POINTS}; pass allow_large=True")


def _cell_of(vertex_sets, k):
    common = set(vertex_sets[0]).intersection(*vertex_sets[1:])
    union = set().union(*vertex_sets)
    return Cell(Rhomboid(tuple(common), tuple(union - common)), k - len(common))


def brute_orderk(A, k, *, allow_large=False):
    """Order-k mosaic from the lower hull of all k-subset barycenters.

    Lifted barycenters are scaled by ``k`` (coordinate sums and summed squared
    norms), which leaves the lower hull unchanged and keeps it integral.
    Hull faces are returned as merged cells; ``triangulated_cells`` holds a
    triangulation over indices into the vertex list.
    """
    A = as_pointset(A)
    n, d = len(A), A.dim
    _guard(n, allow_large)
    if not 1 <= k <= n:
        raise ValueError(f"order {k} outside 1..{n}")
    _, X = A.integer_coords
    subsets = list(combinations(range(n), k))
    if len(subsets) <= d:
        return Mosaic(k, subsets, [], d, [], points=A)
    lifts = [tuple(sum(X[i][c] for i in s) for c in range(d))
             + (sum(sum(x * x for x in X[i]) for i in s),) for s in subsets]
    try:
        hull_faces = integer_lower_faces(lifts, method="wrap")
    except DegeneracyError as exc:
        members = sorted(set().union(*(subsets[q] for q in exc.subset))) if exc.subset else None
        raise DegeneracyError(f"order {k}: {exc}", members) from None
    used = sorted({q for f in hull_faces for q in f})
    verts = [subsets[q] for q in used]
    cells = [_cell_of([subsets[q] for q in f], k) for f in hull_faces]
    pos = {q: i for i, q in enumerate(used)}
    tri = [tuple(sorted(pos[q] for q in s)) for s in triangulate_faces(hull_faces, lifts)]
    return Mosaic(k, verts, cells, d, sorted(tri), points=A)


def _all_faces(a_in, a_on):
    for labels in product((0, 1, 2), repeat=len(a_on)):
        yield Rhomboid(a_in + tuple(x for x, l in zip(a_on, labels) if l == 0),
                       tuple(x for x, l in zip(a_on, labels) if l == 1))


def brute_tiling(A, *, allow_large=False):
    """Rhomboid tiling from the circumsphere of every (d+1)-subset, closed under faces."""
    A = as_pointset(A)
    n, d = len(A), A.dim
    _guard(n, allow_large)
    found = set()
    if n <= d:
        found.update(_all_faces((), tuple(range(n))))
        return RhomboidTiling(found, n)
    for support in combinations(range(n), d + 1):
        try:
            s = circumsphere([A[i] for i in support])
        except AffineDependence:
            raise DegeneracyError(f"points {list(support)} are affinely dependent",
                                  support) from None
        inside = []
        for i in range(n):
            if i in support:
                continue
            p = power(s, A[i])
            if p == 0:
                raise DegeneracyError(f"points {sorted(support + (i,))} are cospherical",
                                      sorted(support + (i,)))
            if p < 0:
                inside.append(i)
        found.update(_all_faces(tuple(inside), support))
    return RhomboidTiling(found, n)


def brute_radius(T, A, *, allow_large=False):
    """Per-rhomboid constrained-sphere values, with no interval shortcut."""
    A = as_pointset(A)
    n = len(A)
    _guard(n, allow_large)
    values = {rho: constrained_radius(ConstrainedSphereProblem.of_rhomboid(rho, n), A)
              for rho in T}
    return RadiusAssignment(values)


def merge_simplices(simplices, vertices, order):
    """Group triangulated simplices into cells by their (intersection, union) pair."""
    groups = defaultdict(set)
    for s in simplices:
        vs = [vertices[q] for q in s]
        common = frozenset(set(vs[0]).intersection(*vs[1:]))
        union = frozenset().union(*vs)
        groups[(common, union)].update(vs)
    return {frozenset(g) for g in groups.values()}


def _cell_sets(m):
    if m.cells or not m.triangulated_cells:
        return m.cell_vertex_sets()
    return merge_simplices(m.triangulated_cells, m.vertices, m.order)


def mosaics_equal(x, y):
    """Compare two mosaics of one order.

    Returns
    -------
    (bool, str)
        Equality of vertex sets and of merged cell sets, and a short report
        naming the first difference.
    """
    if x.order != y.order:
        return False, f"orders differ: {x.order} vs {y.order}"
    vx, vy = set(x.vertices), set(y.vertices)
    if vx != vy:
        only_x, only_y = sorted(vx - vy), sorted(vy - vx)
        return False, (f"order {x.order}: vertex sets differ; "
                       f"first only in left {only_x[:1]}, only in right {only_y[:1]}")
    cx, cy = _cell_sets(x), _cell_sets(y)
    if cx != cy:
        key = lambda c: sorted(c)
        only_x, only_y = sorted(cx - cy, key=key), sorted(cy - cx, key=key)
        first = (f"left cell {sorted(only_x[0])}" if only_x else f"right cell {sorted(only_y[0])}")
        return False, (f"order {x.order}: cell sets differ ({len(only_x)} only left, "
                       f"{len(only_y)} only right); first mismatch: {first}")
    return True, f"order {x.order}: {len(vx)} vertices and {len(cx)} cells agree"
