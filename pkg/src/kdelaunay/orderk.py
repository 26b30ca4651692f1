"""Order-k Delaunay mosaics by slicing rhomboids found in lower orders.

Order by order, the vertices gathered so far are handed to the weighted
Delaunay black box.  Lower-hull simplices whose combinatorial vertices share
``j - 1`` points are first-generation cells; each one names a rhomboid of the
tiling, and the deeper slices of that rhomboid supply vertices and cells of
the mosaics of higher order.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
import logging
import random

import numpy as np

from .exceptions import DegeneracyError
from .geometry import PointSet, as_rational, sq_norm
from .hull import integer_lower_faces, triangulate_faces

logger = logging.getLogger(__name__)

__all__ = [
    "Rhomboid", "Cell", "Mosaic", "vertex_location", "vertex_weight",
    "slice_of_rhomboid", "is_first_generation", "rhomboid_of_first_gen",
    "compute_up_to_order", "clusters", "rhomboid_stream", "perturb_points",
    "as_pointset",
]


def _vertex(members):
    return tuple(sorted(members))


@dataclass(frozen=True, order=True)
class Rhomboid:
    """Partition ``A = a_in | a_on | a_out`` witnessed by a sphere.

    ``a_out`` is implicit.  ``a_in`` is the anchor vertex.
    """
    a_in: tuple
    a_on: tuple

    def __post_init__(self):
        a_in, a_on = _vertex(self.a_in), _vertex(self.a_on)
        if set(a_in) & set(a_on):
            raise ValueError("a_in and a_on must be disjoint")
        object.__setattr__(self, "a_in", a_in)
        object.__setattr__(self, "a_on", a_on)

    @classmethod
    def _trusted(cls, a_in, a_on):
        """Build from sorted, disjoint tuples without validation."""
        rho = object.__new__(cls)
        rho.__dict__.update(a_in=a_in, a_on=a_on)
        return rho

    @property
    def dimension(self):
        return len(self.a_on)

    @property
    def anchor(self):
        return self.a_in

    @property
    def depth(self):
        return len(self.a_in)

    def vertices(self):
        out = []
        for g in range(len(self.a_on) + 1):
            out.extend(self.slice_vertices(g))
        return out

    def slice_vertices(self, g):
        if not 0 <= g <= len(self.a_on):
            raise ValueError(f"generation {g} outside 0..{len(self.a_on)}")
        return sorted(_vertex(self.a_in + q) for q in combinations(self.a_on, g))


@dataclass(frozen=True)
class Cell:
    """Generation-``g`` slice of a rhomboid, a cell of the order-k mosaic."""
    rhomboid: Rhomboid
    generation: int

    @property
    def order(self):
        return len(self.rhomboid.a_in) + self.generation

    @property
    def anchor(self):
        return self.rhomboid.a_in

    @cached_property
    def vertices(self):
        return self.rhomboid.slice_vertices(self.generation)

    def sort_key(self):
        """Storage order: generation, anchor, then ``a_on``.

        Canonical output order by vertex lists is applied by the writers.
        """
        return (self.generation, self.rhomboid.a_in, self.rhomboid.a_on)


@dataclass
class Mosaic:
    """Order-k Delaunay mosaic: depth-k vertices and its d-cells."""
    order: int
    vertices: list
    cells: list
    dim: int
    triangulated_cells: list = None
    points: PointSet = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = sorted(self.vertices)
        self.cells = sorted(self.cells, key=Cell.sort_key)
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def vertex_refs(self, cell):
        return [self._index[v] for v in cell.vertices]

    @property
    def first_generation_cells(self):
        return [c for c in self.cells if c.generation == 1]

    def generation_counts(self):
        counts = defaultdict(int)
        for c in self.cells:
            counts[c.generation] += 1
        return dict(counts)

    def cell_vertex_sets(self):
        return {frozenset(c.vertices) for c in self.cells}


def as_pointset(A):
    return A if isinstance(A, PointSet) else PointSet(A)


def vertex_location(v, A):
    """Barycenter of the member points of combinatorial vertex ``v``."""
    A = as_pointset(A)
    if not v:
        raise ValueError("empty combinatorial vertex")
    j = len(v)
    return tuple(sum(A[i][c] for i in v) / j for c in range(A.dim))


def vertex_weight(v, A):
    """Squared norm of the barycenter minus the mean squared norm (always <= 0)."""
    A = as_pointset(A)
    if not v:
        raise ValueError("empty combinatorial vertex")
    loc = vertex_location(v, A)
    return sq_norm(loc) - Fraction(sum(sq_norm(A[i]) for i in v), len(v))


def slice_of_rhomboid(rho, g):
    if not 0 <= g <= rho.dimension:
        raise ValueError(f"generation {g} outside 0..{rho.dimension}")
    return Cell(rho, g)


def _check_simplex(simplex):
    simplex = [_vertex(v) for v in simplex]
    depths = {len(v) for v in simplex}
    if len(depths) != 1:
        raise ValueError("combinatorial vertices of mixed depth")
    return simplex, depths.pop()


def is_first_generation(simplex, d=None):
    """True iff the ``d + 1`` depth-j vertices share exactly ``j - 1`` points."""
    simplex, j = _check_simplex(simplex)
    if d is not None and len(simplex) != d + 1:
        raise ValueError(f"expected {d + 1} vertices, got {len(simplex)}")
    common = set(simplex[0]).intersection(*simplex[1:])
    return len(common) == j - 1


def rhomboid_of_first_gen(simplex, d=None):
    simplex, j = _check_simplex(simplex)
    if not is_first_generation(simplex, d):
        raise ValueError("simplex is not a first-generation cell")
    common = set(simplex[0]).intersection(*simplex[1:])
    union = set().union(*simplex)
    return Rhomboid(tuple(common), tuple(union - common))


def perturb_points(A, magnitude, seed=0, digits=6):
    """Seeded random rational perturbation of every coordinate.

    Each coordinate moves by ``magnitude * u`` with ``u`` a multiple of
    ``10**-digits`` in ``[-1, 1]``.
    """
    A = as_pointset(A)
    magnitude = as_rational(magnitude)
    rng = random.Random(seed)
    q = 10 ** digits
    pts = [tuple(c + magnitude * Fraction(rng.randint(-q, q), q) for c in p) for p in A]
    return PointSet(pts)


def compute_up_to_order(A, K, *, perturb=None, seed=0, method="auto", triangulate=False):
    """Order-1..K Delaunay mosaics of ``A``.

    Parameters
    ----------
    A : PointSet or sequence of points
        Must be in general position; violations found by the hull raise
        :class:`DegeneracyError` naming the points involved.
    K : int
        Highest order, ``1 <= K <= n``.
    perturb : rational, optional
        Apply :func:`perturb_points` with this magnitude first.  The mosaics
        then describe the perturbed set, available as ``Mosaic.points``.
    triangulate : bool
        Also keep the black-box triangulation in ``Mosaic.triangulated_cells``
        (simplices over indices into ``Mosaic.vertices``).

    Returns
    -------
    list of Mosaic
        ``result[k - 1]`` is the order-k mosaic.
    """
    A = as_pointset(A)
    if perturb is not None:
        A = perturb_points(A, perturb, seed)
        logger.info("computing mosaics of the perturbed point set (seed %s)", seed)
    n, d = len(A), A.dim
    if not 1 <= K <= n:
        raise ValueError(f"order K={K} outside 1..{n}")
    _, X = A.integer_coords
    table = [tuple(x) + (sum(c * c for c in x),) for x in X]
    big = max(abs(c) for row in table for c in row) * n >= 2 ** 62
    np_table = None if big else np.array(table, dtype=np.int64)

    # combinatorial vertices are bitmasks over point indices while computing
    verts = defaultdict(set)
    verts[1] = {1 << i for i in range(n)}
    pending = defaultdict(dict)   # order -> {(in mask, on mask): generation}
    mosaics = []

    for j in range(1, K + 1):
        V = sorted(_members(v) for v in verts.pop(j, ()))
        masks = [_mask(v) for v in V]
        predicted = pending.pop(j, {})
        found = []
        tri = None
        if len(V) >= d + 1 and j < n:
            lifts = _lift_sums(V, table, np_table)
            try:
                faces = integer_lower_faces(lifts, method)
            except DegeneracyError as exc:
                members = sorted(set().union(*(V[q] for q in exc.subset))) if exc.subset else None
                raise DegeneracyError(f"order {j}: {exc}", members) from None
            if triangulate:
                tri = triangulate_faces(faces, lifts)
            matched = 0
            for face in faces:
                common = union = masks[face[0]]
                for q in face[1:]:
                    common &= masks[q]
                    union |= masks[q]
                size = common.bit_count()
                if len(face) == d + 1 and size == j - 1:
                    found.append((common, union ^ common))
                    _predict(common, union ^ common, j, K, d, verts, pending)
                    continue
                on = union ^ common
                g = j - size
                if predicted.get((common, on)) != g or len(face) != comb(on.bit_count(), g):
                    members = _members(union)
                    raise DegeneracyError(
                        f"order {j}: lower face on points {list(members)} is not a rhomboid "
                        "slice; the input is not in general position", members)
                matched += 1
            if matched != len(predicted):
                seen = {(_reduce_face(masks, f)) for f in faces}
                common, on = min(set(predicted) - seen)
                rho = Rhomboid(_members(common), _members(on))
                raise DegeneracyError(
                    f"order {j}: predicted cell of rhomboid {rho} is missing from the "
                    "weighted Delaunay mosaic", sorted(rho.a_in + rho.a_on))
        cells = [Cell(Rhomboid._trusted(_members(c), _members(o)), 1) for c, o in found]
        cells += [Cell(Rhomboid._trusted(_members(c), _members(o)), g)
                  for (c, o), g in predicted.items()]
        mosaic = Mosaic(j, V, cells, d, points=A)
        if tri is not None:
            # simplex indices are positions in V, which is already sorted
            mosaic.triangulated_cells = tri
        mosaics.append(mosaic)
    return mosaics


def _reduce_face(masks, face):
    common = union = masks[face[0]]
    for q in face[1:]:
        common &= masks[q]
        union |= masks[q]
    return common, union ^ common


_BYTE_BITS = [tuple(b for b in range(8) if x >> b & 1) for x in range(256)]


@lru_cache(maxsize=1 << 20)
def _members(mask):
    out = []
    base = 0
    while mask:
        byte = mask & 255
        if byte:
            out.extend(base + b for b in _BYTE_BITS[byte])
        mask >>= 8
        base += 8
    return tuple(out)


def _mask(members):
    m = 0
    for i in members:
        m |= 1 << i
    return m


def _lift_sums(V, table, np_table):
    """Integer lifts ``(sum x, sum |x|^2)`` of the vertices ``V``."""
    if np_table is not None:
        return [tuple(r) for r in np_table[np.array(V)].sum(axis=1).tolist()]
    m = len(table[0])
    return [tuple(sum(table[i][c] for i in v) for c in range(m)) for v in V]


def _predict(common, on, j, K, d, verts, pending):
    """Record the deeper slices of the rhomboid ``(common, on)`` for orders > j."""
    bits = [1 << i for i in _members(on)]
    for g in range(2, len(bits) + 1):
        order = j + g - 1
        if order > K:
            break
        target = verts[order]
        for q in combinations(bits, g):
            target.add(common | sum(q))
        if g <= d:
            pending[order].setdefault((common, on), g)


def rhomboid_stream(mosaics):
    """Top-dimensional rhomboids of all first-generation cells, deduplicated."""
    seen = {}
    for m in mosaics:
        for c in m.cells:
            if c.generation == 1:
                seen.setdefault(c.rhomboid, None)
    return list(seen)


def clusters(m, check=False):
    """First-generation cells of ``m`` grouped by their anchor vertex.

    With ``check=True`` the grouping is compared with the connected
    components of the shared-facet graph and an ``AssertionError`` is raised
    on disagreement.
    """
    groups = defaultdict(list)
    for c in m.first_generation_cells:
        groups[c.anchor].append(c)
    result = [sorted(g, key=Cell.sort_key) for _, g in sorted(groups.items())]
    if check:
        by_anchor = sorted(sorted(tuple(c.vertices) for c in g) for g in result)
        by_facets = sorted(sorted(tuple(c.vertices) for c in g)
                           for g in facet_components(m.first_generation_cells))
        if by_anchor != by_facets:
            raise AssertionError("anchor grouping differs from facet connectivity")
    return result


def facet_components(cells):
    """Connected components of simplicial cells under shared facets."""
    cells = list(cells)
    parent = list(range(len(cells)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner = {}
    for k, c in enumerate(cells):
        vs = c.vertices
        for facet in combinations(vs, len(vs) - 1):
            if facet in owner:
                parent[find(k)] = find(owner[facet])
            else:
                owner[facet] = k
    comps = defaultdict(list)
    for k, c in enumerate(cells):
        comps[find(k)].append(c)
    return list(comps.values())
