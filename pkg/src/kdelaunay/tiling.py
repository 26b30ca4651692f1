"""Rhomboid tiling: face closure of the top rhomboids and depth slices.

The tiling is stored combinatorially.  A rhomboid ``(a_in, a_on)`` has the
combinatorial vertices ``a_in | Q`` for ``Q`` a subset of ``a_on``; its faces
come from 3-partitions of ``a_on``.
"""
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .geometry import as_rational
from .orderk import Cell, Rhomboid

__all__ = ["RhomboidTiling", "PrismCell", "build_tiling", "faces", "slice_at_depth",
           "vertex_embedding"]


def faces(rho):
    """All ``3**|a_on|`` faces of ``rho``, the rhomboid itself included.

    Each point of ``a_on`` moves to the anchor, stays on, or leaves.
    """
    out = []
    for labels in product("IOU", repeat=len(rho.a_on)):
        xi = tuple(x for x, lab in zip(rho.a_on, labels) if lab == "I")
        xo = tuple(x for x, lab in zip(rho.a_on, labels) if lab == "O")
        out.append(Rhomboid(rho.a_in + xi, xo))
    return out


class RhomboidTiling:
    """Face-closed set of rhomboids with dimension and anchor indices.

    Parameters
    ----------
    rhomboids : iterable of Rhomboid
        Must already be closed under :func:`faces`; use :func:`build_tiling`
        to close a stream of top rhomboids.
    n : int, optional
        Size of the ground set, used for range checks in slicing.
    depth_limit : int, optional
        Set when the tiling was truncated: rhomboids of anchor depth below
        the limit are present together with all their cofaces.
    """

    def __init__(self, rhomboids, n=None, depth_limit=None):
        self.rhomboids = frozenset(rhomboids)
        self.n = n
        self.depth_limit = depth_limit
        self.by_dimension = defaultdict(list)
        self.by_anchor = defaultdict(list)
        for rho in sorted(self.rhomboids):
            self.by_dimension[rho.dimension].append(rho)
            self.by_anchor[rho.a_in].append(rho)

    def __len__(self):
        return len(self.rhomboids)

    def __contains__(self, rho):
        return rho in self.rhomboids

    def __iter__(self):
        return iter(sorted(self.rhomboids))

    def __eq__(self, other):
        return isinstance(other, RhomboidTiling) and self.rhomboids == other.rhomboids

    def __hash__(self):
        return hash(self.rhomboids)

    def __repr__(self):
        return f"RhomboidTiling({len(self)} rhomboids, top dimension {self.top_dimension})"

    @property
    def top_dimension(self):
        return max(self.by_dimension, default=-1)

    @property
    def vertices(self):
        """Combinatorial vertices, i.e. the 0-dimensional rhomboids."""
        return [rho.a_in for rho in self.by_dimension.get(0, [])]

    def vertices_at_depth(self, k):
        return [v for v in self.vertices if len(v) == k]

    def top_rhomboids(self):
        return list(self.by_dimension.get(self.top_dimension, []))

    def is_face_closed(self):
        return all(f in self.rhomboids for rho in self.rhomboids for f in faces(rho))

    def missing_faces(self):
        return sorted({f for rho in self.rhomboids for f in faces(rho)} - self.rhomboids)


def build_tiling(stream, depth_limit=None, n=None):
    """Close a rhomboid stream under faces.

    Parameters
    ----------
    stream : iterable of Rhomboid
        Typically :func:`kdelaunay.orderk.rhomboid_stream` of the mosaics
        computed up to order ``depth_limit``.
    depth_limit : int, optional
        Keep only rhomboids with anchor depth ``< depth_limit``; these are all
        the rhomboids needed for mosaics of order at most ``depth_limit``.
    """
    seen = set()
    for rho in stream:
        if depth_limit is not None and rho.depth >= depth_limit:
            continue
        if rho in seen:
            continue
        seen.update(faces(rho))
    return RhomboidTiling(seen, n, depth_limit)


@dataclass(frozen=True)
class PrismCell:
    """Cell of a half-integer slice: two consecutive vertex layers of a rhomboid.

    Experimental; the combinatorial structure of half-integer slices is only
    exported as the union of the two layers.
    """
    rhomboid: Rhomboid
    lower: int

    @property
    def generations(self):
        return (self.lower, self.lower + 1)

    @property
    def anchor(self):
        return self.rhomboid.a_in

    @property
    def dimension(self):
        return self.rhomboid.dimension - 1

    @property
    def vertices(self):
        return (self.rhomboid.slice_vertices(self.lower)
                + self.rhomboid.slice_vertices(self.lower + 1))

    def sort_key(self):
        return (self.lower, self.rhomboid.a_in, self.vertices)


def slice_at_depth(t, T):
    """Cells of the tiling ``T`` cut at depth ``t``.

    For integer ``t = k`` the result is the order-k mosaic in all dimensions:
    every rhomboid with ``i < k < i + j`` (anchor depth ``i``, dimension
    ``j``) contributes the ``(j - 1)``-cell of generation ``k - i``, and each
    vertex of depth ``k`` contributes itself.  For half-integer ``t`` each
    rhomboid with ``i < t < i + j`` contributes a :class:`PrismCell` spanning
    generations ``floor(t) - i`` and ``floor(t) - i + 1`` (degree mosaic).
    """
    t = as_rational(t)
    n = T.n if T.n is not None else max((len(v) for v in T.vertices), default=0)
    if not 0 < t < n:
        raise ValueError(f"depth {t} outside the open range (0, {n})")
    if t.denominator == 1:
        k = int(t)
        cells = [Cell(rho, k - rho.depth) for rho in T
                 if rho.depth < k < rho.depth + rho.dimension
                 or (rho.dimension == 0 and rho.depth == k)]
        return sorted(cells, key=lambda c: (c.rhomboid.dimension, c.sort_key()))
    if t.denominator != 2:
        raise ValueError(f"depth {t} is neither an integer nor a half-integer")
    low = int(t - Fraction(1, 2))
    cells = [PrismCell(rho, low - rho.depth) for rho in T
             if rho.depth < t < rho.depth + rho.dimension]
    return sorted(cells, key=lambda c: (c.rhomboid.dimension, c.sort_key()))


def vertex_embedding(v, A):
    """Tiling position of combinatorial vertex ``v``: the coordinate sum and ``-|v|``."""
    d = A.dim
    return tuple(sum((A[i][c] for i in v), Fraction(0)) for c in range(d)) + (-len(v),)
