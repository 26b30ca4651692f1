"""Radius function on the rhomboid tiling and order-k alpha complexes.

The squared radius of a rhomboid is the squared radius of the smallest
sphere that encloses its anchor, passes through ``a_on`` and has no other
input point inside.  Rhomboids of equal value form intervals whose lower
bound is a vertex; processing rhomboids by decreasing dimension finds every
interval from its upper bound.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
import math

from .exceptions import AffineDependence, InfeasibleConstraints
from .geometry import circumsphere, power
from .orderk import Cell, Rhomboid, as_pointset
from .tiling import faces

__all__ = ["ConstrainedSphereProblem", "RadiusAssignment", "AlphaComplex",
           "min_constrained_sphere", "constrained_radius", "resolve_interval",
           "compute_radius_function", "alpha_complex", "filtration", "NEG_INF", "INF"]

NEG_INF = -math.inf
INF = math.inf


@dataclass(frozen=True)
class ConstrainedSphereProblem:
    """Closed constraints: ``include`` inside or on, ``on`` on, ``exclude`` outside or on."""
    include: tuple = ()
    on: tuple = ()
    exclude: tuple = ()

    def __post_init__(self):
        sets = [set(self.include), set(self.on), set(self.exclude)]
        if sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2]:
            raise ValueError("include, on and exclude must be pairwise disjoint")
        for name in ("include", "on", "exclude"):
            object.__setattr__(self, name, tuple(sorted(getattr(self, name))))

    @classmethod
    def of_rhomboid(cls, rho, n):
        rest = set(range(n)) - set(rho.a_in) - set(rho.a_on)
        return cls(rho.a_in, rho.a_on, tuple(rest))


@lru_cache(maxsize=1 << 18)
def _support_sphere(A, support):
    """Minimal circumsphere of ``support`` with the power sign of every point."""
    try:
        s = circumsphere([A[i] for i in support])
    except AffineDependence:
        return None
    signs = tuple((v > 0) - (v < 0) for v in (power(s, p) for p in A))
    return s, signs


def _feasible(signs, prob):
    return (all(signs[i] <= 0 for i in prob.include)
            and all(signs[i] == 0 for i in prob.on)
            and all(signs[i] >= 0 for i in prob.exclude))


def min_constrained_sphere(prob, A):
    """Smallest sphere satisfying ``prob`` over the points of ``A``.

    In the variables ``(center c, s = |c|^2 - r^2)`` every constraint is
    linear, since the power of ``p`` is ``|p|^2 - 2 p.c + s``, and the
    objective ``|c|^2 - s`` is convex.  The optimum is the minimal
    circumsphere of its active set, so every superset of ``on`` with at most
    ``d + 1`` affinely independent points is tried and the smallest feasible
    candidate is kept.

    Returns
    -------
    Sphere or None
        ``None`` when nothing must be enclosed or touched; the squared radius
        is then unbounded below (see :func:`constrained_radius`).

    Raises
    ------
    InfeasibleConstraints
        If no sphere satisfies the constraints.
    """
    A = as_pointset(A)
    if not prob.include and not prob.on:
        return None
    d = A.dim
    free = prob.include + prob.exclude
    if len(prob.on) > d + 1:
        raise InfeasibleConstraints(f"{len(prob.on)} points cannot be cospherical in general position")
    candidates = []
    for size in range(max(0, 1 - len(prob.on)), d + 2 - len(prob.on)):
        for extra in combinations(free, size):
            support = tuple(sorted(prob.on + extra))
            found = _support_sphere(A, support)
            if found is not None:
                candidates.append((found[0].squared_radius, support, found))
    candidates.sort(key=lambda c: (c[0], c[1]))
    for _, _, (s, signs) in candidates:
        if _feasible(signs, prob):
            return s
    raise InfeasibleConstraints(f"no sphere satisfies {prob}")


def constrained_radius(prob, A):
    """Squared radius of :func:`min_constrained_sphere`, ``-inf`` when unbounded."""
    s = min_constrained_sphere(prob, A)
    return NEG_INF if s is None else s.squared_radius


def resolve_interval(rho, A):
    """Lower bound of the interval whose upper bound is ``rho``.

    A point ``x`` of ``a_on`` needs an inclusion constraint exactly when it
    lies outside the minimal circumsphere of ``a_on - {x}``; the circumsphere
    of the empty set is treated as containing nothing.

    Returns
    -------
    (tuple, tuple)
        The vertex ``a_in | X_I`` and ``X_I``.
    """
    A = as_pointset(A)
    if not rho.a_on:
        raise ValueError("a vertex is not the upper bound of a proper interval")
    xi = []
    for x in rho.a_on:
        rest = [A[i] for i in rho.a_on if i != x]
        if not rest or power(circumsphere(rest), A[x]) > 0:
            xi.append(x)
    xi = tuple(xi)
    return tuple(sorted(rho.a_in + xi)), xi


def interval_members(rho, xi):
    """Faces of ``rho`` between the vertex ``a_in | xi`` and ``rho``."""
    out = []
    choices = [("I", "O") if x in xi else ("O", "U") for x in rho.a_on]
    for labels in product(*choices):
        a_in = rho.a_in + tuple(x for x, lab in zip(rho.a_on, labels) if lab == "I")
        a_on = tuple(x for x, lab in zip(rho.a_on, labels) if lab == "O")
        out.append(Rhomboid(a_in, a_on))
    return out


@dataclass
class RadiusAssignment:
    """Squared radius per rhomboid and the intervals that produced them.

    ``intervals`` holds ``(lower vertex, upper rhomboid)`` pairs; vertices
    that form no proper interval appear as ``(v, v)``.
    """
    values: dict
    intervals: list = field(default_factory=list)
    interval_of: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, rho):
        return self.values[rho]

    def __len__(self):
        return len(self.values)


def compute_radius_function(T, A):
    """Assign a squared radius to every rhomboid of the face-closed tiling ``T``.

    Rhomboids are visited by decreasing dimension.  An unmarked rhomboid is
    the upper bound of an interval; its value is the squared circumradius of
    ``a_on`` and :func:`resolve_interval` gives the lower bound.  Vertices
    left unmarked get their own constrained-sphere value; the empty vertex
    gets ``-inf``.  For a truncated tiling only rhomboids of anchor depth
    below ``T.depth_limit`` (and the faces in their intervals) get values,
    since deeper ones may miss cofaces.

    Raises
    ------
    AssertionError
        If an interval would claim a rhomboid already claimed by another.
    """
    A = as_pointset(A)
    n = len(A)
    limit = T.depth_limit if T.depth_limit is not None else n + 1
    values, interval_of, intervals = {}, {}, []
    for dim in sorted(T.by_dimension, reverse=True):
        for rho in T.by_dimension[dim]:
            if rho in values or rho.depth >= limit:
                continue
            if dim == 0:
                prob = ConstrainedSphereProblem.of_rhomboid(rho, n)
                values[rho] = constrained_radius(prob, A)
                interval_of[rho] = len(intervals)
                intervals.append((rho.a_in, rho))
                continue
            vertex, xi = resolve_interval(rho, A)
            value = circumsphere([A[i] for i in rho.a_on]).squared_radius
            for member in interval_members(rho, xi):
                if member in values:
                    raise AssertionError(f"{member} lies in two intervals")
                values[member] = value
                interval_of[member] = len(intervals)
            intervals.append((vertex, rho))
    return RadiusAssignment(values, intervals, interval_of)


@dataclass
class AlphaComplex:
    """Sublevel set of the radius function restricted to the order-k mosaic.

    ``cells`` are :class:`Cell` slices of rhomboids at depth ``order``;
    ``values`` holds the matching squared radii.
    """
    order: int
    threshold: object
    cells: list
    values: list

    def __len__(self):
        return len(self.cells)

    def dimension_counts(self):
        counts = {}
        for c in self.cells:
            dim = max(c.rhomboid.dimension - 1, 0)
            counts[dim] = counts.get(dim, 0) + 1
        return counts

    def vertex_sets(self):
        return {frozenset(c.vertices) for c in self.cells}


def _mosaic_cells(k, T):
    return [Cell(rho, k - rho.depth) for rho in T
            if rho.depth < k < rho.depth + rho.dimension
            or (rho.dimension == 0 and rho.depth == k)]


def _parse_threshold(alpha_sq):
    if isinstance(alpha_sq, str) and alpha_sq.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    if isinstance(alpha_sq, float) and math.isinf(alpha_sq):
        return alpha_sq
    return Fraction(alpha_sq) if not isinstance(alpha_sq, Fraction) else alpha_sq


def filtration(k, T, R):
    """Cells of the order-k mosaic (all dimensions) with values, sorted by value then dimension."""
    n = T.n if T.n is not None else max(len(v) for v in T.vertices)
    if not 1 <= k <= n:
        raise ValueError(f"order {k} outside 1..{n}")
    rows = [(R[c.rhomboid], c) for c in _mosaic_cells(k, T)]
    rows.sort(key=lambda r: (r[0], r[1].rhomboid.dimension, r[1].sort_key()))
    return rows


def alpha_complex(k, alpha_sq, T, R):
    """Order-k alpha complex: cells of Del_k whose rhomboid value is at most ``alpha_sq``.

    ``alpha_sq`` may be a rational, ``"inf"`` or ``math.inf``.  The radius
    function is monotone on faces, so the result is closed under faces.
    """
    threshold = _parse_threshold(alpha_sq)
    rows = [(v, c) for v, c in filtration(k, T, R) if v <= threshold]
    return AlphaComplex(k, threshold, [c for _, c in rows], [v for v, _ in rows])


def is_face_closed(complex_, T):
    """True iff every face (within the order-k mosaic) of every cell is present."""
    k = complex_.order
    present = {c.rhomboid for c in complex_.cells}
    for rho in present:
        for f in faces(rho):
            in_mosaic = (f.depth < k < f.depth + f.dimension
                         or (f.dimension == 0 and f.depth == k))
            if in_mosaic and f not in present:
                return False
    return True
