"""Weighted first-order Delaunay mosaics as lower convex hulls of lifted points.

The lower hull is computed exactly.  Two engines produce the same answer:

``wrap``
    Gift wrapping over whole (possibly non-simplicial) faces, with the
    vertical direction treated as an extra point at infinity so that the
    wrapping never leaves the lower envelope.  Pure integer arithmetic.
``qhull``
    scipy's Qhull proposes a triangulated lower hull in floating point; the
    proposal is then certified with exact integer predicates and coplanar
    simplices are merged into whole faces.  Any failed certificate falls
    back to ``wrap``.

Non-simplicial lower faces are triangulated by pulling their smallest-index
vertex, recursively through the face lattice (a fan for polygons).
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
import logging

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import DegeneracyError, DimensionMismatch
from .geometry import as_rational, det, make_point, sq_norm

logger = logging.getLogger(__name__)

__all__ = ["WeightedPoint", "lower_faces", "lower_hull", "weighted_delaunay",
           "weighted_delaunay_faces", "triangulate_faces", "integer_lifts",
           "integer_lower_faces"]

_INF = -1            # candidate index standing for the vertical direction
QHULL_THRESHOLD = 40  # below this many points the exact wrapper is cheaper


@dataclass(frozen=True)
class WeightedPoint:
    location: tuple
    weight: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "location", make_point(self.location))
        object.__setattr__(self, "weight", as_rational(self.weight))

    @property
    def lifted_height(self):
        return sq_norm(self.location) - self.weight


# ---------------------------------------------------------------------------
# small exact linear algebra on int vectors

def _idot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _det_int(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    return det(rows)


def _normal(vectors, m):
    """Integer vector ``N`` with ``N . x == det(vectors + [x])``."""
    out = []
    for i in range(m):
        minor = [[v[j] for j in range(m) if j != i] for v in vectors]
        d = _det_int(minor)
        out.append(d if (m - 1 + i) % 2 == 0 else -d)
    return out


def _reduce(vec):
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g > 1:
        return [x // g for x in vec]
    return list(vec)


def _rank(vectors):
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                f = rows[r][col] / prow[col]
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
        rank += 1
    return rank


def _independent_subset(idx, coords):
    """Greedy maximal affinely independent sub-list of ``idx``."""
    base = coords[idx[0]]
    chosen = [idx[0]]
    vecs = []
    for i in idx[1:]:
        v = [a - b for a, b in zip(coords[i], base)]
        if _rank(vecs + [v]) > len(vecs):
            vecs.append(v)
            chosen.append(i)
    return chosen


# ---------------------------------------------------------------------------
# brute-force facets and pulling triangulation of small point sets

def _brute_facets(idx, coords, s):
    """Facets of conv(coords[i] for i in idx), a full-dimensional set in R^s.

    Returns ``(contact, basis, normal)`` triples, ``contact`` being every
    point on the facet hyperplane and ``normal`` pointing outward.
    """
    found = {}
    for sub in combinations(idx, s):
        p0 = coords[sub[0]]
        vecs = [[a - b for a, b in zip(coords[q], p0)] for q in sub[1:]]
        nrm = _normal(vecs, s)
        if not any(nrm):
            continue
        c = _idot(nrm, p0)
        vals = [_idot(nrm, coords[q]) - c for q in idx]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            nrm = [-x for x in nrm]
        else:
            continue
        contact = tuple(q for q, v in zip(idx, vals) if v == 0)
        key = frozenset(contact)
        if key not in found:
            found[key] = (contact, sub, nrm)
    return list(found.values())


def _drop_coord(idx, coords, nrm):
    k = next(i for i, x in enumerate(nrm) if x != 0)
    return {q: coords[q][:k] + coords[q][k + 1:] for q in idx}


def _pull(idx, coords, s):
    """Pulling triangulation of a full-dimensional point set in R^s."""
    idx = tuple(sorted(idx))
    if len(idx) == s + 1:
        return [idx]
    apex = idx[0]
    out = []
    for contact, _, nrm in _brute_facets(idx, coords, s):
        if apex in contact:
            continue
        if s == 1:
            sub = [contact[:1]]
        else:
            sub = _pull(contact, _drop_coord(contact, coords, nrm), s - 1)
        out.extend(tuple(sorted((apex,) + t)) for t in sub)
    return sorted(out)


def triangulate_faces(faces, points):
    """Triangulate merged lower faces of lifted ``points`` (int tuples in R^m)."""
    out = []
    for face in faces:
        s = len(points[face[0]]) - 1
        if len(face) <= s + 1:
            out.append(tuple(sorted(face)))
            continue
        proj = {q: points[q][:-1] for q in face}
        out.extend(_pull(face, proj, s))
    return sorted(out)


# ---------------------------------------------------------------------------
# exact gift wrapping

class _Wrapper:
    def __init__(self, pts):
        self.P = pts
        self.n = len(pts)
        self.m = len(pts[0])
        self.up = tuple([0] * (self.m - 1) + [1])

    def _vec(self, q, r0):
        if q == _INF:
            return self.up
        return [a - b for a, b in zip(self.P[q], r0)]

    def _oriented(self, basis, w, ref):
        nrm = _normal(basis + [w], self.m)
        s = _idot(nrm, ref)
        if s > 0:
            nrm = [-x for x in nrm]
        elif s == 0:
            return None
        return nrm

    def pivot(self, r0, basis, ref, cand):
        """Rotate a supporting hyperplane about the flat ``r0 + span(basis)``.

        ``ref`` points from the flat into the old face and must end up on the
        inner side.  Returns the outward normal of the first hyperplane hit.
        """
        best = cand[0]
        nrm = self._oriented(basis, self._vec(best, r0), ref)
        if nrm is None:
            raise DegeneracyError("pivot candidate lies in the hinge flat")
        for q in cand[1:]:
            if _idot(nrm, self._vec(q, r0)) > 0:
                cand_nrm = self._oriented(basis, self._vec(q, r0), ref)
                if cand_nrm is None:
                    raise DegeneracyError("pivot candidate lies in the hinge flat")
                best, nrm = q, cand_nrm
        return _reduce(nrm)

    def contact(self, nrm, r0):
        c = _idot(nrm, r0)
        vals = [_idot(nrm, p) for p in self.P]
        if max(vals) > c:
            raise AssertionError("gift wrapping produced a non-supporting hyperplane")
        return c, tuple(i for i, v in enumerate(vals) if v == c), vals

    def initial_facet(self):
        P, m = self.P, self.m
        zmin = min(p[-1] for p in P)
        nrm = [0] * (m - 1) + [-1]
        c, S, vals = self.contact(nrm, P[0][:-1] + (zmin,))
        while _rank([[a - b for a, b in zip(P[i], P[S[0]])] for i in S[1:]] or [[0] * m]) < m - 1:
            indep = _independent_subset(list(S), P)
            r0 = P[indep[0]]
            basis = [[a - b for a, b in zip(P[i], r0)] for i in indep[1:]]
            dirs = []
            for i in range(m - 1):
                v = [0] * m
                v[i] = nrm[-1]
                v[-1] = -nrm[i]
                if _rank(basis + dirs + [v]) > len(basis) + len(dirs):
                    dirs.append(v)
                if len(basis) + len(dirs) == m - 1:
                    break
            ref = dirs.pop()
            cand = [i for i, v in enumerate(vals) if v < c] + [_INF]
            for sgn in (1, -1):
                new = self.pivot(r0, basis + dirs, [sgn * x for x in ref], cand)
                if new[-1] != 0:
                    break
            else:
                raise DegeneracyError(
                    "all points lie on a common vertical hyperplane; the lower side is undefined")
            nrm = new
            c, S, vals = self.contact(nrm, r0)
        return nrm, S

    def ridges(self, face, nrm):
        P, m = self.P, self.m
        if len(face) == m:
            for j in range(m):
                rest = face[:j] + face[j + 1:]
                yield rest, rest, face[j]
            return
        proj = {q: P[q][:-1] for q in face}
        for contact, basis, _ in _brute_facets(face, proj, m - 1):
            other = next(q for q in face if q not in contact)
            yield contact, basis, other

    def run(self):
        P = self.P
        nrm, face = self.initial_facet()
        faces = {}
        key = tuple(nrm) + (_idot(nrm, P[face[0]]),)
        faces[key] = face
        stack = [(nrm, face)]
        done = set()
        while stack:
            nrm, face = stack.pop()
            c = _idot(nrm, P[face[0]])
            cand = None
            for contact, basis_idx, other in self.ridges(face, nrm):
                rkey = frozenset(contact)
                if rkey in done:
                    continue
                done.add(rkey)
                if cand is None:
                    cand = [i for i, p in enumerate(P) if _idot(nrm, p) < c] + [_INF]
                r0 = P[basis_idx[0]]
                basis = [[a - b for a, b in zip(P[q], r0)] for q in basis_idx[1:]]
                ref = [a - b for a, b in zip(P[other], r0)]
                new = self.pivot(r0, basis, ref, cand)
                if new[-1] == 0:
                    continue          # boundary ridge: the next facet is a vertical wall
                c2, face2, _ = self.contact(new, r0)
                key = tuple(new) + (c2,)
                if key not in faces:
                    faces[key] = face2
                    stack.append((new, face2))
        return sorted(faces.values())


# ---------------------------------------------------------------------------
# qhull proposal + exact certificate

class _CertificateError(Exception):
    pass


_FILTER_LIMIT = 2.0 ** 50


def _subset_plan(k):
    """Column subsets by size, with the expansion terms of each subset."""
    plan = []
    for size in range(2, k + 1):
        level = []
        for S in combinations(range(k), size):
            terms = [(j, pos, tuple(c for c in S if c != j)) for pos, j in enumerate(S)]
            level.append((S, terms))
        plan.append(level)
    return plan


_PLANS = {}


def _expand(M, mod=None):
    """Row-by-row Laplace expansion sharing minors between columns subsets.

    Returns determinants, plus the permanents of ``|M|`` in float mode, or
    determinants modulo ``mod``.
    """
    k = M.shape[1]
    plan = _PLANS.setdefault(k, _subset_plan(k))
    row = M[:, k - 1, :]
    dets = {(c,): row[:, c] for c in range(k)}
    perms = None if mod is not None else {(c,): np.abs(row[:, c]) for c in range(k)}
    for level in plan:
        r = k - len(level[0][0])
        row = M[:, r, :]
        new_d, new_p = {}, {}
        for S, terms in level:
            acc = None
            pacc = None
            for j, pos, rest in terms:
                t = row[:, j] * dets[rest]
                if mod is not None:
                    t %= mod
                acc = t if acc is None else (acc + t if pos % 2 == 0 else acc - t)
                if mod is not None:
                    acc %= mod
                else:
                    pt = np.abs(row[:, j]) * perms[rest]
                    pacc = pt if pacc is None else pacc + pt
            new_d[S] = acc
            if mod is None:
                new_p[S] = pacc
        dets, perms = new_d, new_p
    full = tuple(range(k))
    if mod is not None:
        return dets[full]
    return dets[full], perms[full]


def _fdet(M):
    """Determinant and permanent of ``|M|`` for a float batch ``(B, k, k)``."""
    if M.shape[1] == 1:
        return M[:, 0, 0], np.abs(M[:, 0, 0])
    return _expand(M)


# primes below 2**31: products of two residues fit in int64
_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
           2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399,
           2147483353, 2147483323, 2147483269, 2147483249)


def _mdet(M, p):
    """Determinants modulo ``p`` of a batch of int64 matrices with entries in [0, p)."""
    if M.shape[1] == 1:
        return M[:, 0, 0]
    return _expand(M, p)


def _zero_by_residues(M):
    """Boolean mask of integer matrices whose determinant is certainly zero.

    A determinant that vanishes modulo primes whose product exceeds twice
    its Hadamard bound is zero.
    """
    norms = np.sqrt(np.einsum("bij,bij->bi", M.astype(float), M.astype(float)))
    bits = np.sum(np.log2(np.maximum(norms, 1.0)), axis=1) + 2
    need = int(np.ceil(bits.max() / 30.9)) if len(bits) else 0
    if need > len(_PRIMES):
        return np.zeros(len(M), dtype=bool)
    zero = np.ones(len(M), dtype=bool)
    for p in _PRIMES[:need]:
        zero &= _mdet(M % p, p) == 0
    return zero


def _orient_batch(P, parr, idx, proj):
    """Exact signs of ``det[P[idx[:, i]] - P[idx[:, 0]]]`` over the rows of ``idx``.

    With ``proj`` the last coordinate is dropped.  A float evaluation with a
    static error bound decides most rows, a residue test certifies exact
    zeros, and whatever is left is recomputed with Python integers.
    """
    idx = np.asarray(idx)
    k = idx.shape[1] - 1
    cols = k
    out = np.zeros(len(idx), dtype=np.int8)
    if len(idx) == 0:
        return out
    if parr is not None:
        base = parr[idx[:, 0]][:, None, :cols]
        M = parr[idx[:, 1:]][:, :, :cols] - base
        dv, pv = _fdet(M)
        bound = pv * ((k * k + 2) * 2.0 ** -52)
        out[dv > bound] = 1
        out[dv < -bound] = -1
        unsure = np.nonzero(np.abs(dv) <= bound)[0]
        if len(unsure):
            zero = _zero_by_residues(M[unsure].astype(np.int64))
            unsure = unsure[~zero]
    else:
        unsure = range(len(idx))
    for r in unsure:
        row = [int(q) for q in idx[r]]
        p0 = P[row[0]]
        val = det([[a - b for a, b in zip(P[q][:cols], p0[:cols])] for q in row[1:]])
        out[r] = (val > 0) - (val < 0)
    return out


def _qhull_faces(P):
    from scipy.spatial import ConvexHull, QhullError

    m = len(P[0])
    arr = np.array(P, dtype=float)
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    try:
        hull = ConvexHull((arr - lo) / span, qhull_options="Qt Qbb")
    except QhullError as exc:
        raise _CertificateError(str(exc)) from None
    simplices = np.sort(hull.simplices[hull.equations[:, m - 1] < 0], axis=1)
    if len(simplices) == 0:
        raise _CertificateError("no lower facets")
    return _certify(P, simplices)


def _certify(P, simplices):
    """Exactly check a proposed triangulated lower hull and merge coplanar cells.

    Certificate: every simplex projects with nonzero volume, every interior
    ridge is locally convex and unfolded, every boundary ridge lies on a
    vertical supporting hyperplane, points off the triangulation are strictly
    above it, and the projection covers a sample point exactly once.
    """
    m = len(P[0])
    n = len(P)
    parr = np.array(P, dtype=float)
    if np.abs(parr).max() >= _FILTER_LIMIT:
        parr = None
    F = len(simplices)

    sx = _orient_batch(P, parr, simplices, proj=True)
    if np.any(sx == 0):
        raise _CertificateError("flat or vertical simplex")

    ridges = np.concatenate([np.delete(simplices, j, axis=1) for j in range(m)])
    owner = np.tile(np.arange(F), m)
    opp = simplices.T.reshape(-1)
    if n ** (m - 1) < 2 ** 62:
        keys = np.zeros(len(ridges), dtype=np.int64)
        for j in range(m - 1):
            keys = keys * n + ridges[:, j]
        _, first, inv, counts = np.unique(keys, return_index=True, return_inverse=True,
                                          return_counts=True)
        uniq = ridges[first]
    else:
        uniq, inv, counts = np.unique(ridges, axis=0, return_inverse=True, return_counts=True)
    inv = inv.reshape(-1)
    if counts.max() > 2:
        raise _CertificateError("ridge shared by more than two simplices")
    order = np.argsort(inv, kind="stable")
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])

    inner = np.nonzero(counts == 2)[0]
    e1 = order[starts[inner]]
    e2 = order[starts[inner] + 1]
    k1, o1, k2, o2 = owner[e1], opp[e1], owner[e2], opp[e2]

    t = _orient_batch(P, parr, np.column_stack([simplices[k1], o2]), proj=False)
    if np.any(sx[k1] * t < 0):
        raise _CertificateError("locally non-convex ridge")
    s1 = _orient_batch(P, parr, np.column_stack([uniq[inner], o1]), proj=True)
    s2 = _orient_batch(P, parr, np.column_stack([uniq[inner], o2]), proj=True)
    if np.any(s1 * s2 >= 0):
        raise _CertificateError("folded ridge")

    flat = t == 0
    graph = coo_matrix((np.ones(int(flat.sum())), (k1[flat], k2[flat])), shape=(F, F))
    _, label = connected_components(graph, directed=False)

    fparr = np.array(P, dtype=float)
    outer = np.nonzero(counts == 1)[0]
    opp_out = opp[order[starts[outer]]]
    covered = np.zeros(n, dtype=bool)
    covered[simplices.reshape(-1)] = True
    hidden = np.nonzero(~covered)[0].tolist()
    if parr is not None:
        _check_boundary(P, parr, uniq[outer], opp_out, hidden)
    else:
        up = [0] * (m - 1) + [1]
        for ridge, o in zip(uniq[outer].tolist(), opp_out.tolist()):
            r0 = P[ridge[0]]
            wall = _normal([[a - b for a, b in zip(P[q], r0)] for q in ridge[1:]] + [up], m)
            if _idot(wall, P[o]) > _idot(wall, r0):
                wall = [-x for x in wall]
            if not _all_leq(fparr, P, wall, _idot(wall, r0)):
                raise _CertificateError("boundary ridge is not on the convex hull")

    sizes = np.bincount(label)
    single = sizes[label] == 1
    faces = [tuple(r) for r in simplices[single].tolist()]
    groups = {}
    for k, lab in zip(np.nonzero(~single)[0].tolist(), label[~single].tolist()):
        groups.setdefault(lab, []).append(k)
    slist = simplices.tolist()
    for members in groups.values():
        faces.append(tuple(sorted({q for k in members for q in slist[k]})))

    if hidden:
        _, reps = np.unique(label, return_index=True)
        _certify_hidden(P, hidden, [slist[k] for k in reps.tolist()])
    _check_single_cover(P, simplices, fparr)
    return sorted(faces)


def _check_boundary(P, parr, ridges, opp, hidden):
    """The projected triangulation must cover a convex region containing every point.

    The boundary ridges must form a closed, connected, locally convex
    surface; a connected region with locally convex boundary is convex.
    Vertices lie in the region by construction, hidden points are tested
    against every boundary ridge.
    """
    mm = parr.shape[1] - 1
    s_opp = _orient_batch(P, parr, np.column_stack([ridges, opp]), proj=True)
    if np.any(s_opp == 0):
        raise _CertificateError("degenerate boundary ridge")
    B = len(ridges)
    if mm == 1:
        if B != 2:
            raise _CertificateError("projection is not an interval")
    else:
        subs = np.concatenate([np.delete(ridges, j, axis=1) for j in range(mm)])
        owner = np.tile(np.arange(B), mm)
        other = ridges.T.reshape(-1)
        _, inv, counts = np.unique(subs, axis=0, return_inverse=True, return_counts=True)
        inv = inv.reshape(-1)
        if np.any(counts != 2):
            raise _CertificateError("boundary is not a closed surface")
        order = np.argsort(inv, kind="stable")
        b1, b2 = owner[order[0::2]], owner[order[1::2]]
        w1, w2 = other[order[0::2]], other[order[1::2]]
        parent = list(range(B))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in zip(b1.tolist(), b2.tolist()):
            parent[find(x)] = find(y)
        if len({find(x) for x in range(B)}) != 1:
            raise _CertificateError("boundary is not connected")
        side1 = _orient_batch(P, parr, np.column_stack([ridges[b1], w2]), proj=True)
        side2 = _orient_batch(P, parr, np.column_stack([ridges[b2], w1]), proj=True)
        if np.any(side1 * s_opp[b1] < 0) or np.any(side2 * s_opp[b2] < 0):
            raise _CertificateError("boundary is not locally convex")
    if hidden:
        hs = np.array(hidden)
        bb = np.repeat(np.arange(B), len(hs))
        xs = np.tile(hs, B)
        signs = _orient_batch(P, parr, np.column_stack([ridges[bb], xs]), proj=True)
        if np.any(signs * s_opp[bb] < 0):
            raise _CertificateError("hidden point outside the projected hull")


def _all_leq(arr, P, nrm, c):
    """Exact ``max_i nrm . P[i] <= c`` with a float prefilter."""
    fn = np.array([float(x) for x in nrm])
    vals = arr @ fn - float(c)
    scale = (np.abs(arr) @ np.abs(fn) + abs(float(c))) * 1e-12 + 1e-300
    if np.any(vals > scale):
        return False
    for i in np.nonzero(vals > -scale)[0]:
        if _idot(nrm, P[int(i)]) > c:
            return False
    return True


def _certify_hidden(P, hidden, face_simplices):
    """Every non-vertex point must lie strictly inside every lower face plane.

    A point on a supporting plane would belong to that face, so equality is
    a certificate failure as well.
    """
    m = len(P[0])
    arr = np.array([P[i] for i in hidden], dtype=float)
    for s in face_simplices:
        p0 = P[s[0]]
        nrm = _normal([[a - b for a, b in zip(P[q], p0)] for q in s[1:]], m)
        if nrm[-1] > 0:
            nrm = [-x for x in nrm]
        c = _idot(nrm, p0)
        fn = np.array([float(x) for x in nrm])
        vals = arr @ fn - float(c)
        tol = (np.abs(arr) @ np.abs(fn) + abs(float(c))) * 1e-12 + 1e-300
        for j in np.nonzero(vals > -tol)[0]:
            if _idot(nrm, P[hidden[int(j)]]) >= c:
                raise _CertificateError("hidden point on or below a lower facet")


def _check_single_cover(P, simplices, parr):
    """Projected simplices must cover a generic interior point exactly once."""
    m = len(P[0])
    s0 = simplices[0].tolist()
    x0 = [sum(Fraction(P[q][i]) for q in s0) / m for i in range(m - 1)]
    fx = np.array([float(v) for v in x0])
    pts = parr[simplices][:, :, : m - 1]
    lo, hi = pts.min(axis=1), pts.max(axis=1)
    tol = 1e-9 * (1 + np.abs(lo) + np.abs(hi))
    near = np.nonzero(np.all((fx >= lo - tol) & (fx <= hi + tol), axis=1))[0]
    count = sum(_in_simplex([P[q][:-1] for q in simplices[k].tolist()], x0) for k in near)
    if count != 1:
        raise _CertificateError("projection is not a single cover")


def _in_simplex(verts, x):
    full = det([[a - b for a, b in zip(v, verts[0])] for v in verts[1:]])
    if full == 0:
        return False
    for j in range(len(verts)):
        vs = list(verts)
        vs[j] = x
        dj = det([[a - b for a, b in zip(v, vs[0])] for v in vs[1:]])
        if dj * full < 0:
            return False
    return True


# ---------------------------------------------------------------------------
# public API

def integer_lifts(points):
    """Scale rational points in R^m to integers by one common factor."""
    pts = [make_point(p) for p in points]
    scale = 1
    for p in pts:
        for c in p:
            scale = scale * c.denominator // gcd(scale, c.denominator)
    return [tuple(int(c * scale) for c in p) for p in pts]


def _check_input(P):
    if not P:
        return 0
    m = len(P[0])
    if m < 2:
        raise DimensionMismatch("lifted points need at least two coordinates")
    if any(len(p) != m for p in P):
        raise DimensionMismatch("lifted points of different dimensions")
    if len(set(P)) != len(P):
        seen = {}
        for i, p in enumerate(P):
            if p in seen:
                raise DegeneracyError(f"duplicate lifted points {seen[p]} and {i}", (seen[p], i))
            seen[p] = i
    return m


def _projected_rank(P, m):
    """Affine rank of the points with the last coordinate dropped.

    Full rank is certified by one exact determinant on a pivoted float
    guess; otherwise the rank is computed exactly.
    """
    base = [p[:-1] for p in P]
    diffs = [[a - b for a, b in zip(q, base[0])] for q in base[1:]]
    if not diffs:
        return 0
    if len(diffs) >= m - 1:
        from scipy.linalg import qr

        _, _, piv = qr(np.array(diffs, dtype=float).T, mode="economic", pivoting=True)
        if det([diffs[i] for i in piv[: m - 1]]) != 0:
            return m - 1
    return _rank(diffs)


def integer_lower_faces(P, method="auto"):
    """Whole lower faces of distinct integer points ``P`` in R^m."""
    m = _check_input(P)
    n = len(P)
    if n == 0:
        return []
    rank = _projected_rank(P, m)
    if n <= m - 1:
        if rank != n - 1:
            raise DegeneracyError("too few points in degenerate position", tuple(range(n)))
        return [tuple(range(n))]
    if rank < m - 1:
        raise DegeneracyError(
            "all points lie on a common vertical hyperplane; the lower side is undefined",
            tuple(range(n)))
    if method == "auto":
        method = "qhull" if n >= QHULL_THRESHOLD else "wrap"
    if method == "qhull":
        try:
            return _qhull_faces(P)
        except _CertificateError as exc:
            logger.debug("qhull proposal rejected (%s); falling back to exact wrapping", exc)
    elif method != "wrap":
        raise ValueError(f"unknown hull method {method!r}")
    return _Wrapper(P).run()


def lower_faces(points, method="auto"):
    """Whole lower faces of conv(points) for points in R^{d+1}.

    Each face is the sorted tuple of every input index on its supporting
    hyperplane.  Points that never touch the lower hull appear nowhere.
    """
    return integer_lower_faces(integer_lifts(points), method)


def lower_hull(points, method="auto"):
    """Triangulated lower hull: sorted ``(d+1)``-index facets."""
    P = integer_lifts(points)
    return triangulate_faces(integer_lower_faces(P, method), P)


def _weighted_lifts(pts):
    pts = [p if isinstance(p, WeightedPoint) else WeightedPoint(*p) for p in pts]
    if not pts:
        return []
    d = len(pts[0].location)
    if any(len(p.location) != d for p in pts):
        raise DimensionMismatch("weighted points of different dimensions")
    seen = {}
    for i, p in enumerate(pts):
        if p.location in seen:
            raise DegeneracyError(f"weighted points {seen[p.location]} and {i} share a location",
                                  (seen[p.location], i))
        seen[p.location] = i
    return integer_lifts([p.location + (p.lifted_height,) for p in pts])


def weighted_delaunay_faces(pts, method="auto"):
    """Cells of the weighted Delaunay mosaic as whole (merged) vertex sets."""
    return integer_lower_faces(_weighted_lifts(pts), method)


def weighted_delaunay(pts, method="auto"):
    """Simplices of the weighted Delaunay mosaic of ``pts``.

    ``pts`` holds :class:`WeightedPoint` objects or ``(location, weight)``
    pairs.  Hidden points appear in no simplex; non-simplicial cells are
    triangulated by pulling their smallest index.
    """
    P = _weighted_lifts(pts)
    return triangulate_faces(integer_lower_faces(P, method), P)
