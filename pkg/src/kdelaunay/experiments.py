"""Point samplers and per-order statistics of order-k Delaunay mosaics.

Samples are rationalized by truncating decimals to a fixed number of digits,
so every downstream computation stays exact.  Statistics are emitted as CSV
for external plotting.
"""
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
import csv
import logging
import math
import os
import statistics

import numpy as np

from .geometry import PointSet
from .orderk import clusters, compute_up_to_order, facet_components

logger = logging.getLogger(__name__)

__all__ = ["SampleSpec", "StatRow", "sample", "truncate", "collect_stats", "check_rows",
           "run_trials", "aggregate", "write_wide_csv", "write_degree_csv",
           "write_cluster_csv", "write_summary_csv", "KINDS", "THREADS_ENV"]

KINDS = ("moment_curve", "torus", "unit_ball", "polytope")
THREADS_ENV = "KDELAUNAY_THREADS"
POLYTOPE_OVERSAMPLE = 10


@dataclass(frozen=True)
class SampleSpec:
    kind: str
    n: int
    d: int
    seed: int = 0
    digits: int = 6

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sample kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if self.n < self.d + 1:
            raise ValueError(f"need n >= d + 1 = {self.d + 1}, got n={self.n}")
        if self.kind == "torus" and self.d != 3:
            raise ValueError("the torus sampler lives in R^3")
        if self.digits < 1:
            raise ValueError("digits must be positive")


def truncate(x, digits):
    """Exact rational of ``x`` truncated toward zero to ``digits`` decimals."""
    q = 10 ** digits
    return Fraction(math.trunc(float(x) * q), q)


def _ball(rng, count, d):
    g = rng.standard_normal((count, d))
    g /= np.linalg.norm(g, axis=1)[:, None]
    return g * rng.random(count)[:, None] ** (1.0 / d)


def _distinct(rows, digits):
    out, seen = [], set()
    for r in rows:
        p = tuple(truncate(x, digits) for x in r)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def sample(spec):
    """Deterministic point set for ``spec``.

    ``moment_curve`` uses ``t = 1..n`` and is exact.  ``torus`` samples both
    angles uniformly (major radius 1, minor radius 1/2).  ``unit_ball`` is
    uniform in the ball.  ``polytope`` picks ``n`` random hull vertices of a
    uniform ball sample of ``10 n`` points, enlarging the sample until the
    hull has enough vertices.
    """
    n, d = spec.n, spec.d
    if spec.kind == "moment_curve":
        return PointSet([tuple(Fraction(t ** e) for e in range(1, d + 1)) for t in range(1, n + 1)])
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "torus":
        pts = []
        while len(pts) < n:
            th, ph = rng.uniform(0, 2 * math.pi, (2, n))
            rows = np.column_stack([(1 + 0.5 * np.cos(ph)) * np.cos(th),
                                    (1 + 0.5 * np.cos(ph)) * np.sin(th),
                                    0.5 * np.sin(ph)])
            pts = _distinct(pts + [tuple(float(x) for x in r) for r in rows], spec.digits)[:n]
        return PointSet(pts)
    if spec.kind == "unit_ball":
        pts = []
        while len(pts) < n:
            pts = _distinct(pts + _ball(rng, n, d).tolist(), spec.digits)[:n]
        return PointSet(pts)
    from scipy.spatial import ConvexHull

    size = POLYTOPE_OVERSAMPLE * n
    while True:
        cloud = np.array(_distinct(_ball(rng, size, d).tolist(), spec.digits), dtype=object)
        hull = ConvexHull(cloud.astype(float))
        if len(hull.vertices) >= n:
            break
        logger.info("polytope pre-sample of %d points has only %d hull vertices; doubling",
                    size, len(hull.vertices))
        size *= 2
    pick = rng.choice(np.sort(hull.vertices), size=n, replace=False)
    return PointSet([tuple(cloud[i]) for i in np.sort(pick)])


@dataclass
class StatRow:
    """Statistics of one order-k mosaic.

    ``generations`` maps generation to d-cell count, ``clusters`` maps
    cluster size to count, ``degrees`` maps the number of incident d-cells
    to the number of vertices with that degree.
    """
    k: int
    vertices: int
    cells: int
    generations: dict = field(default_factory=dict)
    clusters: dict = field(default_factory=dict)
    degrees: dict = field(default_factory=dict)

    def generation_fractions(self):
        if not self.cells:
            return {}
        return {g: Fraction(c, self.cells) for g, c in sorted(self.generations.items())}


def collect_stats(mosaics, tiling=None):
    """One :class:`StatRow` per mosaic.

    ``tiling`` is accepted for symmetry with the tiling-based workflow; the
    counts here only need the mosaics.
    """
    rows = []
    for m in mosaics:
        degree = Counter()
        for c in m.cells:
            degree.update(c.vertices)
        deg_hist = Counter(degree[v] for v in m.vertices)
        cl_hist = Counter(len(g) for g in clusters(m))
        rows.append(StatRow(m.order, len(m.vertices), len(m.cells),
                            dict(sorted(m.generation_counts().items())),
                            dict(sorted(cl_hist.items())), dict(sorted(deg_hist.items()))))
    return rows


def check_rows(mosaics, rows, n, d):
    """Structural checks on a full run (orders 1..n).

    Returns a dict of booleans: the tiling vertex-count identity, slice
    cardinality of every cell, vertex coverage by cells of generation at
    least two, absence of first-generation cells beyond order ``n - d``,
    and agreement of anchor clusters with facet connectivity.
    """
    total = 1 + sum(r.vertices for r in rows)
    expected = sum(comb(n, i) for i in range(d + 2))
    card = all(len(c.vertices) == comb(d + 1, c.generation) and c.rhomboid.dimension == d + 1
               for m in mosaics for c in m.cells)
    covered = True
    for m in mosaics[1:]:
        if m.order >= n:
            continue
        seen = set()
        for c in m.cells:
            if c.generation >= 2:
                seen.update(c.vertices)
        if seen != set(m.vertices):
            covered = False
            break
    extinct = all(r.generations.get(1, 0) == 0 for r in rows if r.k > n - d)
    agree = True
    for m in mosaics:
        first = m.first_generation_cells
        by_anchor = sorted(sorted(tuple(c.vertices) for c in g) for g in clusters(m))
        by_facets = sorted(sorted(tuple(c.vertices) for c in g) for g in facet_components(first))
        if by_anchor != by_facets:
            agree = False
            break
    complete = len(rows) == n
    return {
        "count_identity": complete and total == expected,
        "slice_cardinality": card,
        "vertex_coverage": covered,
        "first_generation_extinction": extinct,
        "clusters_match_connectivity": agree,
    }


def _one_trial(args):
    kind, n, d, seed, digits, K, check = args
    pts = sample(SampleSpec(kind, n, d, seed, digits))
    mosaics = compute_up_to_order(pts, K)
    rows = collect_stats(mosaics)
    checks = check_rows(mosaics, rows, n, d) if check else {}
    return seed, rows, checks


def _workers(deterministic):
    if deterministic:
        return 1
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_trials(kind, n, d, trials=1, seed=0, *, digits=6, K=None, check=True,
               deterministic=False):
    """Run ``trials`` samples with seeds ``seed, seed + 1, ...``.

    Trials run in a process pool sized by ``$KDELAUNAY_THREADS`` (default 1);
    results are ordered by seed, so the output does not depend on
    scheduling.

    Returns
    -------
    list of (seed, list of StatRow, dict)
    """
    K = n if K is None else K
    jobs = [(kind, n, d, seed + t, digits, K, check and K == n) for t in range(trials)]
    workers = _workers(deterministic)
    if workers == 1 or trials == 1:
        results = [_one_trial(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_trial, jobs))
    return sorted(results, key=lambda r: r[0])


def aggregate(results, d):
    """Per-order mean, population standard deviation, min and max across trials."""
    by_k = defaultdict(list)
    for _, rows, _ in results:
        for r in rows:
            by_k[r.k].append(r)
    out = []
    for k in sorted(by_k):
        rs = by_k[k]
        entry = {"k": k, "trials": len(rs)}
        series = {"vertices": [r.vertices for r in rs], "cells": [r.cells for r in rs]}
        for g in range(1, d + 1):
            series[f"gen{g}"] = [r.generations.get(g, 0) for r in rs]
        for name, vals in series.items():
            entry[f"{name}_mean"] = statistics.fmean(vals)
            entry[f"{name}_std"] = statistics.pstdev(vals)
            entry[f"{name}_min"] = min(vals)
            entry[f"{name}_max"] = max(vals)
        out.append(entry)
    return out


def _fmt(x):
    return f"{x:.6f}" if isinstance(x, float) else str(x)


def write_wide_csv(path, kind, n, d, results):
    """Columns ``kind,n,d,seed,k,vertices,cells,gen1..genD``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "n", "d", "seed", "k", "vertices", "cells"]
                   + [f"gen{g}" for g in range(1, d + 1)])
        for seed, rows, _ in results:
            for r in rows:
                w.writerow([kind, n, d, seed, r.k, r.vertices, r.cells]
                           + [r.generations.get(g, 0) for g in range(1, d + 1)])


def _write_long(path, kind, n, d, results, attr, label):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "n", "d", "seed", "k", label, "count"])
        for seed, rows, _ in results:
            for r in rows:
                for key, count in sorted(getattr(r, attr).items()):
                    w.writerow([kind, n, d, seed, r.k, key, count])


def write_degree_csv(path, kind, n, d, results):
    _write_long(path, kind, n, d, results, "degrees", "degree")


def write_cluster_csv(path, kind, n, d, results):
    _write_long(path, kind, n, d, results, "clusters", "cluster_size")


def write_summary_csv(path, kind, n, d, results):
    summary = aggregate(results, d)
    if not summary:
        return
    cols = list(summary[0])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "n", "d"] + cols)
        for entry in summary:
            w.writerow([kind, n, d] + [_fmt(entry[c]) for c in cols])
