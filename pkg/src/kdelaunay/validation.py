"""Input validation shared by the estimators and the command line."""
from fractions import Fraction
import math

import numpy as np

from .geometry import PointSet, as_rational

__all__ = ["check_points", "check_order", "check_threshold", "PointParseError", "parse_points"]


class PointParseError(ValueError):
    """A point file could not be read; ``line`` is 1-based."""

    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def check_points(X, *, min_points=1, dim=None):
    """Convert ``X`` to a :class:`PointSet`.

    Accepts a PointSet, a numeric or object numpy array of shape ``(n, d)``,
    or a sequence of coordinate sequences.  Floats are read through their
    shortest decimal representation.
    """
    if isinstance(X, PointSet):
        ps = X
    else:
        if isinstance(X, np.ndarray) and X.dtype != object:
            if X.ndim != 2:
                raise ValueError(f"expected a 2-d array of points, got shape {X.shape}")
            if not np.all(np.isfinite(X)):
                raise ValueError("input contains NaN or infinite coordinates")
            rows = X.tolist()
        else:
            rows = [list(p) for p in X]
        for i, r in enumerate(rows):
            for c in r:
                if isinstance(c, float) and not math.isfinite(c):
                    raise ValueError(f"point {i} has a non-finite coordinate")
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("points have different numbers of coordinates")
        ps = PointSet(rows)
    if len(ps) < min_points:
        raise ValueError(f"need at least {min_points} points, got {len(ps)}")
    if dim is not None and ps.dim != dim:
        raise ValueError(f"expected points in R^{dim}, got R^{ps.dim}")
    return ps


def check_order(k, n, name="order"):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {k!r}")
    if not 1 <= k <= n:
        raise ValueError(f"{name} {k} outside 1..{n}")
    return int(k)


def check_threshold(alpha_sq):
    """Exact threshold or ``math.inf``; accepts ``"inf"`` and ``"p/q"`` strings."""
    if isinstance(alpha_sq, str):
        text = alpha_sq.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return math.inf
        if text in ("-inf", "-infinity"):
            return -math.inf
    if isinstance(alpha_sq, float) and math.isinf(alpha_sq):
        return alpha_sq
    try:
        return as_rational(alpha_sq)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError(f"invalid squared radius threshold {alpha_sq!r}") from None


def parse_points(lines):
    """Read whitespace-separated decimal or ``p/q`` coordinates, one point per line.

    Blank lines and lines starting with ``#`` are skipped.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()
    rows, where = [], []
    width = None
    for no, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        row = []
        for tok in text.split():
            try:
                row.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise PointParseError(f"cannot parse {tok!r} as a number", no) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise PointParseError(f"expected {width} values, got {len(row)}", no)
        rows.append(tuple(row))
        where.append(no)
    if not rows:
        raise PointParseError("no points found")
    seen = {}
    for p, no in zip(rows, where):
        if p in seen:
            raise PointParseError(f"duplicate of the point on line {seen[p]}", no)
        seen[p] = no
    return PointSet(rows)
