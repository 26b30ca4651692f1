"""scikit-learn style front ends for order-k mosaics and alpha shapes."""
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .orderk import clusters, compute_up_to_order, rhomboid_stream
from .radius import alpha_complex, compute_radius_function, filtration
from .tiling import build_tiling
from .validation import check_order, check_points, check_threshold

__all__ = ["OrderKDelaunay", "OrderKAlphaShape"]


class OrderKDelaunay(BaseEstimator):
    """Order-k Delaunay mosaic of a point set.

    Parameters
    ----------
    order : int
        The mosaic exposed as ``mosaic_``.
    max_order : int, optional
        Compute all mosaics up to this order (default ``order``).
    perturb : str or rational, optional
        Magnitude of a seeded rational perturbation applied before computing.
    random_state : int
        Seed of the perturbation.
    method : {"auto", "wrap", "qhull"}
        Lower-hull engine.

    Attributes
    ----------
    points_ : PointSet
        The (possibly perturbed) points the mosaics describe.
    mosaics_ : list of Mosaic
        ``mosaics_[j - 1]`` is the order-j mosaic.
    mosaic_ : Mosaic
    rhomboids_ : list of Rhomboid
        Top-dimensional rhomboids found so far.
    """

    def __init__(self, order=1, max_order=None, perturb=None, random_state=0, method="auto"):
        self.order = order
        self.max_order = max_order
        self.perturb = perturb
        self.random_state = random_state
        self.method = method

    def fit(self, X, y=None):
        points = check_points(X)
        n = len(points)
        k = check_order(self.order, n)
        top = k if self.max_order is None else check_order(self.max_order, n, "max_order")
        if top < k:
            raise ValueError(f"max_order {top} is below order {k}")
        self.mosaics_ = compute_up_to_order(points, top, perturb=self.perturb,
                                            seed=self.random_state, method=self.method)
        self.points_ = self.mosaics_[0].points
        self.mosaic_ = self.mosaics_[k - 1]
        self.rhomboids_ = rhomboid_stream(self.mosaics_)
        self.n_features_in_ = points.dim
        return self

    def cells(self, k=None):
        """Cells of the order-k mosaic as lists of combinatorial vertices."""
        check_is_fitted(self, "mosaics_")
        m = self.mosaic_ if k is None else self.mosaics_[k - 1]
        return [c.vertices for c in m.cells]

    def clusters(self, k=None):
        check_is_fitted(self, "mosaics_")
        return clusters(self.mosaic_ if k is None else self.mosaics_[k - 1])


class OrderKAlphaShape(BaseEstimator):
    """Order-k alpha complex: the part of Del_k with radius value at most ``alpha_sq``.

    Parameters
    ----------
    order : int
    alpha_sq : rational, str or float
        Squared radius threshold; ``"inf"`` keeps the whole mosaic.

    Attributes
    ----------
    tiling_ : RhomboidTiling
        Rhomboids with anchor depth up to ``order``.
    radius_ : RadiusAssignment
    complex_ : AlphaComplex
    """

    def __init__(self, order=1, alpha_sq="inf"):
        self.order = order
        self.alpha_sq = alpha_sq

    def fit(self, X, y=None):
        points = check_points(X)
        n = len(points)
        k = check_order(self.order, n)
        threshold = check_threshold(self.alpha_sq)
        depth = min(k + 1, n)
        mosaics = compute_up_to_order(points, depth)
        self.tiling_ = build_tiling(rhomboid_stream(mosaics), depth, n=n)
        self.radius_ = compute_radius_function(self.tiling_, points)
        self.complex_ = alpha_complex(k, threshold, self.tiling_, self.radius_)
        self.points_ = points
        self.n_features_in_ = points.dim
        return self

    def filtration(self):
        """``(value, cell)`` pairs of the whole order-k mosaic, by value."""
        check_is_fitted(self, "complex_")
        return filtration(self.order, self.tiling_, self.radius_)
