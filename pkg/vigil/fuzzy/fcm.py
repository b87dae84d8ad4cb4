"""
Fuzzy C-means clustering of one-dimensional feature series
Deterministic: centers start at evenly spaced quantiles of the data
"""
import logging
from dataclasses import dataclass

import numpy as np

from vigil.errors import ClusteringError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FcmResult:
    """Outcome of a clustering run

    centers are sorted ascending and memberships[k, i] is the degree of
    point k in cluster i; objective holds sum(u^m d^2) per iteration.
    """

    centers: np.ndarray
    memberships: np.ndarray
    iterations: int
    converged: bool
    objective: tuple


class FuzzyCMeans:
    """Alternating optimisation of fuzzy memberships and cluster centers"""

    def __init__(self, n_clusters=3, m=2.0, tol=1e-6, max_iter=300):
        """
        Initialize the clusterer

        Args:
            n_clusters: Number of clusters c
            m: Fuzzifier, > 1
            tol: Stop when no center moves by tol or more
            max_iter: Iteration cap
        """
        if n_clusters < 1:
            raise ClusteringError(f"need at least one cluster, got {n_clusters}")
        if not m > 1:
            raise ClusteringError(f"fuzzifier must be > 1, got {m}")
        self.n_clusters = n_clusters
        self.m = float(m)
        self.tol = tol
        self.max_iter = max_iter

    def initialize_centers(self, x):
        """Quantiles at 1/2c, 3/2c, ..., (2c-1)/2c"""
        levels = (2 * np.arange(self.n_clusters) + 1) / (2 * self.n_clusters)
        return np.quantile(x, levels)

    def update_memberships(self, x, centers):
        """u_ik = 1 / sum_j (d_ik / d_jk)^(2 / (m - 1)); a point on a center belongs to it fully"""
        d = np.abs(x[:, None] - centers[None, :])
        u = np.empty_like(d)
        on_center = d == 0
        exact = on_center.any(axis=1)
        if exact.any():
            hits = on_center[exact].astype(np.float64)
            u[exact] = hits / hits.sum(axis=1, keepdims=True)
        rest = ~exact
        if rest.any():
            # scale by the nearest distance so the powers cannot overflow
            ratio = d[rest] / d[rest].min(axis=1, keepdims=True)
            inverse = ratio ** (-2.0 / (self.m - 1.0))
            u[rest] = inverse / inverse.sum(axis=1, keepdims=True)
        return u

    def update_centers(self, x, u):
        """v_i = sum_k u_ik^m x_k / sum_k u_ik^m"""
        um = u ** self.m
        return (um.T @ x) / um.sum(axis=0)

    def objective_function(self, x, centers, u):
        return float(np.sum(u ** self.m * (x[:, None] - centers[None, :]) ** 2))

    def fit(self, points):
        """
        Cluster the points

        Args:
            points: 1-D real sequence

        Returns:
            FcmResult
        """
        x = np.asarray(points, dtype=np.float64).ravel()
        if x.size == 0:
            raise ClusteringError("cannot cluster an empty series")
        if not np.all(np.isfinite(x)):
            raise ClusteringError("points must be finite")
        distinct = np.unique(x).size
        if self.n_clusters > distinct:
            raise ClusteringError(f"{self.n_clusters} clusters requested but only {distinct} distinct values")

        centers = self.initialize_centers(x)
        history = []
        converged = False
        iterations = 0
        for iterations in range(1, self.max_iter + 1):
            u = self.update_memberships(x, centers)
            new_centers = self.update_centers(x, u)
            history.append(self.objective_function(x, new_centers, u))
            shift = float(np.max(np.abs(new_centers - centers)))
            centers = new_centers
            if shift < self.tol:
                converged = True
                break

        if converged:
            logger.debug("FCM converged after %d iterations", iterations)
        else:
            logger.warning("FCM stopped at max_iter=%d without converging", self.max_iter)

        order = np.argsort(centers, kind='stable')
        centers = centers[order]
        memberships = self.update_memberships(x, centers)
        return FcmResult(centers, memberships, iterations, converged, tuple(history))


def fcm_cluster(points, c=3, m=2.0, tol=1e-6, max_iter=300):
    """
    Fuzzy C-means on a 1-D series

    Args:
        points: Real values
        c: Cluster count
        m: Fuzzifier
        tol: Center-shift tolerance
        max_iter: Iteration cap

    Returns:
        FcmResult with ascending centers
    """
    return FuzzyCMeans(n_clusters=c, m=m, tol=tol, max_iter=max_iter).fit(points)
