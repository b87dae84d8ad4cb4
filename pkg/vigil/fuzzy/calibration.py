"""
Membership-function calibration by fuzzy C-means
Each input feature is clustered on its own epoch series; the three sorted
centers become the apexes of the Small, Medium and Large terms.
"""
import logging
from dataclasses import dataclass

import numpy as np

from vigil.errors import ClusteringError
from vigil.fuzzy.fcm import fcm_cluster
from vigil.fuzzy.membership import LinguisticVariable, MembershipFunction

logger = logging.getLogger(__name__)

MIN_DEFINED_VALUES = 3


@dataclass(frozen=True)
class Calibration:
    """Calibrated input variables keyed 'A', 'V', 'D'"""

    variables: dict
    centers: dict
    fallback: dict
    fcm: dict


def terms_from_centers(low, medium, high):
    """
    Small/Medium/Large terms with apexes at three ascending centers

    Small is a left shoulder and Large a right shoulder, so every real value
    has a positive degree in at least one term.
    """
    return {
        'S': MembershipFunction(low, low, medium),
        'M': MembershipFunction(low, medium, high),
        'L': MembershipFunction(medium, high, high),
    }


def _universe(values, padding, degenerate_width):
    lo = float(values.min())
    hi = float(values.max())
    span = hi - lo
    if span <= 1e-12 * max(1.0, abs(lo), abs(hi)):
        middle = (lo + hi) / 2
        return middle - degenerate_width / 2, middle + degenerate_width / 2
    return lo - padding * span, hi + padding * span


def calibrate_variable(name, values, c=3, m=2.0, tol=1e-6, max_iter=300,
                       padding=0.05, degenerate_width=0.1):
    """
    Calibrate one input variable

    Args:
        name: Variable name
        values: Epoch series of the feature; non-finite entries are ignored
        c, m, tol, max_iter: Fuzzy C-means parameters (c must be 3)
        padding: Universe margin as a fraction of the observed range
        degenerate_width: Universe width used when the series is constant

    Returns:
        (LinguisticVariable, centers, fallback flag, FcmResult or None)
    """
    if c != 3:
        raise ClusteringError(f"Small/Medium/Large terms need exactly 3 clusters, got {c}")
    x = np.asarray(values, dtype=np.float64).ravel()
    x = x[np.isfinite(x)]
    if x.size == 0:
        raise ClusteringError(f"no defined values to calibrate {name}")

    lo, hi = _universe(x, padding, degenerate_width)
    result = None
    fallback = x.size < MIN_DEFINED_VALUES or np.unique(x).size < c
    if not fallback:
        result = fcm_cluster(x, c=c, m=m, tol=tol, max_iter=max_iter)
        centers = tuple(float(v) for v in result.centers)
        # coinciding centers would collapse a term into a shoulder
        gap = min(b - a for a, b in zip(centers, centers[1:]))
        fallback = not gap > 1e-12 * (hi - lo)
    if fallback:
        logger.warning("Calibration of %s fell back to a uniform partition (%d defined values)", name, x.size)
        centers = (lo, (lo + hi) / 2, hi)

    variable = LinguisticVariable(name, terms_from_centers(*centers), (lo, hi))
    return variable, centers, fallback, result


def calibrate(values, c=3, m=2.0, tol=1e-6, max_iter=300, padding=0.05, degenerate_width=0.1):
    """
    Calibrate every input variable

    Args:
        values: Mapping variable name -> epoch series, e.g. {'A': [...], 'V': [...], 'D': [...]}
        c, m, tol, max_iter: Fuzzy C-means parameters
        padding: Universe margin as a fraction of the observed range
        degenerate_width: Universe width for a constant series

    Returns:
        Calibration
    """
    variables, centers, fallback, fcm = {}, {}, {}, {}
    for name, series in values.items():
        variables[name], centers[name], fallback[name], fcm[name] = calibrate_variable(
            name, series, c=c, m=m, tol=tol, max_iter=max_iter,
            padding=padding, degenerate_width=degenerate_width,
        )
    return Calibration(variables, centers, fallback, fcm)
