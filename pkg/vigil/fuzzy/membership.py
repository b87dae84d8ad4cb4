"""
Triangular membership functions and linguistic variables
"""
from dataclasses import dataclass

import numpy as np

from vigil.errors import InputError

TERMS = ('S', 'M', 'L')


@dataclass(frozen=True)
class MembershipFunction:
    """Triangle with feet a, c and apex b

    a == b makes a left shoulder (degree 1 for every x <= b); b == c makes
    a right shoulder (degree 1 for every x >= b).
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c):
            raise InputError(f"membership breakpoints must satisfy a <= b <= c, got {self.a}, {self.b}, {self.c}")

    @property
    def left_shoulder(self):
        return self.a == self.b

    @property
    def right_shoulder(self):
        return self.b == self.c

    def degree(self, x):
        """
        Degree of membership

        Args:
            x: Scalar or array

        Returns:
            Array of degrees in [0, 1] with the shape of x
        """
        x = np.asarray(x, dtype=np.float64)
        y = np.zeros_like(x)
        if self.a < self.b:
            rising = (x > self.a) & (x < self.b)
            y = np.where(rising, (x - self.a) / (self.b - self.a), y)
        if self.b < self.c:
            falling = (x > self.b) & (x < self.c)
            y = np.where(falling, (self.c - x) / (self.c - self.b), y)
        y = np.where(x == self.b, 1.0, y)
        if self.left_shoulder:
            y = np.where(x <= self.b, 1.0, y)
        if self.right_shoulder:
            y = np.where(x >= self.b, 1.0, y)
        return y


def membership_degree(mf, x):
    """
    Evaluate a membership function at one point

    Args:
        mf: MembershipFunction
        x: Real value

    Returns:
        Degree in [0, 1]
    """
    return float(mf.degree(x))


@dataclass(frozen=True)
class LinguisticVariable:
    """Named variable with Small/Medium/Large terms over a universe"""

    name: str
    terms: dict
    universe: tuple

    def __post_init__(self):
        missing = [term for term in TERMS if term not in self.terms]
        if missing:
            raise InputError(f"variable {self.name} lacks terms {', '.join(missing)}")
        lo, hi = self.universe
        if not lo < hi:
            raise InputError(f"variable {self.name}: empty universe [{lo}, {hi}]")
        object.__setattr__(self, 'universe', (float(lo), float(hi)))

    def fuzzify(self, x):
        """Degree of x in every term"""
        return {term: membership_degree(mf, x) for term, mf in self.terms.items()}

    def apex(self, term):
        return self.terms[term].b

    def covers(self, samples=1001):
        """True when every sampled point of the universe belongs to some term"""
        grid = np.linspace(*self.universe, samples)
        total = sum(mf.degree(grid) for mf in self.terms.values())
        return bool(np.all(total > 0))
