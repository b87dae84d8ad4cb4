"""
EEG frequency band definitions
Half-open intervals [low, high); an infinite upper edge clamps to Nyquist
"""
import math
from dataclasses import dataclass

from vigil.errors import BandError


@dataclass(frozen=True)
class Band:
    """Named frequency interval in Hz"""

    name: str
    low_hz: float
    high_hz: float

    def __post_init__(self):
        if not (0 <= self.low_hz < self.high_hz):
            raise BandError(f"band {self.name}: need 0 <= low < high, got [{self.low_hz}, {self.high_hz})")

    @property
    def open_ended(self):
        return math.isinf(self.high_hz)

    def __or__(self, other):
        """Union of two touching bands, e.g. THETA | GAP"""
        if self.high_hz != other.low_hz and other.high_hz != self.low_hz:
            raise BandError(f"bands {self.name} and {other.name} do not touch")
        return Band(f'{self.name}+{other.name}', min(self.low_hz, other.low_hz),
                    max(self.high_hz, other.high_hz))


DELTA = Band('Delta', 0.0, 4.0)
THETA = Band('Theta', 4.0, 7.0)
ALPHA = Band('Alpha', 8.0, 13.0)
MU = Band('Mu', 8.0, 12.0)
BETA = Band('Beta', 13.0, 30.0)
GAMMA = Band('Gamma', 30.0, math.inf)

# 7-8 Hz is unassigned between theta and alpha; kept for power accounting
GAP = Band('Gap', 7.0, 8.0)

BANDS = {
    'delta': DELTA,
    'theta': THETA,
    'alpha': ALPHA,
    'mu': MU,
    'beta': BETA,
    'gamma': GAMMA,
}

# Together with GAP these cover every non-DC bin exactly once
DISJOINT_BANDS = (DELTA, THETA, GAP, ALPHA, BETA, GAMMA)

# Bands carried into reports and plot data
REPORT_BANDS = (DELTA, THETA, ALPHA, BETA)


def get_band(name):
    """
    Get band by name

    Args:
        name: 'delta', 'theta', 'alpha', 'mu', 'beta', 'gamma' or 'gap'

    Returns:
        Band
    """
    key = name.lower()
    if key == 'gap':
        return GAP
    if key not in BANDS:
        raise BandError(f"unknown band {name!r}; known: {', '.join(BANDS)}, gap")
    return BANDS[key]
