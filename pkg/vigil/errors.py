"""
Exception hierarchy for vigil
Input problems derive from InputError, I/O problems stay OSError
"""


class VigilError(Exception):
    """Base class for all vigil errors"""


class InputError(VigilError, ValueError):
    """Input data or configuration cannot be processed"""


class EdfFormatError(InputError):
    """Malformed, truncated or unrepresentable EDF content"""


class ChannelError(InputError):
    """Channel label or channel map cannot be resolved"""


class BandError(InputError):
    """Frequency band cannot be applied to a spectrum"""


class EpochError(InputError):
    """Signal cannot be cut into the requested epochs"""


class FeatureUndefinedError(InputError):
    """A feature ratio has a zero or negligible denominator"""

    def __init__(self, feature, term, value):
        self.feature = feature
        self.term = term
        self.value = value
        super().__init__(
            f"{feature} undefined: denominator {term} = {value:.3g}"
        )


class ClusteringError(InputError):
    """Fuzzy C-means cannot run on the given points"""


class RuleSyntaxError(InputError):
    """Malformed fuzzy rule text"""


class NoValidEpochsError(InputError):
    """Every epoch of the recording was flagged"""


class ConfigError(InputError):
    """Invalid pipeline configuration"""
