"""
Arousal, valence and dominance features
Ratios of alpha and beta band power over seven electrode roles:

    A = alpha(AF3 + AF4 + F3 + F4) / beta(AF3 + AF4 + F3 + F4)
    V = alpha(F4) / beta(F4) - alpha(F3) / beta(F3)
    D = beta(FC6) / alpha(FC6) + beta(F8) / alpha(F8) + beta(P8) / alpha(P8)

Roles are mapped onto recording channels by a ChannelMap; several roles
may share one channel.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from vigil.bands import REPORT_BANDS
from vigil.edf import channel_index
from vigil.errors import ChannelError, FeatureUndefinedError
from vigil.fourier import fft
from vigil.spectral import band_powers, mean_square, total_power

logger = logging.getLogger(__name__)

# a denominator at or below this share of the involved signal power is treated as zero
UNDEFINED_RATIO = 1.0e-12

DEFAULT_FRONTAL_LABEL = 'EEG Fpz-Cz'
DEFAULT_PARIETAL_LABEL = 'EEG Pz-Oz'


class ChannelRole(str, Enum):
    """Electrode positions the features are defined over"""

    AF3 = 'AF3'
    AF4 = 'AF4'
    F3 = 'F3'
    F4 = 'F4'
    FC6 = 'FC6'
    F8 = 'F8'
    P8 = 'P8'


AROUSAL_ROLES = (ChannelRole.AF3, ChannelRole.AF4, ChannelRole.F3, ChannelRole.F4)
DOMINANCE_ROLES = (ChannelRole.FC6, ChannelRole.F8, ChannelRole.P8)


@dataclass(frozen=True)
class ChannelMap:
    """Role -> EDF channel label, total over the seven roles"""

    roles: dict

    def __post_init__(self):
        roles = {}
        for role, label in self.roles.items():
            role = ChannelRole(role)
            if not str(label).strip():
                raise ChannelError(f"role {role.value} maps to an empty label")
            roles[role] = str(label).strip()
        missing = [role.value for role in ChannelRole if role not in roles]
        if missing:
            raise ChannelError(f"channel map is missing roles: {', '.join(missing)}")
        object.__setattr__(self, 'roles', {role: roles[role] for role in ChannelRole})

    def label(self, role):
        return self.roles[ChannelRole(role)]

    @property
    def labels(self):
        """Distinct channel labels, in role order"""
        return tuple(dict.fromkeys(self.roles.values()))

    def resolve(self, recording):
        """
        Check every mapped label against a recording

        Args:
            recording: EdfRecording

        Returns:
            Dict label -> signal index

        Raises:
            ChannelError: a label is missing or ambiguous
        """
        return {label: channel_index(recording, label) for label in self.labels}

    def as_dict(self):
        return {role.value: label for role, label in self.roles.items()}


def default_channel_map():
    """
    Channel map for sleep-EDF recordings

    The six frontal roles read the Fpz-Cz derivation and P8 reads Pz-Oz.
    With this map V is always 0, because F3 and F4 share a channel.
    """
    roles = {role: DEFAULT_FRONTAL_LABEL for role in ChannelRole}
    roles[ChannelRole.P8] = DEFAULT_PARIETAL_LABEL
    return ChannelMap(roles)


def parse_channel_map(text):
    """
    Parse 'ROLE = EDF_LABEL' lines

    Blank lines and '#' comments are ignored; all seven roles are required.

    Args:
        text: File content

    Returns:
        ChannelMap
    """
    roles = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ChannelError(f"channel map line {number}: expected ROLE = LABEL, got {raw.strip()!r}")
        name, label = (part.strip() for part in line.split('=', 1))
        try:
            role = ChannelRole(name.upper())
        except ValueError:
            known = ', '.join(role.value for role in ChannelRole)
            raise ChannelError(f"channel map line {number}: unknown role {name!r}; known: {known}") from None
        if role in roles:
            raise ChannelError(f"channel map line {number}: role {role.value} mapped twice")
        roles[role] = label
    return ChannelMap(roles)


def load_channel_map(path):
    """Read a channel map file"""
    return parse_channel_map(Path(path).read_text(encoding='ascii', errors='replace'))


@dataclass(frozen=True)
class BandPowerTable:
    """Band powers per role for one epoch

    powers maps role -> {band name -> uV^2}; total_power maps role -> non-DC
    power and signal_power maps role -> mean square including DC.
    """

    powers: dict
    total_power: dict
    signal_power: dict = None

    def scale(self, role):
        """Power a denominator of this role is compared against"""
        return (self.signal_power or self.total_power)[ChannelRole(role)]

    def power(self, role, band):
        return self.powers[ChannelRole(role)][band]

    def alpha(self, role):
        return self.power(role, 'alpha')

    def beta(self, role):
        return self.power(role, 'beta')

    @classmethod
    def from_channels(cls, channel_powers, channel_totals, channel_map, channel_signal=None):
        """
        Spread per-channel powers over the roles that read each channel

        Args:
            channel_powers: label -> {band name -> power}
            channel_totals: label -> total non-DC power
            channel_map: ChannelMap
            channel_signal: label -> mean-square power, optional

        Returns:
            BandPowerTable
        """
        powers = {role: dict(channel_powers[label]) for role, label in channel_map.roles.items()}
        totals = {role: channel_totals[label] for role, label in channel_map.roles.items()}
        signal = None
        if channel_signal is not None:
            signal = {role: channel_signal[label] for role, label in channel_map.roles.items()}
        return cls(powers, totals, signal)


def band_power_table(epoch, channel_map, bands=REPORT_BANDS):
    """
    Band powers for every role of an epoch

    Each distinct channel is transformed once and shared by its roles.

    Args:
        epoch: Epoch holding the mapped channels
        channel_map: ChannelMap
        bands: Bands to measure

    Returns:
        BandPowerTable
    """
    channel_powers = {}
    channel_totals = {}
    channel_signal = {}
    for label in channel_map.labels:
        spectrum = fft(epoch.samples(label), epoch.sample_rate)
        channel_powers[label] = band_powers(spectrum, bands)
        channel_totals[label] = total_power(spectrum)
        channel_signal[label] = mean_square(spectrum)
    return BandPowerTable.from_channels(channel_powers, channel_totals, channel_map, channel_signal)


@dataclass(frozen=True)
class FeatureVector:
    """Arousal, valence and dominance of one epoch"""

    arousal: float
    valence: float
    dominance: float
    epoch_start_s: float = 0.0

    def as_tuple(self):
        return (self.arousal, self.valence, self.dominance)


def _check_denominator(feature, term, value, scale, undefined_ratio):
    if not value > 0 or value <= undefined_ratio * scale:
        raise FeatureUndefinedError(feature, term, value)


def arousal(bp, undefined_ratio=UNDEFINED_RATIO):
    """
    Arousal: frontal alpha power over frontal beta power

    Args:
        bp: BandPowerTable
        undefined_ratio: Relative floor below which the denominator counts as zero

    Returns:
        A

    Raises:
        FeatureUndefinedError: frontal beta power sum is zero or negligible
    """
    alpha = sum(bp.alpha(role) for role in AROUSAL_ROLES)
    beta = sum(bp.beta(role) for role in AROUSAL_ROLES)
    scale = sum(bp.scale(role) for role in AROUSAL_ROLES)
    _check_denominator('arousal', 'beta(AF3+AF4+F3+F4)', beta, scale, undefined_ratio)
    return alpha / beta


def valence(bp, undefined_ratio=UNDEFINED_RATIO):
    """
    Valence: alpha/beta at F4 minus alpha/beta at F3

    Raises:
        FeatureUndefinedError: beta power at F3 or F4 is zero or negligible
    """
    for role in (ChannelRole.F4, ChannelRole.F3):
        _check_denominator('valence', f'beta({role.value})', bp.beta(role),
                           bp.scale(role), undefined_ratio)
    f4 = ChannelRole.F4
    f3 = ChannelRole.F3
    return bp.alpha(f4) / bp.beta(f4) - bp.alpha(f3) / bp.beta(f3)


def dominance(bp, undefined_ratio=UNDEFINED_RATIO):
    """
    Dominance: sum of beta/alpha at FC6, F8 and P8

    Raises:
        FeatureUndefinedError: alpha power at one of the roles is zero or negligible
    """
    total = 0.0
    for role in DOMINANCE_ROLES:
        _check_denominator('dominance', f'alpha({role.value})', bp.alpha(role),
                           bp.scale(role), undefined_ratio)
        total += bp.beta(role) / bp.alpha(role)
    return total


def features_from_table(bp, epoch_start_s=0.0, undefined_ratio=UNDEFINED_RATIO):
    """
    Evaluate all three features on a band power table

    Returns:
        FeatureVector
    """
    return FeatureVector(
        arousal=arousal(bp, undefined_ratio),
        valence=valence(bp, undefined_ratio),
        dominance=dominance(bp, undefined_ratio),
        epoch_start_s=epoch_start_s,
    )


def extract_features(epoch, channel_map, undefined_ratio=UNDEFINED_RATIO):
    """
    Band powers and features of one epoch

    Args:
        epoch: Epoch holding every mapped channel
        channel_map: ChannelMap

    Returns:
        FeatureVector stamped with the epoch start time

    Raises:
        FeatureUndefinedError: a ratio denominator vanishes
        ChannelError: a mapped channel is absent from the epoch
    """
    table = band_power_table(epoch, channel_map)
    return features_from_table(table, epoch.start_time_s, undefined_ratio)
