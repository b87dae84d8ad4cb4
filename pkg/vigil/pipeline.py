"""
Drowsiness analysis pipeline
EDF -> epochs -> band powers -> features -> calibration -> classification

Pass 1 extracts features from every epoch, calibration runs once on the
collected series, and pass 2 classifies each epoch with the calibrated system.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from vigil.bands import REPORT_BANDS
from vigil.config import config as default_settings
from vigil.edf import read_edf
from vigil.errors import ChannelError, ConfigError, FeatureUndefinedError, NoValidEpochsError
from vigil.features import (
    BandPowerTable,
    ChannelRole,
    default_channel_map,
    features_from_table,
    load_channel_map,
)
from vigil.fourier import fft
from vigil.fuzzy.calibration import calibrate
from vigil.fuzzy.engine import MIN_RESOLUTION, FuzzySystem
from vigil.fuzzy.rules import default_rule_base, load_rule_base
from vigil.spectral import EPOCH_MODES, band_powers, make_epochs, mean_square, total_power

logger = logging.getLogger(__name__)

REPORT_FORMATS = ('csv', 'json')
PLOT_SELECTORS = ('start', 'middle', 'end', 'all')
DROWSY_THRESHOLD = 0.5


@dataclass(frozen=True)
class PipelineConfig:
    """Settings of one analysis run"""

    input_path: str
    channel_map_path: str = None
    epoch_seconds: float = 20.0
    epoch_mode: str = 'all'
    output_dir: str = 'vigil_out'
    report_format: str = 'csv'
    plots: bool = False
    plot_epochs: tuple = ('start', 'middle', 'end')
    clusters: int = 3
    fuzzifier: float = 2.0
    tol: float = 1.0e-6
    max_iter: int = 300
    rules_path: str = None
    output_resolution: int = 10001
    undefined_ratio: float = 1.0e-12
    universe_padding: float = 0.05
    degenerate_width: float = 0.1
    significant_digits: int = 9

    def __post_init__(self):
        if not self.epoch_seconds > 0:
            raise ConfigError(f"epoch duration must be > 0, got {self.epoch_seconds}")
        if self.epoch_mode not in EPOCH_MODES:
            raise ConfigError(f"epoch mode must be one of {', '.join(EPOCH_MODES)}, got {self.epoch_mode!r}")
        if self.report_format not in REPORT_FORMATS:
            raise ConfigError(f"report format must be csv or json, got {self.report_format!r}")
        if self.clusters != 3:
            raise ConfigError(f"calibration needs exactly 3 clusters, got {self.clusters}")
        if not self.fuzzifier > 1:
            raise ConfigError(f"fuzzifier must be > 1, got {self.fuzzifier}")
        if not self.tol > 0 or self.max_iter < 1:
            raise ConfigError("fcm tol must be > 0 and max_iter >= 1")
        if self.output_resolution < MIN_RESOLUTION:
            raise ConfigError(f"output resolution must be >= {MIN_RESOLUTION}, got {self.output_resolution}")
        if not 1 <= self.significant_digits <= 17:
            raise ConfigError(f"significant digits must lie in 1..17, got {self.significant_digits}")
        plot_epochs = (self.plot_epochs,) if isinstance(self.plot_epochs, str) else tuple(self.plot_epochs)
        unknown = [name for name in plot_epochs if name not in PLOT_SELECTORS]
        if unknown or not plot_epochs:
            raise ConfigError(f"plot epochs must be drawn from {', '.join(PLOT_SELECTORS)}, got {plot_epochs}")
        object.__setattr__(self, 'plot_epochs', plot_epochs)
        object.__setattr__(self, 'input_path', str(self.input_path))

    @classmethod
    def from_config(cls, input_path, settings=None, **overrides):
        """
        Build a run configuration from config.yaml values

        Args:
            input_path: EDF file to analyse
            settings: ConfigManager, defaults to the global instance
            **overrides: Field values that win over the file; None is ignored

        Returns:
            PipelineConfig
        """
        settings = settings or default_settings
        values = {
            'epoch_seconds': settings.get('epoch', 'seconds'),
            'epoch_mode': settings.get('epoch', 'mode'),
            'output_dir': settings.get('report', 'output_dir'),
            'report_format': settings.get('report', 'format'),
            'significant_digits': settings.get('report', 'significant_digits'),
            'plots': settings.get('plots', 'enabled'),
            'plot_epochs': settings.get('plots', 'epochs'),
            'clusters': settings.get('fcm', 'clusters'),
            'fuzzifier': settings.get('fcm', 'fuzzifier'),
            'tol': settings.get('fcm', 'tol'),
            'max_iter': settings.get('fcm', 'max_iter'),
            'output_resolution': settings.get('fuzzy', 'output_resolution'),
            'universe_padding': settings.get('fuzzy', 'universe_padding'),
            'degenerate_width': settings.get('fuzzy', 'degenerate_width'),
            'undefined_ratio': settings.get('features', 'undefined_ratio'),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(input_path=input_path, **values)


@dataclass(frozen=True)
class EpochRow:
    """One classified epoch"""

    index: int
    start_time_s: float
    powers: dict
    features: object
    classification: object

    @property
    def ds(self):
        return self.classification.ds

    @property
    def indeterminate(self):
        return self.classification.indeterminate


@dataclass(frozen=True)
class FlaggedEpoch:
    """An epoch left out of classification, with the reason"""

    index: int
    start_time_s: float
    reason: str


@dataclass(frozen=True)
class DrowsinessReport:
    rows: tuple
    flagged: tuple
    calibration: object
    channel_map: object
    rule_labels: tuple
    epoch_seconds: float
    discarded_tail_s: float = 0.0
    summary: dict = field(default_factory=dict)

    @property
    def epoch_count(self):
        return len(self.rows) + len(self.flagged)

    def ds_values(self):
        return np.array([row.ds for row in self.rows])


def _channel_means(rows, channel_map, band):
    # one role per distinct channel so shared channels count once
    roles = {}
    for role, label in channel_map.roles.items():
        roles.setdefault(label, role.value)
    return np.array([np.mean([row.powers[role][band] for role in roles.values()]) for row in rows])


def summarize(rows, flagged, channel_map):
    """
    Recording-level statistics

    Indeterminate rows and flagged epochs are left out of the DS figures.
    Band trends compare the mean power of the first and second half of the
    rows, averaged over the distinct mapped channels.

    Returns:
        Dict of summary values; None where a statistic has no data
    """
    scored = np.array([row.ds for row in rows if not row.indeterminate])
    summary = {
        'epochs': len(rows) + len(flagged),
        'classified': len(rows),
        'flagged': len(flagged),
        'indeterminate': len(rows) - scored.size,
        'mean_ds': float(scored.mean()) if scored.size else None,
        'fraction_ds_above_half': float(np.mean(scored > DROWSY_THRESHOLD)) if scored.size else None,
    }
    half = len(rows) // 2
    trends = {}
    for band in REPORT_BANDS:
        name = band.name.lower()
        if half == 0:
            trends[name] = {'first_half': None, 'second_half': None, 'ratio': None}
            continue
        means = _channel_means(rows, channel_map, name)
        first = float(means[:half].mean())
        second = float(means[half:].mean())
        trends[name] = {
            'first_half': first,
            'second_half': second,
            'ratio': second / first if first > 0 else None,
        }
    summary['band_trends'] = trends
    return summary


def _mapped_channels(recording, channel_map):
    indices = channel_map.resolve(recording)
    rates = {label: recording.sample_rate(i) for label, i in indices.items()}
    if len(set(rates.values())) > 1:
        detail = ', '.join(f'{label} {rate:g} Hz' for label, rate in rates.items())
        raise ChannelError(f"mapped channels have different sample rates: {detail}")
    samples = {label: recording.samples[i] for label, i in indices.items()}
    return samples, next(iter(rates.values()))


def _batch_powers(epochs, labels):
    """Band, total and mean-square power per channel as arrays over epochs"""
    rate = epochs[0].sample_rate
    powers, totals, signal = {}, {}, {}
    for label in labels:
        spectrum = fft(np.stack([epoch.samples(label) for epoch in epochs]), rate)
        powers[label] = band_powers(spectrum, REPORT_BANDS)
        totals[label] = np.atleast_1d(total_power(spectrum))
        signal[label] = np.atleast_1d(mean_square(spectrum))
    return powers, totals, signal


def load_rules(settings):
    if settings.rules_path:
        return load_rule_base(settings.rules_path)
    return default_rule_base()


def load_map(settings):
    if settings.channel_map_path:
        return load_channel_map(settings.channel_map_path)
    return default_channel_map()


def epoch_recording(recording, channel_map, settings):
    """
    Cut the mapped channels of a recording into epochs

    Returns:
        (epochs, recording length in seconds over the mapped channels)
    """
    samples, rate = _mapped_channels(recording, channel_map)
    epochs = make_epochs(samples, rate, settings.epoch_seconds, settings.epoch_mode)
    length_s = len(next(iter(samples.values()))) / rate
    return epochs, length_s


def extract_epoch_features(epochs, channel_map, undefined_ratio):
    """
    Pass 1: features of every epoch

    Returns:
        (list of (epoch, table, FeatureVector), list of FlaggedEpoch)
    """
    powers, totals, signal = _batch_powers(epochs, channel_map.labels)
    valid, flagged = [], []
    for i, epoch in enumerate(epochs):
        table = BandPowerTable.from_channels(
            {label: {band: float(values[i]) for band, values in powers[label].items()} for label in powers},
            {label: float(values[i]) for label, values in totals.items()},
            channel_map,
            {label: float(values[i]) for label, values in signal.items()},
        )
        try:
            features = features_from_table(table, epoch.start_time_s, undefined_ratio)
        except FeatureUndefinedError as e:
            logger.warning("Epoch %d at %g s flagged: %s", epoch.index, epoch.start_time_s, e)
            flagged.append(FlaggedEpoch(epoch.index, epoch.start_time_s, str(e)))
            continue
        valid.append((epoch, table, features))
    return valid, flagged


def run_pipeline(settings, recording=None):
    """
    Analyse one recording

    Args:
        settings: PipelineConfig
        recording: Already parsed EdfRecording, read from settings.input_path when None

    Returns:
        DrowsinessReport

    Raises:
        EdfFormatError: the input is not valid EDF
        ChannelError: the channel map does not resolve
        NoValidEpochsError: every epoch was flagged
    """
    if recording is None:
        recording = read_edf(settings.input_path)
    logger.info(
        "Read %s: %d signals, %d records, %g s",
        settings.input_path, recording.header.num_signals, recording.header.num_records, recording.duration_s,
    )
    channel_map = load_map(settings)
    rules = load_rules(settings)

    epochs, length_s = epoch_recording(recording, channel_map, settings)
    valid, flagged = extract_epoch_features(epochs, channel_map, settings.undefined_ratio)
    if not valid:
        raise NoValidEpochsError(f"all {len(epochs)} epochs were flagged feature-undefined")

    series = {
        'A': [features.arousal for _, _, features in valid],
        'V': [features.valence for _, _, features in valid],
        'D': [features.dominance for _, _, features in valid],
    }
    calibration = calibrate(
        series, c=settings.clusters, m=settings.fuzzifier, tol=settings.tol, max_iter=settings.max_iter,
        padding=settings.universe_padding, degenerate_width=settings.degenerate_width,
    )
    system = FuzzySystem(rules, calibration.variables, resolution=settings.output_resolution)

    rows = []
    for epoch, table, features in valid:
        result = system.classify(features)
        powers = {role.value: dict(table.powers[role]) for role in ChannelRole}
        rows.append(EpochRow(epoch.index, epoch.start_time_s, powers, features, result))

    tail_s = 0.0
    if settings.epoch_mode == 'all':
        tail_s = length_s - len(epochs) * settings.epoch_seconds
        if tail_s > 0:
            logger.info("Dropped a %g s partial epoch at the end of the recording", tail_s)

    rows = tuple(rows)
    flagged = tuple(flagged)
    summary = summarize(rows, flagged, channel_map)
    if summary['mean_ds'] is not None and math.isfinite(summary['mean_ds']):
        logger.info(
            "Classified %d epochs (%d flagged): mean DS %.3f, %.0f%% above %.1f",
            len(rows), len(flagged), summary['mean_ds'],
            100 * summary['fraction_ds_above_half'], DROWSY_THRESHOLD,
        )
    return DrowsinessReport(
        rows=rows,
        flagged=flagged,
        calibration=calibration,
        channel_map=channel_map,
        rule_labels=tuple(rule.label for rule in rules),
        epoch_seconds=settings.epoch_seconds,
        discarded_tail_s=tail_s,
        summary=summary,
    )
