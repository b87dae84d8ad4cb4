"""
Report and plot-data emission
Reports go to report.csv or report.json; plot data goes to two-column
CSV files under plots/
"""
import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from vigil.bands import REPORT_BANDS
from vigil.features import ChannelRole
from vigil.fourier import fft, ifft
from vigil.pipeline import epoch_recording
from vigil.spectral import band_bins, power_spectrum, waveform
from vigil.utils import format_seconds, slugify

logger = logging.getLogger(__name__)

PLOT_DIR = 'plots'
FEATURE_COLUMNS = ('arousal', 'valence', 'dominance', 'ds', 'indeterminate')


def report_columns(report):
    """Column names in report order"""
    powers = [
        f'{role.value.lower()}_{band.name.lower()}'
        for role in ChannelRole for band in REPORT_BANDS
    ]
    return ['start_time_s', *powers, *FEATURE_COLUMNS, *report.rule_labels]


def _round(value, digits):
    if value is None:
        return None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(f'{float(value):.{digits}g}')


def report_records(report, digits=9):
    """
    Report rows as flat dicts in column order

    Args:
        report: DrowsinessReport
        digits: Significant digits kept in every decimal value

    Returns:
        List of dicts
    """
    records = []
    for row in report.rows:
        record = {'start_time_s': row.start_time_s}
        for role in ChannelRole:
            for band in REPORT_BANDS:
                name = band.name.lower()
                record[f'{role.value.lower()}_{name}'] = row.powers[role.value][name]
        record['arousal'] = row.features.arousal
        record['valence'] = row.features.valence
        record['dominance'] = row.features.dominance
        record['ds'] = row.ds
        record['indeterminate'] = row.indeterminate
        record.update(zip(report.rule_labels, row.classification.strengths))
        records.append({key: _round(value, digits) for key, value in record.items()})
    return records


def report_frame(report, digits=9):
    """Report rows as a DataFrame; an empty report keeps its header"""
    return pd.DataFrame(report_records(report, digits), columns=report_columns(report))


def _rounded_tree(value, digits):
    if isinstance(value, dict):
        return {key: _rounded_tree(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded_tree(item, digits) for item in value]
    if isinstance(value, str):
        return value
    return _round(value, digits)


def report_document(report, digits=9):
    """
    Full report as a JSON-ready dict

    Holds the rows plus flagged epochs, calibration centers, the channel map
    and the summary; decimal values keep the given significant digits.
    """
    calibration = {}
    for name, centers in report.calibration.centers.items():
        result = report.calibration.fcm.get(name)
        calibration[name.lower()] = {
            'centers': list(centers),
            'fallback': report.calibration.fallback[name],
            'iterations': result.iterations if result else 0,
            'converged': result.converged if result else False,
        }
    document = {
        'columns': report_columns(report),
        'rows': report_records(report, digits),
        'flagged_epochs': [
            {'index': f.index, 'start_time_s': f.start_time_s, 'reason': f.reason}
            for f in report.flagged
        ],
        'calibration': calibration,
        'channel_map': report.channel_map.as_dict(),
        'epoch_seconds': report.epoch_seconds,
        'discarded_tail_s': report.discarded_tail_s,
        'summary': report.summary,
    }
    return _rounded_tree(document, digits)


def emit_report(report, output_dir, fmt='csv', digits=9):
    """
    Write the report

    Args:
        report: DrowsinessReport
        output_dir: Directory receiving report.csv or report.json
        fmt: 'csv' or 'json'
        digits: Significant digits of decimal values

    Returns:
        Path of the written file

    Raises:
        OSError: the file cannot be written
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not report.rows:
        logger.warning("Report has no rows: every epoch was flagged or discarded")

    if fmt == 'json':
        path = out / 'report.json'
        path.write_text(json.dumps(report_document(report, digits), indent=2, allow_nan=False) + '\n',
                        encoding='utf-8')
    else:
        path = out / 'report.csv'
        report_frame(report, digits).to_csv(
            path, index=False, float_format=f'%.{digits}g', lineterminator='\n'
        )
    logger.info("Wrote %s", path)
    return path


def select_epochs(epochs, selectors):
    """
    Pick the epochs to plot

    Args:
        epochs: Epochs in time order
        selectors: Names from 'start', 'middle', 'end', 'all'

    Returns:
        Distinct epochs in time order
    """
    if 'all' in selectors:
        return list(epochs)
    positions = {'start': 0, 'middle': (len(epochs) - 1) // 2, 'end': len(epochs) - 1}
    chosen = sorted({positions[name] for name in selectors})
    return [epochs[i] for i in chosen]


def plot_series(samples, sample_rate):
    """
    Waveforms of one epoch channel

    Returns:
        Dict series name -> samples: raw, one waveform per report band,
        residual (DC, 7-8 Hz gap and gamma) and alpha_vs_beta, the
        instantaneous alpha^2 - beta^2 power difference
    """
    spectrum = fft(samples, sample_rate)
    series = {'raw': np.asarray(samples, dtype=np.float64)}
    covered = np.zeros(spectrum.n, dtype=bool)
    for band in REPORT_BANDS:
        series[band.name.lower()] = waveform(spectrum, band)
        covered |= band_bins(spectrum, band)
    series['residual'] = np.real(ifft(np.where(covered, 0, spectrum.coefficients)))
    series['alpha_vs_beta'] = series['alpha'] ** 2 - series['beta'] ** 2
    return series


def _write_series(path, axis, values, digits, axis_name='time_s'):
    frame = pd.DataFrame({axis_name: axis, 'value': values})
    frame.to_csv(path, index=False, float_format=f'%.{digits}g', lineterminator='\n')


def emit_plot_data(report, recording, settings):
    """
    Write plot data for the selected epochs

    Files are named plots/epoch_<start s>_<channel>_<series>.csv. Waveform
    series have columns time_s,value; the power_spectrum series has
    freq_hz,value.

    Args:
        report: DrowsinessReport, supplying the channel map
        recording: EdfRecording the report was computed from
        settings: PipelineConfig; nothing is written unless settings.plots is set

    Returns:
        List of written paths
    """
    if not settings.plots:
        return []
    out = Path(settings.output_dir) / PLOT_DIR
    out.mkdir(parents=True, exist_ok=True)

    epochs, _ = epoch_recording(recording, report.channel_map, settings)
    written = []
    for epoch in select_epochs(epochs, settings.plot_epochs):
        times = epoch.start_time_s + np.arange(epoch.length) / epoch.sample_rate
        for label in report.channel_map.labels:
            prefix = f'epoch_{format_seconds(epoch.start_time_s)}_{slugify(label)}'
            samples = epoch.samples(label)
            for name, values in plot_series(samples, epoch.sample_rate).items():
                path = out / f'{prefix}_{name}.csv'
                _write_series(path, times, values, settings.significant_digits)
                written.append(path)
            freqs, power = power_spectrum(fft(samples, epoch.sample_rate))
            path = out / f'{prefix}_power_spectrum.csv'
            _write_series(path, freqs, power, settings.significant_digits, axis_name='freq_hz')
            written.append(path)
    logger.info("Wrote %d plot files to %s", len(written), out)
    return written
