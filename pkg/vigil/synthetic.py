"""
Synthetic EEG recordings
Sinusoid mixtures and seeded noise written through the EDF calibration, for
tests, benchmarks and the 'vigil synth' command
"""
import numpy as np

from vigil.edf import EdfRecording, SignalHeader
from vigil.errors import InputError
from vigil.features import DEFAULT_FRONTAL_LABEL, DEFAULT_PARIETAL_LABEL
from vigil.spectral import window_length

DEFAULT_RATE = 100
PHYSICAL_RANGE_UV = 200.0

# (frequency Hz, amplitude uV) per component
ALERT_BETA = (20.0, 20.0)
ALERT_ALPHA_AMPLITUDES = (3.0, 6.0, 12.0)
DROWSY_MIX = ((10.0, 40.0), (20.0, 4.0))
# the parietal channel carries the same rhythm at half amplitude
PARIETAL_SCALE = 0.5


def sinusoid(freq_hz, n, sample_rate, amplitude=1.0, phase=0.0):
    """n samples of amplitude * sin(2 pi f t + phase), t starting at 0"""
    t = np.arange(n) / sample_rate
    return amplitude * np.sin(2 * np.pi * freq_hz * t + phase)


def tone_mixture(components, n, sample_rate):
    """
    Sum of sinusoids

    Args:
        components: Iterable of (frequency Hz, amplitude)
        n: Number of samples
        sample_rate: Sampling rate in Hz

    Returns:
        Float array of length n
    """
    out = np.zeros(n)
    for freq, amplitude in components:
        out += sinusoid(freq, n, sample_rate, amplitude)
    return out


def eeg_signal_header(label, samples_per_record, physical_range=PHYSICAL_RANGE_UV):
    """Symmetric +/- physical_range uV channel over the full int16 span"""
    return SignalHeader(
        label=label,
        physical_min=-physical_range,
        physical_max=physical_range,
        digital_min=-32768,
        digital_max=32767,
        samples_per_record=samples_per_record,
        transducer='synthetic',
        physical_dim='uV',
    )


def _recording(channels, sample_rate, record_duration_s=1.0):
    spr = window_length(record_duration_s, sample_rate)
    signals = [eeg_signal_header(label, spr) for label in channels]
    return EdfRecording.from_physical(
        signals, list(channels.values()), record_duration_s,
        patient_id='synthetic', recording_id='vigil synthetic',
    )


def alert_drowsy_recording(duration_s=120.0, sample_rate=DEFAULT_RATE, epoch_s=20.0,
                           frontal_label=DEFAULT_FRONTAL_LABEL,
                           parietal_label=DEFAULT_PARIETAL_LABEL,
                           noise_uv=0.0, seed=0):
    """
    Two-channel recording that turns from alert to drowsy halfway through

    The first half is beta dominant: 20 Hz at 20 uV with a weak 10 Hz alpha
    whose amplitude cycles through ALERT_ALPHA_AMPLITUDES epoch by epoch.
    The second half is alpha dominant: 10 Hz at 40 uV over 4 uV of 20 Hz.
    Every epoch is synthesised from its own start, so drowsy epochs repeat
    exactly unless noise is added.

    Args:
        duration_s: Recording length, a whole number of epochs
        sample_rate: Samples per second
        epoch_s: Epoch length used to lay out the segments
        frontal_label, parietal_label: Channel labels
        noise_uv: Standard deviation of added white noise, 0 for none
        seed: Noise seed

    Returns:
        EdfRecording
    """
    window = window_length(epoch_s, sample_rate)
    count = window_length(duration_s, sample_rate) // window
    if count < 2 or count * window != window_length(duration_s, sample_rate):
        raise InputError(f"{duration_s} s must hold at least two whole {epoch_s} s epochs")

    segments = []
    for i in range(count):
        if i < count // 2:
            alpha = ALERT_ALPHA_AMPLITUDES[i % len(ALERT_ALPHA_AMPLITUDES)]
            mix = (ALERT_BETA, (10.0, alpha))
        else:
            mix = DROWSY_MIX
        segments.append(tone_mixture(mix, window, sample_rate))
    frontal = np.concatenate(segments)
    if noise_uv > 0:
        frontal = frontal + np.random.default_rng(seed).normal(0.0, noise_uv, frontal.size)
    return _recording({frontal_label: frontal, parietal_label: PARIETAL_SCALE * frontal}, sample_rate)


def noise_recording(duration_s=100.0, sample_rate=DEFAULT_RATE, epoch_s=20.0,
                    labels=(DEFAULT_FRONTAL_LABEL, DEFAULT_PARIETAL_LABEL),
                    sigma_uv=10.0, seed=0, flat_epochs=()):
    """
    Seeded white-noise recording

    Args:
        flat_epochs: Indices of epochs zeroed on the first channel, which
            leaves its alpha and beta power at zero there

    Returns:
        EdfRecording
    """
    n = window_length(duration_s, sample_rate)
    window = window_length(epoch_s, sample_rate)
    rng = np.random.default_rng(seed)
    channels = {label: np.clip(rng.normal(0.0, sigma_uv, n), -PHYSICAL_RANGE_UV, PHYSICAL_RANGE_UV)
                for label in labels}
    first = channels[labels[0]]
    for index in flat_epochs:
        first[index * window:(index + 1) * window] = 0.0
    return _recording(channels, sample_rate)
