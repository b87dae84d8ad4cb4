"""
Epoching and frequency-domain band analysis
Signals are cut into fixed windows, transformed with the exact-length FFT,
band-pass filtered by zeroing bins outside a band, and reduced to band
power by squaring spectral amplitudes. No window function is applied.
"""
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from vigil.errors import BandError, ChannelError, EpochError
from vigil.fourier import Spectrum, fft, ifft

logger = logging.getLogger(__name__)

EPOCH_MODES = ('start', 'middle', 'end', 'all')


@dataclass(frozen=True)
class Epoch:
    """A fixed-duration window of one or more equally sampled channels"""

    channels: dict
    sample_rate: float
    start_time_s: float
    duration_s: float = 20.0
    index: int = 0
    length: int = field(init=False)

    def __post_init__(self):
        expected = window_length(self.duration_s, self.sample_rate)
        for label, samples in self.channels.items():
            if len(samples) != expected:
                raise EpochError(f"channel {label!r} has {len(samples)} samples, expected {expected}")
        object.__setattr__(self, 'length', expected)

    @property
    def labels(self):
        return tuple(self.channels)

    def samples(self, channel):
        """Samples of one channel"""
        if channel not in self.channels:
            raise ChannelError(f"epoch has no channel {channel!r}; available: {', '.join(self.channels)}")
        return self.channels[channel]


def window_length(duration_s, sample_rate):
    """
    Number of samples in a window

    Raises:
        EpochError: duration is not positive or not a whole number of samples
    """
    if not duration_s > 0:
        raise EpochError(f"epoch duration must be > 0, got {duration_s}")
    exact = duration_s * sample_rate
    length = int(round(exact))
    if length < 1 or abs(exact - length) > 1e-9 * max(1.0, exact):
        raise EpochError(f"{duration_s} s at {sample_rate} Hz is not a whole number of samples")
    return length


def make_epochs(signal, sample_rate, duration_s=20.0, mode='all'):
    """
    Cut a signal into analysis windows

    Args:
        signal: Sample sequence, or mapping label -> sequence sharing one rate
        sample_rate: Sampling rate in Hz
        duration_s: Window length in seconds
        mode: 'start', 'middle' or 'end' for one window at that position,
            'all' for consecutive non-overlapping windows (partial tail dropped)

    Returns:
        List of Epoch
    """
    if mode not in EPOCH_MODES:
        raise EpochError(f"unknown epoch mode {mode!r}; expected one of {', '.join(EPOCH_MODES)}")
    channels = dict(signal) if isinstance(signal, Mapping) else {'signal': signal}
    if not channels:
        raise EpochError("no channels to epoch")
    channels = {label: np.asarray(samples, dtype=np.float64) for label, samples in channels.items()}

    lengths = {len(samples) for samples in channels.values()}
    if len(lengths) != 1:
        raise EpochError("channels have different lengths")
    total = lengths.pop()
    window = window_length(duration_s, sample_rate)
    if total < window:
        raise EpochError(f"signal of {total / sample_rate:g} s is shorter than one {duration_s:g} s epoch")

    if mode == 'start':
        starts = [0]
    elif mode == 'middle':
        starts = [(total - window) // 2]
    elif mode == 'end':
        starts = [total - window]
    else:
        starts = list(range(0, total - window + 1, window))

    epochs = [
        Epoch(
            channels={label: samples[start:start + window] for label, samples in channels.items()},
            sample_rate=float(sample_rate),
            start_time_s=start / sample_rate,
            duration_s=float(duration_s),
            index=i,
        )
        for i, start in enumerate(starts)
    ]
    logger.debug("Cut %d %s epoch(s) of %g s", len(epochs), mode, duration_s)
    return epochs


def band_bins(spectrum, band):
    """
    Boolean mask of the bins belonging to a band

    A bin belongs when low <= f < high, f being its folded frequency, so the
    negative-frequency partner of every kept bin is kept too. DC never
    belongs. Only an open-ended band reaches the Nyquist bin; a finite
    band whose upper edge sits exactly at Nyquist stops short of it.

    Raises:
        BandError: the band starts above Nyquist
    """
    nyquist = spectrum.nyquist
    if band.low_hz > nyquist:
        raise BandError(f"band {band.name} starts at {band.low_hz} Hz, above Nyquist {nyquist} Hz")
    freqs = spectrum.folded_frequencies()
    # bins within a hair of an edge count as on the edge
    eps = 1e-9 * spectrum.sample_rate / spectrum.n
    mask = freqs >= band.low_hz - eps
    if not band.open_ended:
        mask &= freqs < band.high_hz - eps
    mask[0] = False
    return mask


def band_mask(spectrum, band):
    """
    Band-pass filter in the frequency domain

    Args:
        spectrum: Spectrum
        band: Band

    Returns:
        Spectrum with every bin outside the band (and DC) zeroed
    """
    return Spectrum(np.where(band_bins(spectrum, band), spectrum.coefficients, 0), spectrum.sample_rate)


def _power(spectrum, mask):
    power = np.sum(np.abs(spectrum.coefficients) ** 2 * mask, axis=-1) / spectrum.n ** 2
    return float(power) if np.ndim(power) == 0 else power


def band_power(spectrum, band):
    """
    Mean-square signal power attributable to a band

    Args:
        spectrum: Spectrum
        band: Band

    Returns:
        (1 / n^2) * sum of |X[k]|^2 over the band's bins, in uV^2; an array
        over the leading axes for a batched spectrum
    """
    return _power(spectrum, band_bins(spectrum, band))


def band_powers(spectrum, bands):
    """Band powers keyed by lowercase band name"""
    return {band.name.lower(): band_power(spectrum, band) for band in bands}


def total_power(spectrum):
    """Mean-square power of every non-DC bin"""
    mask = np.ones(spectrum.n, dtype=bool)
    mask[0] = False
    return _power(spectrum, mask)


def mean_square(spectrum):
    """Mean-square power of the whole signal, DC included"""
    return _power(spectrum, np.ones(spectrum.n, dtype=bool))


def power_spectrum(spectrum):
    """
    One-sided power spectrum: squared amplitude of each non-negative frequency

    Bins strictly between DC and Nyquist carry their negative-frequency
    partner, so the powers sum to mean_square(spectrum).

    Returns:
        (frequencies in Hz for bins 0 .. n/2, power in uV^2 per bin)
    """
    n = spectrum.n
    power = np.abs(spectrum.coefficients[..., :n // 2 + 1]) ** 2 / n ** 2
    power[..., 1:(n + 1) // 2] *= 2
    return spectrum.frequencies(), power


def dc_component(spectrum):
    """Signal mean recovered from the DC bin"""
    dc = np.real(spectrum.coefficients[..., 0]) / spectrum.n
    return float(dc) if np.ndim(dc) == 0 else dc


def waveform(spectrum, band):
    """
    Time-domain signal of one band

    Returns:
        Real array; the imaginary residue of the inverse transform is dropped
    """
    return np.real(ifft(band_mask(spectrum, band)))


def band_waveform(epoch, channel, band):
    """
    Band-limited waveform of one epoch channel

    Args:
        epoch: Epoch
        channel: Channel label within the epoch
        band: Band

    Returns:
        Real sample array of the epoch's length
    """
    return waveform(fft(epoch.samples(channel), epoch.sample_rate), band)
