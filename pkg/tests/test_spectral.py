"""
Unit tests for bands, epoching and band power
"""
import numpy as np
import pytest

from tests.conftest import EPOCH_N, RATE, sine
from vigil.bands import ALPHA, BETA, DELTA, DISJOINT_BANDS, GAMMA, GAP, THETA, Band, get_band
from vigil.errors import BandError, EpochError
from vigil.fourier import fft
from vigil.spectral import (
    band_bins,
    band_mask,
    band_power,
    band_powers,
    band_waveform,
    dc_component,
    make_epochs,
    mean_square,
    power_spectrum,
    total_power,
    waveform,
    window_length,
)


class TestBands:
    """Test the band table"""

    def test_edges(self):
        """Test the conventional band edges"""
        assert (DELTA.low_hz, DELTA.high_hz) == (0, 4)
        assert (THETA.low_hz, THETA.high_hz) == (4, 7)
        assert (ALPHA.low_hz, ALPHA.high_hz) == (8, 13)
        assert (BETA.low_hz, BETA.high_hz) == (13, 30)
        assert GAMMA.open_ended

    def test_lookup(self):
        """Test case-insensitive lookup by name"""
        assert get_band('alpha') is ALPHA
        with pytest.raises(BandError):
            get_band('omega')

    def test_union_of_touching_bands(self):
        """Test that theta and the gap join into 4-8 Hz"""
        joined = THETA | GAP
        assert (joined.low_hz, joined.high_hz) == (4.0, 8.0)
        with pytest.raises(BandError):
            DELTA | ALPHA

    def test_invalid_bounds(self):
        """Test that empty or negative bands are refused"""
        with pytest.raises(BandError):
            Band('bad', 5, 5)
        with pytest.raises(BandError):
            Band('bad', -1, 4)


class TestEpochs:
    """Test epoch cutting"""

    def test_whole_epochs(self):
        """Test that 60 s gives three 20 s epochs"""
        epochs = make_epochs(np.zeros(60 * RATE), RATE)
        assert len(epochs) == 3
        assert [e.start_time_s for e in epochs] == [0.0, 20.0, 40.0]
        assert all(e.length == EPOCH_N for e in epochs)

    def test_partial_tail_dropped(self):
        """Test that 70 s still gives three epochs"""
        assert len(make_epochs(np.zeros(70 * RATE), RATE)) == 3

    def test_positions(self):
        """Test the start, middle and end windows"""
        signal = np.arange(70 * RATE, dtype=float)
        assert make_epochs(signal, RATE, mode='start')[0].start_time_s == 0.0
        assert make_epochs(signal, RATE, mode='middle')[0].start_time_s == 25.0
        assert make_epochs(signal, RATE, mode='end')[0].start_time_s == 50.0

    def test_channels_stay_aligned(self):
        """Test that a mapping of channels is cut at the same offsets"""
        epochs = make_epochs({'a': np.arange(4000.0), 'b': -np.arange(4000.0)}, RATE)
        assert epochs[1].samples('a')[0] == 2000.0
        assert epochs[1].samples('b')[0] == -2000.0

    def test_errors(self):
        """Test short signals, fractional windows and unknown modes"""
        with pytest.raises(EpochError):
            make_epochs(np.zeros(10 * RATE), RATE)
        with pytest.raises(EpochError):
            window_length(0.005, RATE)
        with pytest.raises(EpochError):
            make_epochs(np.zeros(60 * RATE), RATE, mode='random')


class TestBandPower:
    """Test frequency-domain filtering and power"""

    def test_unit_alpha_sine(self):
        """Test that a unit 10 Hz sine has alpha power 0.5 and nothing elsewhere"""
        spectrum = fft(sine(10.0), RATE)
        assert band_power(spectrum, ALPHA) == pytest.approx(0.5, abs=1e-9)
        for band in (DELTA, THETA, BETA):
            assert band_power(spectrum, band) < 1e-12

    def test_half_open_edges(self):
        """Test that a 13 Hz tone counts as beta, not alpha"""
        spectrum = fft(sine(13.0), RATE)
        assert band_power(spectrum, BETA) == pytest.approx(0.5, abs=1e-9)
        assert band_power(spectrum, ALPHA) < 1e-12

    def test_dc_excluded(self):
        """Test that an offset adds nothing to delta"""
        spectrum = fft(np.full(EPOCH_N, 5.0), RATE)
        assert band_power(spectrum, DELTA) < 1e-12
        assert dc_component(spectrum) == pytest.approx(5.0)
        assert mean_square(spectrum) == pytest.approx(25.0)

    def test_disjoint_bands_account_for_all_power(self, rng):
        """Test that the disjoint bands plus the gap sum to the non-DC power"""
        for _ in range(100):
            spectrum = fft(rng.standard_normal(EPOCH_N) + 3.0, RATE)
            total = sum(band_power(spectrum, band) for band in DISJOINT_BANDS)
            assert total == pytest.approx(total_power(spectrum), rel=1e-9)

    def test_gap_isolated(self):
        """Test that a 7.5 Hz tone lands in the gap band only"""
        spectrum = fft(sine(7.5), RATE)
        assert band_power(spectrum, GAP) == pytest.approx(0.5, abs=1e-9)
        assert band_power(spectrum, THETA) < 1e-12
        assert band_power(spectrum, ALPHA) < 1e-12

    def test_nyquist_bin_in_gamma(self):
        """Test that an alternating sequence is pure gamma power"""
        spectrum = fft(np.tile([1.0, -1.0], EPOCH_N // 2), RATE)
        assert band_power(spectrum, GAMMA) == pytest.approx(1.0)

    def test_nyquist_at_beta_edge(self):
        """Test that at 60 Hz the 30 Hz Nyquist bin is gamma, not beta"""
        spectrum = fft(np.tile([1.0, -1.0], 600), 60.0)
        assert band_power(spectrum, GAMMA) == pytest.approx(1.0)
        assert band_power(spectrum, BETA) < 1e-12
        total = sum(band_power(spectrum, band) for band in DISJOINT_BANDS)
        assert total == pytest.approx(total_power(spectrum))

    def test_nyquist_at_alpha_edge(self):
        """Test that at 26 Hz the 13 Hz Nyquist bin is beta, not alpha"""
        spectrum = fft(np.tile([1.0, -1.0], 260), 26.0)
        assert band_power(spectrum, BETA) == pytest.approx(1.0)
        assert band_power(spectrum, ALPHA) < 1e-12

    def test_accounting_at_60_hz(self, rng):
        """Test that every non-DC bin lands in exactly one band when Nyquist is a band edge"""
        spectrum = fft(rng.standard_normal(1200), 60.0)
        counts = sum(band_bins(spectrum, band).astype(int) for band in DISJOINT_BANDS)
        assert counts[0] == 0
        assert np.all(counts[1:] == 1)

    def test_power_spectrum_of_sine(self):
        """Test that a unit 10 Hz sine puts 0.5 at 10 Hz and nothing elsewhere"""
        freqs, power = power_spectrum(fft(sine(10.0), RATE))
        assert len(freqs) == len(power) == EPOCH_N // 2 + 1
        peak = np.argmax(power)
        assert freqs[peak] == pytest.approx(10.0)
        assert power[peak] == pytest.approx(0.5, abs=1e-9)
        assert np.sum(power) - power[peak] < 1e-12

    def test_power_spectrum_sums_to_mean_square(self, rng):
        """Test that the one-sided powers add up to total power plus DC squared"""
        for n in (EPOCH_N, 999):
            spectrum = fft(rng.standard_normal(n) + 2.0, RATE)
            _, power = power_spectrum(spectrum)
            expected = total_power(spectrum) + dc_component(spectrum) ** 2
            assert np.sum(power) == pytest.approx(expected, rel=1e-9)
            assert np.sum(power) == pytest.approx(mean_square(spectrum), rel=1e-9)
            assert power[0] == pytest.approx(dc_component(spectrum) ** 2, rel=1e-9)

    def test_band_above_nyquist(self):
        """Test that a band starting above Nyquist raises"""
        with pytest.raises(BandError):
            band_bins(fft(np.zeros(100), RATE), Band('ultra', 60, 80))

    def test_mask_idempotent(self, rng):
        """Test that masking twice equals masking once"""
        spectrum = fft(rng.standard_normal(EPOCH_N), RATE)
        once = band_mask(spectrum, ALPHA)
        twice = band_mask(once, ALPHA)
        np.testing.assert_array_equal(once.coefficients, twice.coefficients)

    def test_batched_power(self, rng):
        """Test that a batch of epochs gives one power per epoch"""
        batch = np.stack([sine(10.0, a) for a in (1.0, 2.0, 3.0)])
        powers = band_powers(fft(batch, RATE), [ALPHA, BETA])
        np.testing.assert_allclose(powers['alpha'], [0.5, 2.0, 4.5], rtol=1e-9)
        assert np.all(powers['beta'] < 1e-12)


class TestWaveforms:
    """Test band-limited reconstruction"""

    def test_alpha_waveform_of_mixture(self):
        """Test that the alpha waveform keeps only the 10 Hz part"""
        x = sine(10.0, 2.0) + sine(20.0, 1.0)
        np.testing.assert_allclose(waveform(fft(x, RATE), ALPHA), sine(10.0, 2.0), atol=1e-9)

    def test_bands_rebuild_signal(self, rng):
        """Test that the disjoint band waveforms plus DC sum back to the signal"""
        x = rng.standard_normal(EPOCH_N) + 1.5
        spectrum = fft(x, RATE)
        rebuilt = sum(waveform(spectrum, band) for band in DISJOINT_BANDS) + dc_component(spectrum)
        assert np.sqrt(np.mean((rebuilt - x) ** 2)) < 1e-6

    def test_epoch_waveform(self):
        """Test band_waveform on an epoch channel"""
        epoch = make_epochs({'c': sine(10.0)}, RATE)[0]
        assert np.max(np.abs(band_waveform(epoch, 'c', BETA))) < 1e-9
