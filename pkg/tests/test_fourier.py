"""
Unit tests for the exact-length FFT
"""
import numpy as np
import pytest

from vigil.errors import InputError
from vigil.fourier import Spectrum, dft, fft, ifft, transform


def reference_dft(x):
    """Textbook O(n^2) DFT along the last axis, independent of the package"""
    x = np.asarray(x)
    n = x.shape[-1]
    k = np.arange(n)
    return x @ np.exp(-2j * np.pi * (np.outer(k, k) % n) / n)


class TestForward:
    """Test the forward transform"""

    def test_impulse(self):
        """Test that a unit impulse has a flat spectrum"""
        x = np.zeros(12)
        x[0] = 1.0
        np.testing.assert_allclose(transform(x), np.ones(12), atol=1e-12)

    def test_constant(self):
        """Test that a constant lands entirely in the DC bin"""
        out = transform(np.full(10, 3.0))
        assert out[0] == pytest.approx(30.0)
        np.testing.assert_allclose(out[1:], 0, atol=1e-12)

    def test_length_one(self):
        """Test the trivial transform"""
        np.testing.assert_allclose(transform([2.5]), [2.5])

    @pytest.mark.parametrize('n', [16, 100, 128, 500, 1024, 2000])
    def test_matches_direct_dft(self, n, rng):
        """Test the FFT against the direct DFT for 100 random signals"""
        signals = rng.standard_normal((100, n))
        fast = transform(signals)
        slow = reference_dft(signals)
        for got, want in zip(fast, slow):
            assert np.max(np.abs(got - want)) / np.max(np.abs(want)) < 1e-9

    @pytest.mark.parametrize('n', [7, 31, 37, 97, 211, 2 * 3 * 5 * 7 * 11])
    def test_prime_and_mixed_lengths(self, n, rng):
        """Test direct blocks, Bluestein primes and odd mixed radices"""
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        want = reference_dft(x)
        assert np.max(np.abs(transform(x) - want)) / np.max(np.abs(want)) < 1e-9

    def test_batch_matches_rows(self, rng):
        """Test that a batch transforms row by row"""
        batch = rng.standard_normal((5, 60))
        out = transform(batch)
        for row, got in zip(batch, out):
            np.testing.assert_allclose(got, transform(row), atol=1e-10)

    def test_in_package_reference(self, rng):
        """Test that dft agrees with the textbook formula"""
        x = rng.standard_normal(45)
        np.testing.assert_allclose(dft(x), reference_dft(x), atol=1e-9)

    def test_empty_input(self):
        """Test that an empty sequence is refused"""
        with pytest.raises(InputError):
            transform([])
        with pytest.raises(InputError):
            ifft(np.array([], dtype=complex))


class TestInverse:
    """Test the inverse transform and energy conservation"""

    @pytest.mark.parametrize('n', [2000, 97, 360])
    def test_round_trip(self, n, rng):
        """Test that ifft(fft(x)) returns x"""
        x = rng.standard_normal(n)
        back = ifft(fft(x, 100.0))
        np.testing.assert_allclose(back.real, x, atol=1e-9)
        assert np.max(np.abs(back.imag)) < 1e-9

    def test_parseval(self, rng):
        """Test sum |x|^2 = sum |X|^2 / n"""
        x = rng.standard_normal(2000)
        spectrum = fft(x, 100.0)
        energy = np.sum(np.abs(spectrum.coefficients) ** 2) / spectrum.n
        assert energy == pytest.approx(np.sum(x ** 2), rel=1e-10)


class TestSpectrum:
    """Test bin bookkeeping"""

    def test_bin_frequencies(self):
        """Test that bin k sits at k * rate / n"""
        spectrum = fft(np.zeros(2000), 100.0)
        freqs = spectrum.frequencies()
        assert len(freqs) == 1001
        assert freqs[200] == pytest.approx(10.0)
        assert spectrum.nyquist == 50.0

    def test_folded_frequencies(self):
        """Test that negative-frequency bins fold onto their partners"""
        spectrum = Spectrum(np.zeros(10, dtype=complex), 10.0)
        assert spectrum.folded_frequencies().tolist() == [0, 1, 2, 3, 4, 5, 4, 3, 2, 1]
