"""
Exact-length discrete Fourier transform
Mixed-radix decimation-in-time for composite lengths, a direct DFT block for
small primes and Bluestein's chirp-z algorithm for large primes. Lengths are
never zero-padded, so bin k sits exactly at k * sample_rate / n.

All transforms run along the last axis and accept batches of shape (..., n).
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from vigil.errors import InputError

# prime lengths up to this size are transformed with a dense DFT matrix
DIRECT_MAX = 32


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT coefficients of one signal or a batch of signals

    Coefficient k corresponds to k * sample_rate / n for k <= n / 2; the
    upper half holds the negative frequencies.
    """

    coefficients: np.ndarray
    sample_rate: float

    @property
    def n(self):
        return self.coefficients.shape[-1]

    @property
    def nyquist(self):
        return self.sample_rate / 2.0

    def frequencies(self):
        """Non-negative bin frequencies 0 .. n/2 in Hz"""
        return np.arange(self.n // 2 + 1) * self.sample_rate / self.n

    def folded_frequencies(self):
        """Frequency magnitude of every bin: min(k, n - k) * sample_rate / n"""
        k = np.arange(self.n)
        return np.minimum(k, self.n - k) * self.sample_rate / self.n


def _smallest_factor(n):
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


@lru_cache(maxsize=None)
def _dft_matrix(n):
    k = np.arange(n)
    # reduce jk mod n before scaling to keep the angle exact
    matrix = np.exp(-2j * np.pi * (np.outer(k, k) % n) / n)
    matrix.flags.writeable = False
    return matrix


@lru_cache(maxsize=None)
def _twiddles(p, m):
    """exp(-2 pi i r (q m + s) / (p m)) indexed [r, q, s]"""
    n = p * m
    r = np.arange(p)[:, None, None]
    q = np.arange(p)[None, :, None]
    s = np.arange(m)[None, None, :]
    table = np.exp(-2j * np.pi * ((r * (q * m + s)) % n) / n)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def _chirp(n):
    j = np.arange(n)
    # j^2 mod 2n keeps the chirp phase accurate for long inputs
    chirp = np.exp(-1j * np.pi * ((j * j) % (2 * n)) / n)
    chirp.flags.writeable = False
    return chirp


def _direct(x):
    return x @ _dft_matrix(x.shape[-1])


def _bluestein(x):
    n = x.shape[-1]
    size = 1 << (2 * n - 2).bit_length()
    chirp = _chirp(n)

    a = np.zeros(x.shape[:-1] + (size,), dtype=np.complex128)
    a[..., :n] = x * chirp
    b = np.zeros(size, dtype=np.complex128)
    b[:n] = np.conj(chirp)
    b[size - n + 1:] = np.conj(chirp[1:])[::-1]

    convolved = _inverse(_transform(a) * _transform(b))
    return chirp * convolved[..., :n]


def _transform(x):
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    p = _smallest_factor(n)
    if p == n:
        return _direct(x) if n <= DIRECT_MAX else _bluestein(x)

    m = n // p
    # sub-sequence r holds x[r], x[r + p], x[r + 2p], ...
    sub = np.swapaxes(x.reshape(x.shape[:-1] + (m, p)), -1, -2)
    partial = _transform(np.ascontiguousarray(sub))
    # X[q m + s] = sum_r W_n^(r (q m + s)) partial[r, s]
    combined = np.einsum('...rs,rqs->...qs', partial, _twiddles(p, m))
    return combined.reshape(x.shape)


def _inverse(coefficients):
    n = coefficients.shape[-1]
    return np.conj(_transform(np.conj(coefficients))) / n


def transform(x):
    """
    Forward DFT along the last axis

    Args:
        x: Real or complex array of shape (..., n), n >= 1

    Returns:
        Complex array X[k] = sum_j x[j] exp(-2 pi i j k / n)
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise InputError("cannot transform an empty sequence")
    return _transform(x)


def dft(x):
    """
    Direct O(n^2) DFT along the last axis, used as a reference

    Args:
        x: Real or complex array of shape (..., n)

    Returns:
        Complex array with the same shape
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise InputError("cannot transform an empty sequence")
    return _direct(x)


def fft(samples, sample_rate=1.0):
    """
    Transform a sampled signal

    Args:
        samples: Real sequence (or batch of sequences along the last axis)
        sample_rate: Sampling rate in Hz

    Returns:
        Spectrum of the exact input length
    """
    return Spectrum(transform(samples), float(sample_rate))


def ifft(spectrum):
    """
    Inverse transform

    Args:
        spectrum: Spectrum or complex array of shape (..., n)

    Returns:
        Complex time-domain array
    """
    coefficients = spectrum.coefficients if isinstance(spectrum, Spectrum) else spectrum
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    if coefficients.ndim == 0 or coefficients.shape[-1] == 0:
        raise InputError("cannot transform an empty sequence")
    return _inverse(coefficients)
