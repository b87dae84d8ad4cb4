"""
Shared fixtures: synthetic signals and recordings
"""
import numpy as np
import pytest

from vigil.edf import save_edf
from vigil.synthetic import alert_drowsy_recording, noise_recording

RATE = 100
EPOCH_S = 20.0
EPOCH_N = int(RATE * EPOCH_S)


def sine(freq_hz, amplitude=1.0, n=EPOCH_N, rate=RATE, phase=0.0):
    t = np.arange(n) / rate
    return amplitude * np.sin(2 * np.pi * freq_hz * t + phase)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope='session')
def alert_drowsy():
    """120 s, two channels: beta dominant for 60 s, then alpha dominant"""
    return alert_drowsy_recording()


@pytest.fixture
def alert_drowsy_edf(tmp_path, alert_drowsy):
    path = tmp_path / 'alert_drowsy.edf'
    save_edf(alert_drowsy, path)
    return path


@pytest.fixture
def flat_middle_edf(tmp_path):
    """100 s of noise whose third epoch is flat on the frontal channel"""
    path = tmp_path / 'flat_middle.edf'
    save_edf(noise_recording(duration_s=100.0, seed=7, flat_epochs=(2,)), path)
    return path
