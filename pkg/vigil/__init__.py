"""
vigil: drowsy-driver detection from EEG
EDF ingestion, FFT band powers, arousal/valence/dominance features and a
fuzzy C-means calibrated Mamdani classifier
"""

__version__ = '1.0.0'
__author__ = 'vigil contributors'

# Modules import what they need; the package root stays light

__all__ = ['edf', 'fourier', 'bands', 'spectral', 'features', 'fuzzy', 'pipeline', 'report', 'config']
