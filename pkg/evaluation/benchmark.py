"""
Benchmarks for the analysis pipeline
Times the FFT and whole-recording runs and checks the alert -> drowsy
reproduction on synthetic recordings

    python -m evaluation.benchmark [--hours H] [--repeats N]
"""
import argparse
import statistics
import time

import numpy as np

from vigil.fourier import fft
from vigil.pipeline import PipelineConfig, run_pipeline
from vigil.synthetic import alert_drowsy_recording, noise_recording
from vigil.utils import setup_logging

FFT_LENGTHS = (1024, 2000, 2003, 3000, 7680)
NOISE_LEVELS_UV = (0.0, 2.0, 5.0)


class PipelineEvaluator:
    """Evaluates speed and accuracy of the pipeline"""

    def __init__(self, repeats=5, hours=1.0, epochs_per_batch=64):
        """
        Initialize evaluator

        Args:
            repeats: Timed runs per measurement
            hours: Length of the long synthetic recording
            epochs_per_batch: Rows in each FFT timing batch
        """
        self.repeats = repeats
        self.hours = hours
        self.epochs_per_batch = epochs_per_batch
        self.rng = np.random.default_rng(0)

    def _timed(self, func):
        times = []
        for _ in range(self.repeats):
            start = time.perf_counter()
            result = func()
            times.append(time.perf_counter() - start)
        return result, times

    def time_fft(self, n):
        """
        Time one batched transform against numpy.fft

        Returns:
            Dictionary with timing and the worst relative error
        """
        x = self.rng.standard_normal((self.epochs_per_batch, n))
        spectrum, times = self._timed(lambda: fft(x, 100))
        reference = np.fft.fft(x, axis=-1)
        error = np.max(np.abs(spectrum.coefficients - reference)) / np.max(np.abs(reference))
        return {
            'n': n,
            'avg_time': statistics.mean(times),
            'min_time': min(times),
            'rel_error': float(error),
        }

    def reproduce(self, noise_uv=0.0, seed=0):
        """
        Run the alert -> drowsy recording and compare the two halves

        Returns:
            Dictionary with the alpha ratio and mean DS of each half
        """
        recording = alert_drowsy_recording(noise_uv=noise_uv, seed=seed)
        report = run_pipeline(PipelineConfig(input_path='<synthetic>'), recording)
        half = len(report.rows) // 2
        alpha = np.array([row.powers['F3']['alpha'] for row in report.rows])
        ds = report.ds_values()
        return {
            'noise_uv': noise_uv,
            'alpha_ratio': float(alpha[half:].mean() / alpha[:half].mean()),
            'alert_ds': float(ds[:half].mean()),
            'drowsy_ds': float(ds[half:].mean()),
            'indeterminate': report.summary['indeterminate'],
            'separated': bool(ds[half:].min() > ds[:half].max()),
        }

    def time_recording(self):
        """
        Time the whole pipeline on a long two-channel noise recording

        Returns:
            Dictionary with epoch count and timing
        """
        recording = noise_recording(duration_s=self.hours * 3600.0, seed=1)
        settings = PipelineConfig(input_path='<synthetic>')
        report, times = self._timed(lambda: run_pipeline(settings, recording))
        return {
            'hours': self.hours,
            'epochs': report.epoch_count,
            'avg_time': statistics.mean(times),
            'epochs_per_second': report.epoch_count / statistics.mean(times),
        }

    def run_all(self):
        """
        Run every benchmark and print the tables

        Returns:
            Dictionary with all results
        """
        print("\n" + "=" * 60)
        print("FFT: batched transform vs numpy.fft")
        print("=" * 60)
        fft_stats = [self.time_fft(n) for n in FFT_LENGTHS]
        for stats in fft_stats:
            print(f"  n={stats['n']:>5}  {1000 * stats['avg_time']:8.2f} ms"
                  f"  (min {1000 * stats['min_time']:.2f} ms)  rel error {stats['rel_error']:.1e}")

        print("\n" + "=" * 60)
        print("ALERT -> DROWSY REPRODUCTION")
        print("=" * 60)
        reproduction = [self.reproduce(noise) for noise in NOISE_LEVELS_UV]
        for stats in reproduction:
            print(f"  noise {stats['noise_uv']:>4.1f} uV  alpha x{stats['alpha_ratio']:7.1f}"
                  f"  DS {stats['alert_ds']:.3f} -> {stats['drowsy_ds']:.3f}"
                  f"  indeterminate {stats['indeterminate']}"
                  f"  {'separated' if stats['separated'] else 'overlapping'}")

        print("\n" + "=" * 60)
        print(f"LONG RECORDING: {self.hours:g} h")
        print("=" * 60)
        long_run = self.time_recording()
        print(f"  {long_run['epochs']} epochs in {long_run['avg_time']:.2f} s"
              f" ({long_run['epochs_per_second']:.0f} epochs/s)")

        return {'fft': fft_stats, 'reproduction': reproduction, 'long_recording': long_run}


def main(argv=None):
    """Run the benchmarks"""
    parser = argparse.ArgumentParser(description='vigil benchmarks')
    parser.add_argument('--hours', type=float, default=1.0, help='Length of the long recording')
    parser.add_argument('--repeats', type=int, default=5, help='Timed runs per measurement')
    args = parser.parse_args(argv)

    setup_logging(run_id='benchmark')
    PipelineEvaluator(repeats=args.repeats, hours=args.hours).run_all()


if __name__ == '__main__':
    main()
