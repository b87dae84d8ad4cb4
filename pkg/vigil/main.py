"""
Command-line entry point

    vigil analyze <input.edf> [--channel-map FILE] [--epoch-seconds N]
                  [--epoch-mode start|middle|end|all] [--format csv|json]
                  [--plots] [--plot-epochs ...] [--rules FILE] [--out DIR]
    vigil inspect <input.edf>
    vigil synth <out.edf> [--duration S] [--rate HZ] [--noise UV] [--seed N]

Exit code 0 on success, 1 on input errors, 2 on I/O errors.
"""
import argparse
import logging
import sys
from pathlib import Path

from vigil import __version__
from vigil.config import config
from vigil.edf import read_edf, save_edf
from vigil.errors import InputError
from vigil.pipeline import PLOT_SELECTORS, REPORT_FORMATS, PipelineConfig, run_pipeline
from vigil.report import emit_plot_data, emit_report
from vigil.spectral import EPOCH_MODES
from vigil.synthetic import alert_drowsy_recording
from vigil.utils import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_IO = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as input errors instead of exiting with 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def build_parser():
    parser = _ArgumentParser(prog='vigil', description='EEG drowsiness analysis')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--config', help='Configuration file (default: $VIGIL_CONFIG or config.yaml)')
    sub = parser.add_subparsers(dest='command', required=True)

    analyze = sub.add_parser('analyze', help='Classify every epoch of an EDF recording')
    analyze.add_argument('input', help='EDF file')
    analyze.add_argument('--channel-map', help='ROLE = LABEL file (default: sleep-EDF map)')
    analyze.add_argument('--epoch-seconds', type=float, help='Epoch duration in seconds')
    analyze.add_argument('--epoch-mode', choices=EPOCH_MODES, help='Which epochs to analyse')
    analyze.add_argument('--format', choices=REPORT_FORMATS, help='Report format')
    analyze.add_argument('--plots', action='store_true', default=None, help='Also write plot data')
    analyze.add_argument('--plot-epochs', nargs='+', choices=PLOT_SELECTORS, help='Epochs to plot')
    analyze.add_argument('--rules', help='Rule-base override file')
    analyze.add_argument('--out', help='Output directory')

    inspect = sub.add_parser('inspect', help='Print EDF header and signal table')
    inspect.add_argument('input', help='EDF file')

    synth = sub.add_parser('synth', help='Write a synthetic alert-to-drowsy recording')
    synth.add_argument('output', help='EDF file to create')
    synth.add_argument('--duration', type=float, default=120.0, help='Length in seconds')
    synth.add_argument('--rate', type=int, default=100, help='Sample rate in Hz')
    synth.add_argument('--noise', type=float, default=0.0, help='White noise standard deviation in uV')
    synth.add_argument('--seed', type=int, default=0, help='Noise seed')
    return parser


def _analyze(args):
    settings = PipelineConfig.from_config(
        args.input,
        channel_map_path=args.channel_map,
        epoch_seconds=args.epoch_seconds,
        epoch_mode=args.epoch_mode,
        report_format=args.format,
        plots=args.plots,
        plot_epochs=args.plot_epochs,
        rules_path=args.rules,
        output_dir=args.out,
    )
    recording = read_edf(settings.input_path)
    report = run_pipeline(settings, recording)
    path = emit_report(report, settings.output_dir, settings.report_format, settings.significant_digits)
    emit_plot_data(report, recording, settings)

    summary = report.summary
    print(f"report: {path}")
    print(f"epochs: {summary['epochs']} ({summary['flagged']} flagged, {summary['indeterminate']} indeterminate)")
    if summary['mean_ds'] is not None:
        print(f"mean DS: {summary['mean_ds']:.4f}")
        print(f"DS > 0.5: {100 * summary['fraction_ds_above_half']:.1f}% of epochs")


def _inspect(args):
    recording = read_edf(args.input)
    header = recording.header
    print(f"file: {args.input}")
    print(f"patient: {header.patient_id}")
    print(f"recording: {header.recording_id}")
    print(f"start: {header.start_date} {header.start_time}")
    print(f"records: {header.num_records} x {header.record_duration_s:g} s ({recording.duration_s:g} s)")
    print(f"signals: {header.num_signals}")
    for i, sig in enumerate(recording.signals):
        print(f"  {i:>2}  {sig.label.strip():<24} {recording.sample_rate(i):>8g} Hz  {sig.physical_dim.strip()}")


def _synth(args):
    recording = alert_drowsy_recording(args.duration, args.rate, noise_uv=args.noise, seed=args.seed)
    Path(args.output).parent.mkdir(parents=True, exist_ok=True)
    save_edf(recording, args.output)
    print(f"wrote {args.output}: {recording.duration_s:g} s, {len(recording.signals)} signals")


COMMANDS = {'analyze': _analyze, 'inspect': _inspect, 'synth': _synth}


def main(argv=None):
    """Entry point for the vigil command"""
    try:
        args = build_parser().parse_args(argv)
        if args.config:
            config.config_path = args.config
            config.reset()
            config.load()
        setup_logging(run_id=getattr(args, 'input', None) or args.command)
        logger.debug("Running %s", args.command)
        COMMANDS[args.command](args)
    except InputError as e:
        print(f"vigil: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"vigil: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
