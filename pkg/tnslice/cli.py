import argparse
import logging
import sys
import warnings
from . import __version__
from .base import PRINT_ALL_WARNINGS, RAW_LATENCY_DEFAULT
from .engine.simulator import run_many
from .exceptions import TnSliceError, ConfigurationError, CompareFailure
from .metrics import export, compare_dirs
from .presets import list_presets, preset_dict, scale_doc
from .scenario import from_dict, load_scenario

__all__ = ['main', 'build_parser', 'EXIT_OK', 'EXIT_CONFIG', 'EXIT_RUNTIME', 'EXIT_COMPARE']

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_COMPARE = 0, 1, 2, 3


def build_parser():
	ap = argparse.ArgumentParser(prog = 'tnslice',
		description = 'Discrete-event simulator of transport network slicing at the edge.')
	ap.add_argument('--version', action = 'version', version = '%(prog)s ' + __version__)
	ap.add_argument('-v', '--verbose', action = 'count', default = 0,
					help = '-v logs progress, -vv logs policer debt too')
	sub = ap.add_subparsers(dest = 'command')
	sub.required = True

	run = sub.add_parser('run', help = 'run presets or scenario files and export metrics')
	source = run.add_mutually_exclusive_group(required = True)
	source.add_argument('--preset', action = 'append', help = 'built-in scenario (repeatable)')
	source.add_argument('--config', action = 'append', help = 'YAML or JSON scenario file (repeatable)')
	run.add_argument('--out', default = 'results', help = 'output directory')
	run.add_argument('--format', choices = ['csv', 'json'], default = 'csv')
	run.add_argument('--duration', type = float, help = 'override the duration (s)')
	run.add_argument('--scale', type = float, default = 1.0,
					help = 'multiply schedule bounds and duration by this factor')
	run.add_argument('--jobs', type = int, default = 1, help = 'scenarios run in parallel')
	run.add_argument('--raw-latency', action = 'store_true', default = RAW_LATENCY_DEFAULT,
					help = 'also write every packet latency')

	sub.add_parser('list-presets', help = 'print the built-in scenario names')

	compare = sub.add_parser('compare', help = 'compare exported series with golden files')
	compare.add_argument('--out', required = True)
	compare.add_argument('--golden', required = True)
	compare.add_argument('--tolerance', type = float, default = 5.0, help = 'percent')
	return ap


def _scenarios(args):
	if args.scale <= 0:
		raise ConfigurationError('--scale must be positive.')
	docs = []
	if args.preset:
		for name in args.preset:
			docs.append(preset_dict(name, args.scale))
	else:
		for path in args.config:
			doc = load_scenario(path).doc
			docs.append(scale_doc(doc, args.scale) if args.scale != 1.0 else doc)
	if args.duration is not None:
		for doc in docs:
			doc['duration'] = args.duration
	return [from_dict(doc) for doc in docs]


def _run(args):
	scenarios = _scenarios(args)
	stores = run_many(scenarios, n_jobs = args.jobs, raw_latency = args.raw_latency)
	for store in stores:
		for path in export(store, args.format, args.out):
			print(path)
	return EXIT_OK


def _compare(args):
	deviations = compare_dirs(args.out, args.golden, args.tolerance)
	for d in deviations:
		print('deviation: {scenario} {observable} {id} t={t_start} value={value} '
			'golden={golden}'.format(**d))
	if deviations:
		raise CompareFailure('{} value(s) deviate more than {}% from {}.'.format(
			len(deviations), args.tolerance, args.golden), deviations)
	return EXIT_OK


def _error(error):
	name = type(error).__name__
	text = str(error)
	if not text.startswith(name + ':'):
		text = '{}: {}'.format(name, text)
	print('error: ' + text, file = sys.stderr)


def main(argv = None):
	args = build_parser().parse_args(argv)
	logging.basicConfig(level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
						format = '%(asctime)s %(name)s %(levelname)s %(message)s')
	warnings.simplefilter('always' if PRINT_ALL_WARNINGS else 'default')

	try:
		if args.command == 'list-presets':
			print('\n'.join(list_presets()))
			return EXIT_OK
		if args.command == 'compare':
			return _compare(args)
		return _run(args)
	except ConfigurationError as error:
		_error(error)
		return EXIT_CONFIG
	except CompareFailure as error:
		_error(error)
		return EXIT_COMPARE
	except (TnSliceError, OSError) as error:
		_error(error)
		return EXIT_RUNTIME


if __name__ == '__main__':
	sys.exit(main())
