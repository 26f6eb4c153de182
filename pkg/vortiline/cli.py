# vortiline -- https://github.com/vortiline/vortiline
#
# Copyright (C) 2025 The vortiline developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.


"""Command-line entry point: ``vortiline <command> ...``.

Exit codes are 0 on success, 1 when a computation fails (non-finite values,
a segment or field that cannot be processed) and 2 for usage, configuration
and missing-input errors.
"""

import argparse
import logging
import os
import sys

from . import euler3d, sqg
from .config import load_config
from .constants import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, VERSION
from .errors import ConfigError, FieldError, NumericalError, SegmentError, SnapshotError
from .pipeline import appendix_check, diagnose, trace_snapshot
from .report import render_report

logger = logging.getLogger(__name__)

RUNNERS = {'run-sqg': ('sqg', sqg.run), 'run-euler3d': ('euler3d', euler3d.run)}


def configure_logging(verbose=0, quiet=False):
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(level)
    logging.captureWarnings(True)


def build_parser():
    parser = argparse.ArgumentParser(prog='vortiline',
                                     description='Vortex-line growth diagnostics for SQG and 3D Euler flows.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more logging (repeatable)')
    parser.add_argument('--quiet', action='store_true', help='only log errors')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    for name, (model, _) in RUNNERS.items():
        run = commands.add_parser(name, help=f'march the {model} model and write snapshots')
        run.add_argument('--config', required=True, help='key = value configuration file')

    trace = commands.add_parser('trace', help='trace one segment on a snapshot')
    trace.add_argument('--config', required=True)
    trace.add_argument('--snapshot', required=True, help='snapshot file to trace on')
    trace.add_argument('--output', help='curve CSV to write (default: <snapshot>.curve.csv)')

    diag = commands.add_parser('diagnose', help='diagnose the snapshots of a run')
    diag.add_argument('--config', required=True)
    diag.add_argument('--run-dir', help='directory with the snapshots (default: output.dir)')
    diag.add_argument('--output', help='directory for the diagnostics (default: the run directory)')

    appendix = commands.add_parser('appendix-check', help='split the Biot-Savart velocity of Clebsch fields')
    appendix.add_argument('--config', required=True)
    appendix.add_argument('--output', help='directory for the terms and report (default: output.dir)')

    report = commands.add_parser('report', help='render plots from the CSVs in a directory')
    report.add_argument('directory')
    report.add_argument('--output', help='directory for the plot files (default: the input directory)')
    report.add_argument('--format', choices=('svg', 'png', 'both'), default='svg')
    return parser


def _config(args, model=None):
    if not os.path.isfile(args.config):
        raise ConfigError(f'config file {args.config} does not exist')
    config = load_config(args.config)
    if model is not None and config.model != model:
        raise ConfigError(f'{args.command} needs model = {model}, the config has {config.model!r}')
    return config


def dispatch(args):
    if args.command in RUNNERS:
        model, run = RUNNERS[args.command]
        run(_config(args, model))
    elif args.command == 'trace':
        if not os.path.isfile(args.snapshot):
            raise SnapshotError(f'snapshot {args.snapshot} does not exist')
        trace_snapshot(_config(args), args.snapshot, args.output or args.snapshot + '.curve.csv')
    elif args.command == 'diagnose':
        config = _config(args)
        diagnose(config, args.run_dir or config.output_dir, args.output)
    elif args.command == 'appendix-check':
        config = _config(args)
        appendix_check(config, args.output or config.output_dir)
    elif args.command == 'report':
        formats = ('svg', 'png') if args.format == 'both' else (args.format,)
        render_report(args.directory, args.output, formats)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        dispatch(args)
    except ConfigError as err:
        for problem in err.errors:
            logger.error('config: %s', problem)
        return EXIT_USAGE
    except SnapshotError as err:
        logger.error('%s', err)
        return EXIT_USAGE
    except OSError as err:
        # unreadable config or snapshot, unwritable output directory
        logger.error('%s', err)
        return EXIT_USAGE
    except (NumericalError, SegmentError, FieldError) as err:
        logger.error('%s', err)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
