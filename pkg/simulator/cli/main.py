import argparse
import logging
import os
import sys

from simulator.errors import ConfigurationError, FedPickError, UsageError

from .commands import cmd_analyze, cmd_probe, cmd_run, cmd_sweep
from .config import PRESETS, load_config

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_ENV = 'FEDPICK_LOG'
_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


def setup_logging(environ=None):
    """Configure the root logger from FEDPICK_LOG (default INFO)."""
    environ = os.environ if environ is None else environ
    name = environ.get(LOG_ENV, 'INFO').upper()
    level = getattr(logging, name) if name in _LEVELS else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)
    if name not in _LEVELS:
        logger.warning("%s=%r is not one of %s; using INFO", LOG_ENV, name, ', '.join(_LEVELS))
    return level


def _add_config_args(parser, overrides=True):
    parser.add_argument('--config', required=True, help="YAML run configuration")
    parser.add_argument('--preset', choices=sorted(PRESETS), help="Published hyperparameter row")
    parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VALUE',
                        help="Override a dotted config key; repeatable")
    if overrides:
        parser.add_argument('--seed', type=int, help="Master seed")
        parser.add_argument('--out', help="Output directory")
        parser.add_argument('--workers', type=int, help="Client update threads")


def build_parser():
    parser = argparse.ArgumentParser(prog='fedpick',
                                     description="Federated feature selection simulator.")
    sub = parser.add_subparsers(dest='command', required=True)
    _add_config_args(sub.add_parser('run', help="Train and write metrics, summary and checkpoints"))
    _add_config_args(sub.add_parser('probe', help="Fisher-ranked feature probe on frozen encoders"))
    analyze = sub.add_parser('analyze', help="Mask diagnostics of a finished fedpick run")
    analyze.add_argument('--run', required=True, help="Output directory of a run")
    sweep = sub.add_parser('sweep', help="Rerun training across values of one config key")
    _add_config_args(sweep)
    sweep.add_argument('--param', required=True, help="Dotted config key to vary")
    sweep.add_argument('--values', required=True, help="Comma-separated values")
    return parser


def resolve_config(args):
    overrides = list(args.overrides)
    if getattr(args, 'seed', None) is not None:
        overrides.append(f"seed={args.seed}")
    if getattr(args, 'out', None) is not None:
        overrides.append(f"output_dir={args.out}")
    if getattr(args, 'workers', None) is not None:
        overrides.append(f"workers={args.workers}")
    return load_config(args.config, preset=args.preset, overrides=overrides)


def dispatch(args):
    if args.command == 'analyze':
        return cmd_analyze(args.run)
    cfg = resolve_config(args)
    if args.command == 'run':
        return cmd_run(cfg)
    if args.command == 'probe':
        return cmd_probe(cfg)
    values = [v.strip() for v in args.values.split(',') if v.strip()]
    return cmd_sweep(cfg, args.param, values)


def exit_code(exc):
    """2 for configuration or usage problems, 1 for anything that failed while running."""
    return 2 if isinstance(exc, (ConfigurationError, UsageError)) else 1


def main(argv=None):
    """
    Command-line entry point.

    :param argv: Argument list without the program name; defaults to sys.argv[1:].
    :return: Process exit code.
    """
    args = build_parser().parse_args(argv)
    setup_logging()
    try:
        return dispatch(args)
    except FedPickError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)
