import argparse
import json
import logging
import sys

from nullasym import create_runner
from nullasym.config import config_by_name
from nullasym.exceptions import InvalidInputError, NullAsymError
from nullasym.models.report import ExperimentConfig
from nullasym.utils.helpers import parse_float_list

logger = logging.getLogger('nullasym.run')

# Comma-separated list flags and the experiment list each one fills.
LIST_FLAGS = {
    'r': 'r',
    'R': 'R',
    'mu': 'mu',
    'mu_min': 'mu_min',
    'h': 'h',
    'rapidity': 'rapidity',
    'q': 'q',
    'S': 'S',
    'eta': 'eta',
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='nullasym', description='Null asymptote experiments.')
    parser.add_argument('--env', choices=sorted(config_by_name), help='configuration (default: NULLASYM_ENV)')
    parser.add_argument('--log-level', help='override the configured logging level')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run one experiment and write its report')
    run.add_argument('experiment')
    run.add_argument('--config', help='JSON experiment config; flags override it')
    run.add_argument('--preset', action='append', help='profile preset (repeatable or comma-separated)')
    run.add_argument('--out', help='output directory')
    run.add_argument('--seed', type=int)
    run.add_argument('--tol', type=float, help='override the value tolerances of the experiment')
    run.add_argument('--check', help='sub-check for sphere-ft and norms')
    run.add_argument('--n-theta', type=int, help='polar quadrature order')
    run.add_argument('--option', action='append', default=[], metavar='KEY=VALUE',
                     help='experiment option, VALUE parsed as JSON when possible')
    timing = run.add_mutually_exclusive_group()
    timing.add_argument('--timing', dest='timing', action='store_true', default=None,
                        help='store wall time in the JSON summary')
    timing.add_argument('--no-timing', dest='timing', action='store_false', default=None)
    for flag, name in LIST_FLAGS.items():
        run.add_argument(f"--{flag.replace('_', '-')}", dest=f"list_{name}", metavar='A,B,...')

    merge = commands.add_parser('merge', help='merge JSON reports into one pass/fail summary')
    merge.add_argument('reports', nargs='+')
    merge.add_argument('--out', help='write the merged summary here')

    commands.add_parser('list', help='list the registered experiments')
    return parser


def _option(text: str):
    key, sep, value = text.partition('=')
    if not sep or not key:
        raise InvalidInputError(f"option {text!r} must look like KEY=VALUE")
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        return key, value


def config_from_args(args) -> ExperimentConfig:
    """The JSON config (when given) with every command-line flag laid over it."""
    lists = {}
    for name in LIST_FLAGS.values():
        text = getattr(args, f"list_{name}")
        if text is not None:
            try:
                lists[name] = parse_float_list(text)
            except ValueError:
                raise InvalidInputError(f"--{name} expects comma-separated numbers, got {text!r}")

    options = dict(_option(text) for text in args.option)
    if args.check is not None:
        options['check'] = args.check

    presets = None
    if args.preset:
        presets = [name.strip() for item in args.preset for name in item.split(',') if name.strip()]

    overrides = dict(
        experiment=args.experiment,
        presets=presets,
        grid={'n_theta': args.n_theta} if args.n_theta is not None else None,
        lists=lists or None,
        options=options or None,
        tolerance=args.tol,
        out_dir=args.out,
        seed=args.seed,
        include_timing=args.timing,
    )
    if args.config:
        return ExperimentConfig.from_json(args.config, **overrides)
    return ExperimentConfig.from_dict({}, **overrides)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        runner = create_runner(args.env, args.log_level)
    except ValueError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2

    try:
        if args.command == 'list':
            for name, group, description in runner.experiments():
                print(f"{name:16} {group:10} {description}")
            return 0

        if args.command == 'merge':
            summary = runner.merge(args.reports, args.out)
            for experiment, row in summary.matrix.items():
                print(f"{experiment:16} {row['passed']:5d} passed {row['failed']:5d} failed")
            if args.out is None:
                sys.stdout.write(summary.to_json())
            return 0 if summary.passed else 1

        config = config_from_args(args)
        report = runner.run(config)
    except NullAsymError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(f"ERROR: {e}", file=sys.stderr)
        return 2

    if not report.passed:
        print(f"{report.experiment}: {len(report.failures)} of {len(report.cases)} cases outside tolerance",
              file=sys.stderr)
        for case_id in report.failures:
            print(f"  FAIL {case_id}", file=sys.stderr)
        return 1
    print(f"{report.experiment}: all {len(report.cases)} cases passed")
    return 0


if __name__ == '__main__':
    sys.exit(main())
