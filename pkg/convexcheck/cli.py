"""
    Command line entry point.

    convexcheck check <file> [--box R] [--cross-check] [--necessary-only] [--zero-tol T]
                             [--margin-tol T] [--decision-tol T] [--slope-tol T] [--seed S]
                             [--jobs N] [--json <out>] [--verbose]
    convexcheck demo [--json <out>]
    convexcheck experiment [--widths 2..7] [--draws N] [--seed S] [--box R] [--dim D]
                           [--skip] [--no-timing] [--jobs N] [--out <csv|nc>]

    Exit codes: 0 convex, 1 not convex, 2 inconclusive; 64 usage, 65 invalid data,
    66 missing input, 69 guard rail exceeded, 70 solver or tolerance failure, 74 output error.
"""
import argparse
import sys

import numpy as np

from .checker import CheckOptions, ConvexityChecker, Status, check_necessary
from .constants import DEFAULT_HALFWIDTH
from .errors import GuardRailError, SolverError, ToleranceError, NetworkError, DimensionError
from .experiments import ExperimentConfig, run_heatmap
from .io_tools import load_network, save_report, save_table
from .network import build_counterexample
from .pathlift import enumerate_paths
from .regions import DomainBox
from .tools import parse_range, info

EXIT_STATUS = {Status.CONVEX: 0, Status.NOT_CONVEX: 1, Status.INCONCLUSIVE: 2}

EX_USAGE = 64
EX_DATAERR = 65
EX_NOINPUT = 66
EX_UNAVAILABLE = 69
EX_SOFTWARE = 70
EX_IOERR = 74


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser exiting with EX_USAGE on bad arguments."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _error(message, code):
    print(f"Error: {message}", file=sys.stderr)
    return code


def _write(document, target):
    if target is None or target == '-':
        save_report(document, sys.stdout)
    else:
        save_report(document, target)


def _options(args):
    return CheckOptions(zero_tol=args.zero_tol, margin_tol=args.margin_tol,
                        decision_tol=args.decision_tol, slope_tol=args.slope_tol,
                        seed=args.seed, cross_check=args.cross_check, n_jobs=args.jobs,
                        verbose=args.verbose)


def cmd_check(args):
    try:
        opts = _options(args)
        if not args.box > 0:
            raise ValueError(f"Box half-width must be positive. Given {args.box}")
    except ValueError as err:
        return _error(err, EX_USAGE)

    try:
        net = load_network(args.file)
        box = DomainBox.cube(args.box, net.dim)

        if args.necessary_only:
            records = check_necessary(net, box, opts)
            violated = [r for r in records if not r.satisfied]
            document = {'conditions': [r.to_dict() for r in records],
                        'violated': len(violated), 'tolerances': opts.tolerances()}
            code = 1 if violated else 2
        else:
            report = ConvexityChecker(net, box, opts).certify()
            document = report.to_dict()
            code = EXIT_STATUS[report.status]
    except FileNotFoundError as err:
        return _error(err, EX_NOINPUT)
    except (NetworkError, DimensionError, ValueError, TypeError) as err:
        return _error(err, EX_DATAERR)
    except GuardRailError as err:
        return _error(err, EX_UNAVAILABLE)
    except (SolverError, ToleranceError) as err:
        return _error(err, EX_SOFTWARE)

    try:
        _write(document, args.json)
    except OSError as err:
        return _error(err, EX_IOERR)
    return code


def cmd_demo(args):
    """Walkthrough of the convex 2-2-2-1 network that no ICNN of its architecture implements."""
    net = build_counterexample()
    box = DomainBox.cube(DEFAULT_HALFWIDTH, net.dim)
    checker = ConvexityChecker(net, box, CheckOptions())
    report = checker.certify()

    out = sys.stdout
    print("f(x) = (1 1) ReLU([[-1, 1], [2, 1]] ReLU(x) + (-1, -0.5)) on [-3, 3]^2", file=out)
    print(f"activation cells: {report.cell_count}, cell frontiers: {report.cell_frontier_count}",
          file=out)
    print(f"affine regions: {report.region_count}, frontiers: {report.frontier_count}", file=out)

    conditions = {}
    for record in report.conditions:
        conditions.setdefault(record.neuron, []).append(record)

    for neuron in net.hidden:
        paths = enumerate_paths(net, neuron)
        print(f"\nneuron {neuron}", file=out)
        for path, weight in zip(paths.paths, paths.weights):
            print(f"  path {' -> '.join(path)}: weight {weight:g}", file=out)

        subgraph = checker.subgraphs[neuron]
        records = conditions.get(neuron, [])
        print(f"  restricted to ({', '.join(subgraph.hidden)}): "
              f"{{{', '.join(str(r.restriction) for r in records)}}}", file=out)
        for record in records:
            print(f"  <{str(record.restriction)}, Phi> = {record.value:g}", file=out)

    print(f"\nverdict: {report.status.value}", file=out)

    if args.json is not None:
        try:
            _write(report.to_dict(), args.json)
        except OSError as err:
            return _error(err, EX_IOERR)
    return EXIT_STATUS[report.status]


def cmd_experiment(args):
    try:
        config = ExperimentConfig(d=args.dim, width_range=parse_range(args.widths),
                                  draws=args.draws, seed=args.seed, box_halfwidth=args.box,
                                  skip=args.skip, timing=not args.no_timing)
    except GuardRailError as err:
        return _error(err, EX_UNAVAILABLE)
    except ValueError as err:
        return _error(err, EX_USAGE)

    info(f"experiment: widths {config.width_range}, {config.draws} draws per cell, "
         f"seed {config.seed}, box [-{config.box_halfwidth}, {config.box_halfwidth}]^{config.d}")
    try:
        dataset = run_heatmap(config, n_jobs=args.jobs, progress=True)
    except (SolverError, ToleranceError) as err:
        return _error(err, EX_SOFTWARE)

    try:
        if args.out == "-":
            save_table(dataset, sys.stdout)
        else:
            save_table(dataset, args.out)
    except OSError as err:
        return _error(err, EX_IOERR)

    ratio = np.divide(dataset.convex.values, dataset.icnn.values,
                      out=np.full(dataset.convex.shape, np.inf), where=dataset.icnn.values > 0)
    info(f"convex/icnn ratio range: {np.nanmin(ratio):.3g} .. {np.nanmax(ratio):.3g}")
    return 0


def build_parser():
    parser = ArgumentParser(prog='convexcheck',
                            description='Exact convexity certificates for small DAG ReLU networks')
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', help='certify a network stored as JSON')
    check.add_argument('file', type=str, help='network JSON file')
    check.add_argument('--box', type=float, default=DEFAULT_HALFWIDTH,
                       help='half-width R of the domain [-R, R]^d (default: %(default)s)')
    check.add_argument('--cross-check', action='store_true',
                       help='run the exact, midpoint and monotonicity oracles as well')
    check.add_argument('--necessary-only', action='store_true',
                       help='evaluate the necessary conditions only')
    check.add_argument('--zero-tol', type=float, default=CheckOptions.zero_tol)
    check.add_argument('--margin-tol', type=float, default=CheckOptions.margin_tol)
    check.add_argument('--decision-tol', type=float, default=CheckOptions.decision_tol)
    check.add_argument('--slope-tol', type=float, default=CheckOptions.slope_tol)
    check.add_argument('--seed', type=int, default=0)
    check.add_argument('--jobs', type=int, default=1, help='threads (default: %(default)s)')
    check.add_argument('--json', type=str, default=None,
                       help='write the report to this file instead of stdout')
    check.add_argument('--verbose', action='store_true')
    check.set_defaults(func=cmd_check)

    demo = commands.add_parser('demo', help='walk through the counterexample network')
    demo.add_argument('--json', type=str, default=None, help='also write the report as JSON')
    demo.set_defaults(func=cmd_demo)

    experiment = commands.add_parser('experiment',
                                     help='convex vs ICNN counts of random two-hidden-layer MLPs')
    experiment.add_argument('--widths', type=str, default='2..7',
                            help="inclusive width range 'a..b' (default: %(default)s)")
    experiment.add_argument('--draws', type=int, default=10 ** 4)
    experiment.add_argument('--seed', type=int, default=0)
    experiment.add_argument('--box', type=float, default=DEFAULT_HALFWIDTH)
    experiment.add_argument('--dim', type=int, default=2, help='input dimension')
    experiment.add_argument('--skip', action='store_true',
                            help='add weighted input skip connections')
    experiment.add_argument('--no-timing', action='store_true',
                            help='leave the seconds column empty (byte-identical output)')
    experiment.add_argument('--jobs', type=int, default=None,
                            help='worker processes (default: half the CPUs)')
    experiment.add_argument('--out', type=str, default='-',
                            help="CSV (or .nc) output path, '-' for stdout")
    experiment.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
