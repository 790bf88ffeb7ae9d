"""``gtsvd-bench``: time the GTSVD algorithms on synthetic or analytic tensor pairs."""

import argparse
import contextlib
import os
import sys

from threadpoolctl import threadpool_limits

from .bench import BenchSpec, emit_report, make_pair, run_benchmark
from .errors import BenchSpecError, TensorError
from .gtsvd import ALGORITHMS
from .selftest import run_selftest
from .t3f import write_t3f

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _add_run_flags(p, default_n, default_rank):
    p.add_argument("--n", type=int, default=default_n, help="tensor size, data is n x n x n")
    p.add_argument("--rank", type=int, default=default_rank, help="target tubal rank R")
    p.add_argument("--oversample", type=int, default=default_rank, help="oversampling p")
    p.add_argument("--power", type=int, default=0, help="power iterations q")
    p.add_argument("--algo", choices=sorted(ALGORITHMS) + ["all"], default="all")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", dest="fmt", choices=["json", "csv"], default="json")
    p.add_argument("--threads", type=_positive, default=None, help="cap on BLAS threads")
    p.add_argument("--dump-tensors", default=None, metavar="DIR", help="write X.t3f and Y.t3f here")


def build_parser():
    parser = _Parser(prog="gtsvd-bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add_run_flags(sub.add_parser("synthetic", help="Gaussian low-tubal-rank pair"), 50, 10)
    _add_run_flags(sub.add_parser("analytic", help="inverse-distance and cubic-root pair"), 50, 10)
    st = sub.add_parser("selftest", help="run the invariant checks")
    st.add_argument("--seed", type=_u64, default=0)
    return parser


def _specs(args):
    algos = sorted(ALGORITHMS) if args.algo == "all" else [args.algo]
    return [
        BenchSpec(args.command, args.n, args.rank, args.oversample, args.power, a, args.trials, args.seed, args.out, args.fmt)
        for a in algos
    ]


def _run(args):
    specs = _specs(args)
    pair = make_pair(specs[0])
    if args.dump_tensors:
        os.makedirs(args.dump_tensors, exist_ok=True)
        write_t3f(os.path.join(args.dump_tensors, "X.t3f"), pair[0])
        write_t3f(os.path.join(args.dump_tensors, "Y.t3f"), pair[1])
    limits = threadpool_limits(limits=args.threads) if args.threads else contextlib.nullcontext()
    with limits:
        reports = [run_benchmark(s, pair=pair) for s in specs]
    emit_report(reports[0] if len(reports) == 1 else reports, args.out, args.fmt)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return EXIT_OK if run_selftest(args.seed) else EXIT_RUNTIME
    try:
        _run(args)
    except (BenchSpecError, TensorError) as exc:
        print(f"gtsvd-bench: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, OSError, ArithmeticError) as exc:
        print(f"gtsvd-bench: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
