"""`analyze` subcommands: random-string model tables written as CSV."""

import argparse
import logging
from pathlib import Path

import pandas as pd

from msp import analysis
from msp.schemas import SymbolDistribution
from utils.csv_export import write_table

logger = logging.getLogger(__name__)


def int_list(text: str) -> list[int]:
    """Comma-separated integers; "a-b" expands to an inclusive range."""
    values: list[int] = []
    for item in text.split(","):
        if "-" in item:
            low, high = item.split("-", 1)
            values.extend(range(int(low), int(high) + 1))
        elif item:
            values.append(int(item))
    return values


def distribution(text: str) -> SymbolDistribution:
    try:
        return SymbolDistribution(probabilities=tuple(float(x) for x in text.split(",")))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def analyze_breaks(args: argparse.Namespace) -> pd.DataFrame:
    return analysis.breaks_table(args.m, args.k, args.p, args.trials, args.seed)


def analyze_capacity(args: argparse.Namespace) -> pd.DataFrame:
    return analysis.capacity_table(
        args.k, args.p, args.dist, monte_carlo=args.monte_carlo, trials=args.trials, seed=args.seed
    )


def analyze_alpha(args: argparse.Namespace) -> pd.DataFrame:
    return analysis.alpha_bounds_table(args.k, args.p)


def analyze_minstb(args: argparse.Namespace) -> pd.DataFrame:
    frame = analysis.minstb_table(args.word, args.n, args.dist)
    clean = frame.iloc[-1]["Q0"]
    min_word_probability = analysis.prob_min_word(args.word, args.n, args.dist)
    logger.info(
        f"MinSTB filled - word: {args.word}, n: {args.n}, clean: {clean:.12g}, "
        f"min_word_probability: {min_word_probability:.12g}"
    )
    return frame


def analyze_p1(args: argparse.Namespace) -> pd.DataFrame:
    report = analysis.p1_inequalities(args.k, args.p, args.a, args.trials, args.seed)
    if not (report.shift_bound_holds and report.ring_bound_holds):
        logger.warning(
            f"P1 bound violated - shift_bound_holds: {report.shift_bound_holds}, "
            f"ring_bound_holds: {report.ring_bound_holds}"
        )
    return analysis.p1_table(report)


def analyze_size(args: argparse.Namespace) -> pd.DataFrame:
    return analysis.size_table(args.n_bases, args.m, args.k, args.p, args.trials, args.seed)


def run_analyze_command(args: argparse.Namespace) -> int:
    frame = args.analyzer(args)
    write_table(frame, args.out)
    return 0


def register_analyze(subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser) -> None:
    """Add `analyze {breaks|capacity|alpha|minstb|p1|size}`."""
    analyze = subparsers.add_parser("analyze", help="random-string model tables (CSV)")
    targets = analyze.add_subparsers(dest="target", required=True)

    shared = argparse.ArgumentParser(add_help=False, parents=[common])
    shared.add_argument("--out", type=Path, help="CSV path (default stdout)")
    shared.add_argument("--seed", type=int, default=0)

    breaks = targets.add_parser(
        "breaks", parents=[shared], help="mean breaks per read; columns m,k,p,mean_breaks,stderr,rate,rate_bound,trials"
    )
    breaks.add_argument("-m", type=int_list, default=[60, 100, 150], help="read lengths")
    breaks.add_argument("-k", type=int_list, default=[31], help="k values")
    breaks.add_argument("-p", type=int_list, default=[8], help="p values")
    breaks.add_argument("--trials", type=int, default=10_000)
    breaks.set_defaults(analyzer=analyze_breaks)

    capacity = targets.add_parser(
        "capacity", parents=[shared], help="expected share of k-mers per minimizer; columns rank,word,share"
    )
    capacity.add_argument("-k", type=int, default=59)
    capacity.add_argument("-p", type=int, default=5)
    capacity.add_argument("--dist", type=distribution, help="symbol probabilities, e.g. 0.7,0.1,0.1,0.1")
    capacity.add_argument("--monte-carlo", action="store_true", help="sample instead of the exact recurrence")
    capacity.add_argument("--trials", type=int, default=1_000_000)
    capacity.set_defaults(analyzer=analyze_capacity)

    alpha = targets.add_parser("alpha", parents=[shared], help="alpha(k,p) and its bounds; columns k,p,alpha,lower,upper,within")
    alpha.add_argument("-k", type=int_list, default=list(range(50, 101, 5)))
    alpha.add_argument("-p", type=int_list, default=[5])
    alpha.set_defaults(analyzer=analyze_alpha)

    minstb = targets.add_parser("minstb", parents=[shared], help="clean-probability table; columns i,Q0..Q(m-1)")
    minstb.add_argument("--word", required=True, help="target word, ACGT or 0123")
    minstb.add_argument("-n", type=int, required=True, help="random string length")
    minstb.add_argument("--dist", type=distribution)
    minstb.set_defaults(analyzer=analyze_minstb)

    p1 = targets.add_parser("p1", parents=[shared], help="P1/P2 estimates and bounds; columns quantity,mean,stderr")
    p1.add_argument("-k", type=int, default=20)
    p1.add_argument("-p", type=int, default=4)
    p1.add_argument("-a", type=int, default=3)
    p1.add_argument("--trials", type=int, default=1_000_000)
    p1.set_defaults(analyzer=analyze_p1)

    size = targets.add_parser("size", parents=[shared], help="expected partition bases; columns m,k,p,n_bases,estimate,ratio")
    size.add_argument("--n-bases", type=int, required=True)
    size.add_argument("-m", type=int, default=100, help="read length")
    size.add_argument("-k", type=int_list, default=[59])
    size.add_argument("-p", type=int_list, default=[12])
    size.add_argument("--trials", type=int, default=10_000)
    size.set_defaults(analyzer=analyze_size)

    for parser in targets.choices.values():
        parser.set_defaults(handler=run_analyze_command)
