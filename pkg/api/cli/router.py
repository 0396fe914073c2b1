"""Command-line router: registers every subcommand and its flags."""

import argparse
from pathlib import Path

from api.cli.analyze import register_analyze
from api.cli.runners import run_baseline_command, run_build_command, run_phase_command
from configs.config import DEFAULT_LOG_LEVEL
from testing_endpoints.router import register_verify
from utils.create_config import parse_size


def run_parameters() -> argparse.ArgumentParser:
    """Flags shared by every command that touches a work directory."""
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("run parameters")
    group.add_argument("-k", type=int, help="k-mer length (default 59)")
    group.add_argument("-p", type=int, help="minimizer length (default 12)")
    group.add_argument("-t", type=int, help="number of wrapped partitions (default 1000)")
    group.add_argument(
        "--rc", action=argparse.BooleanOptionalAction, default=None, help="strand-invariant k-mers (default on)"
    )
    group.add_argument("--scanner", choices=["scan", "queue", "brute"], help="super k-mer scanner (default scan)")
    group.add_argument("--wrap", choices=["hash", "identity"], help="minimizer to partition map (default hash)")
    group.add_argument("--workdir", type=Path, help="work directory (env MSP_WORKDIR)")
    group.add_argument("--mem", type=parse_size, help="advisory memory budget, e.g. 2G (env MSP_MEMORY_BUDGET)")
    group.add_argument("--seed", type=int, help="random seed (default 0)")
    group.add_argument("--threads", type=int, help="worker count (env MSP_THREADS)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=DEFAULT_LOG_LEVEL, help="logging level (env MSP_LOG_LEVEL)")

    parser = argparse.ArgumentParser(
        prog="msp-dbg",
        description="De Bruijn graph construction with minimum substring partitioning",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    params = run_parameters()

    build = subparsers.add_parser("build", parents=[common, params], help="run partition, map, merge and edges")
    build.add_argument("inputs", nargs="+", type=Path, help="FASTA/FASTQ files, optionally gzipped")
    build.add_argument("--densify", action="store_true", help="renumber vertex ids to 1..V")
    build.set_defaults(handler=run_build_command)

    partition = subparsers.add_parser("partition", parents=[common, params], help="scatter super k-mers to partitions")
    partition.add_argument("inputs", nargs="+", type=Path)
    partition.set_defaults(handler=run_phase_command, phase="partition")

    for name, text in (("map", "map each partition to replacement ranges"), ("merge", "merge replacements into the id stream")):
        sub = subparsers.add_parser(name, parents=[common, params], help=text)
        sub.set_defaults(handler=run_phase_command, phase=name)

    edges = subparsers.add_parser("edges", parents=[common, params], help="emit the weighted edge list")
    edges.add_argument("--densify", action="store_true", help="renumber vertex ids to 1..V")
    edges.set_defaults(handler=run_phase_command, phase="edges")

    baseline = subparsers.add_parser("baseline", parents=[common, params], help="run H-Partition or B-Partition")
    baseline.add_argument("mode", choices=["h", "b"])
    baseline.add_argument("inputs", nargs="+", type=Path)
    baseline.add_argument(
        "--suffix-symbols", type=int, help="B-Partition: bucket by the last q symbols instead of the whole k-mer"
    )
    baseline.set_defaults(handler=run_baseline_command)

    register_analyze(subparsers, common)
    register_verify(subparsers, common, params)
    return parser
