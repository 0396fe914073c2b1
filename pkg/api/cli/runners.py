"""Handlers for the pipeline subcommands."""

import argparse
import asyncio
import logging

from msp.ingest import ingest
from runner.pipeline import run_baseline, run_build, run_single_phase
from utils.create_config import create_baseline_config, create_partition_config
from utils.manifest import format_manifest
from utils.workdir_utils import manifest_path

logger = logging.getLogger(__name__)


def run_build_command(args: argparse.Namespace) -> int:
    """
    Build the de Bruijn graph of the input reads.

    Args:
        args: parsed flags with inputs and run parameters

    Returns:
        Process exit status
    """
    config = create_partition_config(args)
    logger.debug(f"Build requested - inputs: {len(args.inputs)}, work_dir: {config.work_dir}")
    graph, manifest = asyncio.run(run_build(config, lambda: ingest(args.inputs, config.k), densify=args.densify))
    print(f"vertices={graph.num_vertices}")
    print(f"edges={graph.num_edges}")
    print(f"manifest={manifest_path(config.work_dir)}")
    return 0


def run_phase_command(args: argparse.Namespace) -> int:
    config = create_partition_config(args)
    reads = None
    if args.phase == "partition":
        reads = lambda: ingest(args.inputs, config.k)  # noqa: E731
    manifest = asyncio.run(run_single_phase(config, args.phase, reads, densify=getattr(args, "densify", False)))
    print(f"last_completed_phase={manifest.last_completed_phase}")
    return 0


def run_baseline_command(args: argparse.Namespace) -> int:
    config = create_baseline_config(args)
    _, result, manifest = asyncio.run(run_baseline(config, lambda: ingest(args.inputs, config.k)))
    logger.info(
        f"Baseline finished - mode: {result.mode}, distinct: {result.distinct_kmers}, spill_bytes: {result.spill_bytes}"
    )
    print(format_manifest(manifest), end="")
    return 0
