"""
`verify` subcommand: compares a finished work directory against the in-memory reference builder
"""

import argparse
import logging
from pathlib import Path

import numpy as np

from msp.ingest import ingest
from msp.map_merge import emit_edges, normalize_ids, reference_build, reference_ids
from msp.schemas import DeBruijnGraph, IdStream
from runner.pipeline import baseline_ids_path, load_id_stream
from utils.create_config import create_partition_config
from utils.manifest import read_manifest
from utils.workdir_utils import manifest_path

logger = logging.getLogger(__name__)


def compare_graphs(built: DeBruijnGraph, reference: DeBruijnGraph) -> list[str]:
    """Differences between two graphs with identical id schemes; empty when equal."""
    problems = []
    if built.vertices != reference.vertices:
        problems.append(
            f"vertex sets differ: {len(built.vertices)} built, {len(reference.vertices)} reference, "
            f"{len(built.vertices ^ reference.vertices)} in the symmetric difference"
        )
    if built.edges != reference.edges:
        differing = {key for key in built.edges.keys() | reference.edges.keys() if built.edges.get(key) != reference.edges.get(key)}
        problems.append(f"edge weights differ on {len(differing)} edges, e.g. {sorted(differing)[:3]}")
    return problems


def compare_classes(ids: np.ndarray, reference: IdStream, label: str) -> list[str]:
    """Duplicate classes must match once both streams are renumbered by first occurrence."""
    if len(ids) != len(reference):
        return [f"{label}: {len(ids)} ids, reference has {len(reference)}"]
    mismatched = np.flatnonzero(normalize_ids(ids) != normalize_ids(reference.ids))
    if mismatched.size:
        return [f"{label}: duplicate classes differ at {mismatched.size} positions, first ordinal {int(mismatched[0]) + 1}"]
    return []


def run_verify_command(args: argparse.Namespace) -> int:
    """
    Verify pipeline outputs.

    Args:
        args: parsed flags; the inputs must be the files the work directory was built from

    Returns:
        0 when every check passes, 1 otherwise
    """
    config = create_partition_config(args)
    work_dir = config.work_dir
    manifest = read_manifest(manifest_path(work_dir))
    reads = [read.sequence for read in ingest(args.inputs, manifest.k)]
    reference_stream = reference_ids(reads, manifest.k, manifest.rc_mode)

    problems = [f"manifest: {problem}" for problem in manifest.consistency_errors()]
    if manifest.phase_done("merge"):
        stream = load_id_stream(work_dir)
        problems += compare_classes(np.asarray(stream.ids), reference_stream, "msp")
        if not problems:
            reference = reference_build(reads, manifest.k, manifest.rc_mode)
            problems += compare_graphs(emit_edges(stream), reference)
    for mode in ("h", "b"):
        path = baseline_ids_path(work_dir, mode)
        if path.exists():
            problems += compare_classes(np.load(path, mmap_mode="r"), reference_stream, f"baseline {mode}")

    for problem in problems:
        logger.error(f"Verification failed - {problem}")
    if problems:
        print("verify=failed")
        return 1
    logger.info(f"Verification passed - work_dir: {work_dir}, kmers: {len(reference_stream)}")
    print("verify=ok")
    return 0


def register_verify(
    subparsers: argparse._SubParsersAction, common: argparse.ArgumentParser, params: argparse.ArgumentParser
) -> None:
    verify = subparsers.add_parser("verify", parents=[common, params], help="compare a work directory with the reference builder")
    verify.add_argument("inputs", nargs="+", type=Path)
    verify.set_defaults(handler=run_verify_command)
