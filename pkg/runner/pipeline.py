"""Asynchronous orchestration of the partition, map, merge and edges phases and of the baselines."""

import asyncio
import logging
from pathlib import Path
from typing import Callable, Iterable, Optional

import numpy as np

from app_startup.lifespan import run_lifespan
from app_startup.state import RunStateManager
from configs.formats import READ_KMERS_DTYPE
from configs.run_models import BaselineConfig, PartitionConfig, RunManifest
from configs.types import PhaseName
from msp.baselines import b_partition, h_partition
from msp.errors import DataCorruptionError, PhaseError
from msp.map_merge import densify_ids, emit_edges, map_partition, max_table_entries, merge_replacements
from msp.partitioning import msp_partition
from msp.schemas import BaselineResult, DeBruijnGraph, IdStream, MapSummary
from msp.sequence_core import ShortRead
from utils.workdir_utils import (
    edge_list_path,
    id_stream_path,
    partition_path,
    partitions_root,
    read_kmers_path,
    replacement_path,
    replacements_root,
    reset_dir,
    spill_root,
)

logger = logging.getLogger(__name__)

ReadSource = Callable[[], Iterable[ShortRead]]


def load_read_kmer_counts(work_dir: Path) -> np.ndarray:
    path = read_kmers_path(work_dir)
    if not path.exists():
        raise PhaseError("merge", f"read k-mer counts missing at {path}")
    return np.fromfile(path, dtype=READ_KMERS_DTYPE)


def load_id_stream(work_dir: Path, ids_path: Optional[Path] = None) -> IdStream:
    path = ids_path or id_stream_path(work_dir)
    if not path.exists():
        raise PhaseError("edges", f"id stream missing at {path}")
    return IdStream(ids=np.load(path, mmap_mode="r"), read_kmer_counts=load_read_kmer_counts(work_dir))


async def run_partition_phase(manager: RunStateManager, reads: ReadSource) -> RunManifest:
    config = manager.config
    async with manager.phase("partition") as manifest:
        summary = await asyncio.to_thread(msp_partition, reads(), config)
        manifest.n_reads = summary.n_reads
        manifest.n_bases = summary.n_bases
        manifest.total_kmers = summary.total_kmers
        manifest.total_breaks = summary.total_breaks
        manifest.scan_comparisons = summary.scan_comparisons
        manifest.partition_bases = summary.partition_bases
        manifest.partition_records = summary.partition_records
        manifest.partition_bytes = summary.partition_bytes
        manifest.partition_kmers = summary.partition_kmers
        manifest.last_completed_phase = None
    return manifest


async def run_map_phase(manager: RunStateManager) -> list[MapSummary]:
    """Map every partition, at most `threads` at a time."""
    config = manager.config
    work_dir = config.work_dir
    limit = max_table_entries(config.memory_budget // config.threads)
    semaphore = asyncio.Semaphore(config.threads)

    async def map_one(index: int) -> MapSummary:
        async with semaphore:
            return await asyncio.to_thread(
                map_partition,
                partition_path(work_dir, index),
                replacement_path(work_dir, index),
                config.k,
                config.rc_mode,
                index,
                limit,
            )

    async with manager.phase("map") as manifest:
        if not partitions_root(work_dir).exists():
            raise PhaseError("map", f"no partitions under {partitions_root(work_dir)}")
        reset_dir(replacements_root(work_dir))
        summaries = await asyncio.gather(*(map_one(index) for index in range(config.t)))
        manifest.partition_distinct = [s.distinct_kmers for s in summaries]
        manifest.distinct_kmers = sum(manifest.partition_distinct)
        manifest.replaced_kmers = sum(s.replaced_kmers for s in summaries)
        manifest.replacement_ranges = sum(s.replacement_ranges for s in summaries)
        manifest.replacement_bytes = sum(s.replacement_bytes for s in summaries)
        manifest.max_table_entries = max((s.table_entries for s in summaries), default=0)
        bytes_per_base = manifest.replacement_bytes / max(1, manifest.n_bases)
        logger.info(
            f"Mapping summary - distinct: {manifest.distinct_kmers}, replaced: {manifest.replaced_kmers}, "
            f"ranges: {manifest.replacement_ranges}, replacement_bytes_per_input_base: {bytes_per_base:.4f}"
        )
    return summaries


async def run_merge_phase(manager: RunStateManager) -> IdStream:
    config = manager.config
    work_dir = config.work_dir
    async with manager.phase("merge") as manifest:
        counts = load_read_kmer_counts(work_dir)
        if int(counts.sum()) != manifest.total_kmers:
            raise DataCorruptionError(
                f"read k-mer counts sum to {int(counts.sum())}, manifest records N={manifest.total_kmers}"
            )
        files = [replacement_path(work_dir, index) for index in range(config.t)]
        stream = await asyncio.to_thread(
            merge_replacements, files, manifest.total_kmers, counts, id_stream_path(work_dir)
        )
    return stream


async def run_edges_phase(manager: RunStateManager, densify: bool = False) -> DeBruijnGraph:
    work_dir = manager.config.work_dir
    async with manager.phase("edges") as manifest:
        stream = load_id_stream(work_dir)
        if densify:
            stream = IdStream(ids=densify_ids(stream.ids), read_kmer_counts=stream.read_kmer_counts)
        spill_dir = reset_dir(spill_root(work_dir) / "edges")
        graph = await asyncio.to_thread(emit_edges, stream, spill_dir=spill_dir)
        await asyncio.to_thread(graph.write_edge_list, edge_list_path(work_dir))
        manifest.vertex_count = graph.num_vertices
        manifest.edge_count = graph.num_edges
        manifest.edge_weight_total = sum(graph.edges.values())
    return graph


async def run_build(config: PartitionConfig, reads: ReadSource, densify: bool = False) -> tuple[DeBruijnGraph, RunManifest]:
    """
    Run all four phases in sequence.

    Args:
        config: run parameters
        reads: callable returning a fresh iterator over the reads
        densify: renumber vertex ids to 1..V before emitting edges

    Returns:
        The graph and the final manifest
    """
    async with run_lifespan(config) as (manager, state):
        await run_partition_phase(manager, reads)
        await run_map_phase(manager)
        await run_merge_phase(manager)
        graph = await run_edges_phase(manager, densify)
        return graph, state.manifest


async def run_single_phase(
    config: PartitionConfig, phase: PhaseName, reads: Optional[ReadSource] = None, densify: bool = False
) -> RunManifest:
    """Run one phase against an existing work directory; partition starts a new run."""
    async with run_lifespan(config, resume=phase != "partition") as (manager, state):
        if phase == "partition":
            if reads is None:
                raise PhaseError("partition", "no input files given")
            await run_partition_phase(manager, reads)
        elif phase == "map":
            await run_map_phase(manager)
        elif phase == "merge":
            await run_merge_phase(manager)
        elif phase == "edges":
            await run_edges_phase(manager, densify)
        else:
            raise PhaseError(phase, "unknown phase")
        return state.manifest


def baseline_dir(work_dir: Path, mode: str) -> Path:
    return work_dir / f"baseline-{mode}"


def baseline_ids_path(work_dir: Path, mode: str) -> Path:
    return id_stream_path(baseline_dir(work_dir, mode))


async def run_baseline(config: BaselineConfig, reads: ReadSource) -> tuple[IdStream, BaselineResult, RunManifest]:
    """
    Run H-Partition or B-Partition and report it in the common manifest schema.

    The baseline keeps its manifest, spill files and ids in baseline-<mode>/ under the
    work directory, next to the MSP run it is compared with.
    """
    run_config = config.model_copy(update={"work_dir": baseline_dir(config.work_dir, config.mode)})
    async with run_lifespan(run_config) as (manager, state):
        async with manager.phase(f"baseline-{config.mode}", ordered=False) as manifest:
            read_list = list(reads())
            runner = h_partition if config.mode == "h" else b_partition
            stream, result = await asyncio.to_thread(
                runner, read_list, run_config, id_stream_path(run_config.work_dir)
            )
            manifest.baseline_mode = config.mode
            manifest.n_reads = len(read_list)
            manifest.n_bases = sum(read.sequence.length for read in read_list)
            manifest.total_kmers = result.total_kmers
            manifest.distinct_kmers = result.distinct_kmers
            manifest.max_table_entries = result.max_table_entries
            manifest.spill_bytes = result.spill_bytes
        return stream, result, state.manifest
