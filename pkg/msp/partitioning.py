"""Minimum substring partitioning: scatter super k-mers into t wrapped partition files."""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from concurrent.futures import Future, ProcessPoolExecutor
from itertools import batched
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from configs.config import HASH_MASK_64, HASH_MULTIPLIER, PARTITION_BUFFER_BYTES
from configs.formats import READ_KMERS_DTYPE, encode_partition_record, iter_partition_records
from configs.run_models import PartitionConfig
from configs.types import ScannerName, WrapMode
from msp.errors import DataCorruptionError, InvalidArgumentError, PhaseError
from msp.scanners import create_scanner
from msp.schemas import PartitionRecord, PartitionSummary
from msp.sequence_core import PackedSequence, ShortRead
from utils.workdir_utils import ensure_work_dir, partition_path, partitions_root, read_kmers_path, reset_dir

logger = logging.getLogger(__name__)

# Reads handed to one worker process at a time
SCAN_BATCH_READS = 2048


def hash_code(value: int) -> int:
    """Multiplicative 64-bit hash; values wider than 64 bits are folded limb by limb."""
    h = 0
    while True:
        h = ((h ^ (value & HASH_MASK_64)) * HASH_MULTIPLIER) & HASH_MASK_64
        value >>= 64
        if not value:
            return h


def wrap_code(code: int, t: int, wrap: WrapMode = "hash") -> int:
    """Partition index of a minimizer given as its 2p-bit integer code."""
    if wrap == "identity":
        return code % t
    return ((hash_code(code) >> 32) * t) >> 32


def wrap_hash(minimizer: PackedSequence, t: int, wrap: WrapMode = "hash") -> int:
    """
    Map a minimizer onto one of t wrapped partitions.

    The hash keeps the high 32 bits of the multiplied code and scales them into
    [0, t), so the result depends only on the minimizer and t.

    Args:
        minimizer: packed p-substring
        t: number of partitions
        wrap: "hash" (default) or "identity", which uses the code itself

    Returns:
        Partition index in [0, t)
    """
    if t < 1:
        raise InvalidArgumentError(f"t must be at least 1, got {t}")
    return wrap_code(minimizer.to_int(), t, wrap)


class PartitionWriter:
    """
    Buffered append-only writer for the t partition files of one run.

    Each partition has a single writer and records must arrive in strictly
    increasing ordinal order per partition.
    """

    def __init__(self, work_dir: Path, t: int, buffer_bytes: int = PARTITION_BUFFER_BYTES):
        self.work_dir = work_dir
        self.t = t
        self.buffer_bytes = buffer_bytes
        self.records = [0] * t
        self.bytes = [0] * t
        self.kmers = [0] * t
        self.bases = 0
        self._buffers: dict[int, bytearray] = defaultdict(bytearray)
        self._last_ordinal = [0] * t

    def __enter__(self) -> PartitionWriter:
        reset_dir(partitions_root(self.work_dir))
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        if exc_type is None:
            self.close()

    def append(self, index: int, start_ordinal: int, sequence: PackedSequence, kmer_count: int) -> None:
        if start_ordinal <= self._last_ordinal[index]:
            raise DataCorruptionError(
                f"partition {index}: ordinal {start_ordinal} after {self._last_ordinal[index]}"
            )
        self._last_ordinal[index] = start_ordinal
        data = encode_partition_record(start_ordinal, sequence)
        buffer = self._buffers[index]
        buffer += data
        self.records[index] += 1
        self.bytes[index] += len(data)
        self.kmers[index] += kmer_count
        self.bases += sequence.length
        if len(buffer) >= self.buffer_bytes:
            self._flush(index)

    def _flush(self, index: int) -> None:
        path = partition_path(self.work_dir, index)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "ab") as fh:
                fh.write(self._buffers[index])
        except OSError as e:
            raise PhaseError("partition", f"cannot write partition {index} at {path}: {e}") from e
        self._buffers[index].clear()

    def close(self) -> None:
        """Flush every buffer; partitions that received nothing still get an empty file."""
        for index in range(self.t):
            self._flush(index)


def _scan_batch(
    reads: list[tuple[int, int, bytes]],
    k: int,
    p: int,
    t: int,
    rc_mode: bool,
    scanner_name: ScannerName,
    wrap: WrapMode,
) -> list[tuple[int, int, list[tuple[int, int, int, bytes]]]]:
    """Scan (ordinal_base, length, payload) reads; returns per-read (breaks, comparisons, records)."""
    scanner = create_scanner(scanner_name, k, p, rc_mode)
    out = []
    for ordinal_base, length, payload in reads:
        super_kmers, stats = scanner.scan(PackedSequence(length, payload), ordinal_base)
        records = [
            (
                wrap_code(sk.minimizer.to_int(), t, wrap),
                sk.start_ordinal,
                sk.sequence.length,
                sk.sequence.payload,
            )
            for sk in super_kmers
        ]
        out.append((stats.breaks, stats.comparisons, records))
    return out


def _scan_reads(
    reads: Iterable[ShortRead], config: PartitionConfig, counts: list[int], summary: PartitionSummary
) -> Iterator[tuple[int, int, list[tuple[int, int, int, bytes]]]]:
    """Yield scan results in read order, checking that ordinals are contiguous from 1."""
    args = (config.k, config.p, config.t, config.rc_mode, config.scanner, config.wrap)

    def raw_batches() -> Iterator[list[tuple[int, int, bytes]]]:
        next_ordinal = 1
        for batch in batched(reads, SCAN_BATCH_READS):
            raw = []
            for read in batch:
                if read.ordinal_base != next_ordinal:
                    raise InvalidArgumentError(
                        f"read {read.name or summary.n_reads + 1} starts at ordinal {read.ordinal_base}, "
                        f"expected {next_ordinal}"
                    )
                kmer_count = read.kmer_count(config.k)
                if kmer_count == 0:
                    raise InvalidArgumentError(f"read of length {read.sequence.length} is shorter than k={config.k}")
                next_ordinal += kmer_count
                counts.append(kmer_count)
                summary.n_reads += 1
                summary.n_bases += read.sequence.length
                raw.append((read.ordinal_base, read.sequence.length, read.sequence.payload))
            yield raw

    if config.threads == 1:
        for raw in raw_batches():
            yield from _scan_batch(raw, *args)
        return

    # results are consumed in submission order so partition records stay sorted by ordinal
    with ProcessPoolExecutor(max_workers=config.threads) as pool:
        pending: deque[Future] = deque()
        for raw in raw_batches():
            pending.append(pool.submit(_scan_batch, raw, *args))
            if len(pending) > 2 * config.threads:
                yield from pending.popleft().result()
        while pending:
            yield from pending.popleft().result()


def msp_partition(reads: Iterable[ShortRead], config: PartitionConfig) -> PartitionSummary:
    """
    Decompose every read into super k-mers and append each to the partition of its minimizer.

    Args:
        reads: reads in ordinal order, the first starting at ordinal 1
        config: run parameters

    Returns:
        Read, k-mer, break and per-partition counters
    """
    ensure_work_dir(config.work_dir)
    summary = PartitionSummary()
    counts: list[int] = []

    with PartitionWriter(config.work_dir, config.t) as writer:
        for breaks, comparisons, records in _scan_reads(reads, config, counts, summary):
            summary.total_breaks += breaks
            summary.scan_comparisons += comparisons
            for index, start_ordinal, length, payload in records:
                writer.append(index, start_ordinal, PackedSequence(length, payload), length - config.k + 1)

    np.asarray(counts, dtype=READ_KMERS_DTYPE).tofile(read_kmers_path(config.work_dir))

    summary.total_kmers = sum(counts)
    summary.partition_bases = writer.bases
    summary.partition_records = writer.records
    summary.partition_bytes = writer.bytes
    summary.partition_kmers = writer.kmers

    logger.info(
        f"Partitioning finished - reads: {summary.n_reads}, kmers: {summary.total_kmers}, "
        f"breaks: {summary.total_breaks}, partition_bases: {summary.partition_bases}, input_bases: {summary.n_bases}"
    )
    return summary


def read_partition(work_dir: Path, index: int) -> list[PartitionRecord]:
    """All records of one partition file in stored (ascending ordinal) order."""
    return list(iter_partition_records(partition_path(work_dir, index)))
