"""Scatter-gather baselines: H-Partition (horizontal read chunks) and B-Partition (k-mer hash buckets)."""

from __future__ import annotations

import heapq
import logging
from collections import defaultdict
from itertools import groupby
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from configs.config import PARTITION_BUFFER_BYTES
from configs.formats import B_SPILL_HEAD, H_SPILL_TAIL, ID_DTYPE, iter_b_spill, iter_h_spill, key_width
from configs.run_models import BaselineConfig
from msp.errors import PhaseError
from msp.partitioning import hash_code
from msp.schemas import BaselineResult, IdStream
from msp.sequence_core import ShortRead, kmer_codes
from utils.workdir_utils import reset_dir, spill_root

logger = logging.getLogger(__name__)


def _read_counts(reads: Sequence[ShortRead], k: int) -> np.ndarray:
    return np.array([read.kmer_count(k) for read in reads], dtype=np.uint32)


def _allocate(n: int, path: Optional[Path]) -> np.ndarray:
    if path is None:
        return np.zeros(n, dtype=ID_DTYPE)
    if n == 0:
        np.save(path, np.empty(0, dtype=ID_DTYPE))
        return np.empty(0, dtype=ID_DTYPE)
    return np.lib.format.open_memmap(path, mode="w+", dtype=ID_DTYPE, shape=(n,))


def h_partition(
    reads: Sequence[ShortRead], config: BaselineConfig, ids_path: Optional[Path] = None
) -> tuple[IdStream, BaselineResult]:
    """
    H-Partition: split the reads into t horizontal chunks and map each chunk in memory.

    Every chunk numbers its distinct k-mers locally and spills (k-mer, ordinal,
    local id) sorted by k-mer. The sorted spills are then merged; a k-mer found in
    several chunks takes the id it received in the smallest chunk, offset by the
    distinct counts of the chunks before it.

    Args:
        reads: reads in ordinal order
        config: k, t, rc_mode and work directory
        ids_path: keep the ids in this memory-mapped .npy file instead of in memory

    Returns:
        The id stream and the spill statistics
    """
    k = config.k
    width = key_width(k)
    spill_dir = reset_dir(spill_root(config.work_dir) / "h")
    chunk_size = max(1, -(-len(reads) // config.t))

    distinct: list[int] = []
    spill_paths: list[Path] = []
    spill_bytes = 0
    spill_records = 0
    for chunk_index, start in enumerate(range(0, len(reads), chunk_size)):
        table: dict[int, int] = {}
        entries: list[tuple[int, int, int]] = []
        for read in reads[start : start + chunk_size]:
            for offset, code in enumerate(kmer_codes(read.sequence, k, config.rc_mode)):
                local_id = table.setdefault(code, len(table) + 1)
                entries.append((code, read.ordinal_base + offset, local_id))
        entries.sort()
        path = spill_dir / f"chunk-{chunk_index:06d}.bin"
        try:
            with open(path, "wb") as fh:
                fh.write(
                    b"".join(code.to_bytes(width, "big") + H_SPILL_TAIL.pack(o, i) for code, o, i in entries)
                )
        except OSError as e:
            raise PhaseError("baseline", f"cannot write spill chunk {chunk_index} at {path}: {e}") from e
        distinct.append(len(table))
        spill_paths.append(path)
        spill_records += len(entries)
        spill_bytes += len(entries) * (width + H_SPILL_TAIL.size)
        logger.debug(f"H-Partition chunk spilled - chunk: {chunk_index}, distinct: {len(table)}, entries: {len(entries)}")

    offsets = np.concatenate([[0], np.cumsum(distinct)]).astype(np.int64).tolist()
    counts = _read_counts(reads, k)
    n = int(counts.sum())
    ids = _allocate(n, ids_path)

    def tagged(chunk_index: int, path: Path):
        for key, ordinal, local_id in iter_h_spill(path, k):
            yield key, chunk_index, ordinal, local_id

    merged = heapq.merge(*(tagged(i, path) for i, path in enumerate(spill_paths)))
    distinct_total = 0
    for _key, group in groupby(merged, key=lambda entry: entry[0]):
        group = list(group)
        # the group is ordered by chunk, so its first entry comes from the smallest chunk
        _, chunk_index, _, local_id = group[0]
        global_id = offsets[chunk_index] + local_id
        for _, _, ordinal, _ in group:
            ids[ordinal - 1] = global_id
        distinct_total += 1
    if isinstance(ids, np.memmap):
        ids.flush()

    result = BaselineResult(
        mode="h",
        distinct_kmers=distinct_total,
        total_kmers=n,
        spill_bytes=spill_bytes,
        spill_records=spill_records,
        max_table_entries=max(distinct, default=0),
        id_path=str(ids_path) if ids_path else None,
    )
    logger.info(
        f"H-Partition finished - chunks: {len(spill_paths)}, distinct: {result.distinct_kmers}, "
        f"kmers: {n}, spill_bytes: {spill_bytes}"
    )
    return IdStream(ids=ids, read_kmer_counts=counts), result


def bucket_of(code: int, t: int, suffix_symbols: Optional[int] = None) -> int:
    """B-Partition bucket of a k-mer code: hash of the whole k-mer, or of its last q symbols."""
    if suffix_symbols is not None:
        return (code & ((1 << (2 * suffix_symbols)) - 1)) % t
    return ((hash_code(code) >> 32) * t) >> 32


class _BucketSpill:
    """Buffered append-only spill files, one per bucket."""

    def __init__(self, root: Path, t: int):
        self.root = root
        self.t = t
        self.bytes_written = 0
        self._buffers: dict[int, bytearray] = defaultdict(bytearray)

    def path(self, bucket: int) -> Path:
        return self.root / f"bucket-{bucket:06d}.bin"

    def append(self, bucket: int, data: bytes) -> None:
        buffer = self._buffers[bucket]
        buffer += data
        self.bytes_written += len(data)
        if len(buffer) >= PARTITION_BUFFER_BYTES:
            self._flush(bucket)

    def _flush(self, bucket: int) -> None:
        try:
            with open(self.path(bucket), "ab") as fh:
                fh.write(self._buffers[bucket])
        except OSError as e:
            raise PhaseError("baseline", f"cannot write bucket {bucket}: {e}") from e
        self._buffers[bucket].clear()

    def close(self) -> None:
        for bucket in range(self.t):
            self._flush(bucket)


def b_partition(
    reads: Sequence[ShortRead], config: BaselineConfig, ids_path: Optional[Path] = None
) -> tuple[IdStream, BaselineResult]:
    """
    B-Partition: spill every k-mer occurrence into bucket hash(k-mer) mod t, then map bucket by bucket.

    Bucket j numbers its distinct k-mers from one past the total distinct count of
    buckets 0..j-1, so ids form a single global range 1..V.
    """
    k = config.k
    width = key_width(k)
    spill = _BucketSpill(reset_dir(spill_root(config.work_dir) / "b"), config.t)
    for read in reads:
        for offset, code in enumerate(kmer_codes(read.sequence, k, config.rc_mode)):
            bucket = bucket_of(code, config.t, config.suffix_symbols)
            spill.append(bucket, B_SPILL_HEAD.pack(read.ordinal_base + offset) + code.to_bytes(width, "big"))
    spill.close()

    counts = _read_counts(reads, k)
    n = int(counts.sum())
    ids = _allocate(n, ids_path)

    next_id = 1
    max_entries = 0
    for bucket in range(config.t):
        table: dict[int, int] = {}
        for ordinal, code in iter_b_spill(spill.path(bucket), k):
            global_id = table.get(code)
            if global_id is None:
                global_id = table[code] = next_id
                next_id += 1
            ids[ordinal - 1] = global_id
        max_entries = max(max_entries, len(table))
    if isinstance(ids, np.memmap):
        ids.flush()

    result = BaselineResult(
        mode="b",
        distinct_kmers=next_id - 1,
        total_kmers=n,
        spill_bytes=spill.bytes_written,
        spill_records=n,
        max_table_entries=max_entries,
        id_path=str(ids_path) if ids_path else None,
    )
    logger.info(
        f"B-Partition finished - buckets: {config.t}, distinct: {result.distinct_kmers}, "
        f"kmers: {n}, spill_bytes: {result.spill_bytes}"
    )
    return IdStream(ids=ids, read_kmer_counts=counts), result
