"""Per-partition id mapping, the replacement merge, edge emission and the in-memory reference builder."""

from __future__ import annotations

import heapq
import logging
import tempfile
from itertools import groupby
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from configs.config import BYTES_PER_TABLE_ENTRY, EDGE_MAP_MAX_ENTRIES, MERGE_BLOCK_ORDINALS
from configs.formats import ID_DTYPE, REPLACEMENT_RECORD, iter_partition_records, iter_replacements
from msp.errors import DataCorruptionError, PartitionCapacityError
from msp.schemas import DeBruijnGraph, IdStream, MapSummary, ReplacementRange
from msp.sequence_core import PackedSequence, ShortRead, kmer_codes, pack

logger = logging.getLogger(__name__)

MAX_RANGE_COUNT = (1 << 32) - 1

ReadLike = Union[str, PackedSequence, ShortRead]


def max_table_entries(memory_budget: int) -> int:
    return max(1, memory_budget // BYTES_PER_TABLE_ENTRY)


def map_partition(
    partition_file: Path,
    replacement_file: Path,
    k: int,
    rc_mode: bool,
    partition_index: int = 0,
    max_entries: Optional[int] = None,
) -> MapSummary:
    """
    Map every k-mer of one partition to the ordinal of its first occurrence.

    Later occurrences produce replacement records; consecutive replacements whose
    sources and targets both advance by one are coalesced into a single range.

    Args:
        partition_file: records sorted by ascending start ordinal
        replacement_file: output path for the packed replacement ranges
        k: k-mer length
        rc_mode: key k-mers by their canonical form
        partition_index: used in error messages and logs
        max_entries: table size limit derived from the memory budget

    Returns:
        Distinct and replaced k-mer counts plus replacement file statistics

    Raises:
        DataCorruptionError: records out of ordinal order
        PartitionCapacityError: the table outgrew max_entries
    """
    table: dict[int, int] = {}
    summary = MapSummary(partition_index=partition_index)
    last_ordinal = 0
    pending: Optional[list[int]] = None  # [from_start, to_start, count]

    replacement_file.parent.mkdir(parents=True, exist_ok=True)
    with open(replacement_file, "wb") as fh:

        def flush() -> None:
            fh.write(REPLACEMENT_RECORD.pack(*pending))
            summary.replacement_ranges += 1

        for record in iter_partition_records(partition_file):
            if record.start_ordinal <= last_ordinal:
                raise DataCorruptionError(
                    f"partition {partition_index}: record at ordinal {record.start_ordinal} "
                    f"does not follow ordinal {last_ordinal}"
                )
            codes = kmer_codes(record.sequence, k, rc_mode)
            for offset, code in enumerate(codes):
                ordinal = record.start_ordinal + offset
                first = table.setdefault(code, ordinal)
                if first == ordinal:
                    summary.distinct_kmers += 1
                    if max_entries is not None and len(table) > max_entries:
                        raise PartitionCapacityError(partition_index, len(table), max_entries)
                    continue
                summary.replaced_kmers += 1
                if (
                    pending is not None
                    and pending[0] + pending[2] == ordinal
                    and pending[1] + pending[2] == first
                    and pending[2] < MAX_RANGE_COUNT
                ):
                    pending[2] += 1
                else:
                    if pending is not None:
                        flush()
                    pending = [ordinal, first, 1]
            last_ordinal = record.start_ordinal + len(codes) - 1
        if pending is not None:
            flush()

    summary.table_entries = len(table)
    summary.replacement_bytes = summary.replacement_ranges * REPLACEMENT_RECORD.size
    logger.debug(
        f"Partition mapped - index: {partition_index}, distinct: {summary.distinct_kmers}, "
        f"replaced: {summary.replaced_kmers}, ranges: {summary.replacement_ranges}"
    )
    return summary


def _allocate_ids(n: int, out_path: Optional[Path]) -> np.ndarray:
    if out_path is None:
        return np.empty(n, dtype=ID_DTYPE)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    if n == 0:
        empty = np.empty(0, dtype=ID_DTYPE)
        np.save(out_path, empty)
        return empty
    return np.lib.format.open_memmap(out_path, mode="w+", dtype=ID_DTYPE, shape=(n,))


def merge_replacements(
    files: Iterable[Path],
    n: int,
    read_kmer_counts: Optional[np.ndarray] = None,
    out_path: Optional[Path] = None,
    block_ordinals: int = MERGE_BLOCK_ORDINALS,
) -> IdStream:
    """
    Produce the final id of every ordinal 1..n.

    Ordinals covered by a replacement range take the range's target; every other
    ordinal keeps its own value. The replacement files are k-way merged by
    from_start, so the id stream is written front to back.

    Args:
        files: replacement files, each sorted by from_start
        n: total number of k-mer occurrences
        read_kmer_counts: per-read k-mer counts; a single read of n k-mers when omitted
        out_path: write the ids to this .npy file instead of keeping them in memory
        block_ordinals: identity fill granularity

    Returns:
        The id stream

    Raises:
        DataCorruptionError: ranges overlap, point forward, or run past n
    """
    ids = _allocate_ids(n, out_path)
    for start in range(0, n, block_ordinals):
        stop = min(n, start + block_ordinals)
        ids[start:stop] = np.arange(start + 1, stop + 1, dtype=ID_DTYPE)

    covered_until = 0  # one past the last ordinal replaced so far
    ranges = 0
    for replacement in heapq.merge(*(iter_replacements(path) for path in files), key=lambda r: r.from_start):
        _check_range(replacement, covered_until, n)
        ids[replacement.from_start - 1 : replacement.end - 1] = np.arange(
            replacement.to_start, replacement.to_start + replacement.count, dtype=ID_DTYPE
        )
        covered_until = replacement.end
        ranges += 1

    if isinstance(ids, np.memmap):
        ids.flush()
    if read_kmer_counts is None:
        read_kmer_counts = np.array([n] if n else [], dtype=np.uint32)
    logger.info(f"Merge finished - ordinals: {n}, ranges applied: {ranges}")
    return IdStream(ids=ids, read_kmer_counts=np.asarray(read_kmer_counts))


def _check_range(replacement: ReplacementRange, covered_until: int, n: int) -> None:
    if replacement.count < 1:
        raise DataCorruptionError(f"empty replacement range at ordinal {replacement.from_start}")
    if replacement.from_start < covered_until:
        raise DataCorruptionError(
            f"replacement range at ordinal {replacement.from_start} overlaps one ending at {covered_until - 1}"
        )
    if replacement.end - 1 > n:
        raise DataCorruptionError(f"replacement range ending at {replacement.end - 1} exceeds N={n}")
    if replacement.to_start >= replacement.from_start:
        raise DataCorruptionError(
            f"replacement {replacement.from_start}->{replacement.to_start} does not point to an earlier ordinal"
        )


class EdgeAggregator:
    """
    Counts (u, v) pairs in a dict and spills sorted runs to disk when it grows too large.

    Spilled runs are k-way merged back in (u, v) order by `items()`.
    """

    _ROW = np.dtype([("u", "<u8"), ("v", "<u8"), ("w", "<u8")])

    def __init__(self, max_entries: int = EDGE_MAP_MAX_ENTRIES, spill_dir: Optional[Path] = None):
        self.max_entries = max_entries
        self.spill_dir = spill_dir
        self._counts: dict[tuple[int, int], int] = {}
        self._runs: list[Path] = []

    def add(self, pairs: np.ndarray) -> None:
        if pairs.shape[0] == 0:
            return
        unique, weights = np.unique(pairs, axis=0, return_counts=True)
        for (u, v), w in zip(unique.tolist(), weights.tolist()):
            key = (u, v)
            self._counts[key] = self._counts.get(key, 0) + w
        if len(self._counts) > self.max_entries:
            self._spill()

    def _spill(self) -> None:
        rows = np.array([(u, v, w) for (u, v), w in sorted(self._counts.items())], dtype=self._ROW)
        with tempfile.NamedTemporaryFile(dir=self.spill_dir, suffix=".edges", delete=False) as fh:
            rows.tofile(fh)
            self._runs.append(Path(fh.name))
        logger.debug(f"Edge map spilled - entries: {len(self._counts)}, runs: {len(self._runs)}")
        self._counts.clear()

    def _iter_run(self, path: Path) -> Iterator[tuple[int, int, int]]:
        for u, v, w in np.fromfile(path, dtype=self._ROW).tolist():
            yield u, v, w

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        """(u, v) -> weight in ascending (u, v) order; spill files are removed once consumed."""
        in_memory = ((u, v, w) for (u, v), w in sorted(self._counts.items()))
        try:
            merged = heapq.merge(in_memory, *(self._iter_run(path) for path in self._runs))
            for key, group in groupby(merged, key=lambda row: (row[0], row[1])):
                yield key, sum(row[2] for row in group)
        finally:
            for path in self._runs:
                path.unlink(missing_ok=True)
            self._runs.clear()


def emit_edges(
    stream: IdStream,
    max_entries: int = EDGE_MAP_MAX_ENTRIES,
    spill_dir: Optional[Path] = None,
    block_ordinals: int = MERGE_BLOCK_ORDINALS,
) -> DeBruijnGraph:
    """
    Build the weighted de Bruijn graph from an id stream.

    Each pair of adjacent k-mers inside one read adds one to the weight of the
    edge between their ids; no edge crosses a read boundary.

    Raises:
        DataCorruptionError: the read k-mer counts do not sum to the stream length
    """
    counts = np.asarray(stream.read_kmer_counts, dtype=np.int64)
    n = len(stream)
    if int(counts.sum()) != n:
        raise DataCorruptionError(f"read k-mer counts sum to {int(counts.sum())}, id stream holds {n}")

    graph = DeBruijnGraph()
    if n == 0:
        return graph
    ids = stream.ids

    # same[i] is True when positions i and i+1 belong to one read
    same = np.ones(n - 1, dtype=bool)
    boundaries = np.cumsum(counts)[:-1] - 1
    boundaries = boundaries[(boundaries >= 0) & (boundaries < n - 1)]
    same[boundaries] = False

    aggregator = EdgeAggregator(max_entries, spill_dir)
    for start in range(0, n, block_ordinals):
        stop = min(n, start + block_ordinals)
        block = np.asarray(ids[start:stop])
        graph.vertices.update(np.unique(block).tolist())
        pair_stop = min(stop, n - 1)
        if pair_stop <= start:
            continue
        mask = same[start:pair_stop]
        left = np.asarray(ids[start:pair_stop])[mask]
        right = np.asarray(ids[start + 1 : pair_stop + 1])[mask]
        aggregator.add(np.stack([left, right], axis=1))

    for key, weight in aggregator.items():
        graph.edges[key] = weight
    logger.info(f"Edges emitted - vertices: {graph.num_vertices}, edges: {graph.num_edges}")
    return graph


def _as_packed(read: ReadLike) -> PackedSequence:
    if isinstance(read, ShortRead):
        return read.sequence
    return pack(read) if isinstance(read, str) else read


def reference_ids(reads: Iterable[ReadLike], k: int, rc_mode: bool = False) -> IdStream:
    """Single-pass in-memory first-occurrence ids; reads shorter than k contribute nothing."""
    table: dict[int, int] = {}
    ids: list[int] = []
    counts: list[int] = []
    for read in reads:
        packed = _as_packed(read)
        if packed.length < k:
            continue
        codes = kmer_codes(packed, k, rc_mode)
        for code in codes:
            ids.append(table.setdefault(code, len(ids) + 1))
        counts.append(len(codes))
    return IdStream(ids=np.array(ids, dtype=ID_DTYPE), read_kmer_counts=np.array(counts, dtype=np.uint32))


def reference_build(reads: Iterable[ReadLike], k: int, rc_mode: bool = False) -> DeBruijnGraph:
    """
    In-memory de Bruijn graph used as the correctness oracle.

    Args:
        reads: ACGT strings or packed reads, in ordinal order
        k: k-mer length
        rc_mode: collapse each k-mer with its reverse complement

    Returns:
        Graph whose vertex ids are first-occurrence ordinals
    """
    stream = reference_ids(reads, k, rc_mode)
    graph = DeBruijnGraph()
    for read_ids in stream.reads():
        previous = None
        for vertex in read_ids.tolist():
            graph.vertices.add(vertex)
            if previous is not None:
                graph.edges[(previous, vertex)] = graph.edges.get((previous, vertex), 0) + 1
            previous = vertex
    return graph


def densify_ids(ids: np.ndarray) -> np.ndarray:
    """Renumber ids to 1..V, preserving their relative order."""
    _, inverse = np.unique(np.asarray(ids), return_inverse=True)
    return (inverse + 1).astype(ID_DTYPE)


def normalize_ids(ids: np.ndarray) -> np.ndarray:
    """Replace every id by the 1-based position where it first appears in the stream."""
    _, first_index, inverse = np.unique(np.asarray(ids), return_index=True, return_inverse=True)
    return (first_index[inverse] + 1).astype(ID_DTYPE)
