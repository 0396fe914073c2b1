"""Binary layouts of the on-disk artifacts (all little-endian)."""

import struct
from pathlib import Path
from typing import BinaryIO, Iterator

import numpy as np

from msp.errors import DataCorruptionError
from msp.schemas import PartitionRecord, ReplacementRange
from msp.sequence_core import PackedSequence

# Partition record: start_ordinal u64, length in bases u32, then ceil(length/4) packed bytes
PARTITION_HEADER = struct.Struct("<QI")

# Replacement range: from_start u64, to_start u64, count u32
REPLACEMENT_RECORD = struct.Struct("<QQI")

# H-Partition spill entry after the k-mer key: ordinal u64, local id u64
H_SPILL_TAIL = struct.Struct("<QQ")

# B-Partition spill entry before the k-mer key: ordinal u64
B_SPILL_HEAD = struct.Struct("<Q")

ID_DTYPE = np.dtype("<u8")
READ_KMERS_DTYPE = np.dtype("<u4")


def key_width(k: int) -> int:
    """Bytes needed for a big-endian k-mer key, so byte order equals numeric order."""
    return -(-2 * k // 8)


def encode_partition_record(start_ordinal: int, sequence: PackedSequence) -> bytes:
    return PARTITION_HEADER.pack(start_ordinal, sequence.length) + sequence.payload


def iter_partition_records(path: Path) -> Iterator[PartitionRecord]:
    with open(path, "rb") as fh:
        while True:
            header = fh.read(PARTITION_HEADER.size)
            if not header:
                return
            if len(header) != PARTITION_HEADER.size:
                raise DataCorruptionError(f"{path}: truncated record header")
            start_ordinal, length = PARTITION_HEADER.unpack(header)
            nbytes = -(-length // 4)
            payload = fh.read(nbytes)
            if len(payload) != nbytes:
                raise DataCorruptionError(f"{path}: truncated record at ordinal {start_ordinal}")
            yield PartitionRecord(start_ordinal, PackedSequence(length, payload))


def write_replacement(fh: BinaryIO, replacement: ReplacementRange) -> None:
    fh.write(REPLACEMENT_RECORD.pack(replacement.from_start, replacement.to_start, replacement.count))


def iter_replacements(path: Path) -> Iterator[ReplacementRange]:
    with open(path, "rb") as fh:
        while chunk := fh.read(REPLACEMENT_RECORD.size):
            if len(chunk) != REPLACEMENT_RECORD.size:
                raise DataCorruptionError(f"{path}: truncated replacement record")
            yield ReplacementRange(*REPLACEMENT_RECORD.unpack(chunk))


def iter_h_spill(path: Path, k: int) -> Iterator[tuple[bytes, int, int]]:
    """Yield (key, ordinal, local_id) from an H-Partition spill file."""
    width = key_width(k)
    size = width + H_SPILL_TAIL.size
    with open(path, "rb") as fh:
        while chunk := fh.read(size):
            ordinal, local_id = H_SPILL_TAIL.unpack(chunk[width:])
            yield chunk[:width], ordinal, local_id


def iter_b_spill(path: Path, k: int) -> Iterator[tuple[int, int]]:
    """Yield (ordinal, key) from a B-Partition bucket file."""
    width = key_width(k)
    size = B_SPILL_HEAD.size + width
    with open(path, "rb") as fh:
        while chunk := fh.read(size):
            (ordinal,) = B_SPILL_HEAD.unpack(chunk[: B_SPILL_HEAD.size])
            yield ordinal, int.from_bytes(chunk[B_SPILL_HEAD.size :], "big")
