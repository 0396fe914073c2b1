"""DNA alphabet handling: 2-bit packing, reverse complements and canonical k-mers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence

import numpy as np

from msp.errors import InvalidArgumentError

ALPHABET = "ACGT"

# A=0, C=1, G=2, T=3 so integer order equals lexicographic order
_ENCODE = np.full(256, 255, dtype=np.uint8)
for _code, _base in enumerate(ALPHABET):
    _ENCODE[ord(_base)] = _code
    _ENCODE[ord(_base.lower())] = _code
_DECODE = np.frombuffer(ALPHABET.encode("ascii"), dtype=np.uint8)

_ACGT_RUN = re.compile(r"[ACGTacgt]+")


def complement_code(code: int) -> int:
    """Watson-Crick complement of a 2-bit base code (A<->T, C<->G)."""
    return 3 - code


@total_ordering
@dataclass(frozen=True, slots=True)
class PackedSequence:
    """
    A DNA string stored as 2-bit codes, four bases per byte, most significant first.

    The final byte is zero padded, so two packed sequences of equal length compare
    exactly like their unpacked strings.
    """

    length: int
    payload: bytes

    @classmethod
    def from_codes(cls, codes: Sequence[int] | np.ndarray) -> PackedSequence:
        codes = np.asarray(codes, dtype=np.uint8)
        length = int(codes.size)
        padded = np.zeros(-(-length // 4) * 4, dtype=np.uint8)
        padded[:length] = codes
        quads = padded.reshape(-1, 4)
        packed = (quads[:, 0] << 6) | (quads[:, 1] << 4) | (quads[:, 2] << 2) | quads[:, 3]
        return cls(length, packed.astype(np.uint8).tobytes())

    @classmethod
    def from_int(cls, value: int, length: int) -> PackedSequence:
        """Build from the 2*length-bit integer whose first base is the most significant pair."""
        nbytes = -(-length // 4)
        pad_bits = nbytes * 8 - 2 * length
        return cls(length, (value << pad_bits).to_bytes(nbytes, "big"))

    def codes(self) -> np.ndarray:
        raw = np.frombuffer(self.payload, dtype=np.uint8)
        expanded = np.stack([(raw >> 6) & 3, (raw >> 4) & 3, (raw >> 2) & 3, raw & 3], axis=1)
        return expanded.reshape(-1)[: self.length]

    def to_int(self) -> int:
        pad_bits = len(self.payload) * 8 - 2 * self.length
        return int.from_bytes(self.payload, "big") >> pad_bits

    def subsequence(self, start: int, stop: int) -> PackedSequence:
        if not 0 <= start <= stop <= self.length:
            raise InvalidArgumentError(f"slice [{start}, {stop}) outside sequence of length {self.length}")
        width = stop - start
        value = (self.to_int() >> (2 * (self.length - stop))) & ((1 << (2 * width)) - 1)
        return PackedSequence.from_int(value, width)

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return unpack(self)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, PackedSequence):
            return NotImplemented
        if self.length == other.length:
            return self.payload < other.payload
        return unpack(self) < unpack(other)


@dataclass(frozen=True, slots=True)
class ShortRead:
    """A read that participates in k-mer extraction; ordinal_base is its first k-mer's global ordinal."""

    ordinal_base: int
    sequence: PackedSequence
    name: str = ""

    def kmer_count(self, k: int) -> int:
        return max(0, self.sequence.length - k + 1)


def pack(sequence: str) -> PackedSequence:
    """
    Encode an ACGT string (case-insensitive) into a PackedSequence.

    Args:
        sequence: ASCII base string

    Returns:
        The packed sequence

    Raises:
        InvalidArgumentError: if a character outside ACGT is present, naming its position
    """
    try:
        raw = np.frombuffer(sequence.encode("ascii"), dtype=np.uint8)
    except UnicodeEncodeError as e:
        raise InvalidArgumentError(
            f"non-ACGT character {sequence[e.start]!r} at position {e.start}"
        ) from e
    codes = _ENCODE[raw]
    bad = np.flatnonzero(codes == 255)
    if bad.size:
        position = int(bad[0])
        raise InvalidArgumentError(f"non-ACGT character {sequence[position]!r} at position {position}")
    return PackedSequence.from_codes(codes)


def unpack(sequence: PackedSequence) -> str:
    return _DECODE[sequence.codes()].tobytes().decode("ascii")


def compare(a: PackedSequence, b: PackedSequence) -> int:
    """Three-way lexicographic comparison: -1, 0 or 1."""
    if a == b:
        return 0
    return -1 if a < b else 1


def reverse_complement(sequence: PackedSequence) -> PackedSequence:
    return PackedSequence.from_codes(3 - sequence.codes()[::-1])


def canonical_kmer(kmer: PackedSequence) -> PackedSequence:
    """The lexicographically smaller of a k-mer and its reverse complement."""
    rc = reverse_complement(kmer)
    return rc if rc < kmer else kmer


def reverse_complement_code(value: int, length: int) -> int:
    result = 0
    for _ in range(length):
        result = (result << 2) | complement_code(value & 3)
        value >>= 2
    return result


def rolling_codes(base_codes: Iterable[int], width: int, canonical: bool = False) -> list[int]:
    """
    Integer codes of every width-long substring, left to right.

    Args:
        base_codes: 2-bit base codes of the sequence
        width: substring length
        canonical: replace each code by min(code, reverse complement code)

    Returns:
        One code per substring start position
    """
    mask = (1 << (2 * width)) - 1
    shift = 2 * (width - 1)
    forward = 0
    backward = 0
    out: list[int] = []
    for i, code in enumerate(base_codes):
        forward = ((forward << 2) | code) & mask
        backward = (backward >> 2) | ((3 - code) << shift)
        if i >= width - 1:
            out.append(backward if canonical and backward < forward else forward)
    return out


def kmer_codes(sequence: PackedSequence, k: int, canonical: bool = False) -> list[int]:
    """Rolling k-mer codes of a packed sequence (canonical codes in reverse-complement mode)."""
    return rolling_codes(sequence.codes().tolist(), k, canonical)


def split_acgt_runs(text: str) -> list[str]:
    """Maximal ACGT runs of a raw read; any other character (N, IUPAC codes) splits it."""
    return _ACGT_RUN.findall(text)
