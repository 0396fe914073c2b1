"""Base scanner class for super k-mer decomposition."""

from abc import ABC, abstractmethod
from typing import ClassVar

from msp.errors import InvalidArgumentError
from msp.schemas import ScanStats, SuperKMer
from msp.sequence_core import PackedSequence, rolling_codes


class BaseScanner(ABC):
    """
    Base class for all minimizer scanners.

    Subclasses only decide how the per-window minimum p-substring is found;
    grouping windows into super k-mers and ordinal bookkeeping live here so every
    scanner emits byte-identical output for the same read.
    """

    name: ClassVar[str]

    def __init__(self, k: int, p: int, rc_mode: bool = False):
        """
        Initialize a scanner.

        Args:
            k: k-mer length
            p: minimizer length, 1 <= p <= k
            rc_mode: key p-substrings by min(substring, reverse complement)
        """
        if p < 1 or p > k:
            raise InvalidArgumentError(f"need 1 <= p <= k, got p={p}, k={k}")
        self.k = k
        self.p = p
        self.rc_mode = rc_mode

    @property
    def window(self) -> int:
        """Number of p-substrings inside one k-mer."""
        return self.k - self.p + 1

    @abstractmethod
    def window_minima(self, keys: list[int], stats: ScanStats) -> list[int]:
        """Return the minimum p-substring key of every k-mer window, counting comparisons into stats."""

    def scan(self, read: PackedSequence, start_ordinal: int = 1) -> tuple[list[SuperKMer], ScanStats]:
        """
        Decompose a read into super k-mers.

        Args:
            read: packed read, at least k bases long
            start_ordinal: global ordinal of the read's first k-mer

        Returns:
            Super k-mers in left-to-right order and the scan statistics
        """
        if read.length < self.k:
            raise InvalidArgumentError(f"read of length {read.length} is shorter than k={self.k}")

        stats = ScanStats()
        keys = rolling_codes(read.codes().tolist(), self.p, self.rc_mode)
        minima = self.window_minima(keys, stats)

        read_value = read.to_int()
        super_kmers: list[SuperKMer] = []
        run_start = 0
        for i in range(1, len(minima) + 1):
            if i < len(minima) and minima[i] == minima[run_start]:
                continue
            stop = i - 1 + self.k
            width = stop - run_start
            value = (read_value >> (2 * (read.length - stop))) & ((1 << (2 * width)) - 1)
            super_kmers.append(
                SuperKMer(
                    start_ordinal=start_ordinal + run_start,
                    sequence=PackedSequence.from_int(value, width),
                    minimizer=PackedSequence.from_int(minima[run_start], self.p),
                )
            )
            run_start = i

        stats.breaks = len(super_kmers) - 1
        return super_kmers, stats
