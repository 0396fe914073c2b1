"""Minimum p-substrings of k-mers and the three super k-mer scanners."""

from __future__ import annotations

import heapq

from msp.base import BaseScanner
from msp.errors import InvalidArgumentError
from msp.schemas import MinimizerResult, ScanStats, SuperKMer
from msp.sequence_core import PackedSequence, reverse_complement, rolling_codes


def _leftmost_minimum(codes: list[int]) -> int:
    best = 0
    for j in range(1, len(codes)):
        if codes[j] < codes[best]:
            best = j
    return best


def min_p_bruteforce(window: PackedSequence, p: int) -> MinimizerResult:
    """
    Exhaustive minimum p-substring of a window; ties resolve to the leftmost occurrence.

    Args:
        window: sequence to search
        p: substring length

    Returns:
        The minimum p-substring and its 0-based start offset
    """
    if p < 1 or p > window.length:
        raise InvalidArgumentError(f"need 1 <= p <= |window|, got p={p}, |window|={window.length}")
    codes = rolling_codes(window.codes().tolist(), p)
    position = _leftmost_minimum(codes)
    return MinimizerResult(PackedSequence.from_int(codes[position], p), position, "+")


def min_p_rc(window: PackedSequence, p: int) -> MinimizerResult:
    """Minimum p-substring over both strands; the forward strand wins ties."""
    forward = min_p_bruteforce(window, p)
    backward = min_p_bruteforce(reverse_complement(window), p)
    if backward.substring < forward.substring:
        return MinimizerResult(backward.substring, backward.position, "-")
    return forward


class SimpleScanner(BaseScanner):
    """
    Sliding scan that only rescans a window when its minimum falls off the left edge.

    The tracked minimum is the rightmost occurrence of the current minimum value. When it
    expires, the incoming p-substring is checked against it first; a rescan only runs when
    the new minimum is strictly larger, i.e. at a super k-mer break.
    """

    name = "scan"

    def _rescan(self, keys: list[int], start: int, stats: ScanStats) -> int:
        best = start
        for j in range(start + 1, start + self.window):
            stats.comparisons += 1
            if keys[j] <= keys[best]:
                best = j
        return best

    def window_minima(self, keys: list[int], stats: ScanStats) -> list[int]:
        n_windows = len(keys) - self.window + 1
        min_pos = self._rescan(keys, 0, stats)
        minima = [keys[min_pos]]
        for i in range(1, n_windows):
            last = i + self.window - 1
            stats.comparisons += 1
            if keys[last] <= keys[min_pos]:
                min_pos = last
            elif i > min_pos:
                min_pos = self._rescan(keys, i, stats)
            minima.append(keys[min_pos])
        return minima


class _CountedEntry:
    """Heap entry whose comparisons are tallied into the owning scan's stats."""

    __slots__ = ("key", "position", "stats")

    def __init__(self, key: int, position: int, stats: ScanStats):
        self.key = key
        self.position = position
        self.stats = stats

    def __lt__(self, other: _CountedEntry) -> bool:
        self.stats.comparisons += 1
        if self.key != other.key:
            return self.key < other.key
        return self.position < other.position


class QueueScanner(BaseScanner):
    """Priority queue over the p-substrings of the window, with lazy deletion of expired entries."""

    name = "queue"

    def window_minima(self, keys: list[int], stats: ScanStats) -> list[int]:
        n_windows = len(keys) - self.window + 1
        heap: list[_CountedEntry] = []
        for j in range(self.window - 1):
            heapq.heappush(heap, _CountedEntry(keys[j], j, stats))
        minima: list[int] = []
        for i in range(n_windows):
            last = i + self.window - 1
            heapq.heappush(heap, _CountedEntry(keys[last], last, stats))
            while heap[0].position < i:
                heapq.heappop(heap)
            minima.append(heap[0].key)
        return minima


class BruteScanner(BaseScanner):
    """Recomputes every window from scratch: (k-p) comparisons per k-mer."""

    name = "brute"

    def window_minima(self, keys: list[int], stats: ScanStats) -> list[int]:
        minima: list[int] = []
        for i in range(len(keys) - self.window + 1):
            best = keys[i]
            for j in range(i + 1, i + self.window):
                stats.comparisons += 1
                if keys[j] < best:
                    best = keys[j]
            minima.append(best)
        return minima


def simple_scan(
    read: PackedSequence, k: int, p: int, rc_mode: bool = False, start_ordinal: int = 1
) -> tuple[list[SuperKMer], ScanStats]:
    return SimpleScanner(k, p, rc_mode).scan(read, start_ordinal)


def queue_scan(
    read: PackedSequence, k: int, p: int, rc_mode: bool = False, start_ordinal: int = 1
) -> tuple[list[SuperKMer], ScanStats]:
    return QueueScanner(k, p, rc_mode).scan(read, start_ordinal)


def brute_scan(
    read: PackedSequence, k: int, p: int, rc_mode: bool = False, start_ordinal: int = 1
) -> tuple[list[SuperKMer], ScanStats]:
    return BruteScanner(k, p, rc_mode).scan(read, start_ordinal)


def comparison_bound(m: int, k: int, p: int, breaks: int) -> int:
    """Upper bound m + l*k - p*l - p + 1 on the simple scan's p-substring comparisons."""
    return m + breaks * k - p * breaks - p + 1
