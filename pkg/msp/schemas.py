from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from msp.sequence_core import PackedSequence


@dataclass(frozen=True, slots=True)
class MinimizerResult:
    substring: PackedSequence
    position: int  # 0-based, on the strand named by `strand`
    strand: Literal["+", "-"] = "+"


@dataclass(frozen=True, slots=True)
class SuperKMer:
    start_ordinal: int
    sequence: PackedSequence
    minimizer: PackedSequence

    def kmer_count(self, k: int) -> int:
        return self.sequence.length - k + 1


@dataclass(slots=True)
class ScanStats:
    comparisons: int = 0
    breaks: int = 0


@dataclass(frozen=True, slots=True)
class PartitionRecord:
    start_ordinal: int
    sequence: PackedSequence


@dataclass(frozen=True, slots=True)
class ReplacementRange:
    """`count` consecutive ordinals starting at from_start map onto those starting at to_start."""

    from_start: int
    to_start: int
    count: int

    @property
    def end(self) -> int:
        """One past the last replaced ordinal."""
        return self.from_start + self.count


@dataclass
class IdStream:
    """One vertex id per k-mer occurrence in ordinal order, plus the k-mer count of every read."""

    ids: np.ndarray
    read_kmer_counts: np.ndarray

    def __len__(self) -> int:
        return int(self.ids.shape[0])

    def reads(self) -> Iterator[np.ndarray]:
        offset = 0
        for count in self.read_kmer_counts.tolist():
            yield self.ids[offset : offset + count]
            offset += count


@dataclass
class DeBruijnGraph:
    vertices: set[int] = field(default_factory=set)
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def write_edge_list(self, path: Path) -> None:
        """Write "u v weight" lines sorted by (u, v)."""
        with open(path, "w") as fh:
            for (u, v), weight in sorted(self.edges.items()):
                fh.write(f"{u} {v} {weight}\n")


@dataclass
class DPTable:
    """The (n+1) x m table filled by the clean-probability dynamic program."""

    word: tuple[int, ...]
    n: int
    Q: np.ndarray
    cells_filled: int = 0

    @property
    def m(self) -> int:
        return len(self.word)

    @property
    def clean_probability(self) -> float:
        return float(self.Q[self.n, 0])


class SymbolDistribution(BaseModel):
    """Independent per-symbol probabilities for the random-string model."""

    probabilities: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)

    @model_validator(mode="after")
    def _check(self) -> SymbolDistribution:
        if any(not 0.0 <= value <= 1.0 for value in self.probabilities):
            raise ValueError("symbol probabilities must lie in [0, 1]")
        if abs(sum(self.probabilities) - 1.0) > 1e-12:
            raise ValueError(f"symbol probabilities sum to {sum(self.probabilities)}, not 1")
        return self

    @classmethod
    def uniform(cls) -> SymbolDistribution:
        return cls()


class ModelEstimate(BaseModel):
    mean: float
    stderr: float
    trials: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> ModelEstimate:
        samples = np.asarray(samples, dtype=np.float64)
        trials = int(samples.size)
        if trials == 0:
            raise ValueError("at least one trial is required")
        stderr = float(samples.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        return cls(mean=float(samples.mean()), stderr=stderr, trials=trials)

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - value) <= sigmas * self.stderr


class P1Report(BaseModel):
    """Monte Carlo check of P1(k+a, p+a) <= 2*P1(k, p) + (p+2)/4^p."""

    k: int
    p: int
    a: int
    p1: ModelEstimate
    p1_shifted: ModelEstimate
    p2: ModelEstimate
    shift_bound: float = Field(description="2*P1(k,p) + (p+2)/4^p at the estimated P1(k,p)")
    ring_bound: float = Field(description="(p+1)/(k+1)")
    shift_bound_holds: bool
    ring_bound_holds: bool


class BaselineResult(BaseModel):
    """Outcome of an H-Partition or B-Partition run."""

    mode: Literal["h", "b"]
    distinct_kmers: int
    total_kmers: int
    spill_bytes: int
    spill_records: int
    max_table_entries: int
    id_path: Optional[str] = None


class PartitionSummary(BaseModel):
    """Counters gathered while scattering super k-mers into partition files."""

    n_reads: int = 0
    n_bases: int = 0
    total_kmers: int = 0
    total_breaks: int = 0
    scan_comparisons: int = 0
    partition_bases: int = 0
    partition_records: list[int] = Field(default_factory=list)
    partition_bytes: list[int] = Field(default_factory=list)
    partition_kmers: list[int] = Field(default_factory=list)


class MapSummary(BaseModel):
    """Outcome of mapping one partition file."""

    partition_index: int
    distinct_kmers: int = 0
    replaced_kmers: int = 0
    replacement_ranges: int = 0
    replacement_bytes: int = 0
    table_entries: int = 0
