from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from configs.config import (
    DEFAULT_K,
    DEFAULT_MEMORY_BUDGET,
    DEFAULT_P,
    DEFAULT_RC_MODE,
    DEFAULT_SCANNER,
    DEFAULT_SEED,
    DEFAULT_T,
    DEFAULT_THREADS,
    DEFAULT_WRAP,
)
from configs.types import PHASE_ORDER, BaselineMode, ScannerName, WrapMode


class PartitionConfig(BaseModel):
    """Parameters shared by every phase of one run."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(default=DEFAULT_K, ge=1, description="k-mer length")
    p: int = Field(default=DEFAULT_P, ge=1, le=32, description="minimizer length")
    t: int = Field(default=DEFAULT_T, ge=1, description="wrapped partition count")
    rc_mode: bool = DEFAULT_RC_MODE
    wrap: WrapMode = DEFAULT_WRAP
    scanner: ScannerName = DEFAULT_SCANNER
    work_dir: Path = Path("msp_work")
    memory_budget: int = Field(default=DEFAULT_MEMORY_BUDGET, ge=1, description="advisory bytes")
    seed: int = DEFAULT_SEED
    threads: int = Field(default=DEFAULT_THREADS, ge=1)

    @model_validator(mode="after")
    def _check(self) -> "PartitionConfig":
        if self.p > self.k:
            raise ValueError(f"p={self.p} must not exceed k={self.k}")
        if self.wrap == "identity" and self.t != 4**self.p:
            raise ValueError(f"identity wrap needs t = 4^p = {4**self.p}, got t={self.t}")
        return self


class BaselineConfig(PartitionConfig):
    """A baseline run: H-Partition splits reads horizontally, B-Partition buckets k-mers by hash."""

    mode: BaselineMode = "b"
    suffix_symbols: Optional[int] = Field(
        default=None, ge=1, description="B-Partition: bucket by the last q symbols instead of the full k-mer"
    )

    @model_validator(mode="after")
    def _check_suffix(self) -> "BaselineConfig":
        if self.suffix_symbols is not None and self.suffix_symbols > self.k:
            raise ValueError(f"suffix_symbols={self.suffix_symbols} exceeds k={self.k}")
        return self


class RunManifest(BaseModel):
    """Everything a run reports; serialised as key=value lines by utils.manifest."""

    k: int
    p: int
    t: int
    rc_mode: bool
    wrap: WrapMode
    scanner: ScannerName
    seed: int

    n_reads: int = 0
    n_bases: int = 0
    total_kmers: int = 0
    total_breaks: int = 0
    scan_comparisons: int = 0
    partition_bases: int = 0
    partition_records: list[int] = Field(default_factory=list)
    partition_bytes: list[int] = Field(default_factory=list)
    partition_kmers: list[int] = Field(default_factory=list)

    partition_distinct: list[int] = Field(default_factory=list)
    distinct_kmers: int = 0
    max_table_entries: int = 0
    replacement_ranges: int = 0
    replacement_bytes: int = 0
    replaced_kmers: int = 0

    vertex_count: int = 0
    edge_count: int = 0
    edge_weight_total: int = 0

    baseline_mode: Optional[str] = None
    spill_bytes: int = 0

    phase_seconds: dict[str, float] = Field(default_factory=dict)
    peak_rss_kb: dict[str, int] = Field(default_factory=dict)
    last_completed_phase: Optional[str] = None

    @field_validator(
        "partition_records", "partition_bytes", "partition_kmers", "partition_distinct", mode="before"
    )
    @classmethod
    def _split_csv(cls, value):
        if isinstance(value, str):
            return [item for item in value.split(",") if item]
        return value

    @field_validator("baseline_mode", "last_completed_phase", mode="before")
    @classmethod
    def _empty_is_none(cls, value):
        return value or None

    @classmethod
    def from_config(cls, config: PartitionConfig) -> "RunManifest":
        return cls(
            k=config.k,
            p=config.p,
            t=config.t,
            rc_mode=config.rc_mode,
            wrap=config.wrap,
            scanner=config.scanner,
            seed=config.seed,
        )

    def phase_done(self, phase: str) -> bool:
        if self.last_completed_phase is None:
            return False
        return PHASE_ORDER.index(self.last_completed_phase) >= PHASE_ORDER.index(phase)

    def consistency_errors(self) -> list[str]:
        """Arithmetic the manifest must satisfy; empty when self-consistent."""
        errors = []
        if self.partition_kmers and sum(self.partition_kmers) != self.total_kmers:
            errors.append(f"sum of partition k-mers {sum(self.partition_kmers)} != N={self.total_kmers}")
        if self.partition_distinct and sum(self.partition_distinct) != self.distinct_kmers:
            errors.append(f"sum of partition distinct {sum(self.partition_distinct)} != V={self.distinct_kmers}")
        if self.distinct_kmers > self.total_kmers:
            errors.append(f"V={self.distinct_kmers} exceeds N={self.total_kmers}")
        if self.phase_done("map") and self.distinct_kmers + self.replaced_kmers != self.total_kmers:
            errors.append(
                f"V + replaced = {self.distinct_kmers + self.replaced_kmers} != N={self.total_kmers}"
            )
        return errors
