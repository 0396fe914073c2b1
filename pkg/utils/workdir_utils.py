"""Work directory layout: partitions sharded into subdirectories, replacements, spill files."""

import logging
import shutil
from pathlib import Path

from configs.config import (
    EDGE_LIST_FILE,
    ID_STREAM_FILE,
    MANIFEST_FILE,
    PARTITIONS_DIR,
    PARTITIONS_PER_SHARD,
    READ_KMERS_FILE,
    REPLACEMENTS_DIR,
    SPILL_DIR,
)

logger = logging.getLogger(__name__)


def ensure_work_dir(work_dir: Path) -> Path:
    """Ensure the work directory exists."""
    work_dir.mkdir(parents=True, exist_ok=True)
    logger.info(f"Work directory ensured at: {work_dir.absolute()}")
    return work_dir


def reset_dir(path: Path) -> Path:
    """Remove a phase output directory and recreate it empty."""
    if path.exists():
        shutil.rmtree(path)
    path.mkdir(parents=True)
    return path


def _sharded(root: Path, index: int, prefix: str, suffix: str) -> Path:
    return root / f"shard-{index // PARTITIONS_PER_SHARD:04d}" / f"{prefix}-{index:06d}{suffix}"


def partitions_root(work_dir: Path) -> Path:
    return work_dir / PARTITIONS_DIR


def replacements_root(work_dir: Path) -> Path:
    return work_dir / REPLACEMENTS_DIR


def spill_root(work_dir: Path) -> Path:
    return work_dir / SPILL_DIR


def partition_path(work_dir: Path, index: int) -> Path:
    return _sharded(partitions_root(work_dir), index, "part", ".bin")


def replacement_path(work_dir: Path, index: int) -> Path:
    return _sharded(replacements_root(work_dir), index, "repl", ".bin")


def manifest_path(work_dir: Path) -> Path:
    return work_dir / MANIFEST_FILE


def read_kmers_path(work_dir: Path) -> Path:
    return work_dir / READ_KMERS_FILE


def id_stream_path(work_dir: Path) -> Path:
    return work_dir / ID_STREAM_FILE


def edge_list_path(work_dir: Path) -> Path:
    return work_dir / EDGE_LIST_FILE
