from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from configs.run_models import PartitionConfig
from msp.ingest import reads_from_strings
from msp.sequence_core import ShortRead

GTAATGAC = "GTAATGAC"

_BASES = np.array(list("ACGT"))


def random_strings(rng: np.random.Generator, count: int, length: int) -> list[str]:
    codes = rng.integers(0, 4, size=(count, length))
    return ["".join(row) for row in _BASES[codes]]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def two_copy_strings() -> list[str]:
    """The worked example: two copies of GTAATGAC."""
    return [GTAATGAC, GTAATGAC]


@pytest.fixture
def two_copy_reads(two_copy_strings) -> list[ShortRead]:
    return reads_from_strings(two_copy_strings, k=5)


@pytest.fixture
def make_corpus(rng) -> Callable[[int, int], list[str]]:
    def _make(count: int, length: int) -> list[str]:
        return random_strings(rng, count, length)

    return _make


@pytest.fixture
def make_config(tmp_path: Path) -> Callable[..., PartitionConfig]:
    def _make(**overrides) -> PartitionConfig:
        fields = {"k": 5, "p": 3, "t": 16, "rc_mode": False, "work_dir": tmp_path / "work"}
        fields.update(overrides)
        return PartitionConfig(**fields)

    return _make


_COMPLEMENT = str.maketrans("ACGT", "TGCA")


def reverse_complement_text(text: str) -> str:
    return text.translate(_COMPLEMENT)[::-1]


@pytest.fixture
def repetitive_corpus(make_corpus) -> list[str]:
    """Random reads plus exact copies and reverse complements of some of them."""
    reads = make_corpus(150, 60)
    return reads + reads[:40] + [reverse_complement_text(text) for text in reads[40:80]]
