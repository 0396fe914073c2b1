import numpy as np
import pytest
from pydantic import ValidationError

from configs.formats import READ_KMERS_DTYPE
from configs.run_models import PartitionConfig
from msp.errors import InvalidArgumentError
from msp.ingest import reads_from_strings
from msp.partitioning import msp_partition, read_partition, wrap_code, wrap_hash
from msp.schemas import PartitionRecord
from msp.sequence_core import ShortRead, kmer_codes, pack
from utils.workdir_utils import partition_path, read_kmers_path


def test_wrap_hash_range_and_determinism():
    minimizer = pack("ACGTACGTACGT")
    assert wrap_hash(minimizer, 1) == 0
    assert 0 <= wrap_hash(minimizer, 1000) < 1000
    assert wrap_hash(minimizer, 1000) == wrap_hash(pack("ACGTACGTACGT"), 1000)
    with pytest.raises(InvalidArgumentError):
        wrap_hash(minimizer, 0)


def test_identity_wrap_uses_the_code():
    assert wrap_hash(pack("AAT"), 64, "identity") == 3
    assert wrap_hash(pack("ATG"), 64, "identity") == 14


def test_wrap_spreads_all_minimizers_evenly():
    p, t = 10, 256
    buckets = np.bincount([wrap_code(code, t) for code in range(4**p)], minlength=t)
    assert buckets.min() > 0
    assert buckets.max() / buckets.min() < 1.5


def test_wrap_folds_codes_wider_than_64_bits():
    wide = pack("ACGT" * 12)
    assert 0 <= wrap_hash(wide, 97) < 97


def test_partition_worked_example(two_copy_reads, make_config):
    config = make_config(t=64, wrap="identity")
    summary = msp_partition(two_copy_reads, config)

    assert summary.n_reads == 2
    assert summary.total_kmers == 8
    assert summary.total_breaks == 2
    assert read_partition(config.work_dir, 3) == [
        PartitionRecord(1, pack("GTAATGA")),
        PartitionRecord(5, pack("GTAATGA")),
    ]
    assert read_partition(config.work_dir, 14) == [
        PartitionRecord(4, pack("ATGAC")),
        PartitionRecord(8, pack("ATGAC")),
    ]
    assert sum(summary.partition_records) == 4
    assert summary.partition_kmers[3] == 6
    assert summary.partition_kmers[14] == 2
    counts = np.fromfile(read_kmers_path(config.work_dir), dtype=READ_KMERS_DTYPE)
    assert counts.tolist() == [4, 4]


def test_every_partition_file_exists(two_copy_reads, make_config):
    config = make_config(t=16)
    msp_partition(two_copy_reads, config)
    for index in range(16):
        assert partition_path(config.work_dir, index).exists()


def test_read_of_length_k(make_config):
    config = make_config()
    summary = msp_partition(reads_from_strings(["ACGTA"], k=5), config)
    assert summary.total_kmers == 1
    assert sum(summary.partition_records) == 1
    assert summary.total_breaks == 0


def test_empty_input(make_config):
    config = make_config()
    summary = msp_partition([], config)
    assert summary.total_kmers == 0
    assert all(partition_path(config.work_dir, i).stat().st_size == 0 for i in range(config.t))


def test_size_identity(make_corpus, make_config):
    k, p = 50, 10
    reads = reads_from_strings(make_corpus(300, 100), k=k)
    summary = msp_partition(reads, make_config(k=k, p=p, t=16))
    assert summary.partition_bases == summary.n_bases + (k - 1) * summary.total_breaks
    assert summary.partition_bases < 8.4 * summary.n_bases


@pytest.mark.parametrize("rc_mode", [False, True])
def test_locality_and_ordinal_completeness(make_corpus, make_config, rc_mode):
    k, p, t = 21, 6, 32
    reads = reads_from_strings(make_corpus(200, 70), k=k)
    config = make_config(k=k, p=p, t=t, rc_mode=rc_mode)
    summary = msp_partition(reads, config)

    owner: dict[int, int] = {}
    ordinals: list[int] = []
    for index in range(t):
        last = 0
        for record in read_partition(config.work_dir, index):
            assert record.start_ordinal > last
            last = record.start_ordinal
            for offset, code in enumerate(kmer_codes(record.sequence, k, rc_mode)):
                assert owner.setdefault(code, index) == index
                ordinals.append(record.start_ordinal + offset)
    assert sorted(ordinals) == list(range(1, summary.total_kmers + 1))


def test_parallel_scan_writes_identical_partitions(make_corpus, tmp_path):
    reads = reads_from_strings(make_corpus(5000, 60), k=21)
    outputs = []
    for threads in (1, 2):
        config = PartitionConfig(k=21, p=7, t=8, rc_mode=True, threads=threads, work_dir=tmp_path / f"t{threads}")
        msp_partition(reads, config)
        outputs.append([partition_path(config.work_dir, i).read_bytes() for i in range(8)])
    assert outputs[0] == outputs[1]


def test_rejects_gap_in_ordinals(make_config):
    reads = [ShortRead(1, pack("ACGTA")), ShortRead(5, pack("ACGTA"))]
    with pytest.raises(InvalidArgumentError, match="expected 2"):
        msp_partition(reads, make_config())


def test_rejects_read_shorter_than_k(make_config):
    with pytest.raises(InvalidArgumentError, match="shorter than k"):
        msp_partition([ShortRead(1, pack("ACG"))], make_config())


def test_config_validation(tmp_path):
    with pytest.raises(ValidationError):
        PartitionConfig(k=5, p=6, work_dir=tmp_path)
    with pytest.raises(ValidationError):
        PartitionConfig(k=5, p=3, t=16, wrap="identity", work_dir=tmp_path)
    with pytest.raises(ValidationError):
        PartitionConfig(k=5, p=3, t=0, work_dir=tmp_path)
