import numpy as np
import pytest

from configs.run_models import BaselineConfig
from msp.baselines import b_partition, bucket_of, h_partition
from msp.ingest import reads_from_strings
from msp.map_merge import densify_ids, normalize_ids, reference_ids


def _config(tmp_path, mode, **overrides):
    fields = {"k": 5, "p": 3, "t": 4, "rc_mode": False, "mode": mode, "work_dir": tmp_path}
    fields.update(overrides)
    return BaselineConfig(**fields)


@pytest.mark.parametrize("mode", ["h", "b"])
def test_single_chunk_matches_reference_numbering(tmp_path, mode, two_copy_strings):
    reads = reads_from_strings(two_copy_strings, k=5)
    runner = h_partition if mode == "h" else b_partition
    stream, result = runner(reads, _config(tmp_path, mode, t=1))
    reference = reference_ids(two_copy_strings, 5)
    assert stream.ids.tolist() == densify_ids(reference.ids).tolist() == [1, 2, 3, 4, 1, 2, 3, 4]
    assert result.distinct_kmers == 4
    assert result.total_kmers == 8


def test_h_partition_smallest_chunk_wins(tmp_path):
    reads = reads_from_strings(["AAAAC", "CCCGT", "GGGTA", "TTTGC", "CCCGT"], k=5)
    stream, result = h_partition(reads, _config(tmp_path, "h", t=5))
    assert stream.ids.tolist() == [1, 2, 3, 4, 2]
    assert result.distinct_kmers == 4
    assert result.max_table_entries == 1


@pytest.mark.parametrize("rc_mode", [False, True])
@pytest.mark.parametrize("mode,suffix", [("h", None), ("b", None), ("b", 4)])
def test_baselines_match_reference_classes(tmp_path, repetitive_corpus, rc_mode, mode, suffix):
    k = 21
    reads = reads_from_strings(repetitive_corpus, k=k)
    runner = h_partition if mode == "h" else b_partition
    config = _config(tmp_path, mode, k=k, p=8, t=7, rc_mode=rc_mode, suffix_symbols=suffix)
    stream, result = runner(reads, config, tmp_path / "ids.npy")

    reference = reference_ids(repetitive_corpus, k, rc_mode)
    np.testing.assert_array_equal(normalize_ids(stream.ids), normalize_ids(reference.ids))
    assert result.distinct_kmers == len(np.unique(reference.ids))
    assert np.load(tmp_path / "ids.npy").tolist() == np.asarray(stream.ids).tolist()
    assert stream.read_kmer_counts.tolist() == reference.read_kmer_counts.tolist()


def test_b_partition_spills_every_occurrence(tmp_path, repetitive_corpus):
    reads = reads_from_strings(repetitive_corpus, k=21)
    _, result = b_partition(reads, _config(tmp_path, "b", k=21, p=8, t=8))
    assert result.spill_records == result.total_kmers
    assert result.spill_bytes == result.total_kmers * (8 + 6)


def test_bucket_of():
    code = 0b1101_1011
    assert 0 <= bucket_of(code, 10) < 10
    assert bucket_of(code, 1) == 0
    assert bucket_of(code, 16, suffix_symbols=2) == 0b1011
    assert bucket_of(code, 5, suffix_symbols=2) == 0b1011 % 5
