import pytest

from msp.errors import InvalidArgumentError
from msp.sequence_core import (
    PackedSequence,
    ShortRead,
    canonical_kmer,
    compare,
    kmer_codes,
    pack,
    reverse_complement,
    reverse_complement_code,
    rolling_codes,
    split_acgt_runs,
    unpack,
)


def test_pack_unpack_preserves_bases_and_length():
    packed = pack("GATTACA")
    assert packed.length == 7
    assert len(packed.payload) == 2
    assert unpack(packed) == "GATTACA"


def test_pack_is_case_insensitive():
    assert pack("acgt") == pack("ACGT")


def test_pack_rejects_non_acgt_with_position():
    with pytest.raises(InvalidArgumentError, match="position 3"):
        pack("ACGN")


def test_packed_order_matches_string_order():
    assert pack("AC") < pack("AG")
    assert pack("TTTT") > pack("TTTG")
    assert compare(pack("GTA"), pack("GTA")) == 0
    assert compare(pack("AAT"), pack("ATG")) == -1
    assert compare(pack("ATG"), pack("AAT")) == 1


def test_integer_form_and_subsequence():
    read = pack("GTAATGAC")
    assert PackedSequence.from_int(read.to_int(), read.length) == read
    assert read.subsequence(3, 8) == pack("ATGAC")
    assert read.subsequence(0, 0).length == 0
    with pytest.raises(InvalidArgumentError):
        read.subsequence(4, 9)


def test_reverse_complement_and_canonical_form():
    assert unpack(reverse_complement(pack("AACG"))) == "CGTT"
    assert unpack(canonical_kmer(pack("TTT"))) == "AAA"
    assert unpack(canonical_kmer(pack("ACG"))) == "ACG"
    # AAC -> GTT
    assert reverse_complement_code(0b000001, 3) == 0b101111


def test_rolling_codes_forward_and_canonical():
    read = pack("ACGT")
    assert kmer_codes(read, 2) == [1, 6, 11]
    # AC/GT and GT/AC share a canonical code, CG is its own reverse complement
    assert kmer_codes(read, 2, canonical=True) == [1, 6, 1]
    assert rolling_codes([3, 3, 3], 3) == [63]


def test_split_acgt_runs():
    assert split_acgt_runs("ACGTNNAC") == ["ACGT", "AC"]
    assert split_acgt_runs("NNNN") == []
    assert split_acgt_runs("acgRt") == ["acg", "t"]


def test_short_read_kmer_count():
    assert ShortRead(1, pack("GTAATGAC")).kmer_count(5) == 4
    assert ShortRead(1, pack("GTA")).kmer_count(5) == 0
