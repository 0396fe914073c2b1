from collections import Counter

import pytest

from msp.errors import InvalidArgumentError
from msp.minimizer import (
    brute_scan,
    comparison_bound,
    min_p_bruteforce,
    min_p_rc,
    queue_scan,
    simple_scan,
)
from msp.scanners import create_scanner
from msp.sequence_core import pack, reverse_complement, unpack
from tests.conftest import random_strings


def test_min_p_bruteforce_finds_leftmost_minimum():
    result = min_p_bruteforce(pack("GTAATGA"), 3)
    assert unpack(result.substring) == "AAT"
    assert result.position == 2
    assert min_p_bruteforce(pack("CACA"), 2).position == 1


def test_min_p_bruteforce_rejects_bad_p():
    with pytest.raises(InvalidArgumentError):
        min_p_bruteforce(pack("ACG"), 4)
    with pytest.raises(InvalidArgumentError):
        min_p_bruteforce(pack("ACG"), 0)


def test_min_p_rc_uses_reverse_strand_when_smaller():
    result = min_p_rc(pack("TTTTA"), 2)
    assert unpack(result.substring) == "AA"
    assert result.strand == "-"
    forward = min_p_rc(pack("AAGG"), 2)
    assert unpack(forward.substring) == "AA"
    assert forward.strand == "+"


def test_simple_scan_worked_example():
    super_kmers, stats = simple_scan(pack("GTAATGAC"), k=5, p=3)
    assert [unpack(sk.sequence) for sk in super_kmers] == ["GTAATGA", "ATGAC"]
    assert [unpack(sk.minimizer) for sk in super_kmers] == ["AAT", "ATG"]
    assert [sk.start_ordinal for sk in super_kmers] == [1, 4]
    assert [sk.kmer_count(5) for sk in super_kmers] == [3, 1]
    assert stats.breaks == 1


def test_scan_respects_start_ordinal():
    super_kmers, _ = queue_scan(pack("GTAATGAC"), k=5, p=3, start_ordinal=7)
    assert [sk.start_ordinal for sk in super_kmers] == [7, 10]


def test_read_of_length_k_is_one_super_kmer():
    super_kmers, stats = simple_scan(pack("ACGTA"), k=5, p=2)
    assert len(super_kmers) == 1
    assert stats.breaks == 0


def test_scan_rejects_short_read():
    with pytest.raises(InvalidArgumentError):
        simple_scan(pack("ACG"), k=5, p=3)


@pytest.mark.parametrize("rc_mode", [False, True])
@pytest.mark.parametrize("k,p", [(21, 7), (11, 1), (9, 9), (31, 12)])
def test_scanners_agree(rng, rc_mode, k, p):
    for text in random_strings(rng, 150, 80):
        read = pack(text)
        expected, expected_stats = brute_scan(read, k, p, rc_mode)
        for scan in (simple_scan, queue_scan):
            super_kmers, stats = scan(read, k, p, rc_mode)
            assert super_kmers == expected
            assert stats.breaks == expected_stats.breaks


def test_scanners_agree_on_low_complexity_reads():
    for text in ["A" * 60, "AC" * 30, "ACGT" * 15, "A" * 30 + "T" * 30]:
        read = pack(text)
        expected, _ = brute_scan(read, 21, 5)
        assert simple_scan(read, 21, 5)[0] == expected
        assert queue_scan(read, 21, 5)[0] == expected


def test_simple_scan_comparison_bound(rng):
    m, k, p = 100, 59, 12
    for text in random_strings(rng, 2000, m):
        _, stats = simple_scan(pack(text), k, p)
        assert stats.comparisons <= comparison_bound(m, k, p, stats.breaks)


@pytest.mark.parametrize(
    "text,k,p",
    [
        ("ACCCC" * 3 + "A", 5, 1),
        ("AACCCCCCC" * 8, 10, 2),
        ("ACGTT" * 20, 31, 4),
        ("A" + "C" * 20 + "A" + "C" * 20 + "A", 21, 1),
    ],
)
def test_simple_scan_comparison_bound_on_periodic_reads(text, k, p):
    read = pack(text)
    super_kmers, stats = simple_scan(read, k, p)
    assert stats.comparisons <= comparison_bound(len(text), k, p, stats.breaks)
    assert super_kmers == brute_scan(read, k, p)[0]


def test_expired_minimum_replaced_by_incoming_copy_costs_one_comparison():
    _, stats = simple_scan(pack("ACCCC" * 3 + "A"), k=5, p=1)
    assert stats.breaks == 0
    assert stats.comparisons == 4 + 11


def test_rc_mode_minimizers_match_reverse_complement(rng):
    for text in random_strings(rng, 300, 70):
        read = pack(text)
        forward, _ = simple_scan(read, 15, 5, rc_mode=True)
        backward, _ = simple_scan(reverse_complement(read), 15, 5, rc_mode=True)
        assert Counter(unpack(sk.minimizer) for sk in forward) == Counter(
            unpack(sk.minimizer) for sk in backward
        )


def test_brute_scan_costs_k_minus_p_per_kmer():
    _, stats = brute_scan(pack("GTAATGAC"), k=5, p=3)
    assert stats.comparisons == 4 * (5 - 3)


def test_create_scanner():
    assert create_scanner("queue", 5, 3).window == 3
    with pytest.raises(InvalidArgumentError, match="unknown scanner"):
        create_scanner("heap", 5, 3)
    with pytest.raises(InvalidArgumentError):
        create_scanner("scan", 3, 5)
