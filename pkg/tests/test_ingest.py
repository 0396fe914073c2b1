import gzip

import pytest

from msp.errors import IngestError
from msp.ingest import ReadIngestor, ingest, reads_from_strings
from msp.sequence_core import unpack


def _fastq(*sequences):
    return "".join(f"@r{i}\n{seq}\n+\n{'I' * len(seq)}\n" for i, seq in enumerate(sequences, start=1))


def test_fastq_read_split_on_n(tmp_path):
    path = tmp_path / "reads.fq"
    path.write_text(_fastq("ACGTN"))
    reads = list(ingest([path], k=3))
    assert [unpack(read.sequence) for read in reads] == ["ACGT"]
    assert reads[0].ordinal_base == 1
    assert reads[0].name == "r1"


def test_empty_file_yields_nothing(tmp_path):
    path = tmp_path / "empty.fa"
    path.write_text("")
    assert list(ingest([path], k=3)) == []
    blank = tmp_path / "blank.fa"
    blank.write_text("\n\n")
    assert list(ingest([blank], k=3)) == []


def test_multiline_fasta(tmp_path):
    path = tmp_path / "reads.fa"
    path.write_text(">one first\nACGT\nACGT\n>two\nGGGGCC\n>three\nTTTAAA\n")
    reads = list(ingest([path], k=4))
    assert [unpack(read.sequence) for read in reads] == ["ACGTACGT", "GGGGCC", "TTTAAA"]
    assert [read.ordinal_base for read in reads] == [1, 6, 9]
    assert reads[0].name == "one"


def test_gzip_input(tmp_path):
    path = tmp_path / "reads.fq.gz"
    with gzip.open(path, "wt") as fh:
        fh.write(_fastq("GTAATGAC", "GTAATGAC"))
    reads = list(ingest([path], k=5))
    assert [read.ordinal_base for read in reads] == [1, 5]


def test_ordinals_continue_across_files(tmp_path):
    first, second = tmp_path / "a.fa", tmp_path / "b.fq"
    first.write_text(">a\nACGTA\n")
    second.write_text(_fastq("CCGTA"))
    reads = list(ingest([first, second], k=3))
    assert [read.ordinal_base for read in reads] == [1, 4]


def test_malformed_fastq_names_the_file(tmp_path):
    path = tmp_path / "bad.fq"
    path.write_text("@r1\nACGT\nIIII\n")
    with pytest.raises(IngestError, match="bad.fq"):
        list(ingest([path], k=3))


def test_unknown_format(tmp_path):
    path = tmp_path / "reads.txt"
    path.write_text("ACGT\n")
    with pytest.raises(IngestError, match="unrecognised format"):
        list(ingest([path], k=3))


def test_missing_file(tmp_path):
    with pytest.raises(IngestError, match="cannot read"):
        list(ingest([tmp_path / "absent.fa"], k=3))


def test_no_split_rejects_n(tmp_path):
    with pytest.raises(IngestError, match="position 2"):
        reads_from_strings(["ACNGT"], k=3, split_on_n=False)


def test_short_fragments_are_dropped_and_counted():
    ingestor = ReadIngestor(k=5)
    reads = list(ingestor.reads_from_strings(["ACGNACGTACG", "AC"]))
    stats = ingestor.finish()
    assert [unpack(read.sequence) for read in reads] == ["ACGTACG"]
    assert stats.dropped_fragments == 2
    assert stats.dropped_bases == 5
    assert stats.split_records == 1
    assert stats.reads == 1
