"""FASTA/FASTQ ingestion: splits reads on non-ACGT characters and assigns global k-mer ordinals."""

from __future__ import annotations

import gzip
import io
import logging
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from Bio.SeqIO.FastaIO import SimpleFastaParser
from Bio.SeqIO.QualityIO import FastqGeneralIterator
from pydantic import BaseModel

from msp.errors import IngestError, InvalidArgumentError
from msp.sequence_core import ShortRead, pack, split_acgt_runs

logger = logging.getLogger(__name__)

GZIP_MAGIC = b"\x1f\x8b"


class IngestStats(BaseModel):
    records: int = 0
    reads: int = 0
    bases: int = 0
    split_records: int = 0
    dropped_fragments: int = 0
    dropped_bases: int = 0


def open_sequence_file(path: Path) -> TextIO:
    """Open a plain or gzip-compressed text file, sniffing the gzip magic bytes."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == GZIP_MAGIC:
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="ascii", errors="replace")
    return open(path, "r", encoding="ascii", errors="replace")


class ReadIngestor:
    """
    Turns raw sequences into ShortReads numbered by their first k-mer's global ordinal.

    Fragments shorter than k are dropped and counted; a single warning summarises
    them when `finish()` is called.
    """

    def __init__(self, k: int, split_on_n: bool = True, first_ordinal: int = 1):
        if k < 1:
            raise InvalidArgumentError(f"k must be at least 1, got {k}")
        self.k = k
        self.split_on_n = split_on_n
        self.next_ordinal = first_ordinal
        self.stats = IngestStats()

    def _emit(self, name: str, text: str, path: str | None, line: int | None) -> Iterator[ShortRead]:
        self.stats.records += 1
        if self.split_on_n:
            fragments = split_acgt_runs(text)
            if len(fragments) > 1 or (fragments and len(fragments[0]) != len(text)):
                self.stats.split_records += 1
        else:
            try:
                fragments = [pack(text)] if text else []
            except InvalidArgumentError as e:
                raise IngestError(f"record {name!r}: {e}", path, line) from e
        for fragment in fragments:
            sequence = pack(fragment) if isinstance(fragment, str) else fragment
            if sequence.length < self.k:
                self.stats.dropped_fragments += 1
                self.stats.dropped_bases += sequence.length
                continue
            read = ShortRead(self.next_ordinal, sequence, name)
            self.next_ordinal += read.kmer_count(self.k)
            self.stats.reads += 1
            self.stats.bases += sequence.length
            yield read

    def reads_from_strings(self, sequences: Iterable[str]) -> Iterator[ShortRead]:
        for number, text in enumerate(sequences, start=1):
            yield from self._emit(f"seq{number}", text, None, None)

    def reads_from_file(self, path: Path) -> Iterator[ShortRead]:
        """
        Yield reads from one FASTA or FASTQ file in record order.

        Args:
            path: FASTA (">") or FASTQ ("@") file, optionally gzip-compressed

        Raises:
            IngestError: unknown format or a malformed record, with file and approximate line
        """
        label = str(path)
        try:
            with open_sequence_file(path) as handle:
                first = ""
                while not first:
                    line = handle.readline()
                    if not line:
                        return
                    first = line.strip()
                handle.seek(0)
                if first.startswith(">"):
                    yield from self._fasta(handle, label)
                elif first.startswith("@"):
                    yield from self._fastq(handle, label)
                else:
                    raise IngestError(f"unrecognised format, first line starts with {first[:1]!r}", label, 1)
        except OSError as e:
            raise IngestError(f"cannot read file: {e}", label) from e

    def _fasta(self, handle: TextIO, label: str) -> Iterator[ShortRead]:
        record = 0
        try:
            for title, sequence in SimpleFastaParser(handle):
                record += 1
                yield from self._emit(title.split(None, 1)[0] if title else "", sequence, label, None)
        except ValueError as e:
            raise IngestError(f"malformed FASTA after record {record}: {e}", label) from e

    def _fastq(self, handle: TextIO, label: str) -> Iterator[ShortRead]:
        record = 0
        try:
            for title, sequence, _quality in FastqGeneralIterator(handle):
                record += 1
                yield from self._emit(title.split(None, 1)[0], sequence, label, 4 * (record - 1) + 1)
        except ValueError as e:
            raise IngestError(f"malformed FASTQ record {record + 1}: {e}", label, 4 * record + 1) from e

    def finish(self) -> IngestStats:
        if self.stats.dropped_fragments:
            logger.warning(
                f"Short fragments dropped - fragments: {self.stats.dropped_fragments}, "
                f"bases: {self.stats.dropped_bases}, k: {self.k}"
            )
        logger.info(
            f"Ingest finished - records: {self.stats.records}, reads: {self.stats.reads}, "
            f"bases: {self.stats.bases}, split_records: {self.stats.split_records}"
        )
        return self.stats


def ingest(paths: Iterable[Path], k: int, split_on_n: bool = True) -> Iterator[ShortRead]:
    """Reads of every file in order, with ordinals continuing across files."""
    ingestor = ReadIngestor(k, split_on_n)
    for path in paths:
        yield from ingestor.reads_from_file(Path(path))
    ingestor.finish()


def reads_from_strings(sequences: Iterable[str], k: int, split_on_n: bool = True) -> list[ShortRead]:
    ingestor = ReadIngestor(k, split_on_n)
    reads = list(ingestor.reads_from_strings(sequences))
    ingestor.finish()
    return reads
