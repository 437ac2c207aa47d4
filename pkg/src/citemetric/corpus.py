"""Publication corpora: domain types, CSV ingest and export."""

from __future__ import annotations

import csv
import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    CitationBeforePublication,
    DanglingOeuvreReference,
    DuplicatePubId,
    MalformedRow,
    WindowBeforePublication,
)

log = logging.getLogger(__name__)

PUBLICATIONS_HEADER = ["pub_id", "journal_id", "pub_year", "doc_type", "field_ids"]
CITATIONS_HEADER = ["pub_id", "year", "count"]
OEUVRES_HEADER = ["researcher_id", "pub_id"]

PUBLICATIONS_FILE = "publications.csv"
CITATIONS_FILE = "citations.csv"
OEUVRES_FILE = "oeuvres.csv"


class DocType(str, enum.Enum):
    ARTICLE = "article"
    LETTER = "letter"
    REVIEW = "review"

    @classmethod
    def parse(cls, text: str) -> "DocType":
        return cls(text.strip().lower())

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class WindowSpec:
    """Citation census window; citations are counted through ``end_year`` inclusive."""

    end_year: int

    def extended(self, years: int) -> "WindowSpec":
        return WindowSpec(self.end_year + years)


@dataclass(frozen=True, eq=True)
class Publication:
    pub_id: str
    journal_id: str
    field_ids: tuple[str, ...]
    pub_year: int
    doc_type: DocType
    citations_by_year: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.pub_id:
            raise ValueError("pub_id must be non-empty")
        if not self.field_ids:
            raise ValueError(f"{self.pub_id}: field_ids must be non-empty")
        if len(set(self.field_ids)) != len(self.field_ids):
            raise ValueError(f"{self.pub_id}: duplicate field ids {self.field_ids}")
        for year, count in self.citations_by_year.items():
            if year < self.pub_year:
                raise CitationBeforePublication(self.pub_id, year, self.pub_year)
            if count < 0:
                raise ValueError(f"{self.pub_id}: negative citation count in {year}")
        # zero entries carry no information; dropping them keeps equality canonical
        cites = {y: c for y, c in sorted(self.citations_by_year.items()) if c}
        object.__setattr__(self, "field_ids", tuple(self.field_ids))
        object.__setattr__(self, "doc_type", DocType(self.doc_type))
        object.__setattr__(self, "citations_by_year", MappingProxyType(cites))

    @property
    def total_citations(self) -> int:
        return sum(self.citations_by_year.values())


def citations_up_to(pub: Publication, window: WindowSpec) -> int:
    """Citations received by ``pub`` in years up to and including the window end."""
    if window.end_year < pub.pub_year:
        raise WindowBeforePublication(pub.pub_id, window.end_year, pub.pub_year)
    return sum(c for y, c in pub.citations_by_year.items() if y <= window.end_year)


@dataclass(frozen=True)
class Corpus:
    """Immutable set of publications plus researcher -> publication assignments.

    The oeuvre mapping is many-to-many: a coauthored paper may sit in several
    oeuvres.
    """

    publications: Mapping[str, Publication]
    researcher_oeuvres: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        pubs = dict(self.publications)
        for rid, ids in self.researcher_oeuvres.items():
            for pid in ids:
                if pid not in pubs:
                    raise DanglingOeuvreReference(rid, pid)
        oeuvres = {rid: frozenset(ids) for rid, ids in self.researcher_oeuvres.items()}
        object.__setattr__(self, "publications", MappingProxyType(pubs))
        object.__setattr__(self, "researcher_oeuvres", MappingProxyType(oeuvres))

    @classmethod
    def from_publications(
        cls,
        pubs: Iterable[Publication],
        oeuvres: Mapping[str, Iterable[str]] | None = None,
    ) -> "Corpus":
        table: dict[str, Publication] = {}
        for pub in pubs:
            if pub.pub_id in table:
                raise DuplicatePubId(pub.pub_id)
            table[pub.pub_id] = pub
        return cls(table, {rid: frozenset(ids) for rid, ids in (oeuvres or {}).items()})

    def __len__(self) -> int:
        return len(self.publications)

    def oeuvre(self, researcher_id: str) -> list[Publication]:
        """Publications of one researcher, ordered by pub_id."""
        return [self.publications[p] for p in sorted(self.researcher_oeuvres[researcher_id])]

    def researchers(self) -> list[str]:
        return sorted(self.researcher_oeuvres)


# --- CSV ingest -------------------------------------------------------------


def _rows(path: Path, header: list[str]):
    """Yield (line_number, row) for data rows after validating the header."""
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise MalformedRow(path, 1, "empty file, expected header") from None
        got = [h.strip() for h in first]
        if got != header:
            raise MalformedRow(path, 1, f"expected header {','.join(header)}, got {','.join(got)}")
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise MalformedRow(
                    path, reader.line_num, f"expected {len(header)} fields, got {len(row)}"
                )
            yield reader.line_num, [cell.strip() for cell in row]


def _int(path, line, name, text):
    try:
        return int(text)
    except ValueError:
        raise MalformedRow(path, line, f"{name} is not an integer: {text!r}") from None


def load_corpus(publications_file, citations_file, oeuvres_file) -> Corpus:
    """Load and validate a corpus from its three CSV files.

    Raises a :class:`~citemetric.errors.ValidationError` subclass on the first
    violated invariant; the message carries file and line number.
    """
    publications_file = Path(publications_file)
    citations_file = Path(citations_file)
    oeuvres_file = Path(oeuvres_file)

    meta: dict[str, tuple[str, tuple[str, ...], int, DocType]] = {}
    for line, (pid, jid, year, dtype, fields) in _rows(publications_file, PUBLICATIONS_HEADER):
        if not pid:
            raise MalformedRow(publications_file, line, "empty pub_id")
        if not jid:
            raise MalformedRow(publications_file, line, "empty journal_id")
        if pid in meta:
            raise DuplicatePubId(pid, publications_file, line)
        try:
            doc_type = DocType.parse(dtype)
        except ValueError:
            raise MalformedRow(publications_file, line, f"unknown doc_type {dtype!r}") from None
        field_ids = tuple(f.strip() for f in fields.split(";"))
        if not fields or any(not f for f in field_ids):
            raise MalformedRow(publications_file, line, f"empty field id in {fields!r}")
        if len(set(field_ids)) != len(field_ids):
            raise MalformedRow(publications_file, line, f"duplicate field id in {fields!r}")
        meta[pid] = (jid, field_ids, _int(publications_file, line, "pub_year", year), doc_type)

    cites: dict[str, dict[int, int]] = {pid: {} for pid in meta}
    n_citation_rows = 0
    for line, (pid, year, count) in _rows(citations_file, CITATIONS_HEADER):
        if pid not in meta:
            raise MalformedRow(citations_file, line, f"unknown pub_id {pid!r}")
        y = _int(citations_file, line, "year", year)
        n = _int(citations_file, line, "count", count)
        if n < 0:
            raise MalformedRow(citations_file, line, f"negative count {n}")
        if y < meta[pid][2]:
            raise CitationBeforePublication(pid, y, meta[pid][2], citations_file, line)
        if y in cites[pid]:
            raise MalformedRow(citations_file, line, f"duplicate row for {pid!r} year {y}")
        cites[pid][y] = n
        n_citation_rows += 1

    oeuvres: dict[str, set[str]] = {}
    n_oeuvre_rows = 0
    for line, (rid, pid) in _rows(oeuvres_file, OEUVRES_HEADER):
        if not rid:
            raise MalformedRow(oeuvres_file, line, "empty researcher_id")
        if pid not in meta:
            raise DanglingOeuvreReference(rid, pid, oeuvres_file, line)
        oeuvres.setdefault(rid, set()).add(pid)
        n_oeuvre_rows += 1

    pubs = [
        Publication(pid, jid, fields, year, dtype, cites[pid])
        for pid, (jid, fields, year, dtype) in meta.items()
    ]
    log.info(
        "loaded %d publications, %d citation rows, %d oeuvre rows (%d researchers)",
        len(pubs), n_citation_rows, n_oeuvre_rows, len(oeuvres),
    )
    return Corpus.from_publications(pubs, oeuvres)


def load_corpus_dir(directory) -> Corpus:
    directory = Path(directory)
    return load_corpus(
        directory / PUBLICATIONS_FILE, directory / CITATIONS_FILE, directory / OEUVRES_FILE
    )


# --- CSV export -------------------------------------------------------------


def corpus_rows(corpus: Corpus):
    """Canonical row lists for the three corpus files (sorted, zero counts omitted)."""
    pubs = [
        [p.pub_id, p.journal_id, str(p.pub_year), p.doc_type.value, ";".join(p.field_ids)]
        for p in sorted(corpus.publications.values(), key=lambda p: p.pub_id)
    ]
    cites = [
        [p.pub_id, str(y), str(c)]
        for p in sorted(corpus.publications.values(), key=lambda p: p.pub_id)
        for y, c in sorted(p.citations_by_year.items())
    ]
    oeuvres = [
        [rid, pid]
        for rid in sorted(corpus.researcher_oeuvres)
        for pid in sorted(corpus.researcher_oeuvres[rid])
    ]
    return {
        PUBLICATIONS_FILE: (PUBLICATIONS_HEADER, pubs),
        CITATIONS_FILE: (CITATIONS_HEADER, cites),
        OEUVRES_FILE: (OEUVRES_HEADER, oeuvres),
    }


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_corpus(corpus: Corpus, directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (header, rows) in corpus_rows(corpus).items():
        write_csv(directory / name, header, rows)
        written.append(directory / name)
    return written
