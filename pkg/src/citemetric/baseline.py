"""Expected-citation baselines.

A baseline cell groups reference publications sharing a class (a field or a
journal), a publication year and a document type. Its mean windowed citation
count is the expected citation count of every publication in that cell.

Multi-field publications are counted whole into each of their fields, and their
expected value is the unweighted mean of their field-cell means.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .corpus import Corpus, DocType, Publication, WindowSpec, citations_up_to, write_csv
from .errors import EmptyCorpus

BASELINES_HEADER = [
    "mode", "class_id", "pub_year", "doc_type", "window_end", "cell_count", "mean_citations",
]


class BaselineMode(str, enum.Enum):
    FIELD = "field"
    JOURNAL = "journal"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class BaselineKey:
    class_id: str
    pub_year: int
    doc_type: DocType

    def __post_init__(self):
        if not self.class_id:
            raise ValueError("class_id must be non-empty")

    def __str__(self) -> str:
        return f"{self.class_id}/{self.pub_year}/{self.doc_type.value}"


@dataclass(frozen=True)
class Cell:
    """Aggregate of one baseline cell. ``total`` is kept so the mean stays exact."""

    count: int
    total: int

    @property
    def mean(self) -> float:
        return self.total / self.count


@dataclass(frozen=True)
class BaselineTable:
    mode: BaselineMode
    window: WindowSpec
    cells: Mapping[BaselineKey, Cell]

    def __post_init__(self):
        object.__setattr__(self, "mode", BaselineMode(self.mode))
        object.__setattr__(self, "cells", MappingProxyType(dict(sorted(self.cells.items()))))

    def __len__(self) -> int:
        return len(self.cells)

    def mean(self, key: BaselineKey) -> float | None:
        cell = self.cells.get(key)
        return None if cell is None else cell.mean

    def rows(self) -> list[list[str]]:
        return [
            [
                self.mode.value, key.class_id, str(key.pub_year), key.doc_type.value,
                str(self.window.end_year), str(cell.count), f"{cell.mean:.6f}",
            ]
            for key, cell in self.cells.items()
        ]

    def write_csv(self, path) -> Path:
        write_csv(path, BASELINES_HEADER, self.rows())
        return Path(path)


def class_ids(pub: Publication, mode: BaselineMode) -> tuple[str, ...]:
    if BaselineMode(mode) is BaselineMode.JOURNAL:
        return (pub.journal_id,)
    return pub.field_ids


def cell_keys(pub: Publication, mode: BaselineMode) -> tuple[BaselineKey, ...]:
    """Baseline cells a publication belongs to (one per field, or its journal)."""
    return tuple(BaselineKey(c, pub.pub_year, pub.doc_type) for c in class_ids(pub, mode))


def build_baselines(corpus: Corpus, mode: BaselineMode, window: WindowSpec) -> BaselineTable:
    """Aggregate the reference corpus into baseline cells for one window.

    Publications appearing after the window end are left out; each remaining
    publication contributes its full windowed count to every one of its cells.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot build baselines from an empty corpus")
    mode = BaselineMode(mode)
    counts: dict[BaselineKey, int] = defaultdict(int)
    totals: dict[BaselineKey, int] = defaultdict(int)
    for pub in corpus.publications.values():
        if pub.pub_year > window.end_year:
            continue
        c = citations_up_to(pub, window)
        for key in cell_keys(pub, mode):
            counts[key] += 1
            totals[key] += c
    cells = {key: Cell(counts[key], totals[key]) for key in counts}
    return BaselineTable(mode, window, cells)


def expected_citations(pub: Publication, table: BaselineTable) -> float | None:
    """Expected citations of ``pub``; ``None`` when any required cell is absent."""
    means = []
    for key in cell_keys(pub, table.mode):
        mean = table.mean(key)
        if mean is None:
            return None
        means.append(mean)
    return sum(means) / len(means)


def leave_one_out_adjust(pub: Publication, table: BaselineTable) -> float | None:
    """Expected citations with ``pub`` itself removed from each of its cells.

    Returns ``None`` if a cell is absent or would be left empty.
    """
    own = citations_up_to(pub, table.window)
    means = []
    for key in cell_keys(pub, table.mode):
        cell = table.cells.get(key)
        if cell is None or cell.count <= 1:
            return None
        means.append((cell.total - own) / (cell.count - 1))
    return sum(means) / len(means)
