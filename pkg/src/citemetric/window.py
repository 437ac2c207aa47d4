"""Citation-window sensitivity analysis.

For each census year the baselines are rebuilt from the corpus, every
researcher above the publication threshold is scored, and the (crown, mncs)
pairs are summarized by how many sit more than ``delta`` above the diagonal.
"""

from __future__ import annotations

import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .baseline import build_baselines
from .config import ScoringConfig
from .corpus import Corpus, WindowSpec, write_csv
from .errors import AllPublicationsExcluded
from .indicators import OeuvreScore, score_oeuvre

log = logging.getLogger(__name__)

COMPARE_HEADER = ["researcher_id", "window_end", "n_included", "n_recent", "crown", "mncs", "divergence"]
SWEEP_HEADER = ["window_end", "n_researchers", "n_above_diagonal", "delta", "max_divergence", "median_divergence"]


@dataclass(frozen=True)
class ComparisonRecord:
    researcher_id: str
    window_end: int
    crown: float
    mncs: float
    divergence: float
    n_included: int
    n_recent: int

    def row(self) -> list[str]:
        return [
            self.researcher_id, str(self.window_end), str(self.n_included), str(self.n_recent),
            f"{self.crown:.6f}", f"{self.mncs:.6f}", f"{self.divergence:.6f}",
        ]


@dataclass(frozen=True)
class SweepSummary:
    window_end: int
    n_researchers: int
    n_above_diagonal: int
    delta: float
    max_divergence: float | None
    median_divergence: float | None
    records: tuple[ComparisonRecord, ...] = field(default=(), repr=False)

    def row(self) -> list[str]:
        def fmt(x):
            return "" if x is None else f"{x:.6f}"

        return [
            str(self.window_end), str(self.n_researchers), str(self.n_above_diagonal),
            fmt(self.delta), fmt(self.max_divergence), fmt(self.median_divergence),
        ]


def is_recent(pub_year: int, window: WindowSpec) -> bool:
    return window.end_year - 1 <= pub_year <= window.end_year


def eligible_researchers(corpus: Corpus, min_pubs: int) -> tuple[list[str], list[str]]:
    """Split researchers into (eligible, below threshold) on publications held."""
    keep, drop = [], []
    for rid in corpus.researchers():
        (keep if len(corpus.researcher_oeuvres[rid]) >= min_pubs else drop).append(rid)
    return keep, drop


def compare_at_window(
    corpus: Corpus, window: WindowSpec, config: ScoringConfig | None = None
) -> list[ComparisonRecord]:
    """One (crown, mncs) record per researcher holding at least ``min_pubs`` publications.

    Researchers whose publications are all excluded have no defined indicators
    and are skipped with a warning.
    """
    config = config or ScoringConfig()
    table = build_baselines(corpus, config.baseline_mode, window)
    researchers, _ = eligible_researchers(corpus, config.min_pubs)
    records = []
    for rid in researchers:
        pubs = corpus.oeuvre(rid)
        try:
            score = score_oeuvre(pubs, table, window, config, researcher_id=rid)
        except AllPublicationsExcluded:
            log.warning("window %d: all publications of %s excluded", window.end_year, rid)
            continue
        records.append(
            ComparisonRecord(
                rid, window.end_year, score.crown, score.mncs, score.mncs - score.crown,
                score.n_included, sum(is_recent(p.pub_year, window) for p in pubs),
            )
        )
    return records


def summarize(window_end: int, records: Sequence[ComparisonRecord], delta: float) -> SweepSummary:
    divs = [r.divergence for r in records]
    return SweepSummary(
        window_end=window_end,
        n_researchers=len(records),
        n_above_diagonal=sum(d > delta for d in divs),
        delta=delta,
        max_divergence=max(divs) if divs else None,
        median_divergence=statistics.median(divs) if divs else None,
        records=tuple(sorted(records, key=lambda r: r.researcher_id)),
    )


def window_sweep(
    corpus: Corpus,
    windows: Sequence[WindowSpec],
    delta: float | None = None,
    config: ScoringConfig | None = None,
    threads: int = 1,
) -> list[SweepSummary]:
    config = config or ScoringConfig()
    delta = config.delta if delta is None else delta
    if not windows:
        raise ValueError("at least one window is required")
    ends = [w.end_year for w in windows]
    if any(b <= a for a, b in zip(ends, ends[1:])):
        raise ValueError(f"window end years must be strictly increasing: {ends}")

    def run(w):
        return summarize(w.end_year, compare_at_window(corpus, w, config), delta)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, windows))
    return [run(w) for w in windows]


def attribute_divergence(score: OeuvreScore) -> list[tuple[str, float]]:
    """Per-publication share of mncs - crown, largest first.

    Publication i contributes (1/n - e_i/sum(e)) * ratio_i; the shares add up
    to the divergence.
    """
    if not score.n_included:
        raise ValueError("no included publications")
    n = score.n_included
    sum_e = score.sum_expected
    contributions = [(p.pub_id, (1.0 / n - p.expected / sum_e) * p.ratio) for p in score.scored]
    return sorted(contributions, key=lambda item: (-item[1], item[0]))


def write_compare_csv(records: Sequence[ComparisonRecord], path) -> None:
    write_csv(path, COMPARE_HEADER, [r.row() for r in sorted(records, key=lambda r: r.researcher_id)])


def write_sweep_csv(summaries: Sequence[SweepSummary], path) -> None:
    write_csv(path, SWEEP_HEADER, [s.row() for s in sorted(summaries, key=lambda s: s.window_end)])
