"""The two normalized impact indicators.

``crown`` is the ratio of averages, sum(c) / sum(e). ``mncs`` is the average of
ratios, mean(c / e). The crown equals a mean of the per-publication ratios
weighted by e_i / sum(e), which is what :func:`crown_as_weighted_mean`
reconstructs.

Both indicators are always computed on the same included set of publications.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .baseline import BaselineKey, BaselineTable, cell_keys, expected_citations, leave_one_out_adjust
from .config import ScoringConfig
from .corpus import Publication, WindowSpec, citations_up_to
from .errors import AllPublicationsExcluded

# exclusion reasons, in the order they are checked
AFTER_WINDOW = "published_after_window"
MISSING_BASELINE = "missing_baseline"
ZERO_EXPECTED = "zero_expected"
BELOW_FLOOR = "below_expected_floor"


@dataclass(frozen=True)
class ScoredPublication:
    pub_id: str
    observed: int
    expected: float
    ratio: float
    low_expected_flag: bool = False
    high_ratio_flag: bool = False
    cells: tuple[BaselineKey, ...] = ()

    @property
    def flags(self) -> list[str]:
        out = []
        if self.low_expected_flag:
            out.append("low_expected")
        if self.high_ratio_flag:
            out.append("high_ratio")
        return out


@dataclass(frozen=True)
class Exclusion:
    pub_id: str
    reason: str
    observed: int | None = None
    expected: float | None = None
    cells: tuple[BaselineKey, ...] = ()


@dataclass(frozen=True)
class OeuvreScore:
    researcher_id: str
    n_total: int
    n_included: int
    n_excluded: int
    sum_observed: int
    sum_expected: float
    crown: float | None
    mncs: float | None
    scored: tuple[ScoredPublication, ...] = ()
    exclusions: tuple[Exclusion, ...] = ()

    @property
    def divergence(self) -> float | None:
        if self.crown is None or self.mncs is None:
            return None
        return self.mncs - self.crown

    @property
    def flags(self) -> list[str]:
        tokens = []
        if self.n_included == 0:
            tokens.append("all_excluded")
        if self.n_excluded:
            tokens.append(f"excluded={self.n_excluded}")
        low = sum(p.low_expected_flag for p in self.scored)
        high = sum(p.high_ratio_flag for p in self.scored)
        if low:
            tokens.append(f"low_expected={low}")
        if high:
            tokens.append(f"high_ratio={high}")
        return tokens

    @property
    def ratios(self) -> list[float]:
        return [p.ratio for p in self.scored]

    @property
    def observed(self) -> list[int]:
        return [p.observed for p in self.scored]

    @property
    def expected(self) -> list[float]:
        return [p.expected for p in self.scored]


@dataclass(frozen=True)
class _Candidate:
    pub_id: str
    observed: int | None
    expected: float | None
    cells: tuple[BaselineKey, ...] = field(default=())
    after_window: bool = False


def _assemble(researcher_id: str, candidates: Sequence[_Candidate], config: ScoringConfig) -> OeuvreScore:
    scored: list[ScoredPublication] = []
    excluded: list[Exclusion] = []
    for cand in candidates:
        reason = None
        if cand.after_window:
            reason = AFTER_WINDOW
        elif cand.expected is None:
            reason = MISSING_BASELINE
        elif cand.expected == 0:
            reason = ZERO_EXPECTED
        elif cand.expected < config.expected_floor:
            reason = BELOW_FLOOR
        if reason is not None:
            excluded.append(Exclusion(cand.pub_id, reason, cand.observed, cand.expected, cand.cells))
            continue
        ratio = cand.observed / cand.expected
        scored.append(
            ScoredPublication(
                cand.pub_id,
                cand.observed,
                cand.expected,
                ratio,
                low_expected_flag=cand.expected < config.low_expected_flag,
                high_ratio_flag=ratio > config.ratio_flag,
                cells=cand.cells,
            )
        )

    n = len(scored)
    sum_c = sum(p.observed for p in scored)
    sum_e = math.fsum(p.expected for p in scored)
    crown = mncs = None
    if n:
        crown = sum_c / sum_e
        mncs = math.fsum(p.ratio for p in scored) / n
    score = OeuvreScore(
        researcher_id=researcher_id,
        n_total=len(candidates),
        n_included=n,
        n_excluded=len(excluded),
        sum_observed=sum_c,
        sum_expected=sum_e,
        crown=crown,
        mncs=mncs,
        scored=tuple(scored),
        exclusions=tuple(excluded),
    )
    if not n:
        raise AllPublicationsExcluded(score)
    return score


def score_oeuvre(
    pubs: Iterable[Publication],
    table: BaselineTable,
    window: WindowSpec,
    config: ScoringConfig | None = None,
    *,
    researcher_id: str = "",
) -> OeuvreScore:
    """Score one oeuvre against a baseline table built for the same window.

    Publications without a usable expected value are itemized in
    ``exclusions``. Raises :class:`AllPublicationsExcluded` when nothing is left.
    """
    config = config or ScoringConfig()
    if table.window != window:
        raise ValueError(f"baseline window {table.window} does not match {window}")
    pubs = sorted(pubs, key=lambda p: p.pub_id)
    if not pubs:
        raise ValueError("cannot score an empty oeuvre")
    expect = leave_one_out_adjust if config.leave_one_out else expected_citations
    candidates = []
    for pub in pubs:
        cells = cell_keys(pub, table.mode)
        if pub.pub_year > window.end_year:
            candidates.append(_Candidate(pub.pub_id, None, None, cells, after_window=True))
            continue
        candidates.append(
            _Candidate(pub.pub_id, citations_up_to(pub, window), expect(pub, table), cells)
        )
    return _assemble(researcher_id, candidates, config)


def score_values(
    observed: Sequence[int],
    expected: Sequence[float | None],
    *,
    pub_ids: Sequence[str] | None = None,
    researcher_id: str = "",
    config: ScoringConfig | None = None,
) -> OeuvreScore:
    """Score raw (c_i, e_i) pairs, applying the same exclusion rules as :func:`score_oeuvre`."""
    if len(observed) != len(expected):
        raise ValueError("observed and expected must have equal length")
    if pub_ids is None:
        width = len(str(len(observed)))
        pub_ids = [f"p{i:0{width}d}" for i in range(len(observed))]
    candidates = [_Candidate(pid, c, e) for pid, c, e in zip(pub_ids, observed, expected)]
    return _assemble(researcher_id, candidates, config or ScoringConfig())


def crown_as_weighted_mean(score: OeuvreScore) -> tuple[list[float], float]:
    """Weights e_i / sum(e) and the crown rebuilt as the weighted mean of ratios."""
    if not score.n_included:
        raise ValueError("no included publications")
    total = math.fsum(score.expected)
    weights = [e / total for e in score.expected]
    return weights, math.fsum(w * r for w, r in zip(weights, score.ratios))


def divergence(score: OeuvreScore) -> float:
    """mncs - crown: signed distance above the crown = mncs diagonal."""
    if not score.n_included:
        raise ValueError("no included publications")
    return score.mncs - score.crown
