"""Significance statistics for an oeuvre.

Two tools, both applicable to either indicator:

* a one-sample z statistic in the style of Schubert and Glanzel (1983):
  ``z = (mean(c) - mean(e)) / (sd(c) / sqrt(n))`` with the expected values
  treated as constants and ``sd`` the sample (n - 1) standard deviation;
* a percentile bootstrap that resamples publications with replacement.

Bootstrap randomness comes from numpy's PCG64 generator. A run-level master
seed is turned into one seed per researcher by :func:`oeuvre_seed`, so results
do not depend on the order or thread in which oeuvres are processed. Within one
bootstrap all resample indices are drawn up front, row by row, from a single
stream.
"""

from __future__ import annotations

import enum
import hashlib
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import BootstrapConfig
from .errors import TooFewPublications
from .indicators import OeuvreScore, ScoredPublication


class Indicator(str, enum.Enum):
    CROWN = "crown"
    MNCS = "mncs"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SignificanceResult:
    z_statistic: float | None
    mean_observed: float
    mean_expected: float
    standard_error: float
    diagnostic: str | None = None
    method: str = "SG-style one-sample z"


@dataclass(frozen=True)
class BootstrapResult:
    indicator: Indicator
    point: float
    ci_low: float
    ci_high: float
    n_resamples: int
    level: float
    seed: int

    @property
    def width(self) -> float:
        return self.ci_high - self.ci_low


@dataclass(frozen=True)
class OeuvreStats:
    researcher_id: str
    crown_ci: BootstrapResult | None = None
    mncs_ci: BootstrapResult | None = None
    significance: SignificanceResult | None = None


def schubert_glanzel_z(score: OeuvreScore) -> SignificanceResult:
    n = score.n_included
    if n < 2:
        raise TooFewPublications(f"z statistic needs at least 2 included publications, got {n}")
    c = score.observed
    mean_c = math.fsum(c) / n
    mean_e = math.fsum(score.expected) / n
    se = statistics.stdev(c) / math.sqrt(n)
    if se == 0:
        if math.isclose(mean_c, mean_e, rel_tol=1e-12, abs_tol=1e-12):
            return SignificanceResult(0.0, mean_c, mean_e, 0.0)
        return SignificanceResult(
            None, mean_c, mean_e, 0.0,
            diagnostic="zero variance in observed citations; z undefined",
        )
    return SignificanceResult((mean_c - mean_e) / se, mean_c, mean_e, se)


def oeuvre_seed(master_seed: int, researcher_id: str) -> int:
    """Per-researcher 64-bit seed: first 8 bytes (big-endian) of sha256("<seed>:<id>")."""
    digest = hashlib.sha256(f"{master_seed}:{researcher_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def percentile_ranks(n_resamples: int, level: float) -> tuple[int, int]:
    """1-based nearest-rank positions of the lower and upper interval bounds."""
    tail = (1.0 - level) / 2.0
    # round first: (1 - 0.95) / 2 * 10000 is 250.00000000000023 in binary floating point
    lo = math.ceil(round(n_resamples * tail, 9))
    hi = math.ceil(round(n_resamples * (1.0 - tail), 9))
    return max(1, min(lo, n_resamples)), max(1, min(hi, n_resamples))


def resample_indices(n: int, n_resamples: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(0, n, size=(n_resamples, n))


def _as_arrays(pubs) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(pubs, OeuvreScore):
        pubs = pubs.scored
    pubs: Sequence[ScoredPublication] = list(pubs)
    c = np.array([p.observed for p in pubs], dtype=float)
    e = np.array([p.expected for p in pubs], dtype=float)
    return c, e


def bootstrap_ci(
    pubs,
    indicator: Indicator | str,
    n_resamples: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> BootstrapResult:
    """Percentile bootstrap interval for one indicator.

    ``pubs`` is an :class:`OeuvreScore` or a sequence of scored publications.
    The bounds are order statistics of the sorted resample values at the ranks
    given by :func:`percentile_ranks` (no interpolation).
    """
    indicator = Indicator(indicator)
    c, e = _as_arrays(pubs)
    n = len(c)
    if n < 1:
        raise ValueError("bootstrap needs at least one publication")
    if n_resamples < 1:
        raise ValueError("n_resamples must be >= 1")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie strictly between 0 and 1")

    idx = resample_indices(n, n_resamples, seed)
    if indicator is Indicator.CROWN:
        point = float(c.sum() / e.sum())
        values = c[idx].sum(axis=1) / e[idx].sum(axis=1)
    else:
        r = c / e
        point = float(r.sum() / n)
        values = r[idx].sum(axis=1) / n
    values.sort()
    lo, hi = percentile_ranks(n_resamples, level)
    return BootstrapResult(
        indicator, point, float(values[lo - 1]), float(values[hi - 1]), n_resamples, level, seed
    )


def oeuvre_stats(score: OeuvreScore, bootstrap: BootstrapConfig | None) -> OeuvreStats:
    significance = None
    if score.n_included >= 2:
        significance = schubert_glanzel_z(score)
    crown_ci = mncs_ci = None
    if bootstrap is not None and score.n_included >= 1:
        if bootstrap.seed is None:
            raise ValueError("bootstrap requires an explicit seed")
        seed = oeuvre_seed(bootstrap.seed, score.researcher_id)
        args = (bootstrap.n_resamples, bootstrap.level, seed)
        crown_ci = bootstrap_ci(score, Indicator.CROWN, *args)
        mncs_ci = bootstrap_ci(score, Indicator.MNCS, *args)
    return OeuvreStats(score.researcher_id, crown_ci, mncs_ci, significance)


def cohort_stats(
    scores: Sequence[OeuvreScore],
    bootstrap: BootstrapConfig | None,
    threads: int = 1,
) -> dict[str, OeuvreStats]:
    """Statistics for every scored oeuvre; the result is independent of ``threads``."""
    scores = [s for s in scores if s.n_included]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: oeuvre_stats(s, bootstrap), scores))
    else:
        results = [oeuvre_stats(s, bootstrap) for s in scores]
    return {r.researcher_id: r for r in results}
