"""Seeded synthetic corpora.

Citation model
--------------
Every publication draws, for each year ``y`` from its publication year through
``citation_end_year``, an independent Poisson count with mean::

    rate(fields) * DOC_TYPE_FACTOR[doc_type] * age_factor(y - pub_year)

where ``rate(fields)`` is the mean of the citation rates of the publication's
fields and ``age_factor`` is 0.1 in the publication year, 0.6 one year later
and 1.0 from then on. Document types are drawn with probabilities 0.8 article,
0.1 letter, 0.1 review.

A *recent spike* gives a researcher ``n_pubs`` extra articles published in the
last year of ``year_range`` that share ``citations`` citations in that year
(split by a uniform multinomial draw). They are cited normally afterwards.
Background publications are drawn like researcher publications but belong to
no oeuvre; they only populate the baselines.

All draws come from one PCG64 stream in a fixed order, so a spec and its seed
fully determine the corpus.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .corpus import Corpus, DocType, Publication, write_corpus
from .errors import InvalidSpec

DOC_TYPES = (DocType.ARTICLE, DocType.LETTER, DocType.REVIEW)
DOC_TYPE_PROBS = (0.8, 0.1, 0.1)
DOC_TYPE_FACTOR = {DocType.ARTICLE: 1.0, DocType.LETTER: 0.5, DocType.REVIEW: 2.0}
AGE_FACTORS = (0.1, 0.6)
SPEC_FILE = "spec.json"


def age_factor(age: int) -> float:
    return AGE_FACTORS[age] if age < len(AGE_FACTORS) else 1.0


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    n_fields: int = 5
    n_journals: int = 20
    n_researchers: int = 10
    pubs_per_researcher: int = 20
    year_range: tuple[int, int] = (1997, 2006)
    field_citation_rates: dict[str, float] | None = None
    recent_spike: tuple[int, int] | None = None
    spike_fraction: float = 1.0
    background_pubs: int = 0
    multi_field_share: float = 0.25
    citation_end_year: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "year_range", tuple(self.year_range))
        if self.recent_spike is not None:
            object.__setattr__(self, "recent_spike", tuple(self.recent_spike))
        if self.citation_end_year is None:
            object.__setattr__(self, "citation_end_year", self.year_range[1] + 2)
        self._validate()

    def _validate(self):
        if not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must be an unsigned 64-bit integer")
        for name in ("n_fields", "n_journals", "n_researchers", "pubs_per_researcher"):
            if getattr(self, name) < 1:
                raise InvalidSpec(f"{name} must be positive")
        if self.background_pubs < 0:
            raise InvalidSpec("background_pubs must be >= 0")
        if len(self.year_range) != 2 or self.year_range[0] > self.year_range[1]:
            raise InvalidSpec(f"invalid year_range {self.year_range}")
        if self.citation_end_year < self.year_range[1]:
            raise InvalidSpec("citation_end_year must not precede the end of year_range")
        if not 0.0 <= self.spike_fraction <= 1.0:
            raise InvalidSpec("spike_fraction must lie in [0, 1]")
        if not 0.0 <= self.multi_field_share <= 1.0:
            raise InvalidSpec("multi_field_share must lie in [0, 1]")
        if self.recent_spike is not None:
            if len(self.recent_spike) != 2:
                raise InvalidSpec("recent_spike must be (n_pubs, citations)")
            n_pubs, cites = self.recent_spike
            if n_pubs < 1 or cites < 0:
                raise InvalidSpec("recent_spike needs n_pubs >= 1 and citations >= 0")
        if self.field_citation_rates is not None:
            if set(self.field_citation_rates) != set(self.field_ids):
                raise InvalidSpec(f"field_citation_rates must cover exactly {self.field_ids}")
            if any(r < 0 for r in self.field_citation_rates.values()):
                raise InvalidSpec("field citation rates must be >= 0")

    @property
    def field_ids(self) -> list[str]:
        width = max(2, len(str(self.n_fields)))
        return [f"F{i + 1:0{width}d}" for i in range(self.n_fields)]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["year_range"] = list(self.year_range)
        if self.recent_spike is not None:
            d["recent_spike"] = list(self.recent_spike)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidSpec(f"unknown spec keys: {', '.join(sorted(unknown))}")
        if "seed" not in data:
            raise InvalidSpec("spec must carry an explicit seed")
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidSpec(str(exc)) from None

    @classmethod
    def from_json(cls, path) -> "GeneratorSpec":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise InvalidSpec(f"{path}: top level must be an object")
        return cls.from_dict(data)


def _dump_json(data, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def resolve(spec: GeneratorSpec, rng: np.random.Generator) -> GeneratorSpec:
    """Fill in field rates (uniform on [0.5, 6.0), 3 decimals) when the spec leaves them open."""
    if spec.field_citation_rates is not None:
        return spec
    rates = {f: round(float(rng.uniform(0.5, 6.0)), 3) for f in spec.field_ids}
    return GeneratorSpec(**{**spec.to_dict(), "field_citation_rates": rates})


def generate(spec: GeneratorSpec) -> tuple[Corpus, GeneratorSpec]:
    """Draw a corpus; also returns the spec with field rates resolved.

    Rates and the corpus come from separate child streams so that feeding the
    resolved spec back in reproduces the same corpus.
    """
    rate_seq, draw_seq = np.random.SeedSequence(spec.seed).spawn(2)
    spec = resolve(spec, np.random.Generator(np.random.PCG64(rate_seq)))
    rng = np.random.Generator(np.random.PCG64(draw_seq))
    field_ids = spec.field_ids
    rates = spec.field_citation_rates
    start, end = spec.year_range

    journals = []
    for j in range(spec.n_journals):
        primary = j % spec.n_fields
        jfields = [field_ids[primary]]
        if spec.n_fields > 1 and rng.random() < spec.multi_field_share:
            other = int(rng.integers(spec.n_fields - 1))
            jfields.append(field_ids[other if other < primary else other + 1])
        journals.append((f"J{j + 1:03d}", tuple(jfields)))

    drafts = []  # (pub_id, journal index, year, doc type, spike share or None)
    oeuvres: dict[str, list[str]] = {}

    def draft(year=None, doc_type=None, spike=None):
        pid = f"P{len(drafts) + 1:06d}"
        j = int(rng.integers(spec.n_journals))
        if year is None:
            year = int(rng.integers(start, end + 1))
        if doc_type is None:
            doc_type = DOC_TYPES[int(rng.choice(len(DOC_TYPES), p=DOC_TYPE_PROBS))]
        drafts.append((pid, j, year, doc_type, spike))
        return pid

    rwidth = max(4, len(str(spec.n_researchers)))
    for r in range(spec.n_researchers):
        rid = f"R{r + 1:0{rwidth}d}"
        oeuvres[rid] = [draft() for _ in range(spec.pubs_per_researcher)]
        if spec.recent_spike is not None and rng.random() < spec.spike_fraction:
            n_pubs, cites = spec.recent_spike
            shares = rng.multinomial(cites, [1.0 / n_pubs] * n_pubs)
            oeuvres[rid] += [
                draft(end, DocType.ARTICLE, int(s)) for s in shares
            ]
    for _ in range(spec.background_pubs):
        draft()

    pubs = []
    for pid, j, year, doc_type, spike in drafts:
        jid, jfields = journals[j]
        rate = sum(rates[f] for f in jfields) / len(jfields) * DOC_TYPE_FACTOR[doc_type]
        years = np.arange(year, spec.citation_end_year + 1)
        lam = np.array([rate * age_factor(int(y - year)) for y in years])
        counts = rng.poisson(lam)
        cites = {int(y): int(c) for y, c in zip(years, counts)}
        if spike is not None:
            cites[year] = spike
        pubs.append(Publication(pid, jid, jfields, year, doc_type, cites))
    return Corpus.from_publications(pubs, oeuvres), spec


def write_synth(corpus: Corpus, spec_record: dict, directory) -> list[Path]:
    directory = Path(directory)
    written = write_corpus(corpus, directory)
    _dump_json(spec_record, directory / SPEC_FILE)
    return written + [directory / SPEC_FILE]


# --- researcher A -----------------------------------------------------------

RESEARCHER_A = "A"
RESEARCHER_A_WINDOW = 2006
# cell means of the five fields for pre-census years; they average 8.4
RESEARCHER_A_FIELD_MEANS = {"F1": 4.2, "F2": 6.3, "F3": 8.4, "F4": 10.5, "F5": 12.6}
_OLD_CELL_SIZE = 20
_CENSUS_CELL_SIZE = 25
_CENSUS_SPLIT = (("F2", 4), ("F3", 3), ("F4", 3))


def _spread(total: int, first_year: int, last_year: int) -> dict[int, int]:
    years = list(range(first_year, last_year + 1))
    q, rem = divmod(total, len(years))
    return {y: q + (1 if i < rem else 0) for i, y in enumerate(years)}


def _split(total: int, parts: int) -> list[int]:
    q, rem = divmod(total, parts)
    return [q + (1 if i < rem else 0) for i in range(parts)]


def researcher_a_corpus() -> Corpus:
    """Fixed corpus in which one researcher has 53 papers and 349 citations by 2006.

    50 papers from 1997-2005 hold 339 citations in cells whose means average
    8.4. Three 2006 papers hold 10 citations in census-year cells of mean 0.4,
    which is enough to put the average of ratios above 1 while the ratio of
    averages stays below 1. Every 2006 paper gains 2 citations in each of 2007
    and 2008, so the census cells mature when the window is extended.
    Background papers (ids starting with ``B``) fill each cell to its mean.
    """
    census = RESEARCHER_A_WINDOW
    fields_ = list(RESEARCHER_A_FIELD_MEANS)
    means = [RESEARCHER_A_FIELD_MEANS[f] for f in fields_]
    # A's own citations: ~0.8 of each cell mean, nudged up to a total of 339
    base = [round(0.8 * m) for m in means]
    members: dict[tuple[str, int], list[int]] = {}
    a_pubs = []
    for k in range(50):
        f = k % 5
        year = 1997 + (k // 5) % 9
        c = base[f] + (1 if k < 9 else 0)
        a_pubs.append((f"A{k + 1:02d}", fields_[f], year, c))
        members.setdefault((fields_[f], year), []).append(c)
    assert sum(p[3] for p in a_pubs) == 339

    pubs = []
    for pid, f, year, c in a_pubs:
        pubs.append(Publication(pid, f"J{f}", (f,), year, DocType.ARTICLE, _spread(c, year, census)))

    later = {census + 1: 2, census + 2: 2}
    for i, (f, c) in enumerate(_CENSUS_SPLIT):
        pubs.append(
            Publication(f"A{51 + i}", f"J{f}", (f,), census, DocType.ARTICLE, {census: c, **later})
        )
        members[(f, census)] = [c]

    bg = 0
    for (f, year), own in sorted(members.items()):
        if year == census:
            size, total = _CENSUS_CELL_SIZE, round(0.4 * _CENSUS_CELL_SIZE)
        else:
            size = _OLD_CELL_SIZE
            total = round(RESEARCHER_A_FIELD_MEANS[f] * size)
        for c in _split(total - sum(own), size - len(own)):
            bg += 1
            cites = {census: c, **later} if year == census else _spread(c, year, census)
            pubs.append(Publication(f"B{bg:04d}", f"J{f}", (f,), year, DocType.ARTICLE, cites))

    oeuvre = [p.pub_id for p in pubs if p.pub_id.startswith("A")]
    return Corpus.from_publications(pubs, {RESEARCHER_A: oeuvre})
