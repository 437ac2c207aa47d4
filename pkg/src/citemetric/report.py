"""Result tables with audit trails and input fingerprints.

Fingerprints are SHA-256 digests of canonical serializations:

* corpus: the three corpus CSV files as written by :func:`write_corpus`,
  concatenated in the order publications, citations, oeuvres;
* baselines: the ``baselines.csv`` bytes;
* config: compact JSON of the effective config with sorted keys.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .baseline import BASELINES_HEADER, BaselineKey, BaselineTable
from .corpus import Corpus, DocType, corpus_rows, write_csv
from .indicators import Exclusion, OeuvreScore, ScoredPublication
from .stats import OeuvreStats

SCORES_HEADER = [
    "researcher_id", "n_total", "n_included", "n_excluded", "sum_c", "sum_e",
    "crown", "mncs", "divergence", "flags",
]
CI_HEADER = ["crown_ci_low", "crown_ci_high", "mncs_ci_low", "mncs_ci_high", "z_sg"]
AUDIT_HEADER = [
    "researcher_id", "pub_id", "observed", "expected", "ratio", "cells", "flags", "exclusion_reason",
]
EXCLUDED_RESEARCHERS_HEADER = ["researcher_id", "n_total", "reason"]

SCORES_FILE = "scores.csv"
AUDIT_FILE = "audit.csv"
MANIFEST_FILE = "manifest.json"
REPORT_FILE = "report.json"
EXCLUDED_RESEARCHERS_FILE = "excluded_researchers.csv"

POLICIES = {
    "missing_baseline": "publications without a baseline cell are excluded, never scored as zero",
    "expected_floor": "publications with expected citations below expected_floor are excluded",
    "multi_field_expected": "unweighted mean of the field-cell means",
    "multi_field_counting": "whole counting into every field cell",
    "significance": "SG-style one-sample z: (mean c - mean e) / (sd(c) / sqrt(n))",
    "bootstrap": "percentile (nearest rank), PCG64, seed per researcher = sha256('<seed>:<id>')[:8]",
}


def fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.6f}"


def rounded(x: float | None) -> float | None:
    return None if x is None else float(f"{x:.6f}")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().encode("utf-8")


def corpus_fingerprint(corpus: Corpus) -> str:
    return _sha256(b"".join(_csv_bytes(h, rows) for h, rows in corpus_rows(corpus).values()))


def baseline_fingerprint(table: BaselineTable) -> str:
    return _sha256(_csv_bytes(BASELINES_HEADER, table.rows()))


def config_fingerprint(config: Mapping) -> str:
    return _sha256(json.dumps(config, sort_keys=True, separators=(",", ":")).encode("utf-8"))


def make_header(corpus: Corpus, table: BaselineTable, config: Mapping) -> dict:
    return {
        "tool": "citemetric",
        "version": __version__,
        "window_end": table.window.end_year,
        "baseline_mode": table.mode.value,
        "fingerprints": {
            "algorithm": "sha256",
            "corpus": corpus_fingerprint(corpus),
            "baselines": baseline_fingerprint(table),
            "config": config_fingerprint(config),
        },
        "config": dict(config),
        "policies": POLICIES,
    }


# --- audit trail ------------------------------------------------------------


@dataclass(frozen=True)
class AuditRow:
    researcher_id: str
    pub_id: str
    observed: int | None
    expected: float | None
    ratio: float | None
    cells: tuple[BaselineKey, ...]
    flags: tuple[str, ...]
    exclusion_reason: str | None

    def csv_row(self) -> list[str]:
        return [
            self.researcher_id, self.pub_id,
            "" if self.observed is None else str(self.observed),
            fmt(self.expected), fmt(self.ratio),
            ";".join(str(k) for k in self.cells), ";".join(self.flags),
            self.exclusion_reason or "",
        ]


def audit_trail(score: OeuvreScore) -> list[AuditRow]:
    """One row per publication in the oeuvre, ordered by pub_id."""
    rows = [
        AuditRow(score.researcher_id, p.pub_id, p.observed, p.expected, p.ratio,
                 p.cells, tuple(p.flags), None)
        for p in score.scored
    ]
    rows += [
        AuditRow(score.researcher_id, x.pub_id, x.observed, x.expected, None,
                 x.cells, (), x.reason)
        for x in score.exclusions
    ]
    return sorted(rows, key=lambda r: r.pub_id)


# --- emission ---------------------------------------------------------------


def _score_row(score: OeuvreScore, stats: OeuvreStats | None, with_ci: bool) -> list[str]:
    row = [
        score.researcher_id, str(score.n_total), str(score.n_included), str(score.n_excluded),
        str(score.sum_observed), fmt(score.sum_expected),
        fmt(score.crown), fmt(score.mncs), fmt(score.divergence), ";".join(score.flags),
    ]
    if with_ci:
        crown_ci = stats.crown_ci if stats else None
        mncs_ci = stats.mncs_ci if stats else None
        sig = stats.significance if stats else None
        row += [
            fmt(crown_ci.ci_low if crown_ci else None), fmt(crown_ci.ci_high if crown_ci else None),
            fmt(mncs_ci.ci_low if mncs_ci else None), fmt(mncs_ci.ci_high if mncs_ci else None),
            fmt(sig.z_statistic if sig else None),
        ]
    return row


def _key_json(key: BaselineKey) -> dict:
    return {"class_id": key.class_id, "pub_year": key.pub_year, "doc_type": key.doc_type.value}


def _ci_json(ci) -> dict | None:
    if ci is None:
        return None
    return {
        "point": rounded(ci.point), "ci_low": rounded(ci.ci_low), "ci_high": rounded(ci.ci_high),
        "n_resamples": ci.n_resamples, "level": ci.level, "seed": ci.seed,
    }


def _score_json(score: OeuvreScore, stats: OeuvreStats | None) -> dict:
    out = {
        "researcher_id": score.researcher_id,
        "n_total": score.n_total,
        "n_included": score.n_included,
        "n_excluded": score.n_excluded,
        "sum_observed": score.sum_observed,
        "sum_expected": rounded(score.sum_expected),
        "crown": rounded(score.crown),
        "mncs": rounded(score.mncs),
        "divergence": rounded(score.divergence),
        "flags": score.flags,
        "publications": [
            {
                "pub_id": r.pub_id,
                "observed": r.observed,
                "expected": rounded(r.expected),
                "ratio": rounded(r.ratio),
                "cells": [_key_json(k) for k in r.cells],
                "flags": list(r.flags),
                "exclusion_reason": r.exclusion_reason,
            }
            for r in audit_trail(score)
        ],
    }
    if stats is not None:
        sig = stats.significance
        out["stats"] = {
            "crown_ci": _ci_json(stats.crown_ci),
            "mncs_ci": _ci_json(stats.mncs_ci),
            "significance": None if sig is None else {
                "method": sig.method,
                "z": rounded(sig.z_statistic),
                "mean_observed": rounded(sig.mean_observed),
                "mean_expected": rounded(sig.mean_expected),
                "standard_error": rounded(sig.standard_error),
                "diagnostic": sig.diagnostic,
            },
        }
    return out


def emit_report(
    scores: Sequence[OeuvreScore],
    stats: Mapping[str, OeuvreStats] | None,
    destination,
    format: str = "csv",
    *,
    header: Mapping | None = None,
) -> list[Path]:
    """Write scores and audit trails; returns the files written.

    ``format`` is ``csv`` (scores.csv, audit.csv, manifest.json), ``json``
    (report.json) or ``both``. The header, when given, goes to manifest.json
    or to the ``header`` member of report.json.
    """
    if not scores:
        raise ValueError("no scores to report")
    if format not in ("csv", "json", "both"):
        raise ValueError(f"unknown report format {format!r}")
    destination = Path(destination)
    destination.mkdir(parents=True, exist_ok=True)
    scores = sorted(scores, key=lambda s: s.researcher_id)
    with_ci = stats is not None
    stats = stats or {}
    header = dict(header or {})
    written = []

    if format in ("csv", "both"):
        cols = SCORES_HEADER + (CI_HEADER if with_ci else [])
        write_csv(destination / SCORES_FILE, cols,
                  [_score_row(s, stats.get(s.researcher_id), with_ci) for s in scores])
        write_csv(destination / AUDIT_FILE, AUDIT_HEADER,
                  [r.csv_row() for s in scores for r in audit_trail(s)])
        manifest = {**header, "files": [SCORES_FILE, AUDIT_FILE]}
        _write_json(manifest, destination / MANIFEST_FILE)
        written += [destination / SCORES_FILE, destination / AUDIT_FILE, destination / MANIFEST_FILE]

    if format in ("json", "both"):
        doc = {
            "header": header,
            "researchers": [
                _score_json(s, stats.get(s.researcher_id) if with_ci else None) for s in scores
            ],
        }
        _write_json(doc, destination / REPORT_FILE)
        written.append(destination / REPORT_FILE)
    return written


def write_excluded_researchers(rows: Sequence[tuple[str, int, str]], path) -> Path:
    write_csv(path, EXCLUDED_RESEARCHERS_HEADER, [[r, str(n), why] for r, n, why in sorted(rows)])
    return Path(path)


def _write_json(data, path) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# --- read-back --------------------------------------------------------------


def _key_from_json(d) -> BaselineKey:
    return BaselineKey(d["class_id"], d["pub_year"], DocType(d["doc_type"]))


def scores_from_json(path) -> list[OeuvreScore]:
    """Rebuild OeuvreScores from a report.json (values at 6-decimal precision)."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    out = []
    for r in doc["researchers"]:
        scored, excluded = [], []
        for p in r["publications"]:
            cells = tuple(_key_from_json(k) for k in p["cells"])
            if p["exclusion_reason"]:
                excluded.append(Exclusion(p["pub_id"], p["exclusion_reason"],
                                          p["observed"], p["expected"], cells))
            else:
                scored.append(ScoredPublication(
                    p["pub_id"], p["observed"], p["expected"], p["ratio"],
                    low_expected_flag="low_expected" in p["flags"],
                    high_ratio_flag="high_ratio" in p["flags"],
                    cells=cells,
                ))
        out.append(OeuvreScore(
            researcher_id=r["researcher_id"],
            n_total=r["n_total"],
            n_included=r["n_included"],
            n_excluded=r["n_excluded"],
            sum_observed=r["sum_observed"],
            sum_expected=r["sum_expected"],
            crown=r["crown"],
            mncs=r["mncs"],
            scored=tuple(scored),
            exclusions=tuple(excluded),
        ))
    return out
