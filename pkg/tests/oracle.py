"""Brute-force reference computations, deliberately independent of citemetric.

Everything here works from plain lists and raw CSV rows so the library code
paths are checked against a second, naive implementation.
"""

import csv
import math
from fractions import Fraction
from pathlib import Path

import numpy as np


def read_raw_corpus(directory):
    directory = Path(directory)
    with open(directory / "publications.csv", newline="") as fh:
        pubs = {r["pub_id"]: r for r in csv.DictReader(fh)}
    cites = {pid: [] for pid in pubs}
    with open(directory / "citations.csv", newline="") as fh:
        for r in csv.DictReader(fh):
            cites[r["pub_id"]].append((int(r["year"]), int(r["count"])))
    oeuvres = {}
    with open(directory / "oeuvres.csv", newline="") as fh:
        for r in csv.DictReader(fh):
            oeuvres.setdefault(r["researcher_id"], []).append(r["pub_id"])
    return pubs, cites, oeuvres


def windowed(cites, pid, end):
    total = 0
    for year, count in cites[pid]:
        if year <= end:
            total += count
    return total


def classes(pub, mode):
    if mode == "journal":
        return [pub["journal_id"]]
    return pub["field_ids"].split(";")


def brute_cell_means(pubs, cites, mode, end):
    """{(class, year, doctype): mean} by scanning the whole corpus once per cell."""
    keys = set()
    for pub in pubs.values():
        if int(pub["pub_year"]) <= end:
            for c in classes(pub, mode):
                keys.add((c, int(pub["pub_year"]), pub["doc_type"].lower()))
    out = {}
    for key in keys:
        members = [
            windowed(cites, pid, end)
            for pid, pub in pubs.items()
            if int(pub["pub_year"]) == key[1]
            and pub["doc_type"].lower() == key[2]
            and key[0] in classes(pub, mode)
        ]
        out[key] = sum(members) / len(members)
    return out


def brute_expected(pub, means, mode):
    vals = []
    for c in classes(pub, mode):
        key = (c, int(pub["pub_year"]), pub["doc_type"].lower())
        if key not in means:
            return None
        vals.append(means[key])
    return sum(vals) / len(vals)


def crown(c, e):
    return sum(c) / sum(e)


def mncs(c, e):
    return sum(ci / ei for ci, ei in zip(c, e)) / len(c)


def attribution(c, e):
    n, total = len(c), sum(e)
    return [(1 / n - ei / total) * (ci / ei) for ci, ei in zip(c, e)]


def oeuvre_values(pubs, cites, oeuvre, mode, end, floor=0.1, means=None):
    """(c, e, ids) of the publications that survive the exclusion rules."""
    if means is None:
        means = brute_cell_means(pubs, cites, mode, end)
    c, e, ids = [], [], []
    for pid in sorted(oeuvre):
        pub = pubs[pid]
        if int(pub["pub_year"]) > end:
            continue
        exp = brute_expected(pub, means, mode)
        if exp is None or exp == 0 or exp < floor:
            continue
        c.append(windowed(cites, pid, end))
        e.append(exp)
        ids.append(pid)
    return c, e, ids


def nearest_rank(n_resamples, level):
    level = Fraction(str(level))
    tail = (1 - level) / 2
    lo = math.ceil(n_resamples * tail)
    hi = math.ceil(n_resamples * (1 - tail))
    return max(1, lo), min(n_resamples, hi)


def reference_bootstrap(c, e, indicator, n_resamples, level, seed):
    """Resample one row at a time from a fresh PCG64 stream and rank by hand."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = len(c)
    values = []
    for _ in range(n_resamples):
        idx = [int(i) for i in rng.integers(0, n, size=n)]
        cs = [c[i] for i in idx]
        es = [e[i] for i in idx]
        values.append(crown(cs, es) if indicator == "crown" else mncs(cs, es))
    values.sort()
    lo, hi = nearest_rank(n_resamples, level)
    return values[lo - 1], values[hi - 1]


def grouped_cell_means(pubs, cites, mode, end):
    """Same result as brute_cell_means, one pass over the corpus (for large inputs)."""
    sums, counts = {}, {}
    for pid, pub in pubs.items():
        year = int(pub["pub_year"])
        if year > end:
            continue
        c = windowed(cites, pid, end)
        for cls in classes(pub, mode):
            key = (cls, year, pub["doc_type"].lower())
            sums[key] = sums.get(key, 0) + c
            counts[key] = counts.get(key, 0) + 1
    return {k: sums[k] / counts[k] for k in sums}
