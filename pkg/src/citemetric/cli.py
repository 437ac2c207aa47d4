"""citemetric: crown (ratio of averages) and MNCS (average of ratios) citation indicators.

Exit codes: 0 success, 1 invalid input or configuration, 2 I/O failure.
Settings are resolved as flags > config file (``--config`` or
``$CITEMETRIC_CONFIG``) > built-in defaults.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from .baseline import BaselineMode, build_baselines
from .config import DEFAULT_BOOTSTRAP, DEFAULTS, BootstrapConfig, ScoringConfig, load_config_file
from .corpus import (
    CITATIONS_FILE,
    OEUVRES_FILE,
    PUBLICATIONS_FILE,
    WindowSpec,
    load_corpus,
)
from .errors import AllPublicationsExcluded, ConfigError, ValidationError
from .indicators import score_oeuvre
from .report import (
    EXCLUDED_RESEARCHERS_FILE,
    emit_report,
    make_header,
    write_excluded_researchers,
)
from .stats import cohort_stats
from .synth import GeneratorSpec, generate, researcher_a_corpus, write_synth
from .window import (
    compare_at_window,
    eligible_researchers,
    window_sweep,
    write_compare_csv,
    write_sweep_csv,
)

log = logging.getLogger("citemetric")


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1); exit 2 is reserved for I/O failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- argument groups --------------------------------------------------------


def _add_common(p):
    p.add_argument("--config", metavar="PATH",
                   help="JSON config file (default: $CITEMETRIC_CONFIG if set)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def _add_corpus(p):
    g = p.add_argument_group("corpus")
    g.add_argument("--corpus", metavar="DIR",
                   help=f"directory holding {PUBLICATIONS_FILE}, {CITATIONS_FILE}, {OEUVRES_FILE}")
    g.add_argument("--publications", metavar="PATH", help="override publications file")
    g.add_argument("--citations", metavar="PATH", help="override citations file")
    g.add_argument("--oeuvres", metavar="PATH", help="override oeuvres file")


def _add_scoring(p, window_end=True):
    g = p.add_argument_group("scoring")
    g.add_argument("--baseline-mode", choices=[m.value for m in BaselineMode],
                   help=f"normalize by field or journal (default: {DEFAULTS.baseline_mode.value})")
    if window_end:
        g.add_argument("--window-end", type=int, metavar="YEAR",
                       help="count citations through this year (required unless set in config)")
    g.add_argument("--min-pubs", type=int, metavar="N",
                   help=f"minimum publications held per researcher (default: {DEFAULTS.min_pubs})")
    g.add_argument("--expected-floor", type=float, metavar="X",
                   help=f"exclude publications with expected citations below X "
                        f"(default: {DEFAULTS.expected_floor})")
    g.add_argument("--ratio-flag", type=float, metavar="X",
                   help=f"flag publications whose ratio exceeds X (default: {DEFAULTS.ratio_flag})")
    g.add_argument("--leave-one-out", action="store_true", default=None,
                   help="drop each publication from its own baseline cells "
                        f"(default: {str(DEFAULTS.leave_one_out).lower()})")
    g.add_argument("--delta", type=float, metavar="X",
                   help=f"divergence threshold for above-diagonal counts (default: {DEFAULTS.delta})")
    g.add_argument("--threads", type=int, default=1, metavar="N",
                   help="worker threads; output does not depend on N (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citemetric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("baseline", help="build expected-citation baselines",
                       description="Build baselines.csv from a corpus.")
    _add_common(p)
    _add_corpus(p)
    _add_scoring(p)
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("score", help="score researchers with both indicators",
                       description="Score every researcher: corpus -> baselines -> indicators -> report.")
    _add_common(p)
    _add_corpus(p)
    _add_scoring(p)
    p.add_argument("--bootstrap", type=int, metavar="N",
                   help=f"enable bootstrap intervals with N resamples "
                        f"(default when enabled: {DEFAULT_BOOTSTRAP.n_resamples})")
    p.add_argument("--seed", type=int, help="bootstrap master seed (required with --bootstrap)")
    p.add_argument("--level", type=float,
                   help=f"bootstrap confidence level (default: {DEFAULT_BOOTSTRAP.level})")
    p.add_argument("--format", choices=["csv", "json", "both"], default="csv",
                   help="report format (default: csv)")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", help="crown vs mncs scatter data for one window",
                       description="Write compare_<year>.csv for one citation window.")
    _add_common(p)
    _add_corpus(p)
    _add_scoring(p)
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("window-sweep", help="compare indicators across citation windows",
                       description="Write compare_<year>.csv per window plus sweep.csv.")
    _add_common(p)
    _add_corpus(p)
    _add_scoring(p, window_end=False)
    p.add_argument("--windows", required=True, metavar="Y1,Y2,...",
                   help="strictly increasing window end years")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=cmd_window_sweep)

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus",
                       description="Write corpus CSV files and spec.json.")
    _add_common(p)
    p.add_argument("--spec", metavar="PATH", help="GeneratorSpec JSON (flags override its values)")
    p.add_argument("--scenario", choices=["researcher-a"],
                   help="emit a fixed built-in scenario instead of a random corpus")
    p.add_argument("--seed", type=int, help="generator seed (required unless in --spec)")
    p.add_argument("--n-fields", type=int, help="number of fields (default: 5)")
    p.add_argument("--n-journals", type=int, help="number of journals (default: 20)")
    p.add_argument("--n-researchers", type=int, help="number of researchers (default: 10)")
    p.add_argument("--pubs-per-researcher", type=int, help="publications per researcher (default: 20)")
    p.add_argument("--year-range", metavar="START:END", help="publication years (default: 1997:2006)")
    p.add_argument("--spike", metavar="N_PUBS,CITATIONS",
                   help="census-year spike per researcher (default: none)")
    p.add_argument("--spike-fraction", type=float,
                   help="share of researchers receiving the spike (default: 1.0)")
    p.add_argument("--background-pubs", type=int,
                   help="reference publications outside any oeuvre (default: 0)")
    p.add_argument("--citation-end-year", type=int,
                   help="last year with citation data (default: end of year range + 2)")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=cmd_synth)
    return parser


# --- helpers ----------------------------------------------------------------


def _corpus(args):
    base = Path(args.corpus) if args.corpus else None

    def pick(override, name):
        if override:
            return Path(override)
        if base is None:
            raise ConfigError(f"--corpus or --{name.split('.')[0]} is required")
        return base / name

    return load_corpus(
        pick(args.publications, PUBLICATIONS_FILE),
        pick(args.citations, CITATIONS_FILE),
        pick(args.oeuvres, OEUVRES_FILE),
    )


def _scoring_config(args) -> ScoringConfig:
    config = load_config_file(args.config)
    config = config.with_overrides(
        baseline_mode=args.baseline_mode,
        window_end=getattr(args, "window_end", None),
        min_pubs=args.min_pubs,
        expected_floor=args.expected_floor,
        ratio_flag=args.ratio_flag,
        leave_one_out=args.leave_one_out,
        delta=args.delta,
    )
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    return config


def _window(config: ScoringConfig) -> WindowSpec:
    if config.window_end is None:
        raise ConfigError("--window-end is required (or window_end in the config file)")
    return WindowSpec(config.window_end)


def _bootstrap(args, config: ScoringConfig) -> ScoringConfig:
    enabled = args.bootstrap is not None or config.bootstrap is not None
    if not enabled:
        if args.seed is not None or args.level is not None:
            raise ConfigError("--seed/--level need --bootstrap")
        return config
    base = config.bootstrap or DEFAULT_BOOTSTRAP
    boot = BootstrapConfig(
        n_resamples=args.bootstrap if args.bootstrap is not None else base.n_resamples,
        level=args.level if args.level is not None else base.level,
        seed=args.seed if args.seed is not None else base.seed,
    )
    if boot.seed is None:
        raise ConfigError("bootstrap requires an explicit --seed")
    return replace(config, bootstrap=boot)


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# --- commands ---------------------------------------------------------------


def cmd_baseline(args) -> int:
    config = _scoring_config(args)
    window = _window(config)
    corpus = _corpus(args)
    table = build_baselines(corpus, config.baseline_mode, window)
    path = table.write_csv(_out(args) / "baselines.csv")
    log.info("wrote %d baseline cells to %s", len(table), path)
    return 0


def cmd_score(args) -> int:
    config = _bootstrap(args, _scoring_config(args))
    window = _window(config)
    corpus = _corpus(args)
    out = _out(args)
    table = build_baselines(corpus, config.baseline_mode, window)
    cohort, below = eligible_researchers(corpus, config.min_pubs)

    def run(rid):
        try:
            return score_oeuvre(corpus.oeuvre(rid), table, window, config, researcher_id=rid)
        except AllPublicationsExcluded as exc:
            log.warning("%s", exc)
            return exc.score

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            scores = list(pool.map(run, cohort))
    else:
        scores = [run(rid) for rid in cohort]

    written = []
    excluded = [(rid, len(corpus.researcher_oeuvres[rid]), "below_min_pubs") for rid in below]
    written.append(write_excluded_researchers(excluded, out / EXCLUDED_RESEARCHERS_FILE))
    if scores:
        stats = None
        if config.bootstrap is not None:
            stats = cohort_stats(scores, config.bootstrap, threads=args.threads)
        header = make_header(corpus, table, config.to_dict())
        written += emit_report(scores, stats, out, args.format, header=header)
    else:
        log.warning("no researcher holds at least %d publications", config.min_pubs)
    for path in written:
        log.info("wrote %s", path)
    return 0


def cmd_compare(args) -> int:
    config = _scoring_config(args)
    window = _window(config)
    corpus = _corpus(args)
    records = compare_at_window(corpus, window, config)
    write_compare_csv(records, _out(args) / f"compare_{window.end_year}.csv")
    return 0


def _parse_windows(text: str) -> list[WindowSpec]:
    try:
        return [WindowSpec(int(y)) for y in text.split(",") if y.strip()]
    except ValueError:
        raise ConfigError(f"--windows expects comma-separated years, got {text!r}") from None


def cmd_window_sweep(args) -> int:
    config = _scoring_config(args)
    windows = _parse_windows(args.windows)
    ends = [w.end_year for w in windows]
    if not windows or any(b <= a for a, b in zip(ends, ends[1:])):
        raise ConfigError(f"--windows must be non-empty and strictly increasing: {args.windows}")
    corpus = _corpus(args)
    out = _out(args)
    summaries = window_sweep(corpus, windows, config.delta, config, threads=args.threads)
    for s in summaries:
        write_compare_csv(s.records, out / f"compare_{s.window_end}.csv")
    write_sweep_csv(summaries, out / "sweep.csv")
    return 0


def _int_pair(text, flag, sep):
    try:
        a, b = (int(x) for x in text.split(sep))
    except ValueError:
        raise ConfigError(f"{flag} expects two integers separated by {sep!r}") from None
    return a, b


def cmd_synth(args) -> int:
    if args.scenario == "researcher-a":
        corpus = researcher_a_corpus()
        write_synth(corpus, {"scenario": "researcher-a"}, _out(args))
        return 0
    data = GeneratorSpec.from_json(args.spec).to_dict() if args.spec else {}
    flags = {
        "seed": args.seed,
        "n_fields": args.n_fields,
        "n_journals": args.n_journals,
        "n_researchers": args.n_researchers,
        "pubs_per_researcher": args.pubs_per_researcher,
        "spike_fraction": args.spike_fraction,
        "background_pubs": args.background_pubs,
        "citation_end_year": args.citation_end_year,
    }
    if args.year_range:
        flags["year_range"] = _int_pair(args.year_range, "--year-range", ":")
        if args.citation_end_year is None:
            data.pop("citation_end_year", None)
    if args.spike:
        flags["recent_spike"] = _int_pair(args.spike, "--spike", ",")
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.n_fields is not None and args.spec:
        data.pop("field_citation_rates", None)
    if data.get("seed") is None:
        raise ConfigError("synth requires an explicit --seed (or a seed in --spec)")
    spec = GeneratorSpec.from_dict(data)
    corpus, resolved = generate(spec)
    write_synth(corpus, resolved.to_dict(), _out(args))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"citemetric {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"citemetric {args.command}: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
