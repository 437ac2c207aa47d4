"""Field- and journal-normalized citation indicators.

Computes the ratio-of-averages ("crown") and average-of-ratios (MNCS)
indicators over researcher oeuvres, with expected-citation baselines,
significance statistics and citation-window sensitivity analysis.
"""

__version__ = "0.1.0"

from .baseline import (  # noqa: E402
    BaselineKey,
    BaselineMode,
    BaselineTable,
    build_baselines,
    expected_citations,
    leave_one_out_adjust,
)
from .config import BootstrapConfig, ScoringConfig  # noqa: E402
from .corpus import (  # noqa: E402
    Corpus,
    DocType,
    Publication,
    WindowSpec,
    citations_up_to,
    load_corpus,
    load_corpus_dir,
    write_corpus,
)
from .indicators import (  # noqa: E402
    OeuvreScore,
    ScoredPublication,
    crown_as_weighted_mean,
    divergence,
    score_oeuvre,
    score_values,
)
from .stats import bootstrap_ci, schubert_glanzel_z  # noqa: E402
from .window import attribute_divergence, compare_at_window, window_sweep  # noqa: E402

__all__ = [
    "BaselineKey", "BaselineMode", "BaselineTable", "BootstrapConfig", "Corpus", "DocType",
    "OeuvreScore", "Publication", "ScoredPublication", "ScoringConfig", "WindowSpec",
    "attribute_divergence", "bootstrap_ci", "build_baselines", "citations_up_to",
    "compare_at_window", "crown_as_weighted_mean", "divergence", "expected_citations",
    "leave_one_out_adjust", "load_corpus", "load_corpus_dir", "schubert_glanzel_z",
    "score_oeuvre", "score_values", "window_sweep", "write_corpus",
]
