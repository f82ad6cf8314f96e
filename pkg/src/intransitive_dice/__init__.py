"""Intransitive dice: exact pairwise engines, samplers, and experiments.

A die here has n faces with values in [1, n] and face sum n(n+1)/2.  The
package provides exact comparison/score machinery (`dice_core`), seeded
samplers for the two standard random-die models (`samplers`), complete
small-n enumeration with exact rational statistics (`enumeration`),
exact lattice convolutions with Gaussian/tail diagnostics (`fourier_clt`),
tournament structure statistics (`tournament_stats`), and reproducible
Monte-Carlo experiment drivers plus the `intransitive-dice` CLI
(`experiments_cli`).
"""

from .dice_core import (
    BeatOutcome,
    Die,
    Model,
    Verdict,
    beats,
    complement,
    f_of,
    g_of,
    g_values,
    new_die,
    score_sum,
    standard_die,
)
from .enumeration import (
    ExactCensus,
    UndefinedConditionalError,
    count_balanced,
    enumerate_multiset,
    exact_pairwise_stats,
    exact_triple_stats,
    multiplicity,
)
from .experiments_cli import (
    ConfigError,
    ExperimentConfig,
    ExperimentReport,
    TOOL_VERSION,
    emit_report,
    run_experiment,
)
from .fourier_clt import (
    BoxBoundReport,
    GaussianFit,
    JointPmf,
    LatticeLaw,
    MaxnormReport,
    TailReport,
    box_bound_report,
    char_fn,
    char_grid,
    conditional_beat_prob,
    convolve_exact,
    gaussian_compare,
    lattice_law,
    maxnorm_check,
    tail_check,
)
from .samplers import (
    RngStream,
    SamplerStats,
    balanced_counts,
    count_multiset,
    sample_balanced_block,
    sample_balanced_exact,
    sample_balanced_rejection,
    sample_multiset,
)
from .tournament_stats import (
    OutdegreeSummary,
    PatternCensus,
    Path2Report,
    Tournament,
    TripleCensus,
    build_tournament,
    outdegree_concentration,
    path2_identity_check,
    pattern_frequencies,
    triple_census,
)

__version__ = TOOL_VERSION

__all__ = [
    "BeatOutcome",
    "BoxBoundReport",
    "ConfigError",
    "Die",
    "ExactCensus",
    "ExperimentConfig",
    "ExperimentReport",
    "GaussianFit",
    "JointPmf",
    "LatticeLaw",
    "MaxnormReport",
    "Model",
    "OutdegreeSummary",
    "PatternCensus",
    "Path2Report",
    "RngStream",
    "SamplerStats",
    "TailReport",
    "Tournament",
    "TripleCensus",
    "UndefinedConditionalError",
    "Verdict",
    "balanced_counts",
    "beats",
    "box_bound_report",
    "build_tournament",
    "char_fn",
    "char_grid",
    "complement",
    "conditional_beat_prob",
    "convolve_exact",
    "count_balanced",
    "count_multiset",
    "emit_report",
    "enumerate_multiset",
    "exact_pairwise_stats",
    "exact_triple_stats",
    "f_of",
    "g_of",
    "g_values",
    "gaussian_compare",
    "lattice_law",
    "maxnorm_check",
    "multiplicity",
    "new_die",
    "outdegree_concentration",
    "path2_identity_check",
    "pattern_frequencies",
    "run_experiment",
    "sample_balanced_block",
    "sample_balanced_exact",
    "sample_balanced_rejection",
    "sample_multiset",
    "score_sum",
    "standard_die",
    "tail_check",
    "triple_census",
    "__version__",
]
