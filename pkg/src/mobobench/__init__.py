"""Pool-based multi-objective Bayesian optimization over molecular fingerprints.

The package splits into: sparse count fingerprints and their kernels
(fingerprints), Pareto dominance and hypervolume (pareto), exact GP
surrogates (gp), acquisition functions (acquisition), quality/diversity
metrics (metrics), the optimization loop and benchmark suite (engine),
dataset and report files (data), and the command-line front end (cli).
"""

from .acquisition import (
    ACQUISITION_KINDS,
    AcquisitionConfig,
    PosteriorBelief,
    ehvi_mc,
    ehvi_mc_batch,
    expected_improvement,
    random_score,
    random_scores,
    scalarize_weighted,
    scalarized_ei_score,
    scalarized_ei_scores,
)
from .data import (
    FORMAT_VERSION,
    DatasetError,
    DatasetHeader,
    generate_synthetic,
    load_dataset,
    read_round_log,
    synthetic_anchors,
    write_dataset,
    write_round_log,
    write_summary,
)
from .engine import (
    Archive,
    CandidatePool,
    EffectSizePair,
    MethodSummary,
    RNG_ALGORITHM,
    RngBundle,
    RunConfig,
    RunRecord,
    RunResult,
    SuiteResult,
    TrialResult,
    derive_streams,
    init_run,
    run,
    run_round,
    run_suite,
    summarize_trials,
)
from .fingerprints import (
    KERNELS,
    CountFingerprint,
    binarized,
    cross_kernel_matrix,
    kernel_matrix,
    minmax_kernel,
    tanimoto_distance,
    tanimoto_kernel,
)
from .gp import GPHyperparams, GPModel, MultiObjectiveSurrogate, append_observation
from .metrics import (
    DirectionSet,
    EffectSizeReport,
    cliffs_delta,
    cohens_d,
    generate_directions,
    hvi_curve,
    n_circles,
    r2_indicator,
)
from .pareto import (
    HypervolumeEstimate,
    ParetoFront,
    UnsupportedDimensionError,
    box_improvement,
    dominates,
    hv_improvement,
    hypervolume_exact,
    hypervolume_mc,
    non_dominated_filter,
    nondominated_box_decomposition,
    nondominated_mask,
)

__version__ = "0.1.0"

__all__ = [
    "ACQUISITION_KINDS",
    "AcquisitionConfig",
    "Archive",
    "CandidatePool",
    "CountFingerprint",
    "DatasetError",
    "DatasetHeader",
    "DirectionSet",
    "EffectSizePair",
    "EffectSizeReport",
    "FORMAT_VERSION",
    "GPHyperparams",
    "GPModel",
    "HypervolumeEstimate",
    "KERNELS",
    "MethodSummary",
    "MultiObjectiveSurrogate",
    "ParetoFront",
    "PosteriorBelief",
    "RNG_ALGORITHM",
    "RngBundle",
    "RunConfig",
    "RunRecord",
    "RunResult",
    "SuiteResult",
    "TrialResult",
    "UnsupportedDimensionError",
    "append_observation",
    "binarized",
    "box_improvement",
    "cliffs_delta",
    "cohens_d",
    "cross_kernel_matrix",
    "derive_streams",
    "dominates",
    "ehvi_mc",
    "ehvi_mc_batch",
    "expected_improvement",
    "generate_directions",
    "generate_synthetic",
    "hv_improvement",
    "hvi_curve",
    "hypervolume_exact",
    "hypervolume_mc",
    "init_run",
    "kernel_matrix",
    "load_dataset",
    "minmax_kernel",
    "n_circles",
    "non_dominated_filter",
    "nondominated_box_decomposition",
    "nondominated_mask",
    "r2_indicator",
    "random_score",
    "random_scores",
    "read_round_log",
    "run",
    "run_round",
    "run_suite",
    "scalarize_weighted",
    "scalarized_ei_score",
    "scalarized_ei_scores",
    "summarize_trials",
    "synthetic_anchors",
    "tanimoto_distance",
    "tanimoto_kernel",
    "write_dataset",
    "write_round_log",
    "write_summary",
    "__version__",
]
