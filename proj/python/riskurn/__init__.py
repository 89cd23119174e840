"""Reinforced risk-scoring simulator and audit harness.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from riskurn._core import (
    AmplificationReport,
    BetaParams,
    BinStats,
    CohortConfig,
    CohortResult,
    DefendantTrajectory,
    DisparityRecord,
    GoodnessOfFitResult,
    GroupDisparityStat,
    GroupSpec,
    GroupValidation,
    PairDisparity,
    SnapshotSpec,
    UrnParameters,
    UrnState,
    ValidationReport,
    __version__,
    amplification_report,
    apply_bias,
    auc,
    beta_cdf,
    beta_moments,
    beta_pdf,
    classic_gamma_weight,
    counts_to_probability,
    disparity_curve,
    enumerate_exact,
    fit_limit_law,
    gamma_weight,
    group_disparity,
    initial_probability,
    ks_statistic,
    limit_distribution,
    one_shot_power,
    run_cohort,
    simulate_path,
    snapshot_validation,
    step,
    stream_seed,
    update_probability,
)

__all__ = [
    "AmplificationReport",
    "BetaParams",
    "BinStats",
    "CohortConfig",
    "CohortResult",
    "DefendantTrajectory",
    "DisparityRecord",
    "GoodnessOfFitResult",
    "GroupDisparityStat",
    "GroupSpec",
    "GroupValidation",
    "PairDisparity",
    "SnapshotSpec",
    "UrnParameters",
    "UrnState",
    "ValidationReport",
    "__version__",
    "amplification_report",
    "apply_bias",
    "auc",
    "beta_cdf",
    "beta_moments",
    "beta_pdf",
    "classic_gamma_weight",
    "counts_to_probability",
    "disparity_curve",
    "enumerate_exact",
    "fit_limit_law",
    "gamma_weight",
    "group_disparity",
    "initial_probability",
    "ks_statistic",
    "limit_distribution",
    "one_shot_power",
    "run_cohort",
    "simulate_path",
    "snapshot_validation",
    "step",
    "stream_seed",
    "update_probability",
]
