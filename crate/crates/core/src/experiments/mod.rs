//! Solvability, pinned-set, coverage and sum-product experiments, and the
//! acceptance grid.

pub mod acceptance;
pub mod oracle;
pub mod report;
pub mod runs;
pub mod solve;
pub mod sumproduct;

pub use report::{ExperimentReport, ReportRow};
pub use runs::{
    coverage_experiment, equation_experiment, mixing_grid, pinned_experiment, system_experiment, CoverageConfig,
    EquationConfig, MixingConfig, PinnedConfig,
};
pub use solve::{solve_count, solve_count_sets, SystemKind, SystemSpec};
pub use sumproduct::{sumproduct_check, sumproduct_edges, sumproduct_experiment, SumProductCheck, SumProductConfig};
