//! The surface measure `mu`, convolutions `mu * chi_E` and their `L^q`
//! norms, and the restricted-type experiments built on them.

mod ineq6;
mod measure;
mod norm;
mod scan;
mod testset;

pub use ineq6::{
    ineq6_check, ineq6_family, ineq6_shell_sum, Ineq6Config, Ineq6Report, Ineq6Row, ShellSumReport, ShellTerm,
};
pub use measure::{Atom, SurfaceMeasure, MIN_RESOLUTION};
pub use norm::{lq_norm_mc, NormEstimate, SamplerSpec};
pub use scan::{
    ball_exponent, ball_scaling_experiment, fit_slope, measure_for, restricted_estimate_scan, restricted_family,
    vertex_probe, BallRow, BallScan, BallScanConfig, FamilySpec, RestrictedConfig, RestrictedRow, RestrictedScan,
    SlopeFit,
};
pub use testset::TestSet;
