//! Robust estimation of geometric transforms under the `L^p` cost with
//! `p < 1`, closed-form minimum-inlier bounds, and Monte Carlo tools to
//! check them.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod model;
pub mod simulate;
pub mod solver;

pub use error::{Error, Result};
pub use model::{
    apply_transform, residual, total_cost, CostParams, Family, ObservationSet, Point, Transform,
};
pub use solver::{
    estimate_simplex, estimate_translation, grid_oracle, EstimateResult, SolverConfig,
};
