//! Bound search and construction of symmetric multiplication algorithms.

mod cost;
mod inner;
mod logstar;
mod optimize;
mod plan;

pub use cost::{cost, CostTable, MU_2, MU_3, MU_GENERIC, M_HAT};
pub use logstar::{log_star, log_star_factor};
pub use optimize::{
    best_curve, default_dmax, optimize_bound, optimize_bound_with, optimize_shape, slack_for, BoundReport,
    DivisorShape, SearchLimits,
};
pub use inner::{inner_algorithm, InnerAlgorithm, InnerKind};
pub use plan::{
    assemble_tensor, build, build_limits, build_with, buildable_shape, check_conditions, BuildPlan, ConditionReport,
    Criterion, GPlace, BUILD_ATTEMPTS, BUILD_MAX_DEGREE, BUILD_MAX_U1, BUILD_MAX_U2,
};
