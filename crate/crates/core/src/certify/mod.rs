//! Machine-checkable upper bound on the cutpath growth rate.

pub mod bound;
pub mod interval;
pub mod lp;
pub mod objective;
pub mod problem;

pub use bound::{
    bound_recursive, certify, exponent_report, verify_certificate, BoundParams, Certificate, ExponentReport,
    NodeStatus, Verdict,
};
pub use interval::{entropy, lg_bound, Rounding};
pub use lp::{LinearProgram, LpOutcome};
pub use objective::{evaluate_f, evaluate_f_at, max_fn, Evaluation, ScaledPoint};
pub use problem::{build_q, tangent, tangent_grid, OptBox, QConfig, TangentLine};
