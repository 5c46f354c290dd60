//! Root finders built from linear multistep methods applied to the inverse
//! function, with their convergence-rate theory and a bracketing variant.
//!
//! Every algorithm is generic over [`Scalar`], implemented for `f64` and for
//! the MPFR-backed [`BigFloat`].
//!
//! ```
//! use lmmroot::{run, Problem, SolverSpec, Status, StopCriterion};
//!
//! let p = Problem::new("x-cos", |x: &f64| x - x.cos(), |x: &f64| 1.0 + x.sin(), 1.0);
//! let spec = SolverSpec::full_lmm(3, StopCriterion::two_epsilon_increment()).unwrap();
//! let report = run(&p, &spec, &1.0);
//! assert_eq!(report.status, Status::Converged);
//! assert!((report.final_x - 0.7390851332151607).abs() < 1e-15);
//! ```

pub mod corpus;
pub mod error;
pub mod experiments;
pub mod history;
pub mod interp;
pub mod problem;
pub mod rate;
pub mod robust;
pub mod scalar;
pub mod solvers;
pub mod stop;

pub use error::{Error, Result};
pub use history::{IterateHistory, IterationRecord};
pub use interp::{
    inverse_hermite_root, lmm_coefficients_s2, lmm_coefficients_s3, parasitic_analysis_s2,
    solve_lmm_coefficients, step_ratios, Interpolant, InverseNode, LmmCoefficients, SigmaMask,
    StabilityReport,
};
pub use problem::{Evaluator, Problem};
pub use rate::{
    efficiency_index, estimate_rate, predicted_rate, rate_table, RateEstimate, RateFamily,
    RatePolynomial, RateTable,
};
pub use robust::{
    gate_derivatives, guard_step, propose_step, solve_bracketed, BracketReport, BracketState,
    GateReport, Method, StepKind,
};
pub use scalar::{
    set_working_digits, with_working_digits, working_digits, BigFloat, Precision, Scalar,
    DEFAULT_DIGITS,
};
pub use solvers::{
    fallback_policy, full_lmm_step, lmm_step, newton_step, run, FallbackAction, Family,
    SolveReport, SolverSpec, Status, StepRoute,
};
pub use stop::StopCriterion;
