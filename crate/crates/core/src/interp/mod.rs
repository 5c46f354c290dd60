//! Inverse interpolation and LMM coefficient construction.

mod coefficients;
mod hermite;
mod linsolve;
mod stability;

pub use coefficients::{
    lmm_coefficients_s2, lmm_coefficients_s3, solve_lmm_coefficients, step_ratios, LmmCoefficients,
    SigmaMask,
};
pub use hermite::{inverse_hermite_root, Interpolant, InverseNode};
pub use stability::{parasitic_analysis_s2, StabilityReport};
