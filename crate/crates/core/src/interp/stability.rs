use crate::error::Result;
use crate::interp::coefficients::lmm_coefficients_s2;
use crate::scalar::Scalar;

/// Zero-stability of the two-step method for a given ratio `q`.
///
/// Parasitic modes obey `z_{n+2} + a_1 z_{n+1} + a_0 z_n = 0`, whose
/// characteristic polynomial factors as `(λ - 1)(λ - a_0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport<S> {
    pub a0: S,
    pub roots: (S, S),
    pub stable: bool,
    /// Rough conditioning of the coefficient formulas, `1 / |q - 1|^3`.
    pub condition_estimate: S,
}

pub fn parasitic_analysis_s2<S: Scalar>(q: &S) -> Result<StabilityReport<S>> {
    let coeffs = lmm_coefficients_s2(q)?;
    let a0 = coeffs.a[0].clone();
    let stable = a0.abs() < S::one();
    let condition_estimate = S::one() / (q.clone() - S::one()).abs().powi(3);
    Ok(StabilityReport {
        roots: (S::one(), a0.clone()),
        a0,
        stable,
        condition_estimate,
    })
}
