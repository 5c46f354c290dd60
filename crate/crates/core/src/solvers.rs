//! Open (non-bracketing) iteration drivers.
//!
//! Every family starts from a single point with the same ladder: a Newton
//! step gives `x_1`, then each step uses as many history points as are
//! available, up to the family's `s`. Function and derivative values are
//! cached, so each new estimate costs one `f` evaluation (plus one `f'`
//! evaluation for families that use derivatives).

use std::fmt;

use crate::error::{Error, Result};
use crate::history::{IterateHistory, IterationRecord};
use crate::interp::{
    inverse_hermite_root, lmm_coefficients_s2, lmm_coefficients_s3, solve_lmm_coefficients,
    step_ratios, InverseNode, SigmaMask,
};
use crate::problem::{Evaluator, Problem};
use crate::scalar::Scalar;
use crate::stop::StopCriterion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Newton,
    Secant,
    InverseQuadratic,
    AdamsBashforth,
    FullLmm,
}

impl Family {
    pub fn uses_derivatives(self) -> bool {
        !matches!(self, Family::Secant | Family::InverseQuadratic)
    }

    /// Mask for a step with `s` history points; `None` means a Newton step.
    pub fn mask(self, s: usize) -> Option<SigmaMask> {
        if s <= 1 {
            return None;
        }
        Some(match self {
            Family::Newton => return None,
            Family::Secant | Family::InverseQuadratic => {
                SigmaMask::derivative_free(s).expect("s >= 2")
            }
            Family::AdamsBashforth => SigmaMask::adams_bashforth(s),
            Family::FullLmm => SigmaMask::full(s),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Family::Newton => "newton",
            Family::Secant => "secant",
            Family::InverseQuadratic => "iqi",
            Family::AdamsBashforth => "adams_bashforth",
            Family::FullLmm => "full_lmm",
        };
        f.write_str(name)
    }
}

/// How a multistep update is computed. Both routes give the same iterate up
/// to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepRoute {
    /// Coefficient form `-sum a_k x_k + h sum b_k / f'(x_k)`.
    #[default]
    Coefficients,
    /// Inverse Hermite interpolant evaluated at zero. Adams-Bashforth steps
    /// always use coefficients since not every node carries a value.
    Hermite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec<S> {
    pub family: Family,
    pub s: usize,
    pub max_iters: usize,
    pub stop: StopCriterion<S>,
    pub route: StepRoute,
    /// Diverged once `|x| > escape_factor (1 + |x_0|)`.
    pub escape_factor: f64,
}

impl<S: Scalar> SolverSpec<S> {
    pub fn new(family: Family, s: usize, stop: StopCriterion<S>) -> Result<Self> {
        let spec = SolverSpec {
            family,
            s,
            max_iters: 100,
            stop,
            route: StepRoute::Coefficients,
            escape_factor: 1e10,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn newton(stop: StopCriterion<S>) -> Self {
        Self::new(Family::Newton, 1, stop).expect("valid")
    }

    pub fn secant(stop: StopCriterion<S>) -> Self {
        Self::new(Family::Secant, 2, stop).expect("valid")
    }

    pub fn inverse_quadratic(stop: StopCriterion<S>) -> Self {
        Self::new(Family::InverseQuadratic, 3, stop).expect("valid")
    }

    pub fn adams_bashforth(s: usize, stop: StopCriterion<S>) -> Result<Self> {
        Self::new(Family::AdamsBashforth, s, stop)
    }

    pub fn full_lmm(s: usize, stop: StopCriterion<S>) -> Result<Self> {
        Self::new(Family::FullLmm, s, stop)
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_route(mut self, route: StepRoute) -> Self {
        self.route = route;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.family {
            Family::Newton => self.s == 1,
            Family::Secant => self.s == 2,
            Family::InverseQuadratic => self.s == 3,
            Family::AdamsBashforth | Family::FullLmm => self.s >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFamily(format!(
                "{} does not take s = {}",
                self.family, self.s
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
    Diverged,
    DegenerateStall,
    DomainError,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Status::Converged => "converged",
            Status::MaxIters => "max-iters",
            Status::Diverged => "diverged",
            Status::DegenerateStall => "degenerate-stall",
            Status::DomainError => "domain-error",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport<S> {
    pub history: IterateHistory<S>,
    pub status: Status,
    pub f_evals: usize,
    pub df_evals: usize,
    pub final_x: S,
    /// New root estimates produced, warm-up included, the start excluded.
    pub iterations: usize,
    /// Steps that had to drop history points after a degenerate update.
    pub fallbacks: usize,
}

impl<S: Scalar> SolveReport<S> {
    /// Converged according to the stopping rule, yet far from `root`.
    pub fn is_false_convergence(&self, root: &S, tol: &S) -> bool {
        self.status == Status::Converged && (self.final_x.clone() - root.clone()).abs() > *tol
    }
}

/// `x - f(x)/f'(x)`; an exact root is returned unchanged.
pub fn newton_step<S: Scalar>(x: &S, fx: &S, dfx: &S) -> Result<S> {
    if fx.is_zero() {
        return Ok(x.clone());
    }
    if dfx.is_zero() {
        return Err(Error::ZeroDerivative(x.to_string()));
    }
    Ok(x.clone() - fx.clone() / dfx.clone())
}

fn cached<S: Scalar>(r: &IterationRecord<S>) -> Result<S> {
    r.fx.clone()
        .ok_or_else(|| Error::Domain(format!("no cached f at x = {}", r.x)))
}

fn inverse_slope<S: Scalar>(r: &IterationRecord<S>) -> Result<S> {
    match &r.dfx {
        Some(d) if d.is_zero() => Err(Error::ZeroDerivative(r.x.to_string())),
        Some(d) => Ok(S::one() / d.clone()),
        None => Err(Error::ZeroDerivative(format!(
            "no cached f' at x = {}",
            r.x
        ))),
    }
}

/// One multistep update from `records` (oldest first) with the given mask.
pub fn lmm_step<S: Scalar>(
    records: &[IterationRecord<S>],
    mask: &SigmaMask,
    route: StepRoute,
) -> Result<S> {
    let s = mask.s();
    assert_eq!(records.len(), s, "mask and history length differ");
    let fs = records.iter().map(cached).collect::<Result<Vec<_>>>()?;
    let last = &records[s - 1];
    if fs[s - 1].is_zero() {
        return Ok(last.x.clone());
    }
    let slopes = records
        .iter()
        .zip(mask.deriv())
        .map(|(r, &d)| {
            if d {
                inverse_slope(r).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let value_everywhere = mask.sigma().iter().all(|&v| v);
    if route == StepRoute::Hermite && value_everywhere {
        let nodes: Vec<_> = records
            .iter()
            .zip(&fs)
            .zip(&slopes)
            .map(|((r, f), sl)| InverseNode {
                y: f.clone(),
                x: r.x.clone(),
                slope: sl.clone(),
            })
            .collect();
        return inverse_hermite_root(&nodes).map_err(|e| match e {
            Error::DegenerateNodes(i, j) => {
                Error::DegenerateRatio(format!("f values {i} and {j} coincide"))
            }
            other => other,
        });
    }

    let q = step_ratios(&fs);
    let full = mask == &SigmaMask::full(s);
    let coeffs = match (full, s) {
        (true, 2) => lmm_coefficients_s2(&q[0])?,
        (true, 3) => lmm_coefficients_s3(&q[0], &q[1])?,
        _ => solve_lmm_coefficients(&q, mask)?,
    };
    let xs: Vec<S> = records.iter().map(|r| r.x.clone()).collect();
    Ok(coeffs.step(&xs, &fs[s - 1], &slopes))
}

/// Full-LMM update from the newest `s` records.
pub fn full_lmm_step<S: Scalar>(records: &[IterationRecord<S>]) -> Result<S> {
    lmm_step(
        records,
        &SigmaMask::full(records.len()),
        StepRoute::Coefficients,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackAction {
    /// Drop the oldest point(s) and retry with this many.
    Retry {
        s: usize,
    },
    Stall,
}

/// What to do after a step with `s` points failed.
pub fn fallback_policy(failure: &Error, s: usize, family: Family) -> FallbackAction {
    let recoverable = matches!(
        failure,
        Error::DegenerateRatio(_) | Error::ZeroDerivative(_)
    );
    if !recoverable || s <= 1 {
        return FallbackAction::Stall;
    }
    if s == 2 && !family.uses_derivatives() {
        // a derivative-free method needs two points
        return FallbackAction::Stall;
    }
    FallbackAction::Retry { s: s - 1 }
}

fn step_with<S: Scalar>(
    family: Family,
    tail: &[IterationRecord<S>],
    route: StepRoute,
) -> Result<S> {
    match family.mask(tail.len()) {
        None => {
            let r = &tail[tail.len() - 1];
            let fx = cached(r)?;
            let dfx = r
                .dfx
                .clone()
                .ok_or_else(|| Error::ZeroDerivative(format!("no cached f' at x = {}", r.x)))?;
            newton_step(&r.x, &fx, &dfx)
        }
        Some(mask) => lmm_step(tail, &mask, route),
    }
}

/// Runs `spec` on `problem` from `x0`. Failures are reported through the status.
pub fn run<S: Scalar>(problem: &Problem<S>, spec: &SolverSpec<S>, x0: &S) -> SolveReport<S> {
    let mut ev = Evaluator::new(problem);
    let mut history = IterateHistory::new();
    let mut fallbacks = 0;

    let finish = |history: IterateHistory<S>, status, ev: &Evaluator<'_, S>, fallbacks| {
        let final_x = history.last().map(|r| r.x.clone()).unwrap_or_else(S::zero);
        SolveReport {
            iterations: history.len().saturating_sub(1),
            history,
            status,
            f_evals: ev.f_evals(),
            df_evals: ev.df_evals(),
            final_x,
            fallbacks,
        }
    };

    // the first step is always Newton, so x0 needs its derivative
    match ev.evaluate(x0) {
        Ok((fx, dfx)) => {
            history.push(x0.clone(), Some(fx), Some(dfx));
        }
        Err(_) => {
            history.push(x0.clone(), None, None);
            return finish(history, Status::DomainError, &ev, fallbacks);
        }
    }
    let escape = S::from_f64(spec.escape_factor) * (S::one() + x0.abs());
    let with_derivative = spec.family.uses_derivatives();

    for _ in 0..spec.max_iters {
        let mut s = spec.s.min(history.len());
        let next = loop {
            match step_with(spec.family, history.tail(s), spec.route) {
                Ok(x) => break Ok(x),
                Err(e) => match fallback_policy(&e, s, spec.family) {
                    FallbackAction::Retry { s: fewer } => {
                        fallbacks += 1;
                        s = fewer;
                    }
                    FallbackAction::Stall => break Err(e),
                },
            }
        };
        let x = match next {
            Ok(x) => x,
            Err(Error::ZeroDerivative(_)) if spec.family == Family::Newton => {
                // the tangent is flat: the Newton iterate is at infinity
                let fx = history
                    .last()
                    .and_then(|r| r.fx.clone())
                    .unwrap_or_else(S::one);
                S::from_f64(-f64::from(fx.signum_i()) * f64::INFINITY)
            }
            Err(_) => return finish(history, Status::DegenerateStall, &ev, fallbacks),
        };
        if !x.is_finite() || x.abs() > escape {
            history.push(x, None, None);
            return finish(history, Status::Diverged, &ev, fallbacks);
        }
        let evaluated = if with_derivative {
            ev.evaluate(&x).map(|(f, d)| (f, Some(d)))
        } else {
            ev.value(&x).map(|f| (f, None))
        };
        match evaluated {
            Ok((fx, dfx)) => {
                history.push(x, Some(fx), dfx);
            }
            Err(_) => {
                history.push(x, None, None);
                return finish(history, Status::DomainError, &ev, fallbacks);
            }
        }
        if spec.stop.met_by_history(&history) {
            return finish(history, Status::Converged, &ev, fallbacks);
        }
    }
    finish(history, Status::MaxIters, &ev, fallbacks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(x: f64, fx: f64, dfx: f64) -> IterationRecord<f64> {
        IterationRecord {
            index: 0,
            x,
            fx: Some(fx),
            dfx: Some(dfx),
        }
    }

    #[test]
    fn newton_step_on_x_squared_minus_four() {
        let x = newton_step(&3.0, &5.0, &6.0).unwrap();
        assert!((x - 13.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn newton_step_at_root_is_identity() {
        assert_eq!(newton_step(&0.3, &0.0, &0.0).unwrap(), 0.3);
    }

    #[test]
    fn newton_step_with_flat_tangent_fails() {
        assert!(matches!(
            newton_step(&1.0, &2.0, &0.0),
            Err(Error::ZeroDerivative(_))
        ));
    }

    #[test]
    fn full_step_on_x_squared_minus_two() {
        let recs = [record(1.0, -1.0, 2.0), record(2.0, 2.0, 4.0)];
        let x = full_lmm_step(&recs).unwrap();
        assert!((x - 77.0 / 54.0).abs() < 1e-15);
    }

    #[test]
    fn full_step_with_equal_values_is_degenerate() {
        let recs = [record(-1.0, 1.0, -2.0), record(1.0, 1.0, 2.0)];
        assert!(matches!(
            full_lmm_step(&recs),
            Err(Error::DegenerateRatio(_))
        ));
    }

    #[test]
    fn linear_function_is_solved_in_one_step() {
        let recs = [record(1.0, 1.0, 1.0), record(0.5, 0.5, 1.0)];
        assert!(full_lmm_step(&recs).unwrap().abs() < 1e-16);
    }

    #[test]
    fn fallback_ladder() {
        let ratio = Error::DegenerateRatio(String::new());
        let flat = Error::ZeroDerivative(String::new());
        assert_eq!(
            fallback_policy(&ratio, 3, Family::FullLmm),
            FallbackAction::Retry { s: 2 }
        );
        assert_eq!(
            fallback_policy(&ratio, 2, Family::FullLmm),
            FallbackAction::Retry { s: 1 }
        );
        assert_eq!(
            fallback_policy(&flat, 1, Family::Newton),
            FallbackAction::Stall
        );
        assert_eq!(
            fallback_policy(&ratio, 2, Family::Secant),
            FallbackAction::Stall
        );
        assert_eq!(
            fallback_policy(&Error::Domain(String::new()), 3, Family::FullLmm),
            FallbackAction::Stall
        );
    }

    #[test]
    fn spec_validation() {
        let stop = StopCriterion::<f64>::two_epsilon_increment();
        assert!(SolverSpec::new(Family::Newton, 2, stop.clone()).is_err());
        assert!(SolverSpec::new(Family::Secant, 3, stop.clone()).is_err());
        assert!(SolverSpec::new(Family::InverseQuadratic, 3, stop.clone()).is_ok());
        assert!(SolverSpec::adams_bashforth(1, stop.clone()).is_err());
        assert!(SolverSpec::full_lmm(4, stop).is_ok());
    }

    #[test]
    fn stall_when_lmm_falls_back_to_a_flat_newton_step() {
        // f = x^2 + 1 has no root; from 0 the derivative vanishes immediately
        let p = Problem::new("x^2+1", |x: &f64| x * x + 1.0, |x: &f64| 2.0 * x, 0.0);
        let spec = SolverSpec::full_lmm(2, StopCriterion::two_epsilon_increment()).unwrap();
        let r = run(&p, &spec, &0.0);
        assert_eq!(r.status, Status::DegenerateStall);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn domain_error_is_a_status() {
        let p = Problem::new(
            "sqrt",
            |x: &f64| x.sqrt() - 2.0,
            |x: &f64| 0.5 / x.sqrt(),
            -1.0,
        );
        let spec = SolverSpec::newton(StopCriterion::two_epsilon_increment());
        assert_eq!(run(&p, &spec, &-1.0).status, Status::DomainError);
    }

    #[test]
    fn max_iters_is_reported() {
        let p = Problem::new("x-cos", |x: &f64| x - x.cos(), |x: &f64| 1.0 + x.sin(), 1.0);
        let spec = SolverSpec::newton(StopCriterion::two_epsilon_increment()).with_max_iters(2);
        let r = run(&p, &spec, &1.0);
        assert_eq!(r.status, Status::MaxIters);
        assert_eq!(r.iterations, 2);
    }
}
