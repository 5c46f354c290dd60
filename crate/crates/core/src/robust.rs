//! Bracketing solver: inverse Hermite interpolation over `a`, `b` and `c`
//! with derivative-sign gating, guarded by bisection.

use std::fmt;

use crate::error::{Error, Result};
use crate::history::IterateHistory;
use crate::interp::{inverse_hermite_root, InverseNode};
use crate::problem::{Evaluator, Problem};
use crate::scalar::{coincident, Scalar};
use crate::solvers::{SolveReport, Status};

/// `a` is the contrapoint, `b` the best estimate and `c` the previous `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketState<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub fa: S,
    pub fb: S,
    pub fc: S,
    pub dfa: S,
    pub dfb: S,
    pub dfc: S,
    pub delta: S,
}

impl<S: Scalar> BracketState<S> {
    /// Starts with `c = a`.
    pub fn new(a: S, fa: S, dfa: S, b: S, fb: S, dfb: S, delta: S) -> Self {
        BracketState {
            c: a.clone(),
            fc: fa.clone(),
            dfc: dfa.clone(),
            a,
            b,
            fa,
            fb,
            dfa,
            dfb,
            delta,
        }
    }

    pub fn brackets(&self) -> bool {
        self.fa.signum_i() * self.fb.signum_i() < 0
    }

    /// Makes `b` the point with the smaller residual.
    pub fn order(&mut self) {
        if self.fa.abs() < self.fb.abs() {
            std::mem::swap(&mut self.a, &mut self.b);
            std::mem::swap(&mut self.fa, &mut self.fb);
            std::mem::swap(&mut self.dfa, &mut self.dfb);
        }
    }

    pub fn width(&self) -> S {
        (self.a.clone() - self.b.clone()).abs()
    }

    /// `delta |b|`.
    pub fn tolerance(&self) -> S {
        self.delta.clone() * self.b.abs()
    }

    pub fn converged(&self) -> bool {
        self.width() <= self.tolerance()
    }

    pub fn midpoint(&self) -> S {
        (self.a.clone() + self.b.clone()) / S::from_i64(2)
    }

    /// Moves to a new point `x`: `c` takes the old `b`, and `a` switches to
    /// the old `b` when the sign of `f` flips.
    pub fn advance(&mut self, x: S, fx: S, dfx: S) {
        self.c = self.b.clone();
        self.fc = self.fb.clone();
        self.dfc = self.dfb.clone();
        if fx.signum_i() != self.fb.signum_i() {
            self.a = self.b.clone();
            self.fa = self.fb.clone();
            self.dfa = self.dfb.clone();
        }
        self.b = x;
        self.fb = fx;
        self.dfb = dfx;
    }
}

/// Which interpolant produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// `points` is 2 (`a`, `b`) or 3 (`a`, `b`, `c`); `derivs` flags slope
    /// data at each of them.
    Interpolation {
        points: usize,
        derivs: [bool; 3],
    },
    Bisection,
}

impl Method {
    /// The twelve interpolation variants.
    pub fn variants() -> Vec<Method> {
        let mut out = Vec::with_capacity(12);
        for points in [2usize, 3] {
            for bits in 0..(1u8 << points) {
                let mut derivs = [false; 3];
                for (k, d) in derivs.iter_mut().enumerate().take(points) {
                    *d = bits & (1 << k) != 0;
                }
                out.push(Method::Interpolation { points, derivs });
            }
        }
        out
    }

    pub fn label(&self) -> String {
        match self {
            Method::Bisection => "bisection".into(),
            Method::Interpolation { points, derivs } => {
                let used: String = ['a', 'b', 'c']
                    .iter()
                    .zip(derivs)
                    .filter(|(_, &d)| d)
                    .map(|(n, _)| *n)
                    .collect();
                if used.is_empty() {
                    format!("s={points}")
                } else {
                    format!("s={points} d={used}")
                }
            }
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateReport<S> {
    pub secant_slope: S,
    pub use_da: bool,
    pub use_db: bool,
    pub use_dc: bool,
    pub points_used: usize,
    pub method: Method,
}

fn slope_agrees<S: Scalar>(d: &S, secant: &S) -> bool {
    d.is_finite() && !d.is_zero() && d.signum_i() == secant.signum_i()
}

/// Admits a derivative only when its sign matches the secant slope on
/// `[a, b]`; a sign mismatch means `f` is not invertible there.
pub fn gate_derivatives<S: Scalar>(state: &BracketState<S>) -> GateReport<S> {
    let secant_slope = (state.fb.clone() - state.fa.clone()) / (state.b.clone() - state.a.clone());
    let use_da = slope_agrees(&state.dfa, &secant_slope);
    let use_db = slope_agrees(&state.dfb, &secant_slope);
    let use_dc = slope_agrees(&state.dfc, &secant_slope);
    let distinct_c = !coincident(&state.fc, &state.fa) && !coincident(&state.fc, &state.fb);
    let points_used = if distinct_c { 3 } else { 2 };
    GateReport {
        secant_slope,
        use_da,
        use_db,
        use_dc,
        points_used,
        method: Method::Interpolation {
            points: points_used,
            derivs: [use_da, use_db, use_dc && points_used == 3],
        },
    }
}

fn interpolate<S: Scalar>(state: &BracketState<S>, method: Method) -> Option<S> {
    let Method::Interpolation { points, derivs } = method else {
        return None;
    };
    let all = [
        (&state.a, &state.fa, &state.dfa),
        (&state.b, &state.fb, &state.dfb),
        (&state.c, &state.fc, &state.dfc),
    ];
    let nodes: Vec<InverseNode<S>> = all
        .iter()
        .zip(derivs)
        .take(points)
        .map(|((x, fx, dfx), use_d)| {
            if use_d {
                InverseNode::with_slope((*fx).clone(), (*x).clone(), S::one() / (*dfx).clone())
            } else {
                InverseNode::value((*fx).clone(), (*x).clone())
            }
        })
        .collect();
    inverse_hermite_root(&nodes).ok().filter(Scalar::is_finite)
}

/// Interpolated candidate. A failed build drops `c`, then the slopes, and
/// finally falls back to bisection.
pub fn propose_step<S: Scalar>(state: &BracketState<S>, gate: &GateReport<S>) -> (S, Method) {
    let mut ladder = vec![gate.method];
    if gate.points_used == 3 {
        ladder.push(Method::Interpolation {
            points: 2,
            derivs: [gate.use_da, gate.use_db, false],
        });
    }
    ladder.push(Method::Interpolation {
        points: 2,
        derivs: [false; 3],
    });
    for method in ladder {
        if let Some(x) = interpolate(state, method) {
            return (x, method);
        }
    }
    (state.midpoint(), Method::Bisection)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Interpolated,
    Bisection,
    /// A step of `delta |b|` toward `a`.
    MinimumStep,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Interpolated => "interpolated",
            StepKind::Bisection => "bisection",
            StepKind::MinimumStep => "minimum-step",
        })
    }
}

/// Bisects when the candidate leaves `[a, b]` or moves at least half the
/// bracket away from `b`; enforces a minimum step of `delta |b|`.
pub fn guard_step<S: Scalar>(candidate: &S, state: &BracketState<S>) -> (S, StepKind) {
    let (lo, hi) = if state.a < state.b {
        (&state.a, &state.b)
    } else {
        (&state.b, &state.a)
    };
    let width = state.width();
    let step = (candidate.clone() - state.b.clone()).abs();
    let inside = candidate >= lo && candidate <= hi;
    if !inside || step >= width.clone() / S::from_i64(2) {
        return (state.midpoint(), StepKind::Bisection);
    }
    let tol = state.tolerance();
    if step < tol {
        if width > S::from_i64(2) * tol.clone() {
            let toward_a = S::from_i64(i64::from((state.a.clone() - state.b.clone()).signum_i()));
            return (state.b.clone() + toward_a * tol, StepKind::MinimumStep);
        }
        return (state.midpoint(), StepKind::Bisection);
    }
    (candidate.clone(), StepKind::Interpolated)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepLog<S> {
    pub method: Method,
    pub kind: StepKind,
    pub x: S,
}

#[derive(Debug, Clone)]
pub struct BracketReport<S> {
    pub report: SolveReport<S>,
    pub steps: Vec<StepLog<S>>,
    /// Final bracket `(a, b)`, with `b` the returned root.
    pub bracket: (S, S),
}

/// Solves on `[a, b]` until `|a - b| <= delta |b|`.
///
/// Each iteration evaluates `f` and `f'` once. The loop also stops when the
/// bracket has no representable interior point, so it always terminates.
pub fn solve_bracketed<S: Scalar>(
    problem: &Problem<S>,
    a: &S,
    b: &S,
    delta: &S,
) -> Result<BracketReport<S>> {
    solve_bracketed_with_limit(problem, a, b, delta, 10_000)
}

pub fn solve_bracketed_with_limit<S: Scalar>(
    problem: &Problem<S>,
    a: &S,
    b: &S,
    delta: &S,
    max_iters: usize,
) -> Result<BracketReport<S>> {
    let mut ev = Evaluator::new(problem);
    let (fa, dfa) = ev.evaluate(a)?;
    let (fb, dfb) = ev.evaluate(b)?;
    let mut history = IterateHistory::new();
    let mut steps = Vec::new();

    let finish = |history: IterateHistory<S>,
                  steps: Vec<StepLog<S>>,
                  state: &BracketState<S>,
                  status: Status,
                  ev: &Evaluator<'_, S>| BracketReport {
        report: SolveReport {
            iterations: steps.len(),
            history,
            status,
            f_evals: ev.f_evals(),
            df_evals: ev.df_evals(),
            final_x: state.b.clone(),
            fallbacks: 0,
        },
        bracket: (state.a.clone(), state.b.clone()),
        steps,
    };

    let mut state = BracketState::new(a.clone(), fa, dfa, b.clone(), fb, dfb, delta.clone());
    if state.fb.is_zero() || state.fa.is_zero() {
        if state.fa.is_zero() {
            std::mem::swap(&mut state.a, &mut state.b);
            std::mem::swap(&mut state.fa, &mut state.fb);
            std::mem::swap(&mut state.dfa, &mut state.dfb);
        }
        history.push(
            state.b.clone(),
            Some(state.fb.clone()),
            Some(state.dfb.clone()),
        );
        return Ok(finish(history, steps, &state, Status::Converged, &ev));
    }
    if !state.brackets() {
        return Err(Error::InvalidBracket {
            a: a.to_string(),
            b: b.to_string(),
            fa: state.fa.to_string(),
            fb: state.fb.to_string(),
        });
    }
    state.order();
    history.push(
        state.b.clone(),
        Some(state.fb.clone()),
        Some(state.dfb.clone()),
    );

    loop {
        state.order();
        let mid = state.midpoint();
        if state.converged() || mid == state.a || mid == state.b {
            return Ok(finish(history, steps, &state, Status::Converged, &ev));
        }
        if steps.len() >= max_iters {
            return Ok(finish(history, steps, &state, Status::MaxIters, &ev));
        }
        let gate = gate_derivatives(&state);
        let (candidate, method) = propose_step(&state, &gate);
        let (x, kind) = guard_step(&candidate, &state);
        let method = if kind == StepKind::Bisection {
            Method::Bisection
        } else {
            method
        };
        steps.push(StepLog {
            method,
            kind,
            x: x.clone(),
        });
        let (fx, dfx) = match ev.evaluate(&x) {
            Ok(v) => v,
            Err(_) => {
                history.push(x, None, None);
                return Ok(finish(history, steps, &state, Status::DomainError, &ev));
            }
        };
        history.push(x.clone(), Some(fx.clone()), Some(dfx.clone()));
        if fx.is_zero() {
            state.c = state.b.clone();
            state.b = x;
            state.fb = fx;
            state.dfb = dfx;
            return Ok(finish(history, steps, &state, Status::Converged, &ev));
        }
        state.advance(x, fx, dfx);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(
        a: f64,
        b: f64,
        c: f64,
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
    ) -> BracketState<f64> {
        BracketState {
            a,
            b,
            c,
            fa: f(a),
            fb: f(b),
            fc: f(c),
            dfa: df(a),
            dfb: df(b),
            dfc: df(c),
            delta: 2.0 * f64::EPSILON,
        }
    }

    #[test]
    fn monotone_case_uses_everything() {
        let s = state(
            0.0,
            2.0,
            1.5,
            |x| x * x * x + x - 1.0,
            |x| 3.0 * x * x + 1.0,
        );
        let g = gate_derivatives(&s);
        assert!(g.use_da && g.use_db && g.use_dc);
        assert_eq!(g.points_used, 3);
        assert_eq!(g.method.label(), "s=3 d=abc");
    }

    #[test]
    fn wrong_signed_slope_at_c_is_excluded() {
        // f = x^2 - 1 on [0.5, 2]: secant slope positive, f'(-0.5) negative
        let s = state(0.5, 2.0, -0.5, |x| x * x - 1.0, |x| 2.0 * x);
        let g = gate_derivatives(&s);
        assert!(g.use_da && g.use_db && !g.use_dc);
    }

    #[test]
    fn all_wrong_signed_gives_derivative_free() {
        let s = state(0.0, 1.0, 0.5, |x| x - 0.3, |_| -1.0);
        let g = gate_derivatives(&s);
        assert_eq!(g.method.label(), "s=3");
    }

    #[test]
    fn equal_c_value_selects_two_points() {
        let s = state(0.0, 2.0, 0.0, |x| x - 1.0, |_| 1.0);
        assert_eq!(gate_derivatives(&s).points_used, 2);
    }

    #[test]
    fn twelve_variants() {
        let v = Method::variants();
        assert_eq!(v.len(), 12);
        let labels: std::collections::HashSet<_> = v.iter().map(Method::label).collect();
        assert_eq!(labels.len(), 12);
    }

    #[test]
    fn guard_outside_bisects() {
        let s = state(0.0, 1.0, 0.0, |x| x - 0.9, |_| 1.0);
        assert_eq!(guard_step(&1.5, &s), (0.5, StepKind::Bisection));
        assert_eq!(guard_step(&f64::NAN, &s).1, StepKind::Bisection);
    }

    #[test]
    fn guard_tiny_step_moves_by_tolerance() {
        let mut s = state(0.0, 1.0, 0.0, |x| x - 0.9, |_| 1.0);
        s.delta = 1e-16;
        let (x, kind) = guard_step(&(1.0 + 1e-300), &s);
        assert_eq!(kind, StepKind::MinimumStep);
        assert_eq!(x, 1.0 - 1e-16);
    }

    #[test]
    fn guard_keeps_a_good_candidate() {
        let s = state(0.0, 1.0, 0.0, |x| x - 0.9, |_| 1.0);
        assert_eq!(guard_step(&0.9, &s), (0.9, StepKind::Interpolated));
    }

    #[test]
    fn linear_function_is_exact() {
        let p = Problem::new("x", |x: &f64| *x, |_: &f64| 1.0, 0.5);
        let r = solve_bracketed(&p, &-1.0, &2.0, &(2.0 * f64::EPSILON)).unwrap();
        assert_eq!(r.report.status, Status::Converged);
        assert!(r.report.iterations <= 2);
        assert_eq!(r.report.final_x, 0.0);
    }

    #[test]
    fn same_sign_bracket_is_rejected() {
        let p = Problem::new("x^2-4", |x: &f64| x * x - 4.0, |x: &f64| 2.0 * x, 1.0);
        let err = solve_bracketed(&p, &1.0, &1.5, &1e-15).unwrap_err();
        assert!(matches!(err, Error::InvalidBracket { .. }));
    }

    #[test]
    fn endpoint_root_is_returned() {
        let p = Problem::new("x^2-4", |x: &f64| x * x - 4.0, |x: &f64| 2.0 * x, 1.0);
        let r = solve_bracketed(&p, &1.0, &2.0, &1e-15).unwrap();
        assert_eq!(r.report.final_x, 2.0);
        assert_eq!(r.report.iterations, 0);
    }

    #[test]
    fn two_evaluations_per_iteration() {
        let p = Problem::new("x-cos", |x: &f64| x - x.cos(), |x: &f64| 1.0 + x.sin(), 0.5);
        let r = solve_bracketed(&p, &0.0, &1.0, &(2.0 * f64::EPSILON)).unwrap();
        assert_eq!(
            r.report.f_evals + r.report.df_evals - 4,
            2 * r.report.iterations
        );
    }
}
