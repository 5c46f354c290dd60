//! Target functions and counted evaluation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type ScalarFn<S> = Arc<dyn Fn(&S) -> S + Send + Sync>;

/// A scalar equation `f(x) = 0` with its analytic derivative.
#[derive(Clone)]
pub struct Problem<S: Scalar> {
    pub id: String,
    pub f: ScalarFn<S>,
    pub df: ScalarFn<S>,
    pub known_root: Option<S>,
    pub default_start: S,
    pub default_bracket: Option<(S, S)>,
}

impl<S: Scalar> fmt::Debug for Problem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("id", &self.id)
            .field("known_root", &self.known_root)
            .field("default_start", &self.default_start)
            .field("default_bracket", &self.default_bracket)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> Problem<S> {
    pub fn new(
        id: impl Into<String>,
        f: impl Fn(&S) -> S + Send + Sync + 'static,
        df: impl Fn(&S) -> S + Send + Sync + 'static,
        default_start: S,
    ) -> Self {
        Problem {
            id: id.into(),
            f: Arc::new(f),
            df: Arc::new(df),
            known_root: None,
            default_start,
            default_bracket: None,
        }
    }

    pub fn with_root(mut self, root: S) -> Self {
        self.known_root = Some(root);
        self
    }

    pub fn with_bracket(mut self, a: S, b: S) -> Self {
        self.default_bracket = Some((a, b));
        self
    }

    /// Uncounted evaluation, for checks outside a solve.
    pub fn value(&self, x: &S) -> S {
        (self.f)(x)
    }

    pub fn slope(&self, x: &S) -> S {
        (self.df)(x)
    }

    /// `f(a) f(b) < 0` for the default bracket (true when there is none).
    pub fn bracket_is_valid(&self) -> bool {
        match &self.default_bracket {
            None => true,
            Some((a, b)) => self.value(a).signum_i() * self.value(b).signum_i() < 0,
        }
    }

    /// Relative difference between `df` and a central difference of `f` at `x`.
    pub fn derivative_mismatch(&self, x: &S) -> f64 {
        let xf = x.to_f64();
        let h = f64::EPSILON.cbrt() * xf.abs().max(1.0);
        let up = S::from_f64(xf + h);
        let down = S::from_f64(xf - h);
        let fd = (self.value(&up).to_f64() - self.value(&down).to_f64()) / (2.0 * h);
        let exact = self.slope(x).to_f64();
        (fd - exact).abs() / exact.abs().max(1e-300)
    }
}

/// Wraps a problem and counts every function and derivative evaluation.
#[derive(Debug)]
pub struct Evaluator<'p, S: Scalar> {
    problem: &'p Problem<S>,
    f_evals: usize,
    df_evals: usize,
}

impl<'p, S: Scalar> Evaluator<'p, S> {
    pub fn new(problem: &'p Problem<S>) -> Self {
        Evaluator {
            problem,
            f_evals: 0,
            df_evals: 0,
        }
    }

    pub fn problem(&self) -> &'p Problem<S> {
        self.problem
    }

    pub fn f_evals(&self) -> usize {
        self.f_evals
    }

    pub fn df_evals(&self) -> usize {
        self.df_evals
    }

    /// `f(x)`. A NaN or infinite value is a domain error.
    pub fn value(&mut self, x: &S) -> Result<S> {
        self.f_evals += 1;
        let fx = self.problem.value(x);
        if fx.is_finite() {
            Ok(fx)
        } else {
            Err(Error::Domain(x.to_string()))
        }
    }

    /// `f'(x)`. Infinite slopes are passed through; NaN is a domain error.
    pub fn derivative(&mut self, x: &S) -> Result<S> {
        self.df_evals += 1;
        let dfx = self.problem.slope(x);
        if dfx.is_nan() {
            Err(Error::Domain(x.to_string()))
        } else {
            Ok(dfx)
        }
    }

    /// `(f(x), f'(x))`, counting one evaluation of each.
    pub fn evaluate(&mut self, x: &S) -> Result<(S, S)> {
        let fx = self.value(x);
        let dfx = self.derivative(x);
        Ok((fx?, dfx?))
    }
}
