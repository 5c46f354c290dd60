//! Test functions with their published starting points, brackets and
//! iteration counts.

use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::solvers::{run, Family, SolverSpec, Status};
use crate::stop::StopCriterion;

/// Published results for an open-start run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenReference {
    pub root_display: &'static str,
    pub start: f64,
    pub newton: usize,
    pub s2: usize,
    pub s3: usize,
    pub p2: f64,
    pub p3: f64,
}

/// Published results for a bracketed run. The Brent counts are reference
/// data only; no Brent solver is run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketReference {
    pub root_display: &'static str,
    pub bracket: (f64, f64),
    pub brent: usize,
    pub lmm: usize,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry<S: Scalar> {
    pub problem: Problem<S>,
    /// Human-readable formula.
    pub label: &'static str,
    pub open: Option<OpenReference>,
    pub bracketed: Option<BracketReference>,
}

fn k<S: Scalar>(v: f64) -> S {
    S::from_f64(v)
}

fn entry<S: Scalar>(
    id: &str,
    label: &'static str,
    f: impl Fn(&S) -> S + Send + Sync + 'static,
    df: impl Fn(&S) -> S + Send + Sync + 'static,
    open: OpenReference,
    bracketed: BracketReference,
) -> CorpusEntry<S> {
    let problem = Problem::new(id, f, df, k(open.start))
        .with_bracket(k(bracketed.bracket.0), k(bracketed.bracket.1));
    CorpusEntry {
        problem,
        label,
        open: Some(open),
        bracketed: Some(bracketed),
    }
}

#[allow(clippy::too_many_arguments)]
fn refs(
    root: &'static str,
    start: f64,
    counts: (usize, usize, usize),
    rates: (f64, f64),
    bracket_root: &'static str,
    bracket: (f64, f64),
    brent: usize,
    lmm: usize,
) -> (OpenReference, BracketReference) {
    (
        OpenReference {
            root_display: root,
            start,
            newton: counts.0,
            s2: counts.1,
            s3: counts.2,
            p2: rates.0,
            p3: rates.1,
        },
        BracketReference {
            root_display: bracket_root,
            bracket,
            brent,
            lmm,
        },
    )
}

/// The eleven benchmark functions, in table order.
pub fn benchmark_corpus<S: Scalar>() -> Vec<CorpusEntry<S>> {
    let mut out = Vec::with_capacity(11);
    let mut add = |e: CorpusEntry<S>| out.push(e);

    let (o, b) = refs(
        "-0.57",
        1.5,
        (11, 8, 8),
        (2.73, 2.93),
        "-0.57",
        (-1.0, 1.0),
        6,
        4,
    );
    add(entry(
        "x_plus_exp",
        "x + e^x",
        |x: &S| x.clone() + x.exp(),
        |x: &S| S::one() + x.exp(),
        o,
        b,
    ));

    let (o, b) = refs(
        "0.64",
        0.5,
        (9, 7, 8),
        (2.74, 2.91),
        "0.64",
        (0.0, 2.0),
        8,
        4,
    );
    add(entry(
        "sqrt_minus_cos",
        "sqrt(x) - cos(x)",
        |x: &S| x.sqrt() - x.cos(),
        |x: &S| S::one() / (S::from_i64(2) * x.sqrt()) + x.sin(),
        o,
        b,
    ));

    let (o, b) = refs(
        "0.26",
        0.0,
        (10, 8, 7),
        (2.72, 2.94),
        "0.26",
        (-1.0, 1.0),
        5,
        3,
    );
    add(entry(
        "exp_quadratic",
        "e^x - x^2 + 3x - 2",
        |x: &S| x.exp() - x.powi(2) + S::from_i64(3) * x.clone() - S::from_i64(2),
        |x: &S| x.exp() - S::from_i64(2) * x.clone() + S::from_i64(3),
        o,
        b,
    ));

    let (o, b) = refs(
        "1.95",
        1.3,
        (17, 14, 14),
        (2.73, 2.92),
        "1.95",
        (1.0, 3.0),
        10,
        8,
    );
    add(entry(
        "quartic",
        "x^4 - 3x^2 - 3",
        |x: &S| x.powi(4) - S::from_i64(3) * x.powi(2) - S::from_i64(3),
        |x: &S| S::from_i64(4) * x.powi(3) - S::from_i64(6) * x.clone(),
        o,
        b,
    ));

    let (o, b) = refs(
        "1.32",
        1.0,
        (12, 9, 9),
        (2.73, 2.64),
        "1.32",
        (0.0, 2.0),
        29,
        6,
    );
    add(entry(
        "cubic",
        "x^3 - x - 1",
        |x: &S| x.powi(3) - x.clone() - S::one(),
        |x: &S| S::from_i64(3) * x.powi(2) - S::one(),
        o,
        b,
    ));

    let (o, b) = refs(
        "0.77",
        2.0,
        (13, 10, 10),
        (2.73, 2.92),
        "0.77",
        (0.0, 2.0),
        9,
        4,
    );
    add(entry(
        "exp_minus_cube",
        "e^-x - x^3",
        |x: &S| (-x.clone()).exp() - x.powi(3),
        |x: &S| -(-x.clone()).exp() - S::from_i64(3) * x.powi(2),
        o,
        b,
    ));

    let (o, b) = refs(
        "2.06",
        1.5,
        (11, 9, 9),
        (2.73, 2.92),
        "2.06",
        (0.0, 4.0),
        45,
        6,
    );
    add(entry(
        "trig_linear",
        "5(sin(x) + cos(x)) - x",
        |x: &S| S::from_i64(5) * (x.sin() + x.cos()) - x.clone(),
        |x: &S| S::from_i64(5) * (x.cos() - x.sin()) - S::one(),
        o,
        b,
    ));

    let (o, b) = refs(
        "0.74",
        1.0,
        (9, 7, 7),
        (2.72, 2.93),
        "0.74",
        (0.0, 1.0),
        7,
        3,
    );
    add(entry(
        "x_minus_cos",
        "x - cos(x)",
        |x: &S| x.clone() - x.cos(),
        |x: &S| S::one() + x.sin(),
        o,
        b,
    ));

    let (o, b) = refs(
        "1.40",
        1.6,
        (12, 9, 9),
        (2.73, 2.92),
        "1.39",
        (1.2, 1.6),
        31,
        4,
    );
    add(entry(
        "log_plus_cos",
        "log(x - 1) + cos(x - 1)",
        |x: &S| {
            let u = x.clone() - S::one();
            u.ln() + u.cos()
        },
        |x: &S| {
            let u = x.clone() - S::one();
            S::one() / u.clone() - u.sin()
        },
        o,
        b,
    ));

    let (o, b) = refs(
        "1.62",
        1.0,
        (9, 7, 7),
        (2.73, 2.92),
        "1.62",
        (0.0, 2.0),
        5,
        3,
    );
    add(entry(
        "sqrt_one_plus",
        "sqrt(1 + x) - x",
        |x: &S| (S::one() + x.clone()).sqrt() - x.clone(),
        |x: &S| S::one() / (S::from_i64(2) * (S::one() + x.clone()).sqrt()) - S::one(),
        o,
        b,
    ));

    let (o, b) = refs(
        "0.54",
        1.0,
        (11, 8, 7),
        (2.73, 2.92),
        "0.54",
        (-1.0, 2.0),
        9,
        4,
    );
    add(entry(
        "sqrt_exp",
        "sqrt(e^x - x) - 2x",
        |x: &S| (x.exp() - x.clone()).sqrt() - S::from_i64(2) * x.clone(),
        |x: &S| {
            let e = x.exp();
            (e.clone() - S::one()) / (S::from_i64(2) * (e - x.clone()).sqrt()) - S::from_i64(2)
        },
        o,
        b,
    ));

    out
}

/// `tanh(x)`, root 0, started at 1.239.
pub fn tanh_problem<S: Scalar>() -> Problem<S> {
    Problem::new(
        "tanh",
        |x: &S| x.tanh(),
        |x: &S| S::one() / x.cosh().powi(2),
        k(1.239),
    )
    .with_root(S::zero())
}

/// `cbrt(x) exp(-x^2)`: infinitely steep at its root 0.
pub fn steep_cbrt_problem<S: Scalar>() -> Problem<S> {
    Problem::new(
        "cbrt_gauss",
        |x: &S| x.cbrt() * (-x.powi(2)).exp(),
        |x: &S| {
            let c = x.cbrt();
            (-x.powi(2)).exp()
                * (S::one() / (S::from_i64(3) * c.powi(2)) - S::from_i64(2) * x.clone() * c)
        },
        k(0.1147),
    )
    .with_root(S::zero())
}

/// Root of `problem` near `x0` to the working precision: a tight full
/// three-point run polished by Newton steps.
pub fn reference_root<S: Scalar>(problem: &Problem<S>, x0: &S) -> Option<S> {
    let stop = StopCriterion::AbsoluteIncrement(S::from_i64(16) * S::epsilon());
    let spec = SolverSpec::new(Family::FullLmm, 3, stop)
        .ok()?
        .with_max_iters(500);
    let report = run(problem, &spec, x0);
    if report.status != Status::Converged {
        return None;
    }
    let mut x = report.final_x;
    for _ in 0..5 {
        let fx = problem.value(&x);
        let dfx = problem.slope(&x);
        if fx.is_zero() || dfx.is_zero() {
            break;
        }
        x = x.clone() - fx / dfx;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_functions_with_valid_brackets() {
        let c = benchmark_corpus::<f64>();
        assert_eq!(c.len(), 11);
        for e in &c {
            assert!(e.problem.bracket_is_valid(), "{}", e.problem.id);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for e in benchmark_corpus::<f64>() {
            let x0 = e.problem.default_start;
            assert!(
                e.problem.derivative_mismatch(&x0) < 1e-6,
                "{}",
                e.problem.id
            );
        }
        for p in [tanh_problem::<f64>(), steep_cbrt_problem::<f64>()] {
            assert!(p.derivative_mismatch(&p.default_start) < 1e-6, "{}", p.id);
        }
    }

    #[test]
    fn reference_roots_round_to_published() {
        for e in benchmark_corpus::<f64>() {
            let o = e.open.unwrap();
            let r = reference_root(&e.problem, &o.start).unwrap();
            assert!(e.problem.value(&r).abs() < 1e-14);
            let shown: f64 = o.root_display.parse().unwrap();
            // the published roots are rounded or truncated to two places
            assert!((r - shown).abs() < 0.01, "{} {}", e.problem.id, r);
        }
    }

    #[test]
    fn reference_totals() {
        let c = benchmark_corpus::<f64>();
        let sum =
            |g: fn(&OpenReference) -> usize| c.iter().map(|e| g(&e.open.unwrap())).sum::<usize>();
        assert_eq!(sum(|o| o.newton), 124);
        assert_eq!(sum(|o| o.s2), 96);
        assert_eq!(sum(|o| o.s3), 95);
        let lmm: usize = c.iter().map(|e| e.bracketed.unwrap().lmm).sum();
        let brent: usize = c.iter().map(|e| e.bracketed.unwrap().brent).sum();
        assert_eq!((lmm, brent), (49, 164));
    }
}
