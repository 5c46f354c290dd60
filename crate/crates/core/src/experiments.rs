//! Runs the corpus through the solvers and collects comparable results.

use crate::corpus::{reference_root, BracketReference, CorpusEntry, OpenReference};
use crate::problem::Problem;
use crate::rate::{estimate_rate, RateEstimate};
use crate::robust::{solve_bracketed, BracketReport};
use crate::scalar::Scalar;
use crate::solvers::{run, Family, SolveReport, SolverSpec, Status};
use crate::stop::StopCriterion;

#[derive(Debug, Clone)]
pub struct MethodRun {
    pub status: Status,
    /// New estimates, warm-up included.
    pub iterations: usize,
    /// Points in the iterate history, start included. This is the count
    /// compared against published tables.
    pub counted: usize,
    pub f_evals: usize,
    pub df_evals: usize,
    pub rate: Option<RateEstimate>,
}

impl MethodRun {
    fn from_report<S: Scalar>(report: &SolveReport<S>, root: Option<&S>) -> Self {
        let rate = root.and_then(|r| estimate_rate(&report.history.xs(), r).ok());
        MethodRun {
            status: report.status,
            iterations: report.iterations,
            counted: report.history.len(),
            f_evals: report.f_evals,
            df_evals: report.df_evals,
            rate,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OpenRow {
    pub id: String,
    pub label: &'static str,
    pub root: String,
    pub start: f64,
    pub newton: MethodRun,
    pub s2: MethodRun,
    pub s3: MethodRun,
    pub reference: OpenReference,
}

impl OpenRow {
    pub fn all_converged(&self) -> bool {
        [&self.newton, &self.s2, &self.s3]
            .iter()
            .all(|m| m.status == Status::Converged)
    }
}

/// Newton, two-point and three-point runs from the published start with an
/// increment tolerance of `10^-eta`, at the current working precision.
pub fn open_row<S: Scalar>(entry: &CorpusEntry<S>, eta: u32) -> Option<OpenRow> {
    let reference = entry.open?;
    let x0 = S::from_f64(reference.start);
    let root = reference_root(&entry.problem, &x0);
    let stop = StopCriterion::decimal_digits(eta);
    let go = |family, s| {
        let spec = SolverSpec::new(family, s, stop.clone())
            .expect("valid family")
            .with_max_iters(200);
        MethodRun::from_report(&run(&entry.problem, &spec, &x0), root.as_ref())
    };
    Some(OpenRow {
        id: entry.problem.id.clone(),
        label: entry.label,
        root: root
            .as_ref()
            .map_or_else(|| "?".into(), |r| format!("{:.6}", r.to_f64())),
        start: reference.start,
        newton: go(Family::Newton, 1),
        s2: go(Family::FullLmm, 2),
        s3: go(Family::FullLmm, 3),
        reference,
    })
}

#[derive(Debug, Clone)]
pub struct BracketRow<S> {
    pub id: String,
    pub label: &'static str,
    pub reference: BracketReference,
    pub result: Result<BracketReport<S>, crate::error::Error>,
}

impl<S: Scalar> BracketRow<S> {
    pub fn iterations(&self) -> Option<usize> {
        self.result.as_ref().ok().map(|r| r.report.iterations)
    }

    /// Evaluations made after the two at the initial endpoints, counting a
    /// function and derivative pair as two.
    pub fn loop_evaluations(&self) -> Option<usize> {
        self.result
            .as_ref()
            .ok()
            .map(|r| r.report.f_evals + r.report.df_evals - 4)
    }

    pub fn converged(&self) -> bool {
        matches!(&self.result, Ok(r) if r.report.status == Status::Converged)
    }
}

pub fn bracket_row<S: Scalar>(entry: &CorpusEntry<S>, delta: &S) -> Option<BracketRow<S>> {
    let reference = entry.bracketed?;
    let a = S::from_f64(reference.bracket.0);
    let b = S::from_f64(reference.bracket.1);
    Some(BracketRow {
        id: entry.problem.id.clone(),
        label: entry.label,
        reference,
        result: solve_bracketed(&entry.problem, &a, &b, delta),
    })
}

#[derive(Debug, Clone)]
pub struct Transcript {
    pub method: &'static str,
    pub status: Status,
    pub xs: Vec<f64>,
    /// Reported convergence while far from the true root.
    pub false_convergence: bool,
}

/// Newton, two-point and three-point histories for a problem with a known
/// root, in double precision with the `2 eps` increment test.
pub fn transcripts(problem: &Problem<f64>, x0: f64, max_iters: usize) -> Vec<Transcript> {
    let root = problem.known_root.unwrap_or(f64::NAN);
    let stop = StopCriterion::two_epsilon_increment();
    [
        ("newton", Family::Newton, 1),
        ("s=2", Family::FullLmm, 2),
        ("s=3", Family::FullLmm, 3),
    ]
    .into_iter()
    .map(|(method, family, s)| {
        let spec = SolverSpec::new(family, s, stop.clone())
            .expect("valid family")
            .with_max_iters(max_iters);
        let report = run(problem, &spec, &x0);
        Transcript {
            method,
            status: report.status,
            false_convergence: report.is_false_convergence(&root, &1.0),
            xs: report.history.xs(),
        }
    })
    .collect()
}
