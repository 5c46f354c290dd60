//! Predicted and empirical convergence rates.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `p^s - sum_k p^k (d + sigma_k)` for a method with `s` history points,
/// `d` derivatives per point and value flags `sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatePolynomial {
    s: usize,
    d: u32,
    sigma: Vec<bool>,
}

impl RatePolynomial {
    pub fn new(s: usize, d: u32, sigma: Vec<bool>) -> Result<Self> {
        if s == 0 || sigma.len() != s {
            return Err(Error::InvalidFamily(format!(
                "need {s} sigma flags, got {}",
                sigma.len()
            )));
        }
        if d == 0 && s < 2 {
            return Err(Error::InvalidFamily(
                "a derivative-free method needs at least two points".into(),
            ));
        }
        let data = s as u32 * d + sigma.iter().filter(|&&v| v).count() as u32;
        if data < 2 {
            return Err(Error::InvalidFamily(format!(
                "s = {s}, d = {d} leaves fewer than two interpolation conditions"
            )));
        }
        Ok(RatePolynomial { s, d, sigma })
    }

    /// All values and `d` derivatives at every point.
    pub fn full(s: usize, d: u32) -> Result<Self> {
        Self::new(s, d, vec![true; s])
    }

    pub fn derivative_free(s: usize) -> Result<Self> {
        Self::full(s, 0)
    }

    /// Only the newest value coefficient is free, one derivative everywhere.
    pub fn adams_bashforth(s: usize) -> Result<Self> {
        let mut sigma = vec![false; s];
        if let Some(last) = sigma.last_mut() {
            *last = true;
        }
        Self::new(s, 1, sigma)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn sigma(&self) -> &[bool] {
        &self.sigma
    }

    /// Integer coefficients indexed by power; the leading entry is 1.
    pub fn coefficients(&self) -> Vec<i64> {
        let mut c: Vec<i64> = self
            .sigma
            .iter()
            .map(|&v| -(i64::from(self.d) + i64::from(v)))
            .collect();
        c.push(1);
        c
    }

    pub fn eval<S: Scalar>(&self, p: &S) -> S {
        // Horner from the leading term down
        self.coefficients()
            .iter()
            .rev()
            .fold(S::zero(), |acc, &c| acc * p.clone() + S::from_i64(c))
    }

    /// The largest real root, bracketed in `(1, d + 2)`.
    pub fn largest_root<S: Scalar>(&self) -> S {
        let mut lo = S::one() + S::from_f64(1e-12);
        let mut hi = S::from_i64(i64::from(self.d) + 2);
        for _ in 0..200 {
            let mid = (lo.clone() + hi.clone()) / S::from_i64(2);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(&mid) < S::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / S::from_i64(2)
    }
}

/// Largest root of the rate polynomial for `(s, d, sigma)`.
pub fn predicted_rate<S: Scalar>(s: usize, d: u32, sigma: &[bool]) -> Result<S> {
    Ok(RatePolynomial::new(s, d, sigma.to_vec())?.largest_root())
}

/// `p^(1/w)` for `w` evaluations per iteration.
pub fn efficiency_index<S: Scalar>(p: &S, w: u32) -> S {
    p.powf(&(S::one() / S::from_i64(i64::from(w))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateFamily {
    Full,
    DerivativeFree,
    AdamsBashforth,
}

impl fmt::Display for RateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RateFamily::Full => "full",
            RateFamily::DerivativeFree => "derivative-free",
            RateFamily::AdamsBashforth => "adams-bashforth",
        })
    }
}

/// Published values for the rate tables, keyed by `(s, d)`.
const PUBLISHED_DERIVATIVE_FREE: &[(usize, &str)] =
    &[(2, "1.62"), (3, "1.84"), (4, "1.92"), (5, "1.97")];
const PUBLISHED_ADAMS_BASHFORTH: &[(usize, &str)] =
    &[(1, "2"), (2, "2.41"), (3, "2.55"), (4, "2.59"), (5, "2.61")];
const PUBLISHED_FULL: &[(usize, u32, &str)] = &[
    (1, 1, "2"),
    (1, 2, "3"),
    (1, 3, "4"),
    (1, 4, "5"),
    (2, 1, "2.73"),
    (2, 2, "3.79"),
    (2, 3, "4.82"),
    (2, 4, "5.85"),
    (3, 1, "2.91"),
    (3, 2, "3.95"),
    (3, 3, "4.97"),
    (3, 4, "5.98"),
    (4, 1, "2.97"),
    (4, 2, "3.99"),
    (4, 3, "4.99"),
    (4, 4, "5.996"),
];

pub fn published_rate(family: RateFamily, s: usize, d: u32) -> Option<&'static str> {
    match family {
        RateFamily::DerivativeFree if d == 0 => PUBLISHED_DERIVATIVE_FREE
            .iter()
            .find(|(k, _)| *k == s)
            .map(|(_, v)| *v),
        RateFamily::AdamsBashforth if d == 1 => PUBLISHED_ADAMS_BASHFORTH
            .iter()
            .find(|(k, _)| *k == s)
            .map(|(_, v)| *v),
        RateFamily::Full => PUBLISHED_FULL
            .iter()
            .find(|(k, e, _)| *k == s && *e == d)
            .map(|(_, _, v)| *v),
        _ => None,
    }
}

/// Rounds half away from zero to `decimals` places.
pub fn round_half_away(x: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let r = (x.abs() * scale + 0.5).floor() / scale;
    format!("{:.*}", decimals, r.copysign(x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateCell {
    pub s: usize,
    pub d: u32,
    /// `None` where no method exists (derivative-free with one point).
    pub value: Option<f64>,
    pub published: Option<&'static str>,
}

impl RateCell {
    /// Rounded to the published digit count, or two decimals without one.
    pub fn display(&self) -> String {
        let Some(v) = self.value else {
            return "n/a".into();
        };
        let decimals = self
            .published
            .map(|p| p.split_once('.').map_or(0, |(_, frac)| frac.len()))
            .unwrap_or(2);
        round_half_away(v, decimals)
    }

    /// Whether the rounded value equals the published one, if there is one.
    pub fn matches_published(&self) -> Option<bool> {
        self.published
            .map(|p| self.value.is_some() && self.display() == p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub family: RateFamily,
    pub cells: Vec<RateCell>,
}

impl RateTable {
    pub fn mismatches(&self) -> Vec<&RateCell> {
        self.cells
            .iter()
            .filter(|c| c.matches_published() == Some(false))
            .collect()
    }
}

/// Predicted rates for `s = 1..=s_max` and each `d` in `d_range`.
/// The derivative-free family ignores `d_range` and uses `d = 0`; the
/// Adams-Bashforth family uses `d = 1`.
pub fn rate_table(
    family: RateFamily,
    s_max: usize,
    d_range: std::ops::RangeInclusive<u32>,
) -> RateTable {
    let ds: Vec<u32> = match family {
        RateFamily::Full => d_range.collect(),
        RateFamily::DerivativeFree => vec![0],
        RateFamily::AdamsBashforth => vec![1],
    };
    let mut cells = Vec::new();
    for s in 1..=s_max {
        for &d in &ds {
            let poly = match family {
                RateFamily::Full | RateFamily::DerivativeFree => RatePolynomial::full(s, d),
                RateFamily::AdamsBashforth => RatePolynomial::adams_bashforth(s),
            };
            cells.push(RateCell {
                s,
                d,
                value: poly.ok().map(|p| p.largest_root::<f64>()),
                published: published_rate(family, s, d),
            });
        }
    }
    RateTable { family, cells }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub per_step: Vec<f64>,
    /// The final per-step estimate.
    pub limit: f64,
    /// The last two estimates differ by less than 0.05.
    pub settled: bool,
    /// Number of iterates whose errors were usable.
    pub window: usize,
}

/// Per-step rate estimates `log(e_{l+1}/e_l) / log(e_l/e_{l-1})` from the
/// errors of `xs` against `root`. The window ends at the first error at or
/// below `noise_floor`.
pub fn estimate_rate_with_floor<S: Scalar>(
    xs: &[S],
    root: &S,
    noise_floor: &S,
) -> Result<RateEstimate> {
    let logs: Vec<S> = xs
        .iter()
        .map(|x| (x.clone() - root.clone()).abs())
        .take_while(|e| !e.is_zero() && e > noise_floor)
        .map(|e| e.ln())
        .collect();
    if logs.len() < 4 {
        return Err(Error::TooFewIterates {
            needed: 4,
            got: logs.len(),
        });
    }
    let per_step: Vec<f64> = logs
        .windows(3)
        .map(|w| {
            let num = w[2].clone() - w[1].clone();
            let den = w[1].clone() - w[0].clone();
            (num / den).to_f64()
        })
        .filter(|p| p.is_finite())
        .collect();
    let (limit, settled) = match per_step.as_slice() {
        [.., prev, last] => (*last, (last - prev).abs() < 0.05),
        [only] => (*only, false),
        [] => return Err(Error::TooFewIterates { needed: 4, got: 0 }),
    };
    Ok(RateEstimate {
        per_step,
        limit,
        settled,
        window: logs.len(),
    })
}

/// Rate estimate with the noise floor at `1e10 eps |root|`, the size of
/// rounding noise in iterates near the root.
pub fn estimate_rate<S: Scalar>(xs: &[S], root: &S) -> Result<RateEstimate> {
    let floor = S::from_f64(1e10) * S::epsilon() * root.abs();
    estimate_rate_with_floor(xs, root, &floor)
}
