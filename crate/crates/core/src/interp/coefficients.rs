//! Variable-step LMM coefficients for the inverse-function ODE `dx/dy = 1/f'(x)`.
//!
//! An `s`-step method advances with
//! `x_{n+s} = -sum a_k x_{n+k} + h sum b_k / f'(x_{n+k})`, `h = -f(x_{n+s-1})`,
//! where the coefficients depend on the ratios `q_k = f(x_{n+k}) / f(x_{n+s-1})`.

use crate::error::{Error, Result};
use crate::interp::hermite::{inverse_hermite_root, InverseNode};
use crate::interp::linsolve::solve_dense;
use crate::scalar::{coincident, Scalar};

/// Which coefficients are free: `sigma[k]` frees `a_k`, `deriv[k]` frees `b_k`
/// (node `k` contributes `1/f'`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SigmaMask {
    sigma: Vec<bool>,
    deriv: Vec<bool>,
}

impl SigmaMask {
    pub fn new(sigma: Vec<bool>, deriv: Vec<bool>) -> Result<Self> {
        if sigma.is_empty() || sigma.len() != deriv.len() {
            return Err(Error::InvalidFamily(format!(
                "mask lengths {} and {} must match and be non-zero",
                sigma.len(),
                deriv.len()
            )));
        }
        let mask = SigmaMask { sigma, deriv };
        if !mask.sigma.iter().any(|&s| s) {
            return Err(Error::InvalidFamily(
                "at least one value coefficient must be free".into(),
            ));
        }
        if mask.unknowns() < 2 {
            return Err(Error::InvalidFamily(
                "interpolation degree must be at least 1".into(),
            ));
        }
        Ok(mask)
    }

    /// All `a_k` and `b_k` free.
    pub fn full(s: usize) -> Self {
        Self::new(vec![true; s], vec![true; s]).expect("full mask is valid for s >= 1")
    }

    /// Only `a_{s-1}` free, every derivative used.
    pub fn adams_bashforth(s: usize) -> Self {
        let mut sigma = vec![false; s];
        sigma[s - 1] = true;
        Self::new(sigma, vec![true; s]).expect("Adams-Bashforth mask is valid for s >= 1")
    }

    /// All `a_k` free, no derivatives (secant for s = 2, IQI for s = 3).
    pub fn derivative_free(s: usize) -> Result<Self> {
        Self::new(vec![true; s], vec![false; s])
    }

    pub fn s(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[bool] {
        &self.sigma
    }

    pub fn deriv(&self) -> &[bool] {
        &self.deriv
    }

    /// Number of free coefficients, which equals `N + 1` for the implied
    /// interpolation degree `N`.
    pub fn unknowns(&self) -> usize {
        self.sigma.iter().chain(&self.deriv).filter(|&&f| f).count()
    }

    pub fn degree(&self) -> usize {
        self.unknowns() - 1
    }

    /// Number of derivative orders used (0 or 1 here).
    pub fn derivative_count(&self) -> u32 {
        u32::from(self.deriv.iter().any(|&d| d))
    }
}

/// Coefficients `a_k`, `b_k` of one step and the ratios `q_k` they were built for.
#[derive(Debug, Clone, PartialEq)]
pub struct LmmCoefficients<S> {
    pub a: Vec<S>,
    pub b: Vec<S>,
    /// `q_0 .. q_{s-2}`; `q_{s-1} = 1` is implicit.
    pub q: Vec<S>,
}

impl<S: Scalar> LmmCoefficients<S> {
    pub fn s(&self) -> usize {
        self.a.len()
    }

    fn q_at(&self, k: usize) -> S {
        self.q.get(k).cloned().unwrap_or_else(S::one)
    }

    /// `sum a_k + 1` and `sum (a_k q_k + b_k)`; both vanish for a consistent method.
    pub fn consistency_residuals(&self) -> (S, S) {
        let mut sum_a = S::one();
        let mut sum_aq_b = S::zero();
        for k in 0..self.s() {
            sum_a = sum_a + self.a[k].clone();
            sum_aq_b = sum_aq_b + self.a[k].clone() * self.q_at(k) + self.b[k].clone();
        }
        (sum_a, sum_aq_b)
    }

    /// `sum (q_k^m / m) a_k + q_k^{m-1} b_k`, relative to the sum of the term magnitudes.
    pub fn order_residual(&self, m: u32) -> S {
        let mut total = S::zero();
        let mut scale = S::zero();
        let mf = S::from_i64(m as i64);
        for k in 0..self.s() {
            let q = self.q_at(k);
            let ta = q.powi(m as i32) / mf.clone() * self.a[k].clone();
            let tb = q.powi(m as i32 - 1) * self.b[k].clone();
            scale = scale + ta.abs() + tb.abs();
            total = total + ta + tb;
        }
        if scale.is_zero() {
            total.abs()
        } else {
            total.abs() / scale
        }
    }

    /// Next root estimate from the newest `s` iterates. `inv_slopes[k]` is
    /// `1/f'(x_k)`; `None` stands for an unused derivative.
    pub fn step(&self, xs: &[S], f_last: &S, inv_slopes: &[Option<S>]) -> S {
        assert_eq!(xs.len(), self.s());
        assert_eq!(inv_slopes.len(), self.s());
        let h = -f_last.clone();
        let mut value_part = S::zero();
        let mut slope_part = S::zero();
        for k in 0..self.s() {
            value_part = value_part - self.a[k].clone() * xs[k].clone();
            if let Some(fk) = &inv_slopes[k] {
                slope_part = slope_part + self.b[k].clone() * fk.clone();
            }
        }
        value_part + h * slope_part
    }
}

/// Ratios `q_k = f_k / f_{s-1}` for `k < s-1`.
pub fn step_ratios<S: Scalar>(fs: &[S]) -> Vec<S> {
    let last = fs.last().expect("at least one function value").clone();
    fs[..fs.len() - 1]
        .iter()
        .map(|f| f.clone() / last.clone())
        .collect()
}

fn check_ratios<S: Scalar>(q: &[S], used: impl Fn(usize) -> bool) -> Result<()> {
    let mut all: Vec<(usize, S)> = q
        .iter()
        .enumerate()
        .filter(|(k, _)| used(*k))
        .map(|(k, v)| (k, v.clone()))
        .collect();
    all.push((q.len(), S::one()));
    for (k, v) in &all {
        if !v.is_finite() {
            return Err(Error::DegenerateRatio(format!("q_{k} = {v} is not finite")));
        }
    }
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            if coincident(&all[i].1, &all[j].1) {
                return Err(Error::DegenerateRatio(format!(
                    "q_{} = {} coincides with q_{} = {}",
                    all[i].0, all[i].1, all[j].0, all[j].1
                )));
            }
        }
    }
    Ok(())
}

/// Closed-form two-step coefficients.
pub fn lmm_coefficients_s2<S: Scalar>(q: &S) -> Result<LmmCoefficients<S>> {
    check_ratios(std::slice::from_ref(q), |_| true)?;
    let qm1 = q.clone() - S::one();
    let a0 = (S::one() - S::from_i64(3) * q.clone()) / qm1.powi(3);
    let a1 = -S::one() - a0.clone();
    let b0 = q.clone() / qm1.powi(2);
    let b1 = q.clone() * b0.clone();
    Ok(LmmCoefficients {
        a: vec![a0, a1],
        b: vec![b0, b1],
        q: vec![q.clone()],
    })
}

/// Closed-form three-step coefficients.
pub fn lmm_coefficients_s3<S: Scalar>(q0: &S, q1: &S) -> Result<LmmCoefficients<S>> {
    check_ratios(&[q0.clone(), q1.clone()], |_| true)?;
    let n = |v: i64| S::from_i64(v);
    let (q0, q1) = (q0.clone(), q1.clone());
    let d0 = q0.clone() - S::one();
    let d1 = q1.clone() - S::one();
    let d01 = q0.clone() - q1.clone();
    let q0s = q0.clone() * q0.clone();
    let q1s = q1.clone() * q1.clone();

    let a0 = q1s.clone()
        * (q0.clone() * (n(3) + n(3) * q1.clone() - n(5) * q0.clone()) - q1.clone())
        / (d0.powi(3) * d01.powi(3));
    let a1 = q0s.clone()
        * (q1.clone() * (n(5) * q1.clone() - n(3) * q0.clone() - n(3)) + q0.clone())
        / (d1.powi(3) * d01.powi(3));
    let a2 =
        q0s.clone() * q1s.clone() * (n(3) * q1.clone() - q0.clone() * (q1.clone() - n(3)) - n(5))
            / (d0.powi(3) * d1.powi(3));
    let b0 = q0.clone() * q1s.clone() / (d0.powi(2) * d01.powi(2));
    let b1 = q0s.clone() * q1.clone() / (d01.powi(2) * d1.powi(2));
    let b2 = q0s * q1s / (d0.powi(2) * d1.powi(2));
    Ok(LmmCoefficients {
        a: vec![a0, a1, a2],
        b: vec![b0, b1, b2],
        q: vec![q0, q1],
    })
}

/// Weights of `H(0)` for nodes at `y = q_k` (the newest at 1), read off by
/// interpolating unit data. With `f = 1` the step size is `h = -1`.
fn coefficients_from_tableau<S: Scalar>(q: &[S], mask: &SigmaMask) -> Result<LmmCoefficients<S>> {
    let s = mask.s();
    let qk = |k: usize| q.get(k).cloned().unwrap_or_else(S::one);
    let used: Vec<usize> = (0..s).filter(|&k| mask.sigma[k]).collect();
    let unit_root = |value_at: Option<usize>, slope_at: Option<usize>| -> Result<S> {
        let nodes: Vec<InverseNode<S>> = used
            .iter()
            .map(|&k| {
                let x = if value_at == Some(k) {
                    S::one()
                } else {
                    S::zero()
                };
                let slope = mask.deriv[k].then(|| {
                    if slope_at == Some(k) {
                        S::one()
                    } else {
                        S::zero()
                    }
                });
                InverseNode { y: qk(k), x, slope }
            })
            .collect();
        inverse_hermite_root(&nodes).map_err(|e| Error::DegenerateRatio(e.to_string()))
    };
    let mut a = vec![S::zero(); s];
    let mut b = vec![S::zero(); s];
    for &k in &used {
        a[k] = -unit_root(Some(k), None)?;
        if mask.deriv[k] {
            b[k] = -unit_root(None, Some(k))?;
        }
    }
    Ok(LmmCoefficients {
        a,
        b,
        q: q.to_vec(),
    })
}

/// Coefficients of maximal order for an arbitrary mask: the consistency rows
/// and the order rows `m = 2, 3, ...` until the system is square. Masks where
/// every node with a slope also has a value go through the divided-difference
/// tableau instead, which is far better conditioned.
pub fn solve_lmm_coefficients<S: Scalar>(q: &[S], mask: &SigmaMask) -> Result<LmmCoefficients<S>> {
    let s = mask.s();
    if q.len() + 1 != s {
        return Err(Error::InvalidFamily(format!(
            "{} ratios given for s = {s}",
            q.len()
        )));
    }
    check_ratios(q, |k| mask.sigma[k] || mask.deriv[k])?;
    if (0..s).all(|k| mask.sigma[k] || !mask.deriv[k]) {
        return coefficients_from_tableau(q, mask);
    }

    // unknown layout: free a_k first, then free b_k
    let a_idx: Vec<usize> = (0..s).filter(|&k| mask.sigma[k]).collect();
    let b_idx: Vec<usize> = (0..s).filter(|&k| mask.deriv[k]).collect();
    let n = a_idx.len() + b_idx.len();
    let qk = |k: usize| q.get(k).cloned().unwrap_or_else(S::one);

    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    // sum a_k = -1
    rows.push(
        a_idx
            .iter()
            .map(|_| S::one())
            .chain(b_idx.iter().map(|_| S::zero()))
            .collect::<Vec<_>>(),
    );
    rhs.push(-S::one());
    // sum a_k q_k + b_k = 0
    rows.push(
        a_idx
            .iter()
            .map(|&k| qk(k))
            .chain(b_idx.iter().map(|_| S::one()))
            .collect(),
    );
    rhs.push(S::zero());
    let mut m: i32 = 2;
    while rows.len() < n {
        let mf = S::from_i64(m as i64);
        rows.push(
            a_idx
                .iter()
                .map(|&k| qk(k).powi(m) / mf.clone())
                .chain(b_idx.iter().map(|&k| qk(k).powi(m - 1)))
                .collect(),
        );
        rhs.push(S::zero());
        m += 1;
    }
    rows.truncate(n);
    rhs.truncate(n);

    let sol = solve_dense(rows, rhs)
        .ok_or_else(|| Error::DegenerateRatio("singular coefficient system".into()))?;
    let mut a = vec![S::zero(); s];
    let mut b = vec![S::zero(); s];
    for (slot, &k) in a_idx.iter().enumerate() {
        a[k] = sol[slot].clone();
    }
    for (slot, &k) in b_idx.iter().enumerate() {
        b[k] = sol[a_idx.len() + slot].clone();
    }
    Ok(LmmCoefficients {
        a,
        b,
        q: q.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn s2_at_q_two() {
        let c = lmm_coefficients_s2(&2.0).unwrap();
        assert_eq!(c.a, vec![-5.0, 4.0]);
        assert_eq!(c.b, vec![2.0, 4.0]);
    }

    #[test]
    fn s2_at_negative_half() {
        let c = lmm_coefficients_s2(&-0.5).unwrap();
        let expect = [-20.0 / 27.0, -7.0 / 27.0, -2.0 / 9.0, 1.0 / 9.0];
        let got = [c.a[0], c.a[1], c.b[0], c.b[1]];
        for (g, e) in got.iter().zip(expect) {
            assert!(close(*g, e, 1e-15), "{g} vs {e}");
        }
    }

    #[test]
    fn s2_rejects_unit_ratio() {
        assert!(matches!(
            lmm_coefficients_s2(&1.0),
            Err(Error::DegenerateRatio(_))
        ));
    }

    #[test]
    fn s3_is_consistent_at_three_two() {
        let c = lmm_coefficients_s3(&3.0, &2.0).unwrap();
        let (r0, r1) = c.consistency_residuals();
        assert!(r0.abs() < 1e-12 && r1.abs() < 1e-12);
        for m in 2..=5 {
            assert!(c.order_residual(m) < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn s3_rejects_coincident_ratios() {
        assert!(matches!(
            lmm_coefficients_s3(&2.0, &2.0),
            Err(Error::DegenerateRatio(_))
        ));
        assert!(lmm_coefficients_s3(&1.0, &2.0).is_err());
        assert!(lmm_coefficients_s3(&2.0, &1.0).is_err());
    }

    #[test]
    fn solver_reproduces_s2_closed_form() {
        let c = solve_lmm_coefficients(&[2.0], &SigmaMask::full(2)).unwrap();
        for (g, e) in c.a.iter().chain(&c.b).zip([-5.0, 4.0, 2.0, 4.0]) {
            assert!(close(*g, e, 1e-14));
        }
    }

    #[test]
    fn adams_bashforth_two_step_weights() {
        let c = solve_lmm_coefficients(&[-1.0], &SigmaMask::adams_bashforth(2)).unwrap();
        assert_eq!(c.a[0], 0.0);
        assert!(close(c.a[1], -1.0, 1e-15));
        assert!(close(c.b[0], 0.25, 1e-15));
        assert!(close(c.b[1], 0.75, 1e-15));
    }

    #[test]
    fn derivative_free_two_step_is_the_secant() {
        let q0 = 3.5;
        let c = solve_lmm_coefficients(&[q0], &SigmaMask::derivative_free(2).unwrap()).unwrap();
        assert!(close(c.a[0], 1.0 / (q0 - 1.0), 1e-15));
        assert!(close(c.a[1], -q0 / (q0 - 1.0), 1e-15));
        assert_eq!(c.b, vec![0.0, 0.0]);
    }

    #[test]
    fn masks_validate() {
        assert!(SigmaMask::derivative_free(1).is_err());
        assert!(SigmaMask::new(vec![false, false], vec![true, true]).is_err());
        assert!(SigmaMask::new(vec![true], vec![true, true]).is_err());
        assert_eq!(SigmaMask::full(3).degree(), 5);
        assert_eq!(SigmaMask::adams_bashforth(3).unknowns(), 4);
    }

    #[test]
    fn step_on_x_squared_minus_two() {
        // x = (1, 2): f = (-1, 2), f' = (2, 4)
        let q = step_ratios(&[-1.0, 2.0]);
        let c = lmm_coefficients_s2(&q[0]).unwrap();
        let x = c.step(&[1.0, 2.0], &2.0, &[Some(0.5), Some(0.25)]);
        assert!(close(x, 77.0 / 54.0, 1e-15));
    }
}
