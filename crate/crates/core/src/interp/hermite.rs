//! Inverse Hermite interpolation in Newton divided-difference form.

use crate::error::{Error, Result};
use crate::scalar::{coincident, Scalar};

/// A data point of the inverse function: `x = f^-1(y)` and optionally
/// `dx/dy = 1 / f'(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseNode<S> {
    pub y: S,
    pub x: S,
    pub slope: Option<S>,
}

impl<S: Scalar> InverseNode<S> {
    pub fn value(y: S, x: S) -> Self {
        InverseNode { y, x, slope: None }
    }

    pub fn with_slope(y: S, x: S, slope: S) -> Self {
        InverseNode {
            y,
            x,
            slope: Some(slope),
        }
    }

    /// Node from `x`, `f(x)` and `f'(x)`; the slope is `1/f'(x)`.
    pub fn from_derivative(x: S, fx: S, dfx: &S) -> Self {
        let slope = S::one() / dfx.clone();
        InverseNode::with_slope(fx, x, slope)
    }

    fn data_count(&self) -> usize {
        1 + usize::from(self.slope.is_some())
    }
}

/// Interpolating polynomial `H(y)` over a (possibly repeated) abscissa list.
#[derive(Debug, Clone)]
pub struct Interpolant<S> {
    abscissae: Vec<S>,
    coeffs: Vec<S>,
}

impl<S: Scalar> Interpolant<S> {
    /// Builds the Hermite interpolant through `nodes`. Each node contributes
    /// its value and, when present, its slope.
    pub fn build(nodes: &[InverseNode<S>]) -> Result<Self> {
        for (i, n) in nodes.iter().enumerate() {
            let slope_ok = n.slope.as_ref().is_none_or(|s| s.is_finite());
            if !(n.x.is_finite() && n.y.is_finite() && slope_ok) {
                return Err(Error::InvalidNode(i));
            }
        }
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if coincident(&nodes[i].y, &nodes[j].y) {
                    return Err(Error::DegenerateNodes(i, j));
                }
            }
        }
        let count: usize = nodes.iter().map(InverseNode::data_count).sum();
        if count < 2 {
            return Err(Error::TooFewData(count));
        }

        // z: abscissae with repeats; owner: node each entry came from
        let mut z = Vec::with_capacity(count);
        let mut owner = Vec::with_capacity(count);
        let mut column = Vec::with_capacity(count);
        for (i, n) in nodes.iter().enumerate() {
            for _ in 0..n.data_count() {
                z.push(n.y.clone());
                owner.push(i);
                column.push(n.x.clone());
            }
        }

        let mut coeffs = vec![column[0].clone()];
        for order in 1..count {
            let mut next = Vec::with_capacity(count - order);
            for i in 0..count - order {
                let dd = if owner[i] == owner[i + order] {
                    // repeated abscissa: only ever order 1, the stored slope
                    nodes[owner[i]]
                        .slope
                        .clone()
                        .expect("repeated abscissa carries a slope")
                } else {
                    (column[i + 1].clone() - column[i].clone())
                        / (z[i + order].clone() - z[i].clone())
                };
                next.push(dd);
            }
            coeffs.push(next[0].clone());
            column = next;
        }
        Ok(Interpolant {
            abscissae: z,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Newton-form Horner evaluation.
    pub fn eval(&self, y: &S) -> S {
        let n = self.coeffs.len();
        let mut acc = self.coeffs[n - 1].clone();
        for k in (0..n - 1).rev() {
            acc = acc * (y.clone() - self.abscissae[k].clone()) + self.coeffs[k].clone();
        }
        acc
    }

    /// First derivative `H'(y)`.
    pub fn eval_derivative(&self, y: &S) -> S {
        let n = self.coeffs.len();
        let mut acc = self.coeffs[n - 1].clone();
        let mut dacc = S::zero();
        for k in (0..n - 1).rev() {
            let t = y.clone() - self.abscissae[k].clone();
            dacc = dacc * t.clone() + acc.clone();
            acc = acc * t + self.coeffs[k].clone();
        }
        dacc
    }

    /// The root estimate `H(0)`.
    pub fn eval_at_zero(&self) -> S {
        self.eval(&S::zero())
    }
}

/// Convenience: build and evaluate at `y = 0`.
pub fn inverse_hermite_root<S: Scalar>(nodes: &[InverseNode<S>]) -> Result<S> {
    Interpolant::build(nodes).map(|h| h.eval_at_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn secant_line_for_x_squared_minus_four() {
        let nodes = [InverseNode::value(-3.0, 1.0), InverseNode::value(5.0, 3.0)];
        let h = Interpolant::build(&nodes).unwrap();
        assert_eq!(h.degree(), 1);
        assert!((h.eval_at_zero() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn single_node_with_slope_is_a_newton_step() {
        let h = Interpolant::build(&[InverseNode::with_slope(1.0, 0.0, 0.5)]).unwrap();
        assert_eq!(h.eval_at_zero(), -0.5);
    }

    #[test]
    fn odd_symmetric_data_passes_through_origin() {
        let h = Interpolant::build(&[InverseNode::value(-1.0, -1.0), InverseNode::value(1.0, 1.0)])
            .unwrap();
        assert_eq!(h.eval_at_zero(), 0.0);
    }

    #[test]
    fn inverse_cubic_for_x_squared_minus_two() {
        // 77/54 from the 4x4 monomial system (see tests/interp_oracles.rs)
        let nodes = [
            InverseNode::with_slope(-1.0, 1.0, 0.5),
            InverseNode::with_slope(2.0, 2.0, 0.25),
        ];
        let h = Interpolant::build(&nodes).unwrap();
        assert_eq!(h.degree(), 3);
        assert!((h.eval_at_zero() - 77.0 / 54.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_conditions_hold() {
        let nodes = [
            InverseNode::with_slope(-0.7, 0.2, 1.3),
            InverseNode::value(0.4, 0.9),
            InverseNode::with_slope(1.1, 1.4, 0.6),
        ];
        let h = Interpolant::build(&nodes).unwrap();
        for n in &nodes {
            assert!((h.eval(&n.y) - n.x).abs() < 1e-13);
            if let Some(s) = n.slope {
                assert!((h.eval_derivative(&n.y) - s).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn duplicate_values_are_rejected() {
        let nodes = [InverseNode::value(2.0, 1.0), InverseNode::value(2.0, 3.0)];
        assert_eq!(
            Interpolant::build(&nodes).unwrap_err(),
            Error::DegenerateNodes(0, 1)
        );
    }

    #[test]
    fn non_finite_inputs_are_rejected() {
        let nodes = [
            InverseNode::value(1.0, 0.0),
            InverseNode::with_slope(2.0, 1.0, f64::INFINITY),
        ];
        assert_eq!(
            Interpolant::build(&nodes).unwrap_err(),
            Error::InvalidNode(1)
        );
        assert_eq!(
            Interpolant::build(&[InverseNode::value(f64::NAN, 0.0)]).unwrap_err(),
            Error::InvalidNode(0)
        );
    }

    #[test]
    fn lone_value_is_too_little_data() {
        assert_eq!(
            Interpolant::build(&[InverseNode::value(1.0, 0.0)]).unwrap_err(),
            Error::TooFewData(1)
        );
    }
}
