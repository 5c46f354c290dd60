use crate::history::IterateHistory;
use crate::scalar::Scalar;

/// When a solve is finished.
#[derive(Debug, Clone, PartialEq)]
pub enum StopCriterion<S> {
    /// `|x_{l+1} - x_l| <= threshold`.
    AbsoluteIncrement(S),
    /// `|a - b| <= threshold |b|` on a sign-change bracket.
    RelativeBracket(S),
}

impl<S: Scalar> StopCriterion<S> {
    /// Increment below `10^-eta`.
    pub fn decimal_digits(eta: u32) -> Self {
        StopCriterion::AbsoluteIncrement(S::exp10_neg(eta))
    }

    /// Increment below twice the machine epsilon.
    pub fn two_epsilon_increment() -> Self {
        StopCriterion::AbsoluteIncrement(S::from_i64(2) * S::epsilon())
    }

    /// Relative bracket width below twice the machine epsilon.
    pub fn two_epsilon_bracket() -> Self {
        StopCriterion::RelativeBracket(S::from_i64(2) * S::epsilon())
    }

    pub fn threshold(&self) -> &S {
        match self {
            StopCriterion::AbsoluteIncrement(t) | StopCriterion::RelativeBracket(t) => t,
        }
    }

    /// Absolute-increment test on the two newest iterates. False for the
    /// bracket kind or fewer than two iterates.
    pub fn met_by_history(&self, history: &IterateHistory<S>) -> bool {
        match (self, history.last_increment()) {
            (StopCriterion::AbsoluteIncrement(t), Some(inc)) => inc <= *t,
            _ => false,
        }
    }

    /// Relative-bracket test. False for the increment kind.
    pub fn met_by_bracket(&self, a: &S, b: &S) -> bool {
        match self {
            StopCriterion::RelativeBracket(delta) => {
                (a.clone() - b.clone()).abs() <= delta.clone() * b.abs()
            }
            StopCriterion::AbsoluteIncrement(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{with_working_digits, BigFloat};

    fn two_point_history<S: Scalar>(x1: S, x2: S) -> IterateHistory<S> {
        let mut h = IterateHistory::new();
        h.push(x1, None, None);
        h.push(x2, None, None);
        h
    }

    #[test]
    fn tiny_increment_stops_at_eta_250() {
        with_working_digits(300, || {
            let crit = StopCriterion::<BigFloat>::decimal_digits(250);
            let x1 = BigFloat::one();
            let x2 = x1.clone() + BigFloat::exp10_neg(260);
            assert!(crit.met_by_history(&two_point_history(x1, x2)));
        });
    }

    #[test]
    fn large_increment_does_not_stop() {
        with_working_digits(300, || {
            let crit = StopCriterion::<BigFloat>::decimal_digits(250);
            let x1 = BigFloat::one();
            let x2 = x1.clone() + BigFloat::exp10_neg(3);
            assert!(!crit.met_by_history(&two_point_history(x1, x2)));
        });
    }

    #[test]
    fn narrow_bracket_stops() {
        let crit = StopCriterion::<f64>::two_epsilon_bracket();
        assert!(crit.met_by_bracket(&1.0, &(1.0 + 1e-20)));
        assert!(!crit.met_by_bracket(&1.0, &1.001));
    }

    #[test]
    fn single_iterate_never_stops() {
        let crit = StopCriterion::<f64>::two_epsilon_increment();
        let mut h = IterateHistory::new();
        h.push(1.0, None, None);
        assert!(!crit.met_by_history(&h));
    }
}
