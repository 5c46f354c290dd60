//! Fixtures shared by the criterion benchmarks.

use lmmroot::{IterationRecord, Problem};

pub fn x_minus_cos() -> Problem<f64> {
    Problem::new("x-cos", |x: &f64| x - x.cos(), |x: &f64| 1.0 + x.sin(), 1.0)
}

/// Three evaluated iterates of `x - cos x` approaching its root.
pub fn sample_records() -> Vec<IterationRecord<f64>> {
    let p = x_minus_cos();
    [1.0, 0.75036, 0.73911]
        .into_iter()
        .enumerate()
        .map(|(index, x)| IterationRecord {
            index,
            x,
            fx: Some(p.value(&x)),
            dfx: Some(p.slope(&x)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_evaluated() {
        let r = sample_records();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|e| e.fx.is_some() && e.dfx.is_some()));
    }
}
