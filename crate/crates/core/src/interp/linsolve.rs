use crate::scalar::Scalar;

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot vanishes or the solution is not finite.
pub(crate) fn solve_dense<S: Scalar>(mut m: Vec<Vec<S>>, mut rhs: Vec<S>) -> Option<Vec<S>> {
    let n = rhs.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if m[pivot][col].is_zero() || !m[pivot][col].is_finite() {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let factor = m[row][col].clone() / m[col][col].clone();
            if factor.is_zero() {
                continue;
            }
            let (upper, lower) = m.split_at_mut(row);
            for (target, pivot_v) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target = target.clone() - factor.clone() * pivot_v.clone();
            }
            let r = rhs[row].clone() - factor * rhs[col].clone();
            rhs[row] = r;
        }
    }
    let mut x = vec![S::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..n {
            acc = acc - m[row][k].clone() * x[k].clone();
        }
        x[row] = acc / m[row][row].clone();
    }
    x.iter().all(Scalar::is_finite).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve_dense(m, vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn singular_system_is_none() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_dense(m, vec![1.0, 2.0]).is_none());
    }
}
