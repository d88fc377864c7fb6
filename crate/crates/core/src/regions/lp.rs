//! Dense tableau simplex for `max w.x` subject to `A x <= b`, `x >= 0`.
//!
//! Right-hand sides must be non-negative, so the slack basis is feasible from
//! the start. Pivoting follows Bland's least-index rule, which both rules out
//! cycling and makes the returned vertex a deterministic function of the
//! input.

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, x: Vec<T> },
    Unbounded,
}

/// Solves the LP. `rows[i]` holds the coefficients of constraint `i`.
///
/// # Panics
///
/// Panics if a right-hand side is negative or dimensions disagree.
pub fn maximize<T: Scalar>(objective: &[T], rows: &[Vec<T>], rhs: &[T]) -> LpOutcome<T> {
    let n = objective.len();
    let m = rows.len();
    assert_eq!(rhs.len(), m, "one right-hand side per row");
    assert!(
        rhs.iter().all(|b| *b >= T::zero()),
        "negative right-hand side"
    );
    let width = n + m;
    let mut tab: Vec<Vec<T>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "row {i} has wrong width");
            let mut t = row.clone();
            t.extend((0..m).map(|j| if j == i { T::one() } else { T::zero() }));
            t
        })
        .collect();
    let mut b = rhs.to_vec();
    let mut basis: Vec<usize> = (n..width).collect();
    let mut cost: Vec<T> = objective.to_vec();
    cost.extend(std::iter::repeat(T::zero()).take(m));
    let mut value = T::zero();

    while let Some(enter) = (0..width).find(|&j| cost[j].approx_gt(T::zero())) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !tab[i][enter].approx_gt(T::zero()) {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(best) => {
                    let lhs = b[i] * tab[best][enter];
                    let rhs = b[best] * tab[i][enter];
                    if lhs.approx_lt(rhs) || (lhs.approx_eq(rhs) && basis[i] < basis[best]) {
                        Some(i)
                    } else {
                        Some(best)
                    }
                }
            };
        }
        let Some(row) = leave else {
            return LpOutcome::Unbounded;
        };

        let pivot = tab[row][enter];
        for v in tab[row].iter_mut() {
            *v = *v / pivot;
        }
        b[row] = b[row] / pivot;
        let pivot_row = tab[row].clone();
        for i in 0..m {
            if i == row {
                continue;
            }
            let factor = tab[i][enter];
            if factor == T::zero() {
                continue;
            }
            for (v, p) in tab[i].iter_mut().zip(&pivot_row) {
                *v = *v - factor * *p;
            }
            b[i] = b[i] - factor * b[row];
        }
        let factor = cost[enter];
        for (c, p) in cost.iter_mut().zip(&pivot_row) {
            *c = *c - factor * *p;
        }
        value = value + factor * b[row];
        basis[row] = enter;
    }

    let mut x = vec![T::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = b[i];
        }
    }
    LpOutcome::Optimal { value, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let obj = [q(3, 1), q(5, 1)];
        let rows = vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(2, 1)],
            vec![q(3, 1), q(2, 1)],
        ];
        let rhs = [q(4, 1), q(12, 1), q(18, 1)];
        match maximize(&obj, &rows, &rhs) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(36, 1));
                assert_eq!(x, vec![q(2, 1), q(6, 1)]);
            }
            LpOutcome::Unbounded => panic!("bounded"),
        }
    }

    #[test]
    fn detects_unbounded() {
        let obj = [1.0, 1.0];
        let rows = vec![vec![1.0, 0.0]];
        assert_eq!(maximize(&obj, &rows, &[1.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Several constraints tight at the origin.
        let obj = [q(1, 1), q(1, 1), q(1, 1)];
        let rows = vec![
            vec![q(1, 1), q(-1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), q(-1, 1)],
            vec![q(-1, 1), q(0, 1), q(1, 1)],
            vec![q(1, 1), q(1, 1), q(1, 1)],
        ];
        let rhs = [q(0, 1), q(0, 1), q(0, 1), q(3, 1)];
        match maximize(&obj, &rows, &rhs) {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(3, 1));
                assert_eq!(x, vec![q(1, 1), q(1, 1), q(1, 1)]);
            }
            LpOutcome::Unbounded => panic!("bounded"),
        }
    }
}
