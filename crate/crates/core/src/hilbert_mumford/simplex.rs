//! Phase-one simplex with Bland's rule over an ordered field.
//!
//! Used with `BigRational` so that feasibility answers are exact.

use crate::scalar::Real;

/// Returns a point of `{x : M x = b, x ≥ 0}` or `None` when the set is empty.
///
/// `m` is row-major with one row per equation. Bland's rule (lowest index
/// enters, lowest basic index leaves on ties) guarantees termination.
pub fn feasible_point<T: Real>(m: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let rows = m.len();
    assert_eq!(rows, b.len(), "one right-hand side per row");
    let cols = m.first().map(Vec::len).unwrap_or(0);
    if rows == 0 {
        return Some(vec![T::zero(); cols]);
    }
    let width = cols + rows + 1;
    let rhs = width - 1;

    // Tableau rows with artificial identity; right-hand sides made nonnegative.
    let mut tab: Vec<Vec<T>> = (0..rows)
        .map(|i| {
            let flip = b[i] < T::zero();
            let sign = |x: &T| if flip { -x.clone() } else { x.clone() };
            let mut row: Vec<T> = m[i].iter().map(sign).collect();
            row.extend((0..rows).map(|k| if k == i { T::one() } else { T::zero() }));
            row.push(sign(&b[i]));
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Phase-one objective: minimize the artificial sum; reduced costs below.
    let mut cost: Vec<T> = vec![T::zero(); width];
    for row in &tab {
        for j in 0..cols {
            cost[j] = cost[j].clone() - row[j].clone();
        }
        cost[rhs] = cost[rhs].clone() - row[rhs].clone();
    }

    while let Some(enter) = (0..cols + rows).find(|&j| cost[j] < T::zero()) {
        let mut leave: Option<(usize, T)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter] > T::zero() {
                let ratio = row[rhs].clone() / row[enter].clone();
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so some row always limits the step.
        let (pivot_row, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if cost[rhs] != T::zero() {
        return None;
    }
    let mut x = vec![T::zero(); cols];
    for (i, &var) in basis.iter().enumerate() {
        if var < cols {
            x[var] = tab[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot<T: Real>(tab: &mut [Vec<T>], cost: &mut [T], r: usize, c: usize) {
    let p = tab[r][c].clone();
    for x in tab[r].iter_mut() {
        *x = x.clone() / p.clone();
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(&pivot_row) {
            *x = x.clone() - f.clone() * y.clone();
        }
    }
    let f = cost[c].clone();
    if !f.is_zero() {
        for (x, y) in cost.iter_mut().zip(&pivot_row) {
            *x = x.clone() - f.clone() * y.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        rational(n, 1)
    }

    fn satisfies(m: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) -> bool {
        x.iter().all(|v| *v >= q(0))
            && m.iter()
                .zip(b)
                .all(|(row, rhs)| row.iter().zip(x).fold(q(0), |acc, (a, v)| acc + a.clone() * v.clone()) == *rhs)
    }

    #[test]
    fn finds_balancing_combination() {
        // c1 - c2 = 0, c1 + c2 = 1
        let m = vec![vec![q(1), q(-1)], vec![q(1), q(1)]];
        let b = vec![q(0), q(1)];
        let x = feasible_point(&m, &b).unwrap();
        assert_eq!(x, vec![rational(1, 2), rational(1, 2)]);
    }

    #[test]
    fn detects_infeasibility() {
        // 2 c1 + c2 = 0 with c1 + c2 = 1, c ≥ 0 has no solution.
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let b = vec![q(0), q(1)];
        assert!(feasible_point(&m, &b).is_none());
    }

    #[test]
    fn negative_rhs_and_degenerate_rows() {
        let m = vec![vec![q(1), q(0), q(-1)], vec![q(0), q(0), q(0)], vec![q(2), q(1), q(0)]];
        let b = vec![q(-1), q(0), q(3)];
        let x = feasible_point(&m, &b).unwrap();
        assert!(satisfies(&m, &b, &x));
    }

    #[test]
    fn works_over_floats() {
        let m = vec![vec![1.0f64, 1.0]];
        let x = feasible_point(&m, &[2.0]).unwrap();
        assert!((x[0] + x[1] - 2.0).abs() < 1e-12);
    }
}
