//! Exact feasibility for `A x = b, x ≥ 0` over the rationals.
//!
//! Phase-one simplex on a dense tableau with Bland's rule, so it always
//! terminates and never depends on floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Returns some `x ≥ 0` with `a x = b`, or `None` when the system is infeasible.
///
/// `a` is given as rows; every row must have the same length.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    assert_eq!(m, b.len(), "right-hand side length mismatch");
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // Tableau columns: n originals, m artificials, then the right-hand side.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        assert_eq!(a[i].len(), n, "ragged constraint matrix");
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = BigRational::one();
        row[n + m] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // Objective row: minimize the sum of artificials, expressed in reduced costs.
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[n + m] -= &row[n + m];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let entering = (0..n + m).find(|&j| t[m][j].is_negative());
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][n + m] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The phase-one objective is bounded below by zero, so a leaving row exists.
        let (r, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, r, e);
        basis[r] = e;
    }
    if !t[m][n + m].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][n + m].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x = &*x / &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, y) in row.iter_mut().zip(&prow) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}

/// Converts an integer matrix given by rows into rationals.
pub fn rat_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Least common multiple of denominators, used to scale a rational vector to integers.
pub fn common_denominator(v: &[BigRational]) -> BigInt {
    use num_integer::Integer;
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn finds_nonnegative_solution() {
        // x + y = 3, x - y = 1 gives (2, 1).
        let a = vec![vec![r(1), r(1)], vec![r(1), r(-1)]];
        let x = feasible(&a, &[r(3), r(1)]).unwrap();
        assert_eq!(x, vec![r(2), r(1)]);
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = -1 has no nonnegative solution.
        let a = vec![vec![r(1), r(1)]];
        assert!(feasible(&a, &[r(-1)]).is_none());
    }

    #[test]
    fn degenerate_system() {
        let a = vec![vec![r(1), r(-1), r(0)], vec![r(0), r(0), r(1)]];
        let x = feasible(&a, &[r(0), r(0)]).unwrap();
        assert_eq!(x[0], x[1]);
        assert!(x[2].is_zero());
    }
}
