//! Dense linear algebra over a coefficient field.

use super::field::{Coef, Field};
use num_traits::{One, Zero};

pub type Mat = Vec<Vec<Coef>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(field: &Field, m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).take(cols) {
                    let t = field.mul(&k, p);
                    *x = field.sub(x, &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &Field, m: &Mat) -> usize {
    let mut a = m.clone();
    rref(field, &mut a).len()
}

/// Basis of `{x : m·x = 0}`.
pub fn nullspace(field: &Field, m: &Mat, ncols: usize) -> Vec<Vec<Coef>> {
    let mut a = m.clone();
    let pivots = rref(field, &mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Coef::zero(); ncols];
            v[f] = Coef::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(&a[r][f]);
            }
            v
        })
        .collect()
}

/// One solution of `m·x = b`, if any.
pub fn solve(field: &Field, m: &Mat, b: &[Coef], ncols: usize) -> Option<Vec<Coef>> {
    let mut a: Mat = m.iter().zip(b).map(|(row, y)| row.iter().cloned().chain([y.clone()]).collect()).collect();
    let pivots = rref(field, &mut a);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Coef::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Coef {
        Coef::from_integer(v.into())
    }

    #[test]
    fn rank_and_kernel() {
        let f = Field::Q;
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&f, &m), 1);
        let ns = nullspace(&f, &m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: Coef = m[0].iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(s.is_zero());
        }
        assert!(solve(&f, &m, &[q(1), q(3)], 3).is_none());
        assert_eq!(solve(&f, &m, &[q(1), q(2)], 3), Some(vec![q(1), q(0), q(0)]));
    }
}
