//! Finitely generated abelian groups over exact integer arithmetic.
//!
//! Everything here rests on one Smith normal form routine that also tracks
//! the inverse of the row transform, so presentations can be converted back
//! and forth between raw generators and canonical coordinates.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries; the entry count must be `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, x) in row.iter().enumerate() {
                m.data[i * c + j] = BigInt::from(*x);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "vector length mismatch in product");
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += self.get(i, j) * x;
                    }
                }
                s
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch in hcat");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant by fraction-free Gaussian elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// Smith normal form `u * m * v = d` together with the inverses of both transforms.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Snf {
    /// Diagonal entry `i`, zero past the rank or past the shorter side.
    pub fn diag(&self, i: usize) -> BigInt {
        if i < self.d.rows() && i < self.d.cols() {
            self.d.get(i, i).clone()
        } else {
            BigInt::zero()
        }
    }
}

/// Smith normal form with the smallest-absolute-value pivot rule (ties broken
/// by lowest row, then lowest column). Deterministic for fixed input.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);
    let mut rank = 0;
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => x.abs() < d.get(bi, bj).abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, u_inv, v, v_inv, rank);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = d.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..r {
                let q = d.get(i, t) / &p;
                if !q.is_zero() {
                    let nq = -&q;
                    d.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                    u_inv.add_col(t, i, &q);
                }
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                let q = d.get(t, j) / &p;
                if !q.is_zero() {
                    let nq = -&q;
                    d.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                    v_inv.add_row(t, j, &q);
                }
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let mut offender = None;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !d.get(i, j).is_multiple_of(&p) {
                        offender = Some(i);
                        break 'outer;
                    }
                }
            }
            if let Some(i) = offender {
                let one = BigInt::one();
                d.add_row(t, i, &one);
                u.add_row(t, i, &one);
                u_inv.add_col(i, t, &-one);
                continue;
            }
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        rank = t + 1;
    }
    finish(d, u, u_inv, v, v_inv, rank)
}

fn finish(
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
    rank: usize,
) -> Snf {
    Snf { u, u_inv, d, v, v_inv, rank }
}

/// Basis of the integer kernel `{x : m x = 0}` as columns.
pub fn integer_nullspace(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(m);
    (s.rank..m.cols()).map(|j| s.v.col(j)).collect()
}

/// Some integer solution of `m x = y`, if one exists.
pub fn solve_integer(m: &IntMatrix, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(m);
    let uy = s.u.mul_vec(y);
    let mut w = vec![BigInt::zero(); m.cols()];
    for (i, val) in uy.iter().enumerate() {
        if i < s.rank {
            let di = s.d.get(i, i);
            if !val.is_multiple_of(di) {
                return None;
            }
            w[i] = val / di;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&w))
}

/// `ℤ^rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with `d₁ | d₂ | …` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

/// A group in canonical form together with the change of coordinates from the
/// raw generators it was presented with.
#[derive(Clone, Debug)]
pub struct Presented {
    pub group: FgAbGroup,
    /// `ngens × n`: raw coordinates to canonical coordinates (before reduction).
    pub to_canon: IntMatrix,
    /// `n × ngens`: canonical generator `j` as a raw vector.
    pub from_canon: IntMatrix,
}

impl Presented {
    /// Canonical coordinates of a raw vector.
    pub fn canon(&self, raw: &[BigInt]) -> Vec<BigInt> {
        self.group.reduce(&self.to_canon.mul_vec(raw))
    }

    /// A raw representative of canonical coordinates.
    pub fn raw(&self, canon: &[BigInt]) -> Vec<BigInt> {
        self.from_canon.mul_vec(canon)
    }
}

impl FgAbGroup {
    /// Checked constructor; the torsion list must already be a divisibility chain of entries ≥ 2.
    pub fn new(rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidInput(format!("torsion coefficient {d} is below 2")));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::InvalidInput("torsion coefficients must form a divisibility chain".into()));
            }
        }
        Ok(FgAbGroup { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `ℤ/d`; `d = 0` gives `ℤ` and `d = ±1` the trivial group.
    pub fn cyclic(d: i64) -> Self {
        let d = d.unsigned_abs();
        match d {
            0 => Self::free(1),
            1 => Self::trivial(),
            _ => FgAbGroup { rank: 0, torsion: vec![BigInt::from(d)] },
        }
    }

    /// The group `ℤ^rank ⊕ ⊕ ℤ/mᵢ` for arbitrary moduli, brought to canonical form.
    pub fn from_moduli(rank: usize, moduli: &[i64]) -> Presented {
        let n = rank + moduli.len();
        let mut rel = IntMatrix::zeros(n, moduli.len());
        for (j, m) in moduli.iter().enumerate() {
            rel.set(rank + j, j, BigInt::from(*m));
        }
        from_relations(n, &rel)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of canonical generators.
    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            None
        } else {
            Some(self.torsion.iter().product())
        }
    }

    /// Order of canonical generator `i`, zero for free generators.
    pub fn gen_order(&self, i: usize) -> BigInt {
        if i < self.rank {
            BigInt::zero()
        } else {
            self.torsion[i - self.rank].clone()
        }
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn basis(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.zero();
        v[i] = BigInt::one();
        v
    }

    /// Reduces torsion coordinates into `[0, dᵢ)`.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ngens(), "element has the wrong number of coordinates");
        x.iter()
            .enumerate()
            .map(|(i, v)| if i < self.rank { v.clone() } else { v.mod_floor(&self.torsion[i - self.rank]) })
            .collect()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        x.len() == self.ngens()
    }

    pub fn check(&self, x: &[BigInt]) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        let s: Vec<BigInt> = a.iter().map(|x| x * k).collect();
        self.reduce(&s)
    }

    pub fn is_zero_elem(&self, a: &[BigInt]) -> bool {
        self.reduce(a).iter().all(|x| x.is_zero())
    }

    /// Order of an element, `None` when infinite.
    pub fn elem_order(&self, a: &[BigInt]) -> Option<BigInt> {
        let a = self.reduce(a);
        if a[..self.rank].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut ord = BigInt::one();
        for (i, d) in self.torsion.iter().enumerate() {
            let x = &a[self.rank + i];
            let o = d / x.gcd(d);
            ord = ord.lcm(&o);
        }
        Some(ord)
    }

    /// Relation matrix (`ngens × k`) whose columns are `dᵢ eᵢ` for the torsion generators.
    pub fn torsion_relations(&self) -> IntMatrix {
        let n = self.ngens();
        let mut m = IntMatrix::zeros(n, self.torsion.len());
        for (j, d) in self.torsion.iter().enumerate() {
            m.set(self.rank + j, j, d.clone());
        }
        m
    }

    /// The direct sum of a list of groups with raw coordinates given by concatenation.
    pub fn direct_sum(groups: &[FgAbGroup]) -> Presented {
        let n: usize = groups.iter().map(|g| g.ngens()).sum();
        let mut cols = vec![];
        let mut off = 0;
        for g in groups {
            for (j, d) in g.torsion.iter().enumerate() {
                let mut c = vec![BigInt::zero(); n];
                c[off + g.rank + j] = d.clone();
                cols.push(c);
            }
            off += g.ngens();
        }
        from_relations(n, &IntMatrix::from_cols(n, &cols))
    }

    /// Every element of a finite group, in lexicographic order of canonical coordinates.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        if self.rank > 0 {
            return None;
        }
        let mut out = vec![vec![]];
        for d in &self.torsion {
            let mut next = vec![];
            for prefix in &out {
                let mut k = BigInt::zero();
                while &k < d {
                    let mut v: Vec<BigInt> = prefix.clone();
                    v.push(k.clone());
                    next.push(v);
                    k += 1;
                }
            }
            out = next;
        }
        Some(out)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The group `ℤ^n / (column span of rels)` in canonical form.
pub fn from_relations(n: usize, rels: &IntMatrix) -> Presented {
    assert_eq!(rels.rows(), n, "relation matrix must have one row per generator");
    let s = smith_normal_form(rels);
    let mut free_idx = vec![];
    let mut tors_idx = vec![];
    let mut torsion = vec![];
    for i in 0..n {
        let d = s.diag(i);
        if d.is_zero() {
            free_idx.push(i);
        } else if !d.is_one() {
            tors_idx.push(i);
            torsion.push(d);
        }
    }
    let order: Vec<usize> = free_idx.iter().chain(tors_idx.iter()).copied().collect();
    let k = order.len();
    let mut to_canon = IntMatrix::zeros(k, n);
    let mut from_canon = IntMatrix::zeros(n, k);
    for (a, &i) in order.iter().enumerate() {
        let mut row = s.u.row(i);
        let mut col = s.u_inv.col(i);
        if a < free_idx.len() {
            if let Some(lead) = row.iter().find(|x| !x.is_zero()) {
                if lead.is_negative() {
                    row.iter_mut().for_each(|x| *x = -&*x);
                    col.iter_mut().for_each(|x| *x = -&*x);
                }
            }
        } else {
            let d = &torsion[a - free_idx.len()];
            row.iter_mut().for_each(|x| *x = x.mod_floor(d));
        }
        for j in 0..n {
            to_canon.set(a, j, row[j].clone());
            from_canon.set(j, a, col[j].clone());
        }
    }
    let group = FgAbGroup { rank: free_idx.len(), torsion };
    Presented { group, to_canon, from_canon }
}

/// Homomorphism between groups in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    /// `target.ngens × source.ngens`.
    pub matrix: IntMatrix,
}

impl GroupHom {
    /// Checked constructor: shapes agree and torsion generators map to torsion of matching order.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::InvalidInput("homomorphism matrix has the wrong shape".into()));
        }
        for j in source.rank..source.ngens() {
            let d = source.gen_order(j);
            let img: Vec<BigInt> = matrix.col(j).iter().map(|x| x * &d).collect();
            if !target.is_zero_elem(&img) {
                return Err(Error::InvalidInput("homomorphism does not respect torsion".into()));
            }
        }
        let mut m = matrix;
        for j in 0..m.cols() {
            let c = target.reduce(&m.col(j));
            for (i, x) in c.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(GroupHom { source, target, matrix: m })
    }

    /// Homomorphism from the images of the canonical generators.
    pub fn from_images(source: FgAbGroup, target: FgAbGroup, images: &[Vec<BigInt>]) -> Result<Self> {
        if images.len() != source.ngens() || images.iter().any(|v| v.len() != target.ngens()) {
            return Err(Error::InvalidInput("wrong number of generator images".into()));
        }
        let m = IntMatrix::from_cols(target.ngens(), images);
        Self::new(source, target, m)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.reduce(&self.matrix.mul_vec(x))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GroupHom) -> GroupHom {
        assert_eq!(first.target, self.source, "composition of incompatible homomorphisms");
        let m = self.matrix.mul(&first.matrix);
        GroupHom::new(first.source.clone(), self.target.clone(), m).expect("composite respects torsion")
    }

    pub fn image_of_gen(&self, j: usize) -> Vec<BigInt> {
        self.matrix.col(j)
    }

    /// `[matrix | target torsion relations]`, the integer system behind solving and kernels.
    fn augmented(&self) -> IntMatrix {
        self.matrix.hcat(&self.target.torsion_relations())
    }

    /// Some `x` with `self(x) = y`.
    pub fn solve(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let sol = solve_integer(&self.augmented(), y)?;
        Some(self.source.reduce(&sol[..self.source.ngens()]))
    }

    pub fn kernel(&self) -> Subgroup {
        let ns = self.source.ngens();
        let gens: Vec<Vec<BigInt>> =
            integer_nullspace(&self.augmented()).into_iter().map(|v| self.source.reduce(&v[..ns])).collect();
        Subgroup::generated(&self.source, &gens)
    }

    pub fn image(&self) -> Subgroup {
        let gens: Vec<Vec<BigInt>> = (0..self.source.ngens()).map(|j| self.matrix.col(j)).collect();
        Subgroup::generated(&self.target, &gens)
    }

    /// Target modulo image with the projection.
    pub fn cokernel(&self) -> (FgAbGroup, GroupHom) {
        let nt = self.target.ngens();
        let rels = self.target.torsion_relations().hcat(&self.matrix);
        let p = from_relations(nt, &rels);
        let proj = GroupHom::new(self.target.clone(), p.group.clone(), p.to_canon).expect("projection is well defined");
        (p.group, proj)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }
}

/// Free subgroup data: a subgroup of `ambient` in its own canonical form.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FgAbGroup,
    /// Inclusion into the ambient group.
    pub embed: GroupHom,
    /// Coordinates of each defining generator in `group`.
    pub gen_coords: Vec<Vec<BigInt>>,
}

impl Subgroup {
    /// Subgroup of `ambient` generated by `gens`.
    pub fn generated(ambient: &FgAbGroup, gens: &[Vec<BigInt>]) -> Subgroup {
        let n = ambient.ngens();
        let s = gens.len();
        let x = IntMatrix::from_cols(n, gens);
        let aug = x.hcat(&ambient.torsion_relations());
        let rel_cols: Vec<Vec<BigInt>> = integer_nullspace(&aug).into_iter().map(|v| v[..s].to_vec()).collect();
        let p = from_relations(s, &IntMatrix::from_cols(s, &rel_cols));
        let images: Vec<Vec<BigInt>> =
            (0..p.group.ngens()).map(|j| ambient.reduce(&x.mul_vec(&p.from_canon.col(j)))).collect();
        let embed =
            GroupHom::from_images(p.group.clone(), ambient.clone(), &images).expect("subgroup embedding is well defined");
        let gen_coords = (0..s).map(|i| p.group.reduce(&p.to_canon.col(i))).collect();
        Subgroup { group: p.group, embed, gen_coords }
    }

    /// Coordinates in the subgroup of an ambient element, if it belongs.
    pub fn coords_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.embed.solve(x)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords_of(x).is_some()
    }
}

/// An element of `Ext¹(A, B)` realized as a concrete extension `0 → B → E → A → 0`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub middle: FgAbGroup,
    pub incl: GroupHom,
    pub proj: GroupHom,
}

/// `Ext¹(A, B)` computed from the resolution `0 → ℤ^k → ℤ^(r+k) → A → 0`.
#[derive(Clone, Debug)]
pub struct Ext1 {
    pub group: FgAbGroup,
    pub a: FgAbGroup,
    pub b: FgAbGroup,
    /// For each canonical generator of `group`, a cocycle: the images in `B`
    /// (raw concatenated canonical coordinates) of the `k` relation generators.
    pub cocycles: Vec<Vec<BigInt>>,
}

impl Ext1 {
    /// The middle group for the class with canonical coordinates `class`.
    pub fn extension(&self, class: &[BigInt]) -> Extension {
        let nb = self.b.ngens();
        let r = self.a.rank();
        let k = self.a.torsion().len();
        let mut phi = vec![BigInt::zero(); k * nb];
        for (c, coc) in class.iter().zip(&self.cocycles) {
            for (x, y) in phi.iter_mut().zip(coc) {
                *x += c * y;
            }
        }
        let n = nb + r + k;
        let mut cols = vec![];
        for (j, d) in self.b.torsion().iter().enumerate() {
            let mut c = vec![BigInt::zero(); n];
            c[self.b.rank() + j] = d.clone();
            cols.push(c);
        }
        for j in 0..k {
            let mut c = vec![BigInt::zero(); n];
            for t in 0..nb {
                c[t] = phi[j * nb + t].clone();
            }
            c[nb + r + j] = -self.a.torsion()[j].clone();
            cols.push(c);
        }
        let p = from_relations(n, &IntMatrix::from_cols(n, &cols));
        let incl_imgs: Vec<Vec<BigInt>> = (0..nb)
            .map(|i| {
                let mut raw = vec![BigInt::zero(); n];
                raw[i] = BigInt::one();
                p.canon(&raw)
            })
            .collect();
        let incl = GroupHom::from_images(self.b.clone(), p.group.clone(), &incl_imgs).expect("inclusion is well defined");
        let proj_imgs: Vec<Vec<BigInt>> =
            (0..p.group.ngens()).map(|j| self.a.reduce(&p.from_canon.col(j)[nb..])).collect();
        let proj = GroupHom::from_images(p.group.clone(), self.a.clone(), &proj_imgs).expect("projection is well defined");
        Extension { middle: p.group, incl, proj }
    }
}

/// `δ*: B^(r+k) → B^k`, `f ↦ (dⱼ f_(r+j))ⱼ` on raw concatenated coordinates.
fn delta_star(a: &FgAbGroup, b: &FgAbGroup) -> IntMatrix {
    let nb = b.ngens();
    let r = a.rank();
    let k = a.torsion().len();
    let mut m = IntMatrix::zeros(k * nb, (r + k) * nb);
    for j in 0..k {
        for t in 0..nb {
            m.set(j * nb + t, (r + j) * nb + t, a.torsion()[j].clone());
        }
    }
    m
}

pub fn hom_group(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let r = a.rank();
    let k = a.torsion().len();
    let src = FgAbGroup::direct_sum(&vec![b.clone(); r + k]);
    let tgt = FgAbGroup::direct_sum(&vec![b.clone(); k]);
    let m = tgt.to_canon.mul(&delta_star(a, b)).mul(&src.from_canon);
    let h = GroupHom::new(src.group, tgt.group, m).expect("delta star is well defined");
    h.kernel().group
}

pub fn ext1(a: &FgAbGroup, b: &FgAbGroup) -> Ext1 {
    let nb = b.ngens();
    let k = a.torsion().len();
    // Raw B^k modulo its torsion and the image of δ*.
    let mut cols = vec![];
    for j in 0..k {
        for (t, d) in b.torsion().iter().enumerate() {
            let mut c = vec![BigInt::zero(); k * nb];
            c[j * nb + b.rank() + t] = d.clone();
            cols.push(c);
        }
    }
    let ds = delta_star(a, b);
    for j in 0..ds.cols() {
        cols.push(ds.col(j));
    }
    let p = from_relations(k * nb, &IntMatrix::from_cols(k * nb, &cols));
    let cocycles = (0..p.group.ngens()).map(|j| p.from_canon.col(j)).collect();
    Ext1 { group: p.group, a: a.clone(), b: b.clone(), cocycles }
}

/// A section `s` with `h ∘ s = id`, or `None` when the surjection does not split.
pub fn split_surjection(h: &GroupHom) -> Result<Option<GroupHom>> {
    if !h.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let ker = h.kernel();
    let mut images = vec![];
    for j in 0..h.target.ngens() {
        let e = h.target.basis(j);
        let x0 = h.solve(&e).expect("surjective map has preimages");
        let d = h.target.gen_order(j);
        if d.is_zero() {
            images.push(x0);
            continue;
        }
        // Need x = x0 + k with k in the kernel and d·x = 0, i.e. K·c = -d·x0 where K·c ranges over d·ker.
        let kgens: Vec<Vec<BigInt>> =
            (0..ker.group.ngens()).map(|i| h.source.scale(&d, &ker.embed.image_of_gen(i))).collect();
        let target = h.source.neg(&h.source.scale(&d, &x0));
        let dk = GroupHom::from_images(
            FgAbGroup::free(kgens.len()),
            h.source.clone(),
            &kgens,
        )
        .expect("map from a free group is well defined");
        match dk.solve(&target) {
            Some(c) => {
                let mut x = x0.clone();
                for (i, ci) in c.iter().enumerate() {
                    let kv = h.source.scale(ci, &ker.embed.image_of_gen(i));
                    x = h.source.add(&x, &kv);
                }
                images.push(x);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(
        GroupHom::from_images(h.target.clone(), h.source.clone(), &images).expect("section respects torsion"),
    ))
}

pub fn cokernel(h: &GroupHom) -> (FgAbGroup, GroupHom) {
    h.cokernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn snf_of_small_matrix() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(2));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(2));
    }

    #[test]
    fn snf_identity_and_zero() {
        let i = IntMatrix::identity(3);
        assert_eq!(smith_normal_form(&i).d, i);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(smith_normal_form(&z).d, z);
    }

    #[test]
    fn determinant_matches_hand_value() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 1], vec![6, 8, 0], vec![1, 1, 1]]);
        assert_eq!(m.determinant(), BigInt::from(-10));
    }

    #[test]
    fn cokernel_of_diagonal() {
        let h = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::free(3), &[bi(&[1, 1, 1])]).unwrap();
        assert_eq!(h.cokernel().0, FgAbGroup::free(2));
        let id = GroupHom::identity(&FgAbGroup::free(1));
        assert!(id.cokernel().0.is_trivial());
        let two = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::free(1), &[bi(&[2])]).unwrap();
        assert_eq!(two.cokernel().0, FgAbGroup::cyclic(2));
    }

    #[test]
    fn ext_and_hom_examples() {
        let e = ext1(&FgAbGroup::cyclic(4), &FgAbGroup::cyclic(6));
        assert_eq!(e.group, FgAbGroup::cyclic(2));
        let e = ext1(&FgAbGroup::free(1), &FgAbGroup::cyclic(6));
        assert!(e.group.is_trivial());
        assert!(hom_group(&FgAbGroup::cyclic(2), &FgAbGroup::free(1)).is_trivial());
        assert_eq!(hom_group(&FgAbGroup::cyclic(4), &FgAbGroup::cyclic(6)), FgAbGroup::cyclic(2));
    }

    #[test]
    fn nonsplit_extension_is_cyclic() {
        // The generator of Ext¹(ℤ/2, ℤ/2) is ℤ/4; the zero class is ℤ/2 ⊕ ℤ/2.
        let e = ext1(&FgAbGroup::cyclic(2), &FgAbGroup::cyclic(2));
        assert_eq!(e.group, FgAbGroup::cyclic(2));
        let ext = e.extension(&bi(&[1]));
        assert_eq!(ext.middle, FgAbGroup::cyclic(4));
        assert!(ext.incl.is_injective());
        assert!(ext.proj.is_surjective());
        let split = e.extension(&bi(&[0]));
        assert_eq!(split.middle, FgAbGroup::new(0, bi(&[2, 2])).unwrap());
    }

    #[test]
    fn split_examples() {
        let q = GroupHom::from_images(FgAbGroup::free(2), FgAbGroup::free(1), &[bi(&[1]), bi(&[-1])]).unwrap();
        let s = split_surjection(&q).unwrap().unwrap();
        assert_eq!(s.apply(&bi(&[1])), bi(&[1, 0]));
        let id = GroupHom::identity(&FgAbGroup::free(1));
        assert_eq!(split_surjection(&id).unwrap().unwrap(), id);
        let p = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::cyclic(2), &[bi(&[1])]).unwrap();
        assert!(split_surjection(&p).unwrap().is_none());
        let two = GroupHom::from_images(FgAbGroup::free(1), FgAbGroup::free(1), &[bi(&[2])]).unwrap();
        assert_eq!(split_surjection(&two), Err(Error::NotSurjective));
    }

    #[test]
    fn torsion_split_found() {
        // ℤ ⊕ ℤ/2 → ℤ/2 projecting to the torsion part splits.
        let src = FgAbGroup::new(1, bi(&[2])).unwrap();
        let h = GroupHom::from_images(src.clone(), FgAbGroup::cyclic(2), &[bi(&[1]), bi(&[1])]).unwrap();
        let s = split_surjection(&h).unwrap().unwrap();
        assert!(h.after(&s) == GroupHom::identity(&FgAbGroup::cyclic(2)));
    }

    #[test]
    fn kernel_and_solve() {
        let h = GroupHom::from_images(FgAbGroup::free(2), FgAbGroup::free(1), &[bi(&[2]), bi(&[4])]).unwrap();
        let k = h.kernel();
        assert_eq!(k.group, FgAbGroup::free(1));
        assert!(h.solve(&bi(&[3])).is_none());
        let x = h.solve(&bi(&[6])).unwrap();
        assert_eq!(h.apply(&x), bi(&[6]));
    }

    #[test]
    fn relations_normalize_signs() {
        // ℤ²/(1,1): the free coordinate is x − y up to sign, chosen with positive leading entry.
        let p = from_relations(2, &IntMatrix::from_rows(&[vec![1], vec![1]]));
        assert_eq!(p.group, FgAbGroup::free(1));
        assert!(p.to_canon.get(0, 0) > &BigInt::zero());
        assert_eq!(p.canon(&bi(&[1, 0])), bi(&[1]));
        assert_eq!(p.canon(&bi(&[0, 1])), bi(&[-1]));
    }
}
