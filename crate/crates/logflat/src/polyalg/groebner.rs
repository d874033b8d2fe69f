//! Buchberger's algorithm for submodules of free modules `k[x]^r`.
//!
//! Ideals are handled as submodules of rank one.

use super::field::Coef;
use super::poly::{divides, mono_div, mono_lcm, mono_mul, Mono, Poly, PolyRing};
use num_traits::{One, Zero};
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

/// How positions and monomials are combined into a module term order.
/// Positions with smaller index are larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Position first, then monomial.
    Pot,
    /// Monomial first, then position.
    Top,
}

/// Element of `k[x]^r`, with terms sorted decreasingly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    pub terms: Vec<(usize, Mono, Coef)>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead_pos(&self) -> usize {
        self.terms[0].0
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].1
    }

    pub fn lc(&self) -> &Coef {
        &self.terms[0].2
    }

    /// Largest position used, plus one.
    pub fn width(&self) -> usize {
        self.terms.iter().map(|t| t.0 + 1).max().unwrap_or(0)
    }
}

/// Ring plus module order; all vector arithmetic goes through it.
#[derive(Clone, Copy, Debug)]
pub struct Ctx<'a> {
    pub ring: &'a PolyRing,
    pub ord: ModuleOrder,
}

impl<'a> Ctx<'a> {
    pub fn new(ring: &'a PolyRing, ord: ModuleOrder) -> Self {
        Ctx { ring, ord }
    }

    pub fn cmp(&self, a: (usize, &[u32]), b: (usize, &[u32])) -> Ordering {
        match self.ord {
            ModuleOrder::Pot => b.0.cmp(&a.0).then_with(|| self.ring.cmp(a.1, b.1)),
            ModuleOrder::Top => self.ring.cmp(a.1, b.1).then_with(|| b.0.cmp(&a.0)),
        }
    }

    fn sort(&self, terms: &mut [(usize, Mono, Coef)]) {
        terms.sort_by(|a, b| self.cmp((b.0, &b.1), (a.0, &a.1)));
    }

    pub fn from_terms(&self, terms: Vec<(usize, Mono, Coef)>) -> Vector {
        let mut acc: std::collections::HashMap<(usize, Mono), Coef> = Default::default();
        for (p, m, c) in terms {
            let e = acc.entry((p, m)).or_insert_with(Coef::zero);
            *e = &*e + c;
        }
        let mut terms: Vec<_> = acc
            .into_iter()
            .map(|((p, m), c)| (p, m, self.ring.field.norm(c)))
            .filter(|t| !t.2.is_zero())
            .collect();
        self.sort(&mut terms);
        Vector { terms }
    }

    pub fn from_poly(&self, f: &Poly, pos: usize) -> Vector {
        let mut terms: Vec<_> = f.terms.iter().map(|(m, c)| (pos, m.clone(), c.clone())).collect();
        self.sort(&mut terms);
        Vector { terms }
    }

    pub fn from_polys(&self, fs: &[Poly]) -> Vector {
        let mut terms = vec![];
        for (i, f) in fs.iter().enumerate() {
            terms.extend(f.terms.iter().map(|(m, c)| (i, m.clone(), c.clone())));
        }
        self.sort(&mut terms);
        Vector { terms }
    }

    pub fn to_polys(&self, v: &Vector, rank: usize) -> Vec<Poly> {
        let mut out: Vec<Vec<(Mono, Coef)>> = vec![vec![]; rank.max(v.width())];
        for (p, m, c) in &v.terms {
            out[*p].push((m.clone(), c.clone()));
        }
        out.truncate(rank.max(v.width()));
        out.into_iter()
            .map(|mut t| {
                t.sort_by(|a, b| self.ring.cmp(&b.0, &a.0));
                Poly { terms: t }
            })
            .collect()
    }

    pub fn component(&self, v: &Vector, pos: usize) -> Poly {
        let mut t: Vec<(Mono, Coef)> =
            v.terms.iter().filter(|x| x.0 == pos).map(|x| (x.1.clone(), x.2.clone())).collect();
        t.sort_by(|a, b| self.ring.cmp(&b.0, &a.0));
        Poly { terms: t }
    }

    pub fn unit(&self, pos: usize) -> Vector {
        Vector { terms: vec![(pos, self.ring.one_mono(), Coef::one())] }
    }

    /// `v + c·m·w`.
    pub fn add_scaled(&self, v: &Vector, w: &Vector, c: &Coef, m: Option<&[u32]>) -> Vector {
        let f = &self.ring.field;
        let mut out = Vec::with_capacity(v.terms.len() + w.terms.len());
        let shifted = |t: &(usize, Mono, Coef)| -> (usize, Mono, Coef) {
            let mono = match m {
                Some(m) => mono_mul(&t.1, m),
                None => t.1.clone(),
            };
            (t.0, mono, f.mul(&t.2, c))
        };
        let (mut i, mut j) = (0, 0);
        let mut wj = w.terms.first().map(shifted);
        loop {
            match (v.terms.get(i), wj.as_ref()) {
                (Some(a), Some(b)) => match self.cmp((a.0, &a.1), (b.0, &b.1)) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(wj.take().unwrap());
                        j += 1;
                        wj = w.terms.get(j).map(shifted);
                    }
                    Ordering::Equal => {
                        let s = f.add(&a.2, &b.2);
                        if !s.is_zero() {
                            out.push((a.0, a.1.clone(), s));
                        }
                        i += 1;
                        j += 1;
                        wj = w.terms.get(j).map(shifted);
                    }
                },
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => {
                    out.push(wj.take().unwrap());
                    j += 1;
                    wj = w.terms.get(j).map(shifted);
                }
                (None, None) => break,
            }
        }
        out.retain(|t| !t.2.is_zero());
        Vector { terms: out }
    }

    pub fn add(&self, v: &Vector, w: &Vector) -> Vector {
        self.add_scaled(v, w, &Coef::one(), None)
    }

    pub fn sub(&self, v: &Vector, w: &Vector) -> Vector {
        self.add_scaled(v, w, &-Coef::one(), None)
    }

    pub fn scale(&self, v: &Vector, c: &Coef) -> Vector {
        let c = self.ring.field.norm(c.clone());
        if c.is_zero() {
            return Vector::zero();
        }
        Vector { terms: v.terms.iter().map(|(p, m, a)| (*p, m.clone(), self.ring.field.mul(a, &c))).collect() }
    }

    /// Polynomial times vector.
    pub fn mul_poly(&self, f: &Poly, v: &Vector) -> Vector {
        let mut acc = Vector::zero();
        for (m, c) in &f.terms {
            acc = self.add_scaled(&acc, v, c, Some(m));
        }
        acc
    }

    /// Σ fᵢ·vᵢ.
    pub fn combine(&self, coeffs: &[Poly], vs: &[Vector]) -> Vector {
        let mut acc = Vector::zero();
        for (f, v) in coeffs.iter().zip(vs) {
            acc = self.add(&acc, &self.mul_poly(f, v));
        }
        acc
    }

    /// Moves position `p` to `map(p)`; the module order is preserved only if
    /// `map` is increasing, so the result is re-sorted.
    pub fn reindex(&self, v: &Vector, map: impl Fn(usize) -> usize) -> Vector {
        let mut terms: Vec<_> = v.terms.iter().map(|(p, m, c)| (map(*p), m.clone(), c.clone())).collect();
        self.sort(&mut terms);
        Vector { terms }
    }

    pub fn monic(&self, v: &Vector) -> Vector {
        if v.is_zero() {
            return v.clone();
        }
        let inv = self.ring.field.inv(v.lc());
        self.scale(v, &inv)
    }

    fn find_reducer<'b>(&self, pos: usize, m: &[u32], basis: &'b [Vector]) -> Option<&'b Vector> {
        basis.iter().find(|g| !g.is_zero() && g.lead_pos() == pos && divides(g.lm(), m))
    }

    /// Fully reduced normal form modulo a list of vectors (a Gröbner basis
    /// for a canonical answer).
    pub fn nf(&self, v: &Vector, basis: &[Vector]) -> Vector {
        let f = &self.ring.field;
        let mut rest: Vec<(usize, Mono, Coef)> = vec![];
        let mut p = v.clone();
        while !p.is_zero() {
            let (pos, m, c) = p.terms[0].clone();
            match self.find_reducer(pos, &m, basis) {
                Some(g) => {
                    let q = mono_div(&m, g.lm());
                    let k = f.neg(&f.div(&c, g.lc()));
                    p = self.add_scaled(&p, g, &k, Some(&q));
                }
                None => {
                    rest.push((pos, m, c));
                    p.terms.remove(0);
                }
            }
        }
        Vector { terms: rest }
    }

    pub fn reduces_to_zero(&self, v: &Vector, gb: &[Vector]) -> bool {
        self.nf(v, gb).is_zero()
    }

    fn spoly(&self, a: &Vector, b: &Vector) -> Vector {
        let l = mono_lcm(a.lm(), b.lm());
        let f = &self.ring.field;
        let ka = f.inv(a.lc());
        let kb = f.neg(&f.inv(b.lc()));
        let left = self.add_scaled(&Vector::zero(), a, &ka, Some(&mono_div(&l, a.lm())));
        self.add_scaled(&left, b, &kb, Some(&mono_div(&l, b.lm())))
    }

    /// Reduced Gröbner basis, sorted increasingly by leading term.
    pub fn groebner(&self, gens: &[Vector]) -> Vec<Vector> {
        let ideal_case = gens.iter().all(|g| g.terms.iter().all(|t| t.0 == 0));
        let mut basis: Vec<Vector> = vec![];
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        let mut heap: BinaryHeap<Reverse<(u32, usize, usize, usize)>> = BinaryHeap::new();
        let mut seq = 0usize;

        let mut push = |basis: &mut Vec<Vector>,
                        pending: &mut HashSet<(usize, usize)>,
                        heap: &mut BinaryHeap<Reverse<(u32, usize, usize, usize)>>,
                        v: Vector| {
            let v = self.monic(&v);
            let n = basis.len();
            for (i, g) in basis.iter().enumerate() {
                if g.is_zero() || g.lead_pos() != v.lead_pos() {
                    continue;
                }
                let l = mono_lcm(g.lm(), v.lm());
                let deg: u32 = l.iter().sum();
                pending.insert((i, n));
                heap.push(Reverse((deg, seq, i, n)));
                seq += 1;
            }
            basis.push(v);
        };

        for g in gens {
            let r = self.nf(g, &basis);
            if !r.is_zero() {
                push(&mut basis, &mut pending, &mut heap, r);
            }
        }

        while let Some(Reverse((_, _, i, j))) = heap.pop() {
            if !pending.remove(&(i, j)) {
                continue;
            }
            let (a, b) = (&basis[i], &basis[j]);
            if ideal_case && a.lm().iter().zip(b.lm()).all(|(x, y)| *x == 0 || *y == 0) {
                continue;
            }
            let l = mono_lcm(a.lm(), b.lm());
            let pos = a.lead_pos();
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].lead_pos() == pos
                    && divides(basis[k].lm(), &l)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            let s = self.spoly(a, b);
            let r = self.nf(&s, &basis);
            if !r.is_zero() {
                push(&mut basis, &mut pending, &mut heap, r);
            }
        }
        self.reduce_basis(basis)
    }

    /// Minimalizes and interreduces a Gröbner basis.
    pub fn reduce_basis(&self, basis: Vec<Vector>) -> Vec<Vector> {
        let mut keep: Vec<Vector> = vec![];
        for (i, g) in basis.iter().enumerate() {
            let redundant = basis.iter().enumerate().any(|(k, h)| {
                k != i
                    && h.lead_pos() == g.lead_pos()
                    && divides(h.lm(), g.lm())
                    && (h.lm() != g.lm() || k < i)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        let mut out = vec![];
        for i in 0..keep.len() {
            let others: Vec<Vector> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| v.clone()).collect();
            out.push(self.monic(&self.nf(&keep[i], &others)));
        }
        out.sort_by(|a, b| self.cmp((a.lead_pos(), a.lm()), (b.lead_pos(), b.lm())));
        out
    }

    /// Is `gens` already a Gröbner basis (all S-vectors reduce to zero)?
    pub fn is_groebner(&self, gens: &[Vector]) -> bool {
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].is_zero() || gens[j].is_zero() || gens[i].lead_pos() != gens[j].lead_pos() {
                    continue;
                }
                if !self.reduces_to_zero(&self.spoly(&gens[i], &gens[j]), gens) {
                    return false;
                }
            }
        }
        true
    }
}

/// Ideal Gröbner basis as polynomials.
pub fn ideal_groebner(ring: &PolyRing, gens: &[Poly]) -> Vec<Poly> {
    let ctx = Ctx::new(ring, ModuleOrder::Pot);
    let vs: Vec<Vector> = gens.iter().map(|g| ctx.from_poly(g, 0)).collect();
    ctx.groebner(&vs).iter().map(|v| ctx.component(v, 0)).collect()
}

pub fn ideal_nf(ring: &PolyRing, f: &Poly, gb: &[Poly]) -> Poly {
    let ctx = Ctx::new(ring, ModuleOrder::Pot);
    let vs: Vec<Vector> = gb.iter().map(|g| ctx.from_poly(g, 0)).collect();
    ctx.component(&ctx.nf(&ctx.from_poly(f, 0), &vs), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::Field;

    #[test]
    fn linear_ideal_basis() {
        let r = PolyRing::new(Field::Q, &["x", "y"]);
        let gb = ideal_groebner(&r, &[r.parse("x+y").unwrap(), r.parse("x-y").unwrap()]);
        assert_eq!(gb, vec![r.parse("y").unwrap(), r.parse("x").unwrap()]);
    }

    #[test]
    fn twisted_cubic() {
        let r = PolyRing::new(Field::Q, &["x", "y", "z", "w"]);
        let gens: Vec<Poly> =
            ["x*z - y^2", "y*w - z^2", "x*w - y*z"].iter().map(|s| r.parse(s).unwrap()).collect();
        let gb = ideal_groebner(&r, &gens);
        assert_eq!(gb.len(), 3);
        let ctx = Ctx::new(&r, ModuleOrder::Pot);
        let vs: Vec<Vector> = gb.iter().map(|g| ctx.from_poly(g, 0)).collect();
        assert!(ctx.is_groebner(&vs));
    }

    #[test]
    fn normal_form_is_idempotent() {
        let r = PolyRing::new(Field::Fp(7), &["x", "y"]);
        let gb = ideal_groebner(&r, &[r.parse("x^2 - y").unwrap(), r.parse("x*y - 1").unwrap()]);
        let f = r.parse("x^5 + 3*x*y^2 + 2").unwrap();
        let n1 = ideal_nf(&r, &f, &gb);
        assert_eq!(ideal_nf(&r, &n1, &gb), n1);
    }
}
