//! Presentations of monoid algebras `k[P]` by toric ideals.

use super::field::{Coef, Field};
use super::module::{saturate, RingPresentation};
use super::poly::{Mono, Poly, PolyRing};
use crate::abgrp::{integer_nullspace, IntMatrix};
use crate::monoid::{Elem, FineMonoid};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `k[P] = k[z₁,…,zₙ]/I` with `zᵢ` of degree the `i`-th generator of `P`.
#[derive(Clone, Debug)]
pub struct ToricAlgebra {
    pub monoid: FineMonoid,
    pub pres: RingPresentation,
}

/// Generators of the lattice `{u ∈ ℤⁿ : Σ uᵢ gᵢ = 0 in P^gp}`.
pub fn relation_lattice(p: &FineMonoid) -> Vec<Vec<BigInt>> {
    let amb = p.ambient();
    let n = p.ngens();
    let rows = amb.ngens();
    let mut cols: Vec<Vec<BigInt>> = p.gens().to_vec();
    for (i, d) in amb.torsion().iter().enumerate() {
        let mut c = vec![BigInt::zero(); rows];
        c[amb.rank() + i] = d.clone();
        cols.push(c);
    }
    let m = IntMatrix::from_cols(rows, &cols);
    integer_nullspace(&m)
        .into_iter()
        .map(|v| v[..n].to_vec())
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect()
}

fn exponent(x: &BigInt) -> u32 {
    x.to_u32().expect("lattice exponent fits in u32")
}

/// Binomial `z^{u⁺} − z^{u⁻}`.
pub fn lattice_binomial(ring: &PolyRing, u: &[BigInt]) -> Poly {
    let plus: Mono = u.iter().map(|x| if x.is_positive() { exponent(x) } else { 0 }).collect();
    let minus: Mono = u.iter().map(|x| if x.is_negative() { exponent(&-x) } else { 0 }).collect();
    ring.sub(&ring.monomial(plus, Coef::one()), &ring.monomial(minus, Coef::one()))
}

/// Default variable names `z1, …, zn`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

/// Toric ideal of `P`: the lattice ideal of the relation lattice, obtained by
/// saturating lattice binomials at each variable in turn.
pub fn toric_ideal(p: &FineMonoid, field: Field) -> ToricAlgebra {
    toric_ideal_named(p, field, default_names(p.ngens()))
}

pub fn toric_ideal_named(p: &FineMonoid, field: Field, names: Vec<String>) -> ToricAlgebra {
    let ring = PolyRing::with_names(field, names);
    let mut gens: Vec<Poly> = relation_lattice(p).iter().map(|u| lattice_binomial(&ring, u)).collect();
    if !gens.is_empty() {
        for i in 0..ring.nvars() {
            gens = saturate(&ring, &gens, &ring.var(i));
        }
    }
    ToricAlgebra { monoid: p.clone(), pres: RingPresentation::new(ring, gens) }
}

impl ToricAlgebra {
    pub fn ring(&self) -> &PolyRing {
        &self.pres.ring
    }

    /// Degree in `P^gp` of a monomial.
    pub fn degree(&self, m: &[u32]) -> Elem {
        let lambda: Vec<BigInt> = m.iter().map(|e| BigInt::from(*e)).collect();
        self.monoid.combine(&lambda)
    }

    /// A monomial of degree `x`, if `x ∈ P`.
    pub fn monomial_of(&self, x: &[BigInt]) -> Option<Mono> {
        let cert = self.monoid.certificate(x).ok()??;
        Some(cert.iter().map(exponent).collect())
    }

    /// Is every term of `f` of the same degree?
    pub fn is_homogeneous(&self, f: &Poly) -> bool {
        let mut degs = f.terms.iter().map(|(m, _)| self.degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::FgAbGroup;

    #[test]
    fn quadric_cone() {
        let p = FineMonoid::from_rows(2, &[vec![1, 0], vec![1, 1], vec![1, 2]]);
        let t = toric_ideal(&p, Field::Q);
        let r = t.ring();
        assert_eq!(t.pres.gb(), &[r.parse("z2^2 - z1*z3").unwrap()]);
    }

    #[test]
    fn free_monoid_has_zero_ideal() {
        let t = toric_ideal(&FineMonoid::free_nat(2), Field::Q);
        assert!(t.pres.gb().is_empty());
    }

    #[test]
    fn torsion_and_units() {
        let t = toric_ideal(&FineMonoid::group(&FgAbGroup::cyclic(2)), Field::Q);
        let r = t.ring();
        assert_eq!(t.pres.gb(), &[r.parse("z1^2 - 1").unwrap()]);
        let z = FineMonoid::group(&FgAbGroup::free(1));
        let t = toric_ideal(&z, Field::Q);
        let r = t.ring();
        assert_eq!(t.pres.gb(), &[r.parse("z1*z2 - 1").unwrap()]);
    }

    #[test]
    fn saturation_is_needed() {
        // ⟨(1,0),(1,1),(1,2),(1,3)⟩ needs the twisted cubic, not just a lattice basis.
        let p = FineMonoid::from_rows(2, &[vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]);
        let t = toric_ideal(&p, Field::Q);
        assert_eq!(t.pres.gb().len(), 3);
        for g in t.pres.gb() {
            assert!(t.is_homogeneous(g));
        }
    }
}
