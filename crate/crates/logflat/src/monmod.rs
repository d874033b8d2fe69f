//! Finitely generated modules over fine monoids.
//!
//! A module is a finite union of translates `(g + P, f)` inside `P^gp × F`,
//! where `F` is a finite set of components. For such modules flatness reduces
//! to a check on pairs of generators, and a flat module has a basis made of
//! one minimal generator per class.

use crate::abgrp::GroupHom;
use crate::error::{Error, Result};
use crate::monoid::{Elem, FineMonoid, MonoidHom, MonoidIdeal};
use num_bigint::BigInt;
use std::collections::{BTreeMap, HashMap};

/// Module element: an ambient group element in a component.
pub type MElem = (Elem, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// A finite union of translates inside `P^gp × F`.
    Embedded,
    /// Free with the generators as basis.
    Free,
    /// An ideal of the owner, one component.
    IdealSubmodule,
    /// Translates of the localization `S⁻¹P`, one generator per component.
    Localized { inverted: Vec<Elem> },
}

#[derive(Clone, Debug)]
pub struct PModule {
    pub owner: FineMonoid,
    pub ncomp: usize,
    pub gens: Vec<MElem>,
    pub kind: ModuleKind,
    acting: FineMonoid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatVerdict {
    Flat,
    /// Two generators in one class without a common lower bound.
    NotFlat { witness: (MElem, MElem) },
}

impl FlatVerdict {
    pub fn is_flat(&self) -> bool {
        matches!(self, FlatVerdict::Flat)
    }
}

/// A basis together with the evidence that it is one.
#[derive(Clone, Debug)]
pub struct ModuleBasis {
    pub elems: Vec<MElem>,
    /// Every defining generator decomposes over the basis.
    pub covers_generators: bool,
    /// Number of window elements whose decomposition was re-verified.
    pub window_checked: usize,
}

#[derive(Clone, Debug)]
pub enum BasisOutcome {
    Basis(ModuleBasis),
    NotFlat { witness: (MElem, MElem) },
}

impl PModule {
    pub fn embedded(owner: &FineMonoid, ncomp: usize, gens: Vec<MElem>) -> Result<Self> {
        Self::build(owner, ncomp, gens, ModuleKind::Embedded)
    }

    /// Free module of the given rank with basis `(0, i)`.
    pub fn free(owner: &FineMonoid, rank: usize) -> Self {
        let gens = (0..rank).map(|i| (owner.ambient().zero(), i)).collect();
        Self::build(owner, rank, gens, ModuleKind::Free).expect("zero lies in the ambient group")
    }

    pub fn ideal(i: &MonoidIdeal) -> Self {
        let gens = i.gens.iter().map(|g| (g.clone(), 0)).collect();
        Self::build(&i.owner, 1, gens, ModuleKind::IdealSubmodule).expect("ideal generators lie in the ambient group")
    }

    /// `⊔ (gᵢ + S⁻¹P, i)`.
    pub fn localized(owner: &FineMonoid, inverted: Vec<Elem>, shifts: Vec<Elem>) -> Result<Self> {
        let n = shifts.len();
        let gens = shifts.into_iter().zip(0..n).collect();
        Self::build(owner, n, gens, ModuleKind::Localized { inverted })
    }

    fn build(owner: &FineMonoid, ncomp: usize, gens: Vec<MElem>, kind: ModuleKind) -> Result<Self> {
        for (g, c) in &gens {
            owner.ambient().check(g)?;
            if *c >= ncomp {
                return Err(Error::InvalidInput(format!("component {c} out of range")));
            }
        }
        let gens = gens.into_iter().map(|(g, c)| (owner.ambient().reduce(&g), c)).collect();
        let acting = match &kind {
            ModuleKind::Localized { inverted } => owner.localize(inverted)?.0,
            _ => owner.clone(),
        };
        Ok(PModule { owner: owner.clone(), ncomp, gens, kind, acting })
    }

    fn amb(&self) -> &crate::abgrp::FgAbGroup {
        self.owner.ambient()
    }

    /// Is `x` in `(t + P, f)` for some generator `(t, f)`?
    pub fn mod_member(&self, x: &MElem) -> Result<bool> {
        Ok(self.generator_below(x)?.is_some())
    }

    /// Index of a generator `(t, f)` with `x − t` in the acting monoid.
    pub fn generator_below(&self, x: &MElem) -> Result<Option<usize>> {
        self.amb().check(&x.0)?;
        for (i, (t, c)) in self.gens.iter().enumerate() {
            if *c == x.1 && self.acting.member(&self.amb().sub(&x.0, t))? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// `a ≤ b` in the module order: same component and `b − a ∈ P`.
    fn leq(&self, a: &MElem, b: &MElem) -> bool {
        a.1 == b.1 && self.acting.contains(&self.amb().sub(&b.0, &a.0))
    }

    /// Are two elements in the same class, i.e. same component and difference in `P^gp`?
    pub fn same_class(&self, a: &MElem, b: &MElem) -> bool {
        a.1 == b.1 && self.acting.gp().contains(&self.amb().sub(&a.0, &b.0))
    }

    /// Flatness via comparability of generator pairs.
    pub fn is_flat(&self) -> Result<FlatVerdict> {
        if let ModuleKind::Localized { .. } = self.kind {
            let mut seen = vec![false; self.ncomp];
            for (_, c) in &self.gens {
                if seen[*c] {
                    return Err(Error::UnsupportedModuleClass(
                        "localized modules need one generator per component".into(),
                    ));
                }
                seen[*c] = true;
            }
            return Ok(FlatVerdict::Flat);
        }
        if self.kind == ModuleKind::Free {
            return Ok(FlatVerdict::Flat);
        }
        let n = self.gens.len();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.gens[i], &self.gens[j]);
                if !self.same_class(a, b) {
                    continue;
                }
                let bounded = self.gens.iter().any(|t| self.leq(t, a) && self.leq(t, b));
                if !bounded {
                    return Ok(FlatVerdict::NotFlat { witness: (a.clone(), b.clone()) });
                }
            }
        }
        Ok(FlatVerdict::Flat)
    }

    /// One minimal generator per class, with a verified decomposition certificate.
    pub fn extract_basis(&self, window: usize) -> Result<BasisOutcome> {
        if let ModuleKind::Localized { inverted } = &self.kind {
            if !inverted.iter().all(|s| self.owner.is_unit(s)) {
                return Err(Error::NotFinitelyGenerated);
            }
        }
        if let FlatVerdict::NotFlat { witness } = self.is_flat()? {
            return Ok(BasisOutcome::NotFlat { witness });
        }
        let mut reps: Vec<MElem> = vec![];
        for g in &self.gens {
            match reps.iter().position(|r| self.same_class(r, g)) {
                None => reps.push(g.clone()),
                Some(k) => {
                    let cur = reps[k].clone();
                    if self.leq(&cur, g) {
                        continue;
                    }
                    let lower = self
                        .gens
                        .iter()
                        .find(|t| self.leq(t, &cur) && self.leq(t, g))
                        .expect("flat modules have common lower bounds for generator pairs")
                        .clone();
                    reps[k] = lower;
                }
            }
        }
        let covers_generators = self.gens.iter().all(|g| self.decompose_with(&reps, g).is_some());
        let mut window_checked = 0;
        for w in self.owner.window(window) {
            for g in &self.gens {
                let x = (self.amb().add(&g.0, &w), g.1);
                if let Some((k, p)) = self.decompose_with(&reps, &x) {
                    debug_assert_eq!(self.amb().add(&reps[k].0, &p), x.0);
                    window_checked += 1;
                } else {
                    return Err(Error::UnsupportedModuleClass("basis certificate failed on the window".into()));
                }
            }
        }
        Ok(BasisOutcome::Basis(ModuleBasis { elems: reps, covers_generators, window_checked }))
    }

    /// `x = p + s` for the unique basis element `s` of its class.
    pub fn decompose_with(&self, basis: &[MElem], x: &MElem) -> Option<(usize, Elem)> {
        basis.iter().enumerate().find_map(|(k, s)| {
            if s.1 != x.1 {
                return None;
            }
            let p = self.amb().sub(&x.0, &s.0);
            if self.acting.contains(&p) {
                Some((k, p))
            } else {
                None
            }
        })
    }

    /// Does `P × S → M` hit every defining generator, with `S ⊆ M`?
    pub fn is_finitely_generated(&self, s: &[MElem]) -> Result<bool> {
        if let ModuleKind::Localized { inverted } = &self.kind {
            if !inverted.iter().all(|x| self.owner.is_unit(x)) {
                return Ok(false);
            }
        }
        for x in s {
            if !self.mod_member(x)? {
                return Ok(false);
            }
        }
        let sub = PModule::embedded(&self.owner, self.ncomp, s.to_vec())?;
        for g in &self.gens {
            if !sub.mod_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn basis_if_flat(&self) -> Result<Option<Vec<MElem>>> {
        match &self.kind {
            ModuleKind::Free => Ok(Some(self.gens.clone())),
            ModuleKind::Localized { .. } => Ok(None),
            _ => match self.extract_basis(0)? {
                BasisOutcome::Basis(b) => Ok(Some(b.elems)),
                BasisOutcome::NotFlat { .. } => Ok(None),
            },
        }
    }

    /// `M ⊗_P N`.
    pub fn tensor(&self, other: &PModule) -> Result<PModule> {
        if self.owner != other.owner {
            return Err(Error::OwnerMismatch);
        }
        let amb = self.amb();
        let combine = |a: &PModule, b: &PModule, basis: &[MElem], swap: bool| -> Result<PModule> {
            let mut gens = vec![];
            for (i, s) in basis.iter().enumerate() {
                for (t, c) in &b.gens {
                    let comp = if swap { c * basis.len() + i } else { i * b.ncomp + c };
                    gens.push((amb.add(&s.0, t), comp));
                }
            }
            let ncomp = basis.len() * b.ncomp;
            if let ModuleKind::Localized { inverted } = &b.kind {
                let mut shifts = vec![amb.zero(); ncomp];
                for (g, c) in gens {
                    shifts[c] = g;
                }
                return PModule::localized(&a.owner, inverted.clone(), shifts);
            }
            let kind = if a.kind == ModuleKind::Free && b.kind == ModuleKind::Free {
                ModuleKind::Free
            } else {
                ModuleKind::Embedded
            };
            PModule::build(&a.owner, ncomp, gens, kind)
        };
        if let Some(b) = self.basis_if_flat()? {
            return combine(self, other, &b, false);
        }
        if let Some(b) = other.basis_if_flat()? {
            return combine(other, self, &b, true);
        }
        if let (ModuleKind::Localized { inverted: i1 }, ModuleKind::Localized { inverted: i2 }) =
            (&self.kind, &other.kind)
        {
            let mut inv = i1.clone();
            inv.extend(i2.iter().cloned());
            let mut shifts = vec![];
            for (s, _) in &self.gens {
                for (t, _) in &other.gens {
                    shifts.push(amb.add(s, t));
                }
            }
            return PModule::localized(&self.owner, inv, shifts);
        }
        if matches!(self.kind, ModuleKind::Localized { .. }) || matches!(other.kind, ModuleKind::Localized { .. }) {
            return Err(Error::UnsupportedModuleClass("tensor of a localized module with a non-flat module".into()));
        }
        // Neither factor is flat: the naive sum module is the tensor product
        // exactly when the bilinearity congruence identifies every pair with equal sum.
        let ncomp = self.ncomp * other.ncomp;
        let mut gens = vec![];
        for (s, c1) in &self.gens {
            for (t, c2) in &other.gens {
                gens.push((amb.add(s, t), c1 * other.ncomp + c2));
            }
        }
        let window = self.owner.window(3);
        let elems = |m: &PModule| -> Vec<MElem> {
            let mut out = vec![];
            for (g, c) in &m.gens {
                for w in &window {
                    let x = (amb.add(g, w), *c);
                    if !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
            out
        };
        let ea = elems(self);
        let eb = elems(other);
        let mut index = HashMap::new();
        let mut pairs = vec![];
        for a in &ea {
            for b in &eb {
                index.insert((a.clone(), b.clone()), pairs.len());
                pairs.push((a.clone(), b.clone()));
            }
        }
        let mut uf = UnionFind::new(pairs.len());
        for (a, b) in &pairs {
            for p in self.owner.gens() {
                let left = ((amb.add(&a.0, p), a.1), b.clone());
                let right = (a.clone(), (amb.add(&b.0, p), b.1));
                if let (Some(&l), Some(&r)) = (index.get(&left), index.get(&right)) {
                    uf.union(l, r);
                }
            }
        }
        let mut fibres: BTreeMap<(Elem, usize), Vec<usize>> = BTreeMap::new();
        for (k, (a, b)) in pairs.iter().enumerate() {
            fibres.entry((amb.add(&a.0, &b.0), a.1 * other.ncomp + b.1)).or_default().push(k);
        }
        for ks in fibres.values() {
            let root = uf.find(ks[0]);
            if ks.iter().any(|&k| uf.find(k) != root) {
                return Err(Error::UnsupportedModuleClass("tensor product is not embeddable".into()));
            }
        }
        PModule::build(&self.owner, ncomp, gens, ModuleKind::Embedded)
    }

    /// Extension of scalars `M ⊗_Q P` along `h: Q → P`.
    pub fn base_change(&self, h: &MonoidHom) -> Result<PModule> {
        if self.owner != h.source {
            return Err(Error::OwnerMismatch);
        }
        let img = |x: &Elem| h.apply(x);
        if let ModuleKind::Localized { inverted } = &self.kind {
            let inv = inverted.iter().map(img).collect::<Result<Vec<_>>>()?;
            let shifts = self.gens.iter().map(|(g, _)| img(g)).collect::<Result<Vec<_>>>()?;
            return PModule::localized(&h.target, inv, shifts);
        }
        if let Some(basis) = self.basis_if_flat()? {
            let gens = basis.iter().enumerate().map(|(i, (s, _))| Ok((img(s)?, i))).collect::<Result<Vec<_>>>()?;
            let kind = if self.kind == ModuleKind::Free { ModuleKind::Free } else { ModuleKind::Embedded };
            return PModule::build(&h.target, basis.len(), gens, kind);
        }
        let gens = self.gens.iter().map(|(g, c)| Ok((img(g)?, *c))).collect::<Result<Vec<_>>>()?;
        let cand = PModule::build(&h.target, self.ncomp, gens, ModuleKind::Embedded)?;
        // Check on a window that (m, p) ~ (m', p') whenever h(m) + p = h(m') + p'.
        let tamb = h.target.ambient();
        let qwin = self.owner.window(2);
        let pwin = h.target.window(2);
        let mut melems: Vec<MElem> = vec![];
        for (g, c) in &self.gens {
            for w in &qwin {
                let x = (self.amb().add(g, w), *c);
                if !melems.contains(&x) {
                    melems.push(x);
                }
            }
        }
        let mut index = HashMap::new();
        let mut pairs = vec![];
        for m in &melems {
            for p in &pwin {
                index.insert((m.clone(), p.clone()), pairs.len());
                pairs.push((m.clone(), p.clone()));
            }
        }
        let mut uf = UnionFind::new(pairs.len());
        for (m, p) in &pairs {
            for q in self.owner.gens() {
                let left = ((self.amb().add(&m.0, q), m.1), p.clone());
                let right = (m.clone(), tamb.add(p, &img(q)?));
                if let (Some(&l), Some(&r)) = (index.get(&left), index.get(&right)) {
                    uf.union(l, r);
                }
            }
        }
        let mut fibres: BTreeMap<(Elem, usize), Vec<usize>> = BTreeMap::new();
        for (k, (m, p)) in pairs.iter().enumerate() {
            fibres.entry((tamb.add(&img(&m.0)?, p), m.1)).or_default().push(k);
        }
        for ks in fibres.values() {
            let root = uf.find(ks[0]);
            if ks.iter().any(|&k| uf.find(k) != root) {
                return Err(Error::UnsupportedModuleClass("base change is not embeddable".into()));
            }
        }
        Ok(cand)
    }

    /// `M̄ = M ⊗_P P̄` over the sharpening of the owner.
    pub fn sharpen(&self) -> Result<PModule> {
        let (_, sharp, proj) = self.owner.units_sharpen();
        let h = MonoidHom::from_ambient_map(&self.owner, &sharp, &proj)?;
        self.base_change(&h)
    }

    /// Drops generators lying in the translate of another generator.
    pub fn pruned(&self) -> PModule {
        let keep = self
            .gens
            .iter()
            .enumerate()
            .filter(|(i, g)| {
                !self.gens.iter().enumerate().any(|(j, t)| j != *i && self.leq(t, g) && (!self.leq(g, t) || j < *i))
            })
            .map(|(_, g)| g.clone())
            .collect();
        let mut m = self.clone();
        m.gens = keep;
        m
    }

    /// Canonical description: pruned generators per component, each
    /// component translated so its smallest generator is zero, components sorted.
    pub fn canonical_form(&self) -> Vec<Vec<Elem>> {
        let p = self.pruned();
        let mut comps: Vec<Vec<Elem>> = vec![vec![]; self.ncomp];
        for (g, c) in &p.gens {
            comps[*c].push(g.clone());
        }
        for c in comps.iter_mut() {
            c.sort();
            if let Some(m) = c.first().cloned() {
                for g in c.iter_mut() {
                    *g = self.amb().sub(g, &m);
                }
            }
            c.sort();
        }
        comps.sort();
        comps
    }

    /// Applies a group map to all generators, producing a module over `target`.
    pub fn translate(&self, target: &FineMonoid, m: &GroupHom) -> Result<PModule> {
        let gens = self.gens.iter().map(|(g, c)| (m.apply(g), *c)).collect();
        PModule::build(target, self.ncomp, gens, self.kind.clone())
    }
}

/// Disjoint-set forest over `0..n`.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Sum of generator pairs, a convenience for building translated modules.
pub fn shift(m: &PModule, by: &[BigInt]) -> PModule {
    let mut out = m.clone();
    out.gens = m.gens.iter().map(|(g, c)| (m.amb().add(g, by), *c)).collect();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::FgAbGroup;
    use crate::monoid::elem;

    fn nat() -> FineMonoid {
        FineMonoid::free_nat(1)
    }

    #[test]
    fn membership_examples() {
        let m = PModule::embedded(&nat(), 1, vec![(elem(&[2]), 0)]).unwrap();
        assert!(m.mod_member(&(elem(&[5]), 0)).unwrap());
        assert!(!m.mod_member(&(elem(&[1]), 0)).unwrap());
        let n2 = FineMonoid::free_nat(2);
        let i = PModule::ideal(&MonoidIdeal::new(&n2, vec![elem(&[1, 0]), elem(&[0, 1])]).unwrap());
        assert!(!i.mod_member(&(elem(&[0, 0]), 0)).unwrap());
    }

    #[test]
    fn flatness_examples() {
        let z = PModule::localized(&nat(), vec![elem(&[1])], vec![elem(&[0])]).unwrap();
        assert!(z.is_flat().unwrap().is_flat());
        let n2 = FineMonoid::free_nat(2);
        let i = PModule::ideal(&MonoidIdeal::new(&n2, vec![elem(&[1, 0]), elem(&[0, 1])]).unwrap());
        assert_eq!(
            i.is_flat().unwrap(),
            FlatVerdict::NotFlat { witness: ((elem(&[1, 0]), 0), (elem(&[0, 1]), 0)) }
        );
        assert!(PModule::free(&n2, 3).is_flat().unwrap().is_flat());
    }

    #[test]
    fn basis_examples() {
        let m = PModule::embedded(&nat(), 1, vec![(elem(&[3]), 0), (elem(&[2]), 0)]).unwrap();
        match m.extract_basis(8).unwrap() {
            BasisOutcome::Basis(b) => {
                assert_eq!(b.elems, vec![(elem(&[2]), 0)]);
                assert!(b.covers_generators);
            }
            _ => panic!("expected a basis"),
        }
        let z = PModule::localized(&nat(), vec![elem(&[1])], vec![elem(&[0])]).unwrap();
        assert_eq!(z.extract_basis(8).unwrap_err(), Error::NotFinitelyGenerated);
    }

    #[test]
    fn finite_generation() {
        let m = PModule::embedded(&nat(), 1, vec![(elem(&[2]), 0)]).unwrap();
        assert!(m.is_finitely_generated(&[(elem(&[2]), 0)]).unwrap());
        assert!(!m.is_finitely_generated(&[(elem(&[3]), 0)]).unwrap());
        let f = PModule::free(&FineMonoid::free_nat(2), 2);
        assert!(f.is_finitely_generated(&f.gens.clone()).unwrap());
    }

    #[test]
    fn tensor_examples() {
        let one = PModule::embedded(&nat(), 1, vec![(elem(&[1]), 0)]).unwrap();
        let t = one.tensor(&one).unwrap();
        assert_eq!(t.gens, vec![(elem(&[2]), 0)]);
        let f3 = PModule::free(&nat(), 3);
        let t = one.tensor(&f3).unwrap();
        assert_eq!(t.ncomp, 3);
        let n2 = FineMonoid::free_nat(2);
        let i = PModule::ideal(&MonoidIdeal::new(&n2, vec![elem(&[1, 0]), elem(&[0, 1])]).unwrap());
        assert!(matches!(i.tensor(&i), Err(Error::UnsupportedModuleClass(_))));
        let other = PModule::free(&n2, 1);
        assert_eq!(one.tensor(&other).unwrap_err(), Error::OwnerMismatch);
    }

    #[test]
    fn sharpening_collapses_units() {
        let p = FineMonoid::from_rows(2, &[vec![1, 0], vec![0, 1], vec![0, -1]]);
        let m = PModule::embedded(&p, 1, vec![(elem(&[1, 5]), 0)]).unwrap();
        let s = m.sharpen().unwrap();
        assert_eq!(s.owner.ambient(), &FgAbGroup::free(1));
        assert_eq!(s.gens, vec![(elem(&[1]), 0)]);
    }
}
