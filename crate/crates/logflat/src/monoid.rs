//! Fine monoids embedded in finitely generated abelian groups.
//!
//! A monoid is a finite generator list inside an ambient group, so it is
//! integral by construction. Membership is decided by a search in the sharp
//! quotient `P/P*`, where a rational linear functional that is positive on
//! every non-unit generator bounds the search.

use crate::abgrp::{FgAbGroup, GroupHom, IntMatrix, Subgroup};
use crate::error::{Error, Result};
use crate::lp;
use crate::morphism::Declared;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Element of an ambient group in canonical coordinates.
pub type Elem = Vec<BigInt>;

pub fn elem(v: &[i64]) -> Elem {
    v.iter().map(|x| BigInt::from(*x)).collect()
}

/// A face of a monoid, recorded by the generators it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub mask: Vec<bool>,
    /// Rank of the subgroup generated by the face.
    pub dim: usize,
}

struct Cache {
    unit_mask: Vec<bool>,
    gp: Subgroup,
    units: Subgroup,
    sharp_proj: GroupHom,
    phi: Vec<BigInt>,
    unit_relation: Vec<BigInt>,
    faces: OnceLock<Vec<Face>>,
}

struct Inner {
    ambient: FgAbGroup,
    gens: Vec<Elem>,
    cache: OnceLock<Cache>,
    memo: Mutex<HashMap<Elem, Option<Vec<BigInt>>>>,
}

/// A finitely generated submonoid of an abelian group. Cheap to clone.
#[derive(Clone)]
pub struct FineMonoid(Arc<Inner>);

impl PartialEq for FineMonoid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.ambient == other.0.ambient && self.0.gens == other.0.gens)
    }
}

impl Eq for FineMonoid {}

impl fmt::Debug for FineMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .0
            .gens
            .iter()
            .map(|g| format!("({})", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "<{}> in {}", gens.join(", "), self.0.ambient)
    }
}

/// Which generators are units: `gᵢ` is a unit iff some `λ ≥ 0` with `λᵢ = 1`
/// has `Σ λⱼ gⱼ` torsion, i.e. zero in the free part.
fn unit_mask_of(ambient: &FgAbGroup, gens: &[Elem]) -> (Vec<bool>, Vec<Vec<BigRational>>) {
    let n = gens.len();
    let r = ambient.rank();
    let mut mask = vec![false; n];
    let mut sols = vec![vec![]; n];
    for i in 0..n {
        if gens[i][..r].iter().all(|x| x.is_zero()) {
            mask[i] = true;
            let mut s = vec![BigRational::zero(); n];
            s[i] = BigRational::one();
            sols[i] = s;
            continue;
        }
        if mask[i] {
            continue;
        }
        let mut rows = vec![];
        let mut rhs = vec![];
        for c in 0..r {
            rows.push(gens.iter().map(|g| BigRational::from_integer(g[c].clone())).collect());
            rhs.push(BigRational::zero());
        }
        let mut pin = vec![BigRational::zero(); n];
        pin[i] = BigRational::one();
        rows.push(pin);
        rhs.push(BigRational::one());
        if let Some(x) = lp::feasible(&rows, &rhs) {
            // Every generator in the support of a null combination is a unit too.
            for (j, v) in x.iter().enumerate() {
                if v.is_positive() && !mask[j] {
                    mask[j] = true;
                    let mut s = x.clone();
                    let scale = v.clone();
                    s.iter_mut().for_each(|t| *t = &*t / &scale);
                    sols[j] = s;
                }
            }
        }
    }
    (mask, sols)
}

impl FineMonoid {
    /// A monoid from generators; each generator must be an element of `ambient`.
    pub fn new(ambient: FgAbGroup, gens: Vec<Elem>) -> Result<Self> {
        for g in &gens {
            ambient.check(g)?;
        }
        let gens = gens.into_iter().map(|g| ambient.reduce(&g)).collect();
        Ok(FineMonoid(Arc::new(Inner { ambient, gens, cache: OnceLock::new(), memo: Mutex::new(HashMap::new()) })))
    }

    /// `ℕ^n` inside `ℤ^n`.
    pub fn free_nat(n: usize) -> Self {
        let gens = (0..n).map(|i| FgAbGroup::free(n).basis(i)).collect();
        Self::new(FgAbGroup::free(n), gens).expect("standard basis lies in Z^n")
    }

    /// The whole group `G` as a monoid.
    pub fn group(g: &FgAbGroup) -> Self {
        let mut gens = vec![];
        for i in 0..g.ngens() {
            gens.push(g.basis(i));
            if i < g.rank() {
                gens.push(g.neg(&g.basis(i)));
            }
        }
        Self::new(g.clone(), gens).expect("basis lies in the group")
    }

    pub fn from_rows(rank: usize, gens: &[Vec<i64>]) -> Self {
        Self::new(FgAbGroup::free(rank), gens.iter().map(|g| elem(g)).collect()).expect("generators lie in Z^rank")
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.0.ambient
    }

    pub fn gens(&self) -> &[Elem] {
        &self.0.gens
    }

    pub fn ngens(&self) -> usize {
        self.0.gens.len()
    }

    fn cache(&self) -> &Cache {
        self.0.cache.get_or_init(|| self.build_cache())
    }

    fn build_cache(&self) -> Cache {
        let amb = &self.0.ambient;
        let gens = &self.0.gens;
        let n = gens.len();
        let (unit_mask, sols) = unit_mask_of(amb, gens);
        let gp = Subgroup::generated(amb, gens);
        let unit_gens: Vec<Elem> = gens.iter().zip(&unit_mask).filter(|(_, u)| **u).map(|(g, _)| g.clone()).collect();
        let units = Subgroup::generated(amb, &unit_gens);
        let (_, sharp_proj) = units.embed.cokernel();

        // Strictly positive integer relation among the unit generators.
        let mut rel = vec![BigInt::zero(); n];
        for (i, s) in sols.iter().enumerate() {
            if !unit_mask[i] {
                continue;
            }
            let den = lp::common_denominator(s);
            for (j, v) in s.iter().enumerate() {
                rel[j] += (v * BigRational::from_integer(den.clone())).to_integer();
            }
        }
        let mut total = amb.zero();
        for (j, c) in rel.iter().enumerate() {
            total = amb.add(&total, &amb.scale(c, &gens[j]));
        }
        if let Some(o) = amb.elem_order(&total) {
            rel.iter_mut().for_each(|x| *x *= &o);
        }

        // Functional on the free part of P^gp/P* that is at least 1 on the non-unit generators.
        let sharp = &sharp_proj.target;
        let rk = sharp.rank();
        let non_units: Vec<usize> = (0..n).filter(|&i| !unit_mask[i]).collect();
        let mut phi = vec![BigInt::zero(); rk];
        if !non_units.is_empty() {
            let nv = 2 * rk + non_units.len();
            let mut rows = vec![];
            let mut rhs = vec![];
            for (k, &i) in non_units.iter().enumerate() {
                let gbar = sharp_proj.apply(&gens[i]);
                let mut row = vec![BigRational::zero(); nv];
                for c in 0..rk {
                    row[c] = BigRational::from_integer(gbar[c].clone());
                    row[rk + c] = -BigRational::from_integer(gbar[c].clone());
                }
                row[2 * rk + k] = -BigRational::one();
                rows.push(row);
                rhs.push(BigRational::one());
            }
            let x = lp::feasible(&rows, &rhs).expect("the sharp quotient of a fine monoid is pointed");
            let den = lp::common_denominator(&x);
            for c in 0..rk {
                phi[c] = ((&x[c] - &x[rk + c]) * BigRational::from_integer(den.clone())).to_integer();
            }
        }
        Cache { unit_mask, gp, units, sharp_proj, phi, unit_relation: rel, faces: OnceLock::new() }
    }

    /// `P^gp` as a subgroup of the ambient group.
    pub fn gp(&self) -> &Subgroup {
        &self.cache().gp
    }

    pub fn rank(&self) -> usize {
        self.gp().group.rank()
    }

    /// `P*` as a subgroup of the ambient group.
    pub fn units(&self) -> &Subgroup {
        &self.cache().units
    }

    pub fn unit_mask(&self) -> &[bool] {
        &self.cache().unit_mask
    }

    pub fn is_sharp(&self) -> bool {
        self.unit_mask().iter().all(|u| !u)
    }

    pub fn is_group(&self) -> bool {
        self.unit_mask().iter().all(|u| *u)
    }

    /// Integer weight that is at least 1 on every non-unit generator and 0 on units.
    pub fn weight(&self, x: &[BigInt]) -> BigInt {
        let c = self.cache();
        let y = c.sharp_proj.apply(x);
        c.phi.iter().zip(&y).map(|(a, b)| a * b).sum()
    }

    /// Projection of the ambient group onto `ambient / P*`.
    pub fn sharp_projection(&self) -> &GroupHom {
        &self.cache().sharp_proj
    }

    /// `(P*, P̄, π)` with `P̄ = P/P*` embedded in `ambient/P*`.
    pub fn units_sharpen(&self) -> (Subgroup, FineMonoid, GroupHom) {
        let c = self.cache();
        let gens = self
            .gens()
            .iter()
            .zip(&c.unit_mask)
            .filter(|(_, u)| !**u)
            .map(|(g, _)| c.sharp_proj.apply(g))
            .collect();
        let sharp = FineMonoid::new(c.sharp_proj.target.clone(), gens).expect("projected generators lie in the quotient");
        (c.units.clone(), sharp, c.sharp_proj.clone())
    }

    fn phi(&self, y: &[BigInt]) -> BigInt {
        self.cache().phi.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Search in the sharp quotient for counts of non-unit generators summing to `y`.
    fn sharp_search(&self, y: Elem, memo: &mut HashMap<Elem, Option<Vec<BigInt>>>) -> Option<Vec<BigInt>> {
        if let Some(r) = memo.get(&y) {
            return r.clone();
        }
        let n = self.ngens();
        let result = if y.iter().all(|x| x.is_zero()) {
            Some(vec![BigInt::zero(); n])
        } else if !self.phi(&y).is_positive() {
            None
        } else {
            let c = self.cache();
            let q = &c.sharp_proj.target;
            let mut found = None;
            for i in 0..n {
                if c.unit_mask[i] {
                    continue;
                }
                let gbar = c.sharp_proj.apply(&self.gens()[i]);
                let rest = q.sub(&y, &gbar);
                if self.phi(&rest).is_negative() {
                    continue;
                }
                if let Some(mut cnt) = self.sharp_search(rest, memo) {
                    cnt[i] += 1;
                    found = Some(cnt);
                    break;
                }
            }
            found
        };
        memo.insert(y, result.clone());
        result
    }

    /// Nonnegative generator multiplicities `λ` with `Σ λᵢ gᵢ = x`, or `None` if `x ∉ P`.
    pub fn certificate(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.ambient().check(x)?;
        let x = self.ambient().reduce(x);
        if let Some(r) = self.0.memo.lock().expect("membership memo poisoned").get(&x) {
            return Ok(r.clone());
        }
        let r = self.certificate_uncached(&x);
        self.0.memo.lock().expect("membership memo poisoned").insert(x, r.clone());
        Ok(r)
    }

    fn certificate_uncached(&self, x: &Elem) -> Option<Vec<BigInt>> {
        let c = self.cache();
        if !c.gp.contains(x) {
            return None;
        }
        let xbar = c.sharp_proj.apply(x);
        let mut memo = HashMap::new();
        let mut cnt = self.sharp_search(xbar, &mut memo)?;
        let amb = self.ambient();
        let mut rest = x.clone();
        for (i, k) in cnt.iter().enumerate() {
            if !k.is_zero() {
                rest = amb.sub(&rest, &amb.scale(k, &self.gens()[i]));
            }
        }
        let unit_idx: Vec<usize> = (0..self.ngens()).filter(|&i| c.unit_mask[i]).collect();
        if unit_idx.is_empty() {
            return if amb.is_zero_elem(&rest) { Some(cnt) } else { None };
        }
        let ugens: Vec<Elem> = unit_idx.iter().map(|&i| self.gens()[i].clone()).collect();
        let solver = GroupHom::from_images(FgAbGroup::free(ugens.len()), amb.clone(), &ugens)
            .expect("map from a free group is well defined");
        let mu = solver.solve(&rest)?;
        let mut k = BigInt::zero();
        for (t, &i) in unit_idx.iter().enumerate() {
            if mu[t].is_negative() {
                let need = (-&mu[t]).div_ceil(&c.unit_relation[i]);
                k = k.max(need);
            }
        }
        for (t, &i) in unit_idx.iter().enumerate() {
            cnt[i] = &mu[t] + &k * &c.unit_relation[i];
        }
        Some(cnt)
    }

    pub fn member(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.certificate(x)?.is_some())
    }

    /// Membership for elements already known to lie in the ambient group.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.member(x).unwrap_or(false)
    }

    pub fn is_unit(&self, x: &[BigInt]) -> bool {
        self.units().contains(x) && self.contains(x)
    }

    /// `Σ λᵢ gᵢ`.
    pub fn combine(&self, lambda: &[BigInt]) -> Elem {
        let amb = self.ambient();
        let mut s = amb.zero();
        for (k, g) in lambda.iter().zip(self.gens()) {
            if !k.is_zero() {
                s = amb.add(&s, &amb.scale(k, g));
            }
        }
        s
    }

    /// Is the generator subset `mask` a face?
    pub fn is_face(&self, mask: &[bool]) -> bool {
        if mask.iter().zip(self.unit_mask()).any(|(m, u)| *u && !m) {
            return false;
        }
        let mut gens = self.gens().to_vec();
        for (i, g) in self.gens().iter().enumerate() {
            if mask[i] {
                gens.push(self.ambient().neg(g));
            }
        }
        let (um, _) = unit_mask_of(self.ambient(), &gens);
        um[..self.ngens()] == *mask
    }

    /// All faces, ordered by decreasing dimension and then by generator mask
    /// (lexicographic with absent before present).
    pub fn faces(&self) -> &[Face] {
        self.cache().faces.get_or_init(|| {
            let n = self.ngens();
            let mut out = vec![];
            for bits in 0u64..(1u64 << n) {
                let mask: Vec<bool> = (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect();
                if self.is_face(&mask) {
                    let gens: Vec<Elem> =
                        self.gens().iter().zip(&mask).filter(|(_, m)| **m).map(|(g, _)| g.clone()).collect();
                    let dim = Subgroup::generated(self.ambient(), &gens).group.rank();
                    out.push(Face { mask, dim });
                }
            }
            out.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.mask.cmp(&b.mask)));
            out
        })
    }

    /// The submonoid generated by the generators in `mask`.
    pub fn face_monoid(&self, mask: &[bool]) -> FineMonoid {
        let gens = self.gens().iter().zip(mask).filter(|(_, m)| **m).map(|(g, _)| g.clone()).collect();
        FineMonoid::new(self.ambient().clone(), gens).expect("face generators lie in the ambient group")
    }

    /// Is `x` in the face given by `mask`?
    pub fn in_face(&self, mask: &[bool], x: &[BigInt]) -> bool {
        match self.certificate(x) {
            Ok(Some(_)) => self.face_monoid(mask).contains(x),
            _ => false,
        }
    }

    /// Prime ideals as complements of faces, in face order.
    pub fn prime_ideals(&self) -> Vec<MonoidIdeal> {
        self.faces()
            .iter()
            .map(|f| MonoidIdeal {
                owner: self.clone(),
                gens: self.gens().iter().zip(&f.mask).filter(|(_, m)| !**m).map(|(g, _)| g.clone()).collect(),
            })
            .collect()
    }

    /// `S⁻¹P` for a list of elements of `P`, with the localization map.
    pub fn localize(&self, s: &[Elem]) -> Result<(FineMonoid, MonoidHom)> {
        for x in s {
            if !self.member(x)? {
                return Err(Error::NotSubmonoid);
            }
        }
        let mut gens = self.gens().to_vec();
        for x in s {
            let nx = self.ambient().neg(x);
            if !gens.contains(&nx) {
                gens.push(nx);
            }
        }
        let loc = FineMonoid::new(self.ambient().clone(), gens)?;
        let h = MonoidHom::from_ambient_map(self, &loc, &GroupHom::identity(self.ambient()))?;
        Ok((loc, h))
    }

    /// Localization at a face given by a generator mask.
    pub fn localize_face(&self, mask: &[bool]) -> Result<(FineMonoid, MonoidHom)> {
        let s: Vec<Elem> = self.gens().iter().zip(mask).filter(|(_, m)| **m).map(|(g, _)| g.clone()).collect();
        self.localize(&s)
    }

    /// Elements `Σ λᵢ gᵢ` with `Σ λᵢ ≤ degree`, deduplicated, in a deterministic order.
    pub fn window(&self, degree: usize) -> Vec<Elem> {
        let amb = self.ambient();
        let mut seen = std::collections::HashSet::new();
        let mut out = vec![amb.zero()];
        seen.insert(amb.zero());
        let mut frontier = vec![amb.zero()];
        for _ in 0..degree {
            let mut next = vec![];
            for x in &frontier {
                for g in self.gens() {
                    let y = amb.add(x, g);
                    if seen.insert(y.clone()) {
                        out.push(y.clone());
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

/// An ideal `I = ∪ (gᵢ + P)` of a fine monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidIdeal {
    pub owner: FineMonoid,
    pub gens: Vec<Elem>,
}

impl MonoidIdeal {
    pub fn new(owner: &FineMonoid, gens: Vec<Elem>) -> Result<Self> {
        for g in &gens {
            if !owner.member(g)? {
                return Err(Error::NotSubmonoid);
            }
        }
        Ok(MonoidIdeal { owner: owner.clone(), gens })
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        self.owner.ambient().check(x)?;
        let amb = self.owner.ambient();
        for g in &self.gens {
            if self.owner.member(&amb.sub(x, g))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Equality as subsets of the monoid.
    pub fn same_as(&self, other: &MonoidIdeal) -> bool {
        self.owner == other.owner
            && self.gens.iter().all(|g| other.contains(g).unwrap_or(false))
            && other.gens.iter().all(|g| self.contains(g).unwrap_or(false))
    }

    /// The face mask `{i : gᵢ ∉ I}`.
    pub fn complement_mask(&self) -> Vec<bool> {
        self.owner.gens().iter().map(|g| !self.contains(g).unwrap_or(false)).collect()
    }

    /// `I` is prime iff it is proper and its complement is a face.
    pub fn is_prime(&self) -> bool {
        let zero = self.owner.ambient().zero();
        if self.contains(&zero).unwrap_or(true) {
            return false;
        }
        let mask = self.complement_mask();
        if !self.owner.is_face(&mask) {
            return false;
        }
        let face = self.owner.face_monoid(&mask);
        self.gens.iter().all(|g| !face.contains(g))
    }
}

/// A homomorphism of fine monoids, determined by generator images.
#[derive(Clone)]
pub struct MonoidHom {
    pub source: FineMonoid,
    pub target: FineMonoid,
    pub images: Vec<Elem>,
    /// The induced map `source^gp → target ambient`.
    pub gp_map: GroupHom,
    /// A map on ambient groups when one was supplied.
    pub ambient_map: Option<GroupHom>,
    /// Structure declared by a partition constructor.
    pub declared: Option<Arc<Declared>>,
}

impl fmt::Debug for MonoidHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonoidHom({:?} -> {:?}, images {:?})", self.source, self.target, self.images)
    }
}

impl MonoidHom {
    /// Homomorphism from generator images; the images must respect every relation of the source.
    pub fn new(source: &FineMonoid, target: &FineMonoid, images: Vec<Elem>) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::InvalidInput("one image per source generator is required".into()));
        }
        for y in &images {
            if !target.member(y)? {
                return Err(Error::NotSubmonoid);
            }
        }
        let images: Vec<Elem> = images.iter().map(|y| target.ambient().reduce(y)).collect();
        let gp = source.gp();
        let n = source.ngens();
        let to_sub = GroupHom::from_images(FgAbGroup::free(n), gp.group.clone(), &gp.gen_coords)
            .expect("map from a free group is well defined");
        let mut cols = vec![];
        for j in 0..gp.group.ngens() {
            let w = to_sub.solve(&gp.group.basis(j)).expect("generators span the groupification");
            let mut img = target.ambient().zero();
            for (k, y) in w.iter().zip(&images) {
                img = target.ambient().add(&img, &target.ambient().scale(k, y));
            }
            cols.push(img);
        }
        let gp_map = GroupHom::from_images(gp.group.clone(), target.ambient().clone(), &cols)
            .map_err(|_| Error::InvalidInput("generator images do not respect torsion".into()))?;
        for (i, c) in gp.gen_coords.iter().enumerate() {
            if gp_map.apply(c) != images[i] {
                return Err(Error::InvalidInput("generator images do not respect the relations".into()));
            }
        }
        Ok(MonoidHom {
            source: source.clone(),
            target: target.clone(),
            images,
            gp_map,
            ambient_map: None,
            declared: None,
        })
    }

    pub fn from_ambient_map(source: &FineMonoid, target: &FineMonoid, m: &GroupHom) -> Result<Self> {
        if &m.source != source.ambient() || &m.target != target.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let images = source.gens().iter().map(|g| m.apply(g)).collect();
        let mut h = Self::new(source, target, images)?;
        h.ambient_map = Some(m.clone());
        Ok(h)
    }

    pub fn identity(p: &FineMonoid) -> Self {
        Self::from_ambient_map(p, p, &GroupHom::identity(p.ambient())).expect("identity is a homomorphism")
    }

    /// Image of an element of `source^gp`.
    pub fn apply(&self, x: &[BigInt]) -> Result<Elem> {
        if let Some(m) = &self.ambient_map {
            self.source.ambient().check(x)?;
            return Ok(m.apply(x));
        }
        let c = self.source.gp().coords_of(x).ok_or(Error::AmbientMismatch)?;
        Ok(self.gp_map.apply(&c))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonoidHom) -> Result<MonoidHom> {
        if self.target != next.source {
            return Err(Error::AmbientMismatch);
        }
        let images = self.images.iter().map(|y| next.apply(y)).collect::<Result<Vec<_>>>()?;
        let mut h = MonoidHom::new(&self.source, &next.target, images)?;
        if let (Some(a), Some(b)) = (&self.ambient_map, &next.ambient_map) {
            h.ambient_map = Some(b.after(a));
        }
        Ok(h)
    }

    pub fn with_declared(mut self, d: Declared) -> Self {
        self.declared = Some(Arc::new(d));
        self
    }

    pub fn is_injective(&self) -> bool {
        self.gp_map.is_injective()
    }

    /// The ambient-level map restricted to groupifications, `Q^gp → P^gp`.
    pub fn gp_hom(&self) -> GroupHom {
        let tgp = self.target.gp();
        let cols: Vec<Elem> = (0..self.source.gp().group.ngens())
            .map(|j| tgp.coords_of(&self.gp_map.image_of_gen(j)).expect("image lies in the target groupification"))
            .collect();
        GroupHom::from_images(self.source.gp().group.clone(), tgp.group.clone(), &cols)
            .expect("restriction of a homomorphism is a homomorphism")
    }
}

/// The integral pushout of `h1: Q → P1` and `h2: Q → P2`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub monoid: FineMonoid,
    pub i1: MonoidHom,
    pub i2: MonoidHom,
    /// `Some(true)` when the set-level pushout is known to be integral already;
    /// `None` when this cannot be decided from the generators.
    pub set_level_integral: Option<bool>,
}

pub fn pushout(h1: &MonoidHom, h2: &MonoidHom) -> Result<Pushout> {
    if h1.source != h2.source {
        return Err(Error::InvalidInput("pushout needs a common source".into()));
    }
    let a1 = h1.target.ambient();
    let a2 = h2.target.ambient();
    let n1 = a1.ngens();
    let n2 = a2.ngens();
    let n = n1 + n2;
    let mut cols = vec![];
    for (j, d) in a1.torsion().iter().enumerate() {
        let mut c = vec![BigInt::zero(); n];
        c[a1.rank() + j] = d.clone();
        cols.push(c);
    }
    for (j, d) in a2.torsion().iter().enumerate() {
        let mut c = vec![BigInt::zero(); n];
        c[n1 + a2.rank() + j] = d.clone();
        cols.push(c);
    }
    for j in 0..h1.gp_map.source.ngens() {
        let mut c = h1.gp_map.image_of_gen(j);
        c.extend(h2.gp_map.image_of_gen(j).iter().map(|x| -x));
        cols.push(c);
    }
    let p = crate::abgrp::from_relations(n, &IntMatrix::from_cols(n, &cols));
    let embed = |off: usize, len: usize| -> GroupHom {
        let imgs: Vec<Elem> = (0..len)
            .map(|i| {
                let mut raw = vec![BigInt::zero(); n];
                raw[off + i] = BigInt::one();
                p.canon(&raw)
            })
            .collect();
        let src = if off == 0 { a1.clone() } else { a2.clone() };
        GroupHom::from_images(src, p.group.clone(), &imgs).expect("summand inclusion is well defined")
    };
    let e1 = embed(0, n1);
    let e2 = embed(n1, n2);
    let mut gens: Vec<Elem> = h1.target.gens().iter().map(|g| e1.apply(g)).collect();
    gens.extend(h2.target.gens().iter().map(|g| e2.apply(g)));
    let monoid = FineMonoid::new(p.group.clone(), gens)?;
    let i1 = MonoidHom::from_ambient_map(&h1.target, &monoid, &e1)?;
    let i2 = MonoidHom::from_ambient_map(&h2.target, &monoid, &e2)?;
    let flat1 = crate::morphism::classify_morphism(h1).flat == crate::morphism::Tri::Yes;
    let flat2 = crate::morphism::classify_morphism(h2).flat == crate::morphism::Tri::Yes;
    let set_level_integral = if flat1 || flat2 { Some(true) } else { None };
    Ok(Pushout { monoid, i1, i2, set_level_integral })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let n2 = FineMonoid::free_nat(2);
        assert!(n2.member(&elem(&[3, 1])).unwrap());
        let p = FineMonoid::from_rows(2, &[vec![1, 1], vec![1, -1]]);
        assert!(!p.member(&elem(&[1, 0])).unwrap());
        assert!(p.member(&elem(&[2, 0])).unwrap());
        assert_eq!(p.certificate(&elem(&[2, 0])).unwrap().unwrap(), elem(&[1, 1]));
        assert_eq!(n2.member(&elem(&[1])), Err(Error::AmbientMismatch));
    }

    #[test]
    fn membership_with_units() {
        let p = FineMonoid::from_rows(2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]);
        assert_eq!(p.unit_mask(), &[true, true, false]);
        assert_eq!(p.units().group, FgAbGroup::free(1));
        let c = p.certificate(&elem(&[-5, 2])).unwrap().unwrap();
        assert!(c.iter().all(|x| !x.is_negative()));
        assert_eq!(p.combine(&c), elem(&[-5, 2]));
        assert!(!p.member(&elem(&[0, -1])).unwrap());
    }

    #[test]
    fn sharpening_of_nat_times_int() {
        let p = FineMonoid::from_rows(2, &[vec![1, 0], vec![0, 1], vec![0, -1]]);
        let (u, sharp, _) = p.units_sharpen();
        assert_eq!(u.group, FgAbGroup::free(1));
        assert_eq!(sharp.ambient(), &FgAbGroup::free(1));
        assert!(sharp.is_sharp());
        assert!(FineMonoid::free_nat(2).is_sharp());
    }

    #[test]
    fn torsion_ambient_membership() {
        // ℕ ⊕ ℤ/2 generated by (1,0) and (0,1): every element is a member.
        let g = FgAbGroup::new(1, vec![BigInt::from(2)]).unwrap();
        let p = FineMonoid::new(g, vec![elem(&[1, 0]), elem(&[0, 1])]).unwrap();
        assert_eq!(p.unit_mask(), &[false, true]);
        assert!(p.member(&elem(&[3, 1])).unwrap());
        assert!(!p.member(&elem(&[-1, 0])).unwrap());
    }

    #[test]
    fn prime_ideals_of_small_monoids() {
        let n2 = FineMonoid::free_nat(2);
        let primes = n2.prime_ideals();
        assert_eq!(primes.len(), 4);
        assert!(primes[0].gens.is_empty());
        assert_eq!(primes[1].gens, vec![elem(&[1, 0])]);
        assert_eq!(primes[2].gens, vec![elem(&[0, 1])]);
        assert_eq!(primes[3].gens.len(), 2);
        assert!(primes.iter().all(|p| p.is_prime()));
        assert_eq!(FineMonoid::free_nat(1).prime_ideals().len(), 2);
        assert_eq!(FineMonoid::group(&FgAbGroup::free(2)).prime_ideals().len(), 1);
    }

    #[test]
    fn non_prime_ideal() {
        let n2 = FineMonoid::free_nat(2);
        let i = MonoidIdeal::new(&n2, vec![elem(&[1, 1])]).unwrap();
        assert!(!i.is_prime());
        let i = MonoidIdeal::new(&n2, vec![elem(&[2, 0])]).unwrap();
        assert!(!i.is_prime());
    }

    #[test]
    fn localization_examples() {
        let n1 = FineMonoid::free_nat(1);
        let (l, _) = n1.localize(&[]).unwrap();
        assert!(!l.member(&elem(&[-1])).unwrap());
        let (l, _) = n1.localize(&[elem(&[1])]).unwrap();
        assert!(l.is_group());
        let n2 = FineMonoid::free_nat(2);
        let (l, _) = n2.localize_face(&[true, false]).unwrap();
        assert!(l.member(&elem(&[-3, 0])).unwrap());
        assert!(!l.member(&elem(&[0, -1])).unwrap());
        assert_eq!(n2.localize(&[elem(&[-1, 0])]).unwrap_err(), Error::NotSubmonoid);
    }

    #[test]
    fn hom_respects_relations() {
        let p = FineMonoid::from_rows(1, &[vec![2], vec![3]]);
        let n1 = FineMonoid::free_nat(1);
        assert!(MonoidHom::new(&p, &n1, vec![elem(&[4]), elem(&[6])]).is_ok());
        assert!(MonoidHom::new(&p, &n1, vec![elem(&[1]), elem(&[1])]).is_err());
    }

    #[test]
    fn pushout_of_zero_maps_is_coproduct() {
        let zero = FineMonoid::new(FgAbGroup::trivial(), vec![]).unwrap();
        let p1 = FineMonoid::free_nat(1);
        let p2 = FineMonoid::free_nat(2);
        let h1 = MonoidHom::new(&zero, &p1, vec![]).unwrap();
        let h2 = MonoidHom::new(&zero, &p2, vec![]).unwrap();
        let po = pushout(&h1, &h2).unwrap();
        assert_eq!(po.monoid.ambient(), &FgAbGroup::free(3));
        assert_eq!(po.monoid.faces().len(), 8);
    }
}
