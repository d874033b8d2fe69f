//! Graded rings, graded modules and homogeneous ideals.

use crate::abgrp::{FgAbGroup, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::monoid::{Elem, FineMonoid, MonoidHom, MonoidIdeal};
use crate::polyalg::{
    ideal_groebner, toric_ideal_named, Field, Mono, ModulePresentation, Poly, PolyRing, RingPresentation, ToricAlgebra,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// The part of a graded ring that plays the role of the degree-zero base `A`:
/// a set of variables of the ambient polynomial ring and the ideal they satisfy.
#[derive(Clone, Debug)]
pub struct Base {
    pub vars: Vec<usize>,
    pub ideal: Vec<Poly>,
}

/// Bases for which flatness is decidable here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseKind {
    Zero,
    Field,
    /// `k[t]` with `t` the given variable.
    Line(usize),
}

impl Base {
    pub fn classify(&self, ring: &PolyRing) -> Result<BaseKind> {
        let gb = ideal_groebner(ring, &self.ideal);
        if gb.iter().any(|g| g.is_constant()) {
            return Ok(BaseKind::Zero);
        }
        if self.vars.is_empty() {
            return Ok(BaseKind::Field);
        }
        let mut point = gb.clone();
        for i in 0..ring.nvars() {
            if !self.vars.contains(&i) {
                point.push(ring.var(i));
            }
        }
        if RingPresentation::new(ring.clone(), point).vector_space_dim() == Some(1) {
            return Ok(BaseKind::Field);
        }
        if self.vars.len() == 1 && gb.is_empty() {
            return Ok(BaseKind::Line(self.vars[0]));
        }
        Err(Error::UnsupportedShape(format!(
            "flatness over the base k[{}]/({}) is only decided for fields and k[t]",
            self.vars.iter().map(|&i| ring.names[i].clone()).collect::<Vec<_>>().join(","),
            self.ideal.iter().map(|f| ring.format(f)).collect::<Vec<_>>().join(", ")
        )))
    }
}

/// Data of a ring `B = A ⊗_{ℤ[Q]} ℤ[P]` presented inside one polynomial ring.
#[derive(Clone, Debug)]
pub struct ChartShape {
    pub base: Base,
    /// The chart morphism `h: Q → P`.
    pub h: MonoidHom,
    /// Image in the ambient ring of each generator of `Q`.
    pub t: Vec<Poly>,
    /// Variable of the ambient ring attached to each generator of `P`.
    pub p_vars: Vec<usize>,
    pub spawning: Vec<Elem>,
    /// `k[P]` with its own variable names, used to find monomials of elements of `P`.
    pub toric: ToricAlgebra,
    /// Set on the rings `B_e` produced by the recursion, whose freeness follows from the parent.
    pub inherited: bool,
}

impl ChartShape {
    /// Monomial in the ambient ring representing `[p]` for `p ∈ P`.
    pub fn monomial(&self, ring: &PolyRing, p: &[BigInt]) -> Option<Poly> {
        let m = self.toric.monomial_of(p)?;
        let mut full = vec![0u32; ring.nvars()];
        for (j, e) in m.iter().enumerate() {
            full[self.p_vars[j]] += e;
        }
        Some(ring.monomial(full, num_rational::BigRational::from_integer(1.into())))
    }
}

/// Data of a group algebra `A[G]`.
#[derive(Clone, Debug)]
pub struct GroupAlgebraShape {
    pub base: Base,
    /// Variables of the group part, one per generator of `G` viewed as a monoid.
    pub g_vars: Vec<usize>,
    pub toric: ToricAlgebra,
    /// Variable names of `A`, in order, for presenting `A` on its own.
    pub base_names: Vec<String>,
}

/// Which decision procedure applies to a graded ring.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Shape {
    /// No decision procedure is attached.
    Plain,
    /// `k[P]` for a fine monoid `P`.
    MonoidAlgebra(ToricAlgebra),
    /// `A ⊗_{ℤ[Q]} ℤ[P]` for a free chart morphism with a spawning set.
    Chart(ChartShape),
    /// `A[G]` with `A` in degree zero.
    GroupAlgebra(GroupAlgebraShape),
    /// Grading by the trivial group; the base is the whole ring.
    Trivial(Base),
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Plain => "plain",
            Shape::MonoidAlgebra(_) => "monoid algebra",
            Shape::Chart(_) => "chart",
            Shape::GroupAlgebra(_) => "group algebra",
            Shape::Trivial(_) => "trivial grading",
        }
    }
}

/// A ring `S/I` graded by a finitely generated abelian group through the
/// degrees of the variables of `S`.
#[derive(Clone, Debug)]
pub struct GradedRing {
    pub group: FgAbGroup,
    pub ring: RingPresentation,
    pub degrees: Vec<Elem>,
    pub shape: Shape,
}

fn sum_degrees(group: &FgAbGroup, degrees: &[Elem], m: &[u32]) -> Elem {
    let mut d = group.zero();
    for (e, g) in m.iter().zip(degrees) {
        if *e > 0 {
            d = group.add(&d, &group.scale(&BigInt::from(*e), g));
        }
    }
    d
}

/// Negates the free coordinates when the first variable with a nonzero free
/// coordinate would otherwise have a negative one.
fn normalize_signs(group: &FgAbGroup, degrees: &mut [Elem]) {
    let r = group.rank();
    let first = degrees.iter().find_map(|d| d[..r].iter().find(|x| !x.is_zero()).cloned());
    if first.is_some_and(|x| x.is_negative()) {
        for d in degrees.iter_mut() {
            for x in d[..r].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

impl GradedRing {
    /// A graded ring without an attached decision procedure; the ideal must be homogeneous.
    pub fn new(group: FgAbGroup, ring: RingPresentation, degrees: Vec<Elem>) -> Result<Self> {
        Self::with_shape(group, ring, degrees, Shape::Plain)
    }

    fn with_shape(group: FgAbGroup, ring: RingPresentation, degrees: Vec<Elem>, shape: Shape) -> Result<Self> {
        if degrees.len() != ring.ring.nvars() {
            return Err(Error::InvalidInput("one degree per variable is required".into()));
        }
        for d in &degrees {
            group.check(d)?;
        }
        let degrees = degrees.iter().map(|d| group.reduce(d)).collect();
        let g = GradedRing { group, ring, degrees, shape };
        if !g.is_homogeneous_ideal(&g.ring.ideal.clone()) {
            return Err(Error::NotHomogeneous);
        }
        Ok(g)
    }

    /// `k[P]` graded by `P^gp` (the ambient group of `P`).
    pub fn monoid_algebra(p: &FineMonoid, field: Field) -> Self {
        Self::monoid_algebra_named(p, field, crate::polyalg::default_names(p.ngens()))
    }

    pub fn monoid_algebra_named(p: &FineMonoid, field: Field, names: Vec<String>) -> Self {
        let toric = toric_ideal_named(p, field, names);
        let degrees = p.gens().to_vec();
        GradedRing { group: p.ambient().clone(), ring: toric.pres.clone(), degrees, shape: Shape::MonoidAlgebra(toric) }
    }

    /// `A[G]` with the group variables named `names` (two per free generator,
    /// one per torsion generator, in the order of [`FineMonoid::group`]).
    pub fn group_algebra(a: &RingPresentation, g: &FgAbGroup, names: Vec<String>) -> Result<Self> {
        let gm = FineMonoid::group(g);
        if names.len() != gm.ngens() {
            return Err(Error::InvalidInput(format!("{} group variable names are required", gm.ngens())));
        }
        let field = a.ring.field;
        let toric = toric_ideal_named(&gm, field, names.clone());
        let na = a.ring.nvars();
        let mut all = a.ring.names.clone();
        all.extend(names);
        let s = PolyRing::with_names(field, all);
        let amap: Vec<usize> = (0..na).collect();
        let gmap: Vec<usize> = (na..na + gm.ngens()).collect();
        let base_ideal: Vec<Poly> = a.ideal.iter().map(|f| a.ring.embed(f, &s, &amap)).collect();
        let mut ideal = base_ideal.clone();
        ideal.extend(toric.pres.ideal.iter().map(|f| toric.ring().embed(f, &s, &gmap)));
        let mut degrees = vec![g.zero(); na];
        degrees.extend(gm.gens().iter().cloned());
        let shape = GroupAlgebraShape {
            base: Base { vars: amap, ideal: base_ideal },
            g_vars: gmap,
            toric,
            base_names: a.ring.names.clone(),
        };
        Self::with_shape(g.clone(), RingPresentation::new(s, ideal), degrees, Shape::GroupAlgebra(shape))
    }

    /// A ring graded by the trivial group.
    pub fn trivially_graded(ring: RingPresentation) -> Self {
        let n = ring.ring.nvars();
        let base = Base { vars: (0..n).collect(), ideal: ring.ideal.clone() };
        let g = FgAbGroup::trivial();
        GradedRing { degrees: vec![g.zero(); n], group: g, ring, shape: Shape::Trivial(base) }
    }

    /// `B = A ⊗_{ℤ[Q]} ℤ[P]` graded by `(P/Q)^gp`, where `t` gives the image in
    /// `A` of each generator of `Q` and `p_names` names the generators of `P`.
    pub fn tensor_ring(
        a: &RingPresentation,
        h: &MonoidHom,
        t: &[Poly],
        p_names: Vec<String>,
        spawning: Vec<Elem>,
    ) -> Result<Self> {
        let (q, p) = (&h.source, &h.target);
        if t.len() != q.ngens() || p_names.len() != p.ngens() {
            return Err(Error::ChartInvalid("one image per generator of Q and one name per generator of P".into()));
        }
        for e in &spawning {
            if !p.member(e)? {
                return Err(Error::ChartInvalid("spawning element outside P".into()));
            }
        }
        let field = a.ring.field;
        let toric = toric_ideal_named(p, field, p_names.clone());
        let na = a.ring.nvars();
        let mut names = a.ring.names.clone();
        names.extend(p_names);
        let s = PolyRing::with_names(field, names);
        let amap: Vec<usize> = (0..na).collect();
        let p_vars: Vec<usize> = (na..na + p.ngens()).collect();
        let base_ideal: Vec<Poly> = a.ideal.iter().map(|f| a.ring.embed(f, &s, &amap)).collect();
        let t_s: Vec<Poly> = t.iter().map(|f| a.ring.embed(f, &s, &amap)).collect();
        let mut ideal = base_ideal.clone();
        ideal.extend(toric.pres.ideal.iter().map(|f| toric.ring().embed(f, &s, &p_vars)));
        let shape = ChartShape { base: Base { vars: amap, ideal: base_ideal }, h: h.clone(), t: t_s, p_vars, spawning, toric, inherited: false };
        for (j, qg) in h.images.iter().enumerate() {
            let m = shape.monomial(&s, qg).ok_or(Error::NotSubmonoid)?;
            ideal.push(s.sub(&m, &shape.t[j]));
        }
        let (group, proj) = h.gp_hom().cokernel();
        let mut degrees = vec![group.zero(); na];
        let pgp = p.gp();
        let mut pdeg: Vec<Elem> =
            p.gens().iter().map(|g| proj.apply(&pgp.coords_of(g).expect("generator lies in P^gp"))).collect();
        normalize_signs(&group, &mut pdeg);
        degrees.extend(pdeg);
        Self::with_shape(group, RingPresentation::new(s, ideal), degrees, Shape::Chart(shape))
    }

    /// `k[x,y]/(xy)` as `k ⊗_{ℤ[ℕ]} ℤ[ℕ²]` along the diagonal, graded by `ℤ`
    /// with `deg x = 1`, `deg y = −1`.
    pub fn nodal(field: Field) -> Self {
        let k = RingPresentation::polynomial(PolyRing::new(field, &[]));
        let h = crate::morphism::diagonal(2);
        let e = FineMonoid::free_nat(2).gens().to_vec();
        Self::tensor_ring(&k, &h, &[Poly::zero()], vec!["x".into(), "y".into()], e)
            .expect("the nodal chart is valid")
    }

    /// The same ring with degrees pushed forward along an injective `γ: G → G'`.
    pub fn regrade(&self, gamma: &GroupHom) -> Result<Self> {
        if gamma.source != self.group {
            return Err(Error::AmbientMismatch);
        }
        if !gamma.is_injective() {
            return Err(Error::InvalidInput("regrading map must be injective".into()));
        }
        let degrees = self.degrees.iter().map(|d| gamma.apply(d)).collect();
        Ok(GradedRing { group: gamma.target.clone(), ring: self.ring.clone(), degrees, shape: self.shape.clone() })
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring.ring
    }

    pub fn mono_degree(&self, m: &[u32]) -> Elem {
        sum_degrees(&self.group, &self.degrees, m)
    }

    /// The `G`-homogeneous components of `f`, ordered by degree.
    pub fn homogeneous_components(&self, f: &Poly) -> Vec<(Elem, Poly)> {
        let mut by: BTreeMap<Elem, Vec<(Mono, num_rational::BigRational)>> = BTreeMap::new();
        for (m, c) in &f.terms {
            by.entry(self.mono_degree(m)).or_default().push((m.clone(), c.clone()));
        }
        by.into_iter().map(|(d, t)| (d, self.poly_ring().from_terms(t))).collect()
    }

    pub fn is_homogeneous_poly(&self, f: &Poly) -> bool {
        self.homogeneous_components(f).len() <= 1
    }

    /// Is the ideal `(gens)` of `B` generated by homogeneous elements?
    pub fn is_homogeneous_ideal(&self, gens: &[Poly]) -> bool {
        let j = self.ring.quotient(gens);
        gens.iter().all(|f| {
            let comps = self.homogeneous_components(f);
            comps.len() <= 1 || comps.iter().all(|(_, c)| j.is_zero(c))
        })
    }

    fn toric(&self) -> Result<&ToricAlgebra> {
        match &self.shape {
            Shape::MonoidAlgebra(t) => Ok(t),
            _ => Err(Error::UnsupportedShape("monoid ideals are only defined for monoid algebras".into())),
        }
    }

    /// `k[I]`: the monomials of the generators of `I`.
    pub fn to_ring_ideal(&self, i: &MonoidIdeal) -> Result<Vec<Poly>> {
        let t = self.toric()?;
        if i.owner != t.monoid {
            return Err(Error::OwnerMismatch);
        }
        let one = num_rational::BigRational::from_integer(1.into());
        i.gens
            .iter()
            .map(|g| t.monomial_of(g).map(|m| self.poly_ring().monomial(m, one.clone())).ok_or(Error::NotSubmonoid))
            .collect()
    }

    /// `J ∩ P` for a homogeneous ideal `J` of `k[P]` spanned by monomials.
    pub fn to_monoid_ideal(&self, j: &[Poly]) -> Result<MonoidIdeal> {
        let t = self.toric()?;
        if !self.is_homogeneous_ideal(j) {
            return Err(Error::NotHomogeneous);
        }
        let jr = self.ring.quotient(j);
        let mut gens: Vec<Elem> = vec![];
        for f in jr.gb() {
            let mut by: BTreeMap<Elem, Vec<(Mono, num_rational::BigRational)>> = BTreeMap::new();
            for (m, c) in &f.terms {
                by.entry(t.degree(m)).or_default().push((m.clone(), c.clone()));
            }
            for (d, terms) in by {
                let comp = self.poly_ring().from_terms(terms.clone());
                if !jr.is_zero(&comp) {
                    return Err(Error::UnsupportedIdealClass(
                        "homogeneous ideal is not spanned by monomials of the monoid".into(),
                    ));
                }
                let field = self.poly_ring().field;
                let sum = terms.iter().fold(num_rational::BigRational::zero(), |s, (_, c)| field.add(&s, c));
                if !sum.is_zero() && !gens.contains(&d) {
                    gens.push(d);
                }
            }
        }
        MonoidIdeal::new(&t.monoid, gens)
    }

    /// Semiprimeness of a monomial ideal, decided as primeness of `J ∩ P`.
    pub fn is_semiprime(&self, j: &[Poly]) -> Result<bool> {
        Ok(self.to_monoid_ideal(j)?.is_prime())
    }

    /// Primeness of a monomial ideal: semiprime with a torsion-free face group.
    pub fn is_prime_ideal(&self, j: &[Poly]) -> Result<bool> {
        let i = self.to_monoid_ideal(j)?;
        if !i.is_prime() {
            return Ok(false);
        }
        let face = i.owner.face_monoid(&i.complement_mask());
        Ok(face.gp().group.torsion().is_empty())
    }

    /// The subgroup of `G` generated by the degrees of `vars`.
    pub fn degree_subgroup(&self, vars: &[usize]) -> Subgroup {
        let gens: Vec<Elem> = vars.iter().map(|&v| self.degrees[v].clone()).collect();
        Subgroup::generated(&self.group, &gens)
    }
}

/// A module `S^r / relations` over a graded ring, with degree shifts on the
/// generators making every relation homogeneous.
#[derive(Clone, Debug)]
pub struct GradedModule {
    pub ring: GradedRing,
    pub shifts: Vec<Elem>,
    pub module: ModulePresentation,
}

impl GradedModule {
    pub fn new(ring: &GradedRing, module: ModulePresentation, shifts: Vec<Elem>) -> Result<Self> {
        if module.over != ring.ring {
            return Err(Error::InvalidInput("module is not defined over the graded ring".into()));
        }
        if shifts.len() != module.rank {
            return Err(Error::InvalidInput("one shift per generator is required".into()));
        }
        for h in &shifts {
            ring.group.check(h)?;
        }
        let shifts: Vec<Elem> = shifts.iter().map(|h| ring.group.reduce(h)).collect();
        let gm = GradedModule { ring: ring.clone(), shifts, module };
        for col in &gm.module.relations {
            let comps = gm.components(col);
            if comps.len() > 1 && !comps.iter().all(|(_, v)| gm.module.is_zero_elem(v)) {
                return Err(Error::NotHomogeneous);
            }
        }
        Ok(gm)
    }

    /// Shifts found by propagating degrees along relations, starting from 0.
    pub fn infer(ring: &GradedRing, module: ModulePresentation) -> Result<Self> {
        let g = &ring.group;
        let r = module.rank;
        let mut shifts: Vec<Option<Elem>> = vec![None; r];
        while let Some(i) = shifts.iter().position(|s| s.is_none()) {
            shifts[i] = Some(g.zero());
            let mut changed = true;
            while changed {
                changed = false;
                for col in &module.relations {
                    let Some(k) = (0..r).find(|&i| shifts[i].is_some() && !col[i].is_zero()) else { continue };
                    let d = g.add(shifts[k].as_ref().unwrap(), &ring.mono_degree(col[k].lm()));
                    for j in 0..r {
                        if shifts[j].is_none() && !col[j].is_zero() {
                            shifts[j] = Some(g.sub(&d, &ring.mono_degree(col[j].lm())));
                            changed = true;
                        }
                    }
                }
            }
        }
        Self::new(ring, module, shifts.into_iter().map(|s| s.unwrap()).collect())
    }

    /// `M{h}`: every generator degree moved by `h`.
    pub fn shift(&self, h: &[BigInt]) -> Result<Self> {
        let shifts = self.shifts.iter().map(|s| self.ring.group.add(s, h)).collect();
        Self::new(&self.ring, self.module.clone(), shifts)
    }

    /// Degree of the element `m·eᵢ`.
    pub fn term_degree(&self, pos: usize, m: &[u32]) -> Elem {
        self.ring.group.add(&self.shifts[pos], &self.ring.mono_degree(m))
    }

    /// Homogeneous components of a vector of `S^r`.
    pub fn components(&self, v: &[Poly]) -> Vec<(Elem, Vec<Poly>)> {
        let ring = self.ring.poly_ring();
        let mut by: BTreeMap<Elem, Vec<Vec<(Mono, num_rational::BigRational)>>> = BTreeMap::new();
        for (i, f) in v.iter().enumerate() {
            for (m, c) in &f.terms {
                by.entry(self.term_degree(i, m)).or_insert_with(|| vec![vec![]; v.len()])[i].push((m.clone(), c.clone()));
            }
        }
        by.into_iter().map(|(d, cols)| (d, cols.into_iter().map(|t| ring.from_terms(t)).collect())).collect()
    }
}
