//! Classification of monoid homomorphisms and explicit bases for free ones.
//!
//! A free homomorphism `h: Q → P` comes with a [`FreeWitness`] that can split
//! any `p ∈ P` as `s + h(q)` with `s` in the basis. The structure maps
//! `α(s,t), β(s,t)` are read off from the decomposition of `s + t`.

use crate::abgrp::{FgAbGroup, GroupHom, Presented};
use crate::error::{Error, Result};
use crate::lp;
use crate::monmod::{BasisOutcome, PModule};
use crate::monoid::{pushout, Elem, FineMonoid, MonoidHom};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;

/// Three-valued answer for questions the engine may not settle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Undecided,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    Partition,
    WithBoundary,
}

impl PartitionKind {
    fn join(self, other: PartitionKind) -> PartitionKind {
        if self == PartitionKind::WithBoundary || other == PartitionKind::WithBoundary {
            PartitionKind::WithBoundary
        } else {
            PartitionKind::Partition
        }
    }
}

/// Structure recorded by the partition constructors.
#[derive(Clone, Debug)]
pub struct Declared {
    pub kind: PartitionKind,
    pub witness: FreeWitness,
}

#[derive(Clone)]
#[allow(clippy::large_enum_variant)]
pub enum WitnessKind {
    /// Finitely many basis elements.
    Finite { basis: Vec<Elem> },
    /// Target `ℕ^m` with generator images the indicators of disjoint supports;
    /// the basis is the set of elements vanishing somewhere on every support.
    Primitive { supports: Vec<Vec<usize>> },
    /// Basis `{σ(c)}` for a section `σ` of `P^gp → P^gp / h(Q^gp)` built from `lifts`.
    CosetSection { proj: GroupHom, lifts: Vec<Elem>, units_only: bool },
    /// `g ∘ h` with basis `g(S) + T`.
    Composite { first: Box<FreeWitness>, second: Box<FreeWitness> },
    /// Product of free maps with basis the product of the bases.
    Product { parts: Vec<FreeWitness>, source_sum: Presented, target_sum: Presented },
    /// Pushout of a free map along `f: Q → Q'`, basis the image of the old one.
    Pushout { base: Box<FreeWitness>, f: MonoidHom, i1: MonoidHom, i2: MonoidHom },
}

/// A free homomorphism together with a decomposition procedure.
#[derive(Clone)]
pub struct FreeWitness {
    pub hom: MonoidHom,
    pub kind: WitnessKind,
}

impl fmt::Debug for FreeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWitness({})", self.kind_name())
    }
}

/// Result of re-verifying a free witness on a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeCheck {
    pub decompositions: usize,
    pub roundtrips: usize,
    pub basis_sample: usize,
    pub decompositions_ok: bool,
    pub roundtrip_ok: bool,
    pub identities_ok: bool,
}

impl FreeCheck {
    pub fn ok(&self) -> bool {
        self.decompositions_ok && self.roundtrip_ok && self.identities_ok
    }
}

impl FreeWitness {
    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            WitnessKind::Finite { .. } => "finite",
            WitnessKind::Primitive { .. } => "primitive",
            WitnessKind::CosetSection { .. } => "coset-section",
            WitnessKind::Composite { .. } => "composite",
            WitnessKind::Product { .. } => "product",
            WitnessKind::Pushout { .. } => "pushout",
        }
    }

    fn q(&self) -> &FineMonoid {
        &self.hom.source
    }

    fn p(&self) -> &FineMonoid {
        &self.hom.target
    }

    /// The preimage in `Q` of an element of `h(Q^gp)`, if it lies in `Q`.
    fn pull_back(&self, d: &[BigInt]) -> Option<Elem> {
        let c = self.hom.gp_map.solve(d)?;
        let q = self.q().gp().embed.apply(&c);
        if self.q().contains(&q) {
            Some(q)
        } else {
            None
        }
    }

    /// `p = s + h(q)` with `s` a basis element; `None` when `p ∉ P`.
    pub fn decompose(&self, p: &[BigInt]) -> Option<(Elem, Elem)> {
        let pa = self.p().ambient();
        if pa.check(p).is_err() || !self.p().contains(p) {
            return None;
        }
        let p = pa.reduce(p);
        match &self.kind {
            WitnessKind::Finite { basis } => {
                basis.iter().find_map(|b| self.pull_back(&pa.sub(&p, b)).map(|q| (b.clone(), q)))
            }
            WitnessKind::Primitive { supports } => {
                let qa = self.q().ambient();
                let mut s = p.clone();
                let mut q = qa.zero();
                for (i, sup) in supports.iter().enumerate() {
                    let m = sup.iter().map(|&j| p[j].clone()).min().unwrap_or_else(BigInt::zero);
                    for &j in sup {
                        s[j] -= &m;
                    }
                    q = qa.add(&q, &qa.scale(&m, &self.q().gens()[i]));
                }
                Some((s, q))
            }
            WitnessKind::CosetSection { proj, lifts, .. } => {
                let c = proj.apply(&p);
                let mut s = pa.zero();
                for (k, l) in c.iter().zip(lifts) {
                    s = pa.add(&s, &pa.scale(k, l));
                }
                let q = self.pull_back(&pa.sub(&p, &s))?;
                Some((s, q))
            }
            WitnessKind::Composite { first, second } => {
                let (t, mid) = second.decompose(&p)?;
                let (s, q) = first.decompose(&mid)?;
                let gs = second.hom.apply(&s).ok()?;
                Some((pa.add(&gs, &t), q))
            }
            WitnessKind::Product { parts, source_sum, target_sum } => {
                let raw = target_sum.raw(&p);
                let mut off = 0;
                let mut s_raw = vec![];
                let mut q_raw = vec![];
                for part in parts {
                    let n = part.p().ambient().ngens();
                    let block = part.p().ambient().reduce(&raw[off..off + n]);
                    off += n;
                    let (s, q) = part.decompose(&block)?;
                    s_raw.extend(s);
                    q_raw.extend(q);
                }
                Some((target_sum.canon(&s_raw), source_sum.canon(&q_raw)))
            }
            WitnessKind::Pushout { base, f, i1, i2 } => {
                let lam = self.p().certificate(&p).ok()??;
                let np = i1.source.ngens();
                let pp = i1.source.combine(&lam[..np]);
                let qq = i2.source.combine(&lam[np..]);
                let (s, q) = base.decompose(&pp)?;
                let qa = self.q().ambient();
                let q2 = qa.add(&f.apply(&q).ok()?, &qq);
                Some((i1.apply(&s).ok()?, q2))
            }
        }
    }

    /// `s` is a basis element iff its decomposition has zero `Q`-part.
    pub fn is_basis(&self, s: &[BigInt]) -> bool {
        match self.decompose(s) {
            Some((b, q)) => self.q().ambient().is_zero_elem(&q) && b == self.p().ambient().reduce(s),
            None => false,
        }
    }

    /// Structure maps: `s + t = α(s,t) + h(β(s,t))`.
    pub fn alpha_beta(&self, s: &[BigInt], t: &[BigInt]) -> Option<(Elem, Elem)> {
        self.decompose(&self.p().ambient().add(s, t))
    }

    /// Re-verifies decompositions on the generator-degree window, injectivity by
    /// round trip, and the structure-map identities on a sample of basis elements.
    pub fn verify(&self, window: usize) -> FreeCheck {
        let pa = self.p().ambient().clone();
        let qa = self.q().ambient().clone();
        let mut basis: Vec<Elem> = vec![];
        let mut decompositions = 0;
        let mut decompositions_ok = true;
        for p in self.p().window(window) {
            match self.decompose(&p) {
                Some((s, q)) => {
                    decompositions += 1;
                    let back = self.hom.apply(&q).map(|hq| pa.add(&s, &hq));
                    if back.as_ref() != Ok(&p) || !self.q().contains(&q) || !self.p().contains(&s) {
                        decompositions_ok = false;
                    }
                    if !basis.contains(&s) {
                        basis.push(s);
                    }
                }
                None => decompositions_ok = false,
            }
        }
        let zero_ok = self.decompose(&pa.zero()) == Some((pa.zero(), qa.zero()));
        decompositions_ok &= zero_ok;
        let mut roundtrips = 0;
        let mut roundtrip_ok = true;
        let qwin = self.q().window(window.min(3));
        for s in basis.iter().take(12) {
            for q in &qwin {
                let Ok(hq) = self.hom.apply(q) else {
                    roundtrip_ok = false;
                    continue;
                };
                roundtrips += 1;
                if self.decompose(&pa.add(s, &hq)) != Some((s.clone(), qa.reduce(q))) {
                    roundtrip_ok = false;
                }
            }
        }
        let sample: Vec<Elem> = basis.iter().take(6).cloned().collect();
        let mut identities_ok = true;
        let mut ab: HashMap<(Elem, Elem), Option<(Elem, Elem)>> = HashMap::new();
        let mut get = |a: &Elem, b: &Elem| -> Option<(Elem, Elem)> {
            ab.entry((a.clone(), b.clone())).or_insert_with(|| self.alpha_beta(a, b)).clone()
        };
        let zero_p = pa.zero();
        let zero_q = qa.zero();
        for r in &sample {
            if get(r, &zero_p) != Some((r.clone(), zero_q.clone())) {
                identities_ok = false;
            }
            for s in &sample {
                let (Some(rs), Some(sr)) = (get(r, s), get(s, r)) else {
                    identities_ok = false;
                    continue;
                };
                if rs != sr {
                    identities_ok = false;
                }
                for t in &sample {
                    let (Some(st), Some(a_rs_t)) = (get(s, t), get(&rs.0, t)) else {
                        identities_ok = false;
                        continue;
                    };
                    let Some(r_a_st) = get(r, &st.0) else {
                        identities_ok = false;
                        continue;
                    };
                    if a_rs_t.0 != r_a_st.0 {
                        identities_ok = false;
                    }
                    // β(r,s) + β(α(r,s),t) = β(s,t) + β(r,α(s,t))
                    if qa.add(&rs.1, &a_rs_t.1) != qa.add(&st.1, &r_a_st.1) {
                        identities_ok = false;
                    }
                }
            }
        }
        FreeCheck {
            decompositions,
            roundtrips,
            basis_sample: basis.len(),
            decompositions_ok,
            roundtrip_ok,
            identities_ok,
        }
    }
}

/// Flatness and freeness report for a homomorphism.
#[derive(Clone, Debug)]
pub struct Classification {
    pub injective: bool,
    pub strict: bool,
    pub vertical: bool,
    pub flat: Tri,
    pub free: Tri,
    pub witness: Option<FreeWitness>,
    /// Explanation when flatness fails.
    pub obstruction: Option<String>,
    /// Which rule settled flatness and freeness.
    pub rule: &'static str,
    pub partition: Option<PartitionKind>,
}

/// Is `h̄: Q̄ → P̄` an isomorphism?
pub fn is_strict(h: &MonoidHom) -> bool {
    let q = &h.source;
    let p = &h.target;
    let pi = p.sharp_projection();
    let comp = GroupHom::new(h.gp_map.source.clone(), pi.target.clone(), pi.matrix.mul(&h.gp_map.matrix))
        .expect("composite respects torsion");
    let ker = comp.kernel();
    for j in 0..ker.group.ngens() {
        let x = q.gp().embed.apply(&ker.embed.image_of_gen(j));
        if !q.units().contains(&x) {
            return false;
        }
    }
    let imgs: Vec<Elem> = h.images.iter().map(|y| pi.apply(y)).collect();
    let sub = FineMonoid::new(pi.target.clone(), imgs).expect("projected images lie in the quotient");
    p.gens()
        .iter()
        .zip(p.unit_mask())
        .filter(|(_, u)| !**u)
        .all(|(g, _)| sub.contains(&pi.apply(g)))
}

/// Is the cokernel `P/h(Q)` a group?
pub fn is_vertical(h: &MonoidHom) -> bool {
    let p = &h.target;
    let mut gens = p.gens().to_vec();
    gens.extend(h.images.iter().map(|y| p.ambient().neg(y)));
    FineMonoid::new(p.ambient().clone(), gens).expect("images lie in the ambient group").is_group()
}

/// For each generator `pⱼ` of `P`, the least `Nⱼ ≥ 1` with `Nⱼ pⱼ ∈ h(Q)`, when all exist.
pub fn finite_over(h: &MonoidHom) -> Option<Vec<BigInt>> {
    let pa = h.target.ambient();
    let r = pa.rank();
    let image = FineMonoid::new(pa.clone(), h.images.clone()).ok()?;
    let mut out = vec![];
    for g in h.target.gens() {
        let rows: Vec<Vec<BigRational>> =
            (0..r).map(|c| h.images.iter().map(|y| BigRational::from_integer(y[c].clone())).collect()).collect();
        let rhs: Vec<BigRational> = (0..r).map(|c| BigRational::from_integer(g[c].clone())).collect();
        let lam = if h.images.is_empty() {
            if g[..r].iter().all(|x| x.is_zero()) {
                vec![]
            } else {
                return None;
            }
        } else {
            lp::feasible(&rows, &rhs)?
        };
        let mut bound = lp::common_denominator(&lam);
        let mut comb = pa.zero();
        for (l, y) in lam.iter().zip(&h.images) {
            let k = (l * BigRational::from_integer(bound.clone())).to_integer();
            comb = pa.add(&comb, &pa.scale(&k, y));
        }
        let diff = pa.sub(&pa.scale(&bound, g), &comb);
        {
            let o = pa.elem_order(&diff)?;
            bound *= o
        }
        let mut n = BigInt::one();
        loop {
            if image.contains(&pa.scale(&n, g)) {
                break;
            }
            if n >= bound {
                return None;
            }
            n += 1;
        }
        out.push(n);
    }
    Some(out)
}

const MAX_FINITE_ELEMENTS: usize = 4096;

fn finite_rule(h: &MonoidHom, orders: &[BigInt]) -> Option<std::result::Result<FreeWitness, String>> {
    let pa = h.target.ambient();
    let sizes: Vec<usize> = orders.iter().map(|n| n.try_into().unwrap_or(usize::MAX)).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n))?;
    if total > MAX_FINITE_ELEMENTS {
        return None;
    }
    let (_, cproj) = h.gp_map.cokernel();
    let mut reps: Vec<(Elem, Elem)> = vec![];
    let mut gens = vec![];
    let mut idx = vec![0usize; sizes.len()];
    loop {
        let mut x = pa.zero();
        for (k, g) in idx.iter().zip(h.target.gens()) {
            x = pa.add(&x, &pa.scale(&BigInt::from(*k), g));
        }
        let key = cproj.apply(&x);
        let comp = match reps.iter().position(|(k, _)| *k == key) {
            Some(c) => c,
            None => {
                reps.push((key, x.clone()));
                reps.len() - 1
            }
        };
        let d = pa.sub(&x, &reps[comp].1);
        let c = h.gp_map.solve(&d).expect("same coset differs by the image");
        gens.push((h.source.gp().embed.apply(&c), comp));
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == sizes.len() {
                break;
            }
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == sizes.len() {
            break;
        }
    }
    let module = PModule::embedded(&h.source, reps.len(), gens).ok()?.pruned();
    match module.extract_basis(0) {
        Ok(BasisOutcome::Basis(b)) => {
            let zero_key = cproj.apply(&pa.zero());
            let mut basis = vec![];
            for (e, c) in b.elems {
                let y = pa.add(&reps[c].1, &h.gp_map.apply(&h.source.gp().coords_of(&e)?));
                if reps[c].0 == zero_key {
                    basis.push(pa.zero());
                } else {
                    basis.push(y);
                }
            }
            Some(Ok(FreeWitness { hom: h.clone(), kind: WitnessKind::Finite { basis } }))
        }
        Ok(BasisOutcome::NotFlat { witness }) => Some(Err(format!(
            "P as a Q-module has incomparable generators {:?} and {:?}",
            witness.0, witness.1
        ))),
        Err(_) => None,
    }
}

fn coset_section(h: &MonoidHom, units_only: bool) -> Option<FreeWitness> {
    let p = &h.target;
    let (quot, proj) = h.gp_map.cokernel();
    let source_sub = if units_only { p.units() } else { p.gp() };
    let comp = proj.after(&source_sub.embed);
    let mut lifts = vec![];
    for k in 0..quot.ngens() {
        let x = comp.solve(&quot.basis(k))?;
        lifts.push(source_sub.embed.apply(&x));
    }
    Some(FreeWitness { hom: h.clone(), kind: WitnessKind::CosetSection { proj, lifts, units_only } })
}

fn primitive_rule(h: &MonoidHom) -> Option<FreeWitness> {
    let p = &h.target;
    let m = p.ambient().ngens();
    if !p.ambient().is_free() || p.ngens() != m || p.gens().iter().enumerate().any(|(i, g)| *g != p.ambient().basis(i))
    {
        return None;
    }
    if !h.source.is_sharp() || h.source.rank() != h.source.ngens() {
        return None;
    }
    let mut used = vec![false; m];
    let mut supports = vec![];
    for y in &h.images {
        let mut sup = vec![];
        for (j, v) in y.iter().enumerate() {
            if v.is_one() {
                if used[j] {
                    return None;
                }
                used[j] = true;
                sup.push(j);
            } else if !v.is_zero() {
                return None;
            }
        }
        if sup.is_empty() {
            return None;
        }
        supports.push(sup);
    }
    Some(FreeWitness { hom: h.clone(), kind: WitnessKind::Primitive { supports } })
}

/// Decides injectivity, strictness, verticality, flatness and freeness.
pub fn classify_morphism(h: &MonoidHom) -> Classification {
    let injective = h.is_injective();
    let strict = is_strict(h);
    let vertical = is_vertical(h);
    let mut c = Classification {
        injective,
        strict,
        vertical,
        flat: Tri::Undecided,
        free: Tri::Undecided,
        witness: None,
        obstruction: None,
        rule: "undecided",
        partition: None,
    };
    if let Some(d) = &h.declared {
        c.flat = Tri::Yes;
        c.free = Tri::Yes;
        c.witness = Some(d.witness.clone());
        c.rule = "declared partition";
        c.partition = Some(d.kind);
        return c;
    }
    if !injective {
        c.flat = Tri::No;
        c.free = Tri::No;
        c.rule = "not injective";
        c.obstruction = Some("h^gp has a nonzero kernel".into());
        return c;
    }
    if let Some(orders) = finite_over(h) {
        if let Some(res) = finite_rule(h, &orders) {
            c.rule = "finite over source";
            match res {
                Ok(w) => {
                    c.flat = Tri::Yes;
                    c.free = Tri::Yes;
                    c.witness = Some(w);
                }
                Err(msg) => {
                    c.flat = Tri::No;
                    c.free = Tri::No;
                    c.obstruction = Some(msg);
                }
            }
            return c;
        }
    }
    if strict {
        if let Some(w) = coset_section(h, true) {
            c.flat = Tri::Yes;
            c.free = Tri::Yes;
            c.witness = Some(w);
            c.rule = "strict and injective";
            return c;
        }
    }
    if h.source.is_group() {
        if let Some(w) = coset_section(h, false) {
            c.flat = Tri::Yes;
            c.free = Tri::Yes;
            c.witness = Some(w);
            c.rule = "injective from a group";
            return c;
        }
    }
    if let Some(w) = primitive_rule(h) {
        c.flat = Tri::Yes;
        c.free = Tri::Yes;
        c.witness = Some(w);
        c.rule = "primitive elements of a free target";
        return c;
    }
    c
}

/// `Δ: ℕ → ℕ^m`, free with basis the elements having a zero coordinate.
pub fn diagonal(m: usize) -> MonoidHom {
    assert!(m >= 1, "diagonal needs at least one factor");
    let q = FineMonoid::free_nat(1);
    let p = FineMonoid::free_nat(m);
    let h = MonoidHom::new(&q, &p, vec![vec![BigInt::one(); m]]).expect("diagonal is a homomorphism");
    let w = FreeWitness { hom: h.clone(), kind: WitnessKind::Primitive { supports: vec![(0..m).collect()] } };
    h.with_declared(Declared { kind: PartitionKind::Partition, witness: w })
}

/// `p = Δ(q) + s` with `q` the least coordinate.
pub fn decompose_diagonal(p: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let q = p.iter().min().cloned().unwrap_or_else(BigInt::zero);
    let s = p.iter().map(|x| x - &q).collect();
    (q, s)
}

/// The identity of `P`, an isomorphism with basis `{0}`.
pub fn isomorphism(p: &FineMonoid) -> MonoidHom {
    let h = MonoidHom::identity(p);
    let w = FreeWitness { hom: h.clone(), kind: WitnessKind::Finite { basis: vec![p.ambient().zero()] } };
    h.with_declared(Declared { kind: PartitionKind::Partition, witness: w })
}

/// The boundary map `0 → ℕ`.
pub fn boundary() -> MonoidHom {
    let zero = FineMonoid::new(FgAbGroup::trivial(), vec![]).expect("trivial monoid");
    let n = FineMonoid::free_nat(1);
    let h = MonoidHom::new(&zero, &n, vec![]).expect("zero map");
    let w = FreeWitness { hom: h.clone(), kind: WitnessKind::Primitive { supports: vec![] } };
    h.with_declared(Declared { kind: PartitionKind::WithBoundary, witness: w })
}

fn declared_of(h: &MonoidHom) -> Result<&Declared> {
    h.declared.as_deref().ok_or_else(|| Error::InvalidInput("constructor input is not a partition morphism".into()))
}

/// Direct product of monoids inside the direct sum of ambients.
pub fn product_monoid(ms: &[FineMonoid]) -> (FineMonoid, Presented) {
    let groups: Vec<FgAbGroup> = ms.iter().map(|m| m.ambient().clone()).collect();
    let sum = FgAbGroup::direct_sum(&groups);
    let n: usize = groups.iter().map(|g| g.ngens()).sum();
    let mut gens = vec![];
    let mut off = 0;
    for m in ms {
        for g in m.gens() {
            let mut raw = vec![BigInt::zero(); n];
            raw[off..off + g.len()].clone_from_slice(g);
            gens.push(sum.canon(&raw));
        }
        off += m.ambient().ngens();
    }
    (FineMonoid::new(sum.group.clone(), gens).expect("embedded generators"), sum)
}

/// Product of partition morphisms.
pub fn product(hs: &[MonoidHom]) -> Result<MonoidHom> {
    let decls = hs.iter().map(declared_of).collect::<Result<Vec<_>>>()?;
    let (q, qs) = product_monoid(&hs.iter().map(|h| h.source.clone()).collect::<Vec<_>>());
    let (p, ps) = product_monoid(&hs.iter().map(|h| h.target.clone()).collect::<Vec<_>>());
    let np_raw: usize = hs.iter().map(|h| h.target.ambient().ngens()).sum();
    let mut images = vec![];
    let mut off = 0;
    for h in hs {
        for y in &h.images {
            let mut raw = vec![BigInt::zero(); np_raw];
            raw[off..off + y.len()].clone_from_slice(y);
            images.push(ps.canon(&raw));
        }
        off += h.target.ambient().ngens();
    }
    let h = MonoidHom::new(&q, &p, images)?;
    let kind = decls.iter().fold(PartitionKind::Partition, |k, d| k.join(d.kind));
    let w = FreeWitness {
        hom: h.clone(),
        kind: WitnessKind::Product {
            parts: decls.iter().map(|d| d.witness.clone()).collect(),
            source_sum: qs,
            target_sum: ps,
        },
    };
    Ok(h.with_declared(Declared { kind, witness: w }))
}

/// `g ∘ h` for partition morphisms `h: Q → P`, `g: P → R`.
pub fn compose(h: &MonoidHom, g: &MonoidHom) -> Result<MonoidHom> {
    let dh = declared_of(h)?;
    let dg = declared_of(g)?;
    let c = h.then(g)?;
    let w = FreeWitness {
        hom: c.clone(),
        kind: WitnessKind::Composite { first: Box::new(dh.witness.clone()), second: Box::new(dg.witness.clone()) },
    };
    Ok(c.with_declared(Declared { kind: dh.kind.join(dg.kind), witness: w }))
}

/// The pushout `h': Q' → P ⊕_Q Q'` of a partition morphism `h` along `f: Q → Q'`.
pub fn pushout_of(h: &MonoidHom, f: &MonoidHom) -> Result<MonoidHom> {
    let dh = declared_of(h)?;
    let po = pushout(h, f)?;
    let h2 = po.i2.clone();
    let w = FreeWitness {
        hom: h2.clone(),
        kind: WitnessKind::Pushout { base: Box::new(dh.witness.clone()), f: f.clone(), i1: po.i1, i2: po.i2 },
    };
    Ok(h2.with_declared(Declared { kind: dh.kind, witness: w }))
}

/// Checks `verify` plus the vertical and cokernel claims for a declared partition.
pub fn partition_claims_hold(h: &MonoidHom, window: usize) -> bool {
    let Some(d) = &h.declared else { return false };
    if !d.witness.verify(window).ok() {
        return false;
    }
    let (coker, _) = h.gp_hom().cokernel();
    match d.kind {
        PartitionKind::Partition => is_vertical(h) && coker.is_free(),
        PartitionKind::WithBoundary => coker.is_free(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::elem;

    #[test]
    fn diagonal_is_free_and_vertical() {
        let d = diagonal(3);
        let c = classify_morphism(&d);
        assert_eq!(c.free, Tri::Yes);
        assert!(c.vertical);
        let w = c.witness.unwrap();
        assert!(w.verify(6).ok());
        assert!(w.is_basis(&elem(&[2, 0, 1])));
        assert!(!w.is_basis(&elem(&[2, 1, 1])));
        let (coker, _) = d.gp_hom().cokernel();
        assert_eq!(coker, FgAbGroup::free(2));
    }

    #[test]
    fn undeclared_diagonal_uses_primitive_rule() {
        let q = FineMonoid::free_nat(1);
        let p = FineMonoid::free_nat(3);
        let h = MonoidHom::new(&q, &p, vec![elem(&[1, 1, 1])]).unwrap();
        let c = classify_morphism(&h);
        assert_eq!(c.free, Tri::Yes);
        assert_eq!(c.rule, "primitive elements of a free target");
        assert!(c.witness.unwrap().verify(8).ok());
    }

    #[test]
    fn addition_is_not_flat() {
        let q = FineMonoid::free_nat(2);
        let p = FineMonoid::free_nat(1);
        let h = MonoidHom::new(&q, &p, vec![elem(&[1]), elem(&[1])]).unwrap();
        let c = classify_morphism(&h);
        assert_eq!(c.flat, Tri::No);
        assert_eq!(c.free, Tri::No);
        assert!(h.gp_map.is_surjective());
    }

    #[test]
    fn zero_to_nat_is_free_not_vertical() {
        let c = classify_morphism(&boundary());
        assert_eq!(c.free, Tri::Yes);
        assert!(!c.vertical);
        let zero = FineMonoid::new(FgAbGroup::trivial(), vec![]).unwrap();
        let h = MonoidHom::new(&zero, &FineMonoid::free_nat(1), vec![]).unwrap();
        let c = classify_morphism(&h);
        assert_eq!(c.free, Tri::Yes);
        assert!(!c.vertical);
        assert!(c.witness.unwrap().verify(8).ok());
    }

    #[test]
    fn decompose_diagonal_examples() {
        let (q, s) = decompose_diagonal(&elem(&[3, 1, 2]));
        assert_eq!(q, BigInt::from(1));
        assert_eq!(s, elem(&[2, 0, 1]));
        assert_eq!(decompose_diagonal(&elem(&[0, 0])), (BigInt::zero(), elem(&[0, 0])));
        assert_eq!(decompose_diagonal(&elem(&[5, 5])), (BigInt::from(5), elem(&[0, 0])));
    }

    #[test]
    fn multiplication_by_two_is_free_with_finite_basis() {
        let n = FineMonoid::free_nat(1);
        let h = MonoidHom::new(&n, &n, vec![elem(&[2])]).unwrap();
        let c = classify_morphism(&h);
        assert_eq!(c.rule, "finite over source");
        assert_eq!(c.free, Tri::Yes);
        let w = c.witness.unwrap();
        assert!(w.verify(8).ok());
        assert!(w.is_basis(&elem(&[1])));
    }

    #[test]
    fn non_flat_finite_map() {
        // k[s⁴, s³t, st³, t⁴] is not Cohen-Macaulay, hence not flat over k[s⁴, t⁴].
        let q = FineMonoid::free_nat(2);
        let p = FineMonoid::from_rows(2, &[vec![4, 0], vec![3, 1], vec![1, 3], vec![0, 4]]);
        let h = MonoidHom::new(&q, &p, vec![elem(&[4, 0]), elem(&[0, 4])]).unwrap();
        let c = classify_morphism(&h);
        assert_eq!(c.rule, "finite over source");
        assert_eq!(c.flat, Tri::No);
        assert!(c.obstruction.is_some());
    }

    #[test]
    fn veronese_is_free() {
        let q = FineMonoid::free_nat(2);
        let p = FineMonoid::from_rows(2, &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        let h = MonoidHom::new(&q, &p, vec![elem(&[2, 0]), elem(&[0, 2])]).unwrap();
        let c = classify_morphism(&h);
        assert_eq!(c.free, Tri::Yes);
        let w = c.witness.unwrap();
        assert!(w.verify(6).ok());
        assert!(w.is_basis(&elem(&[1, 1])));
    }

    #[test]
    fn composite_and_product_of_diagonals() {
        let d2 = diagonal(2);
        let id = isomorphism(&FineMonoid::free_nat(1));
        let prod = product(&[d2.clone(), id]).unwrap();
        let comp = compose(&d2, &prod).unwrap();
        let c = classify_morphism(&comp);
        assert_eq!(c.free, Tri::Yes);
        assert!(c.vertical);
        assert!(c.witness.unwrap().verify(5).ok());
        assert!(partition_claims_hold(&comp, 5));
    }

    #[test]
    fn boundary_pushout() {
        // 0 → ℕ pushed out along 0 → ℕ gives ℕ → ℕ ⊕ ℕ with basis {0} × ℕ.
        let b = boundary();
        let zero = b.source.clone();
        let f = MonoidHom::new(&zero, &FineMonoid::free_nat(1), vec![]).unwrap();
        let h = pushout_of(&b, &f).unwrap();
        let c = classify_morphism(&h);
        assert_eq!(c.free, Tri::Yes);
        let w = c.witness.unwrap();
        assert!(w.verify(6).ok());
        assert!(partition_claims_hold(&h, 6));
        assert_eq!(c.partition, Some(PartitionKind::WithBoundary));
    }

    #[test]
    fn strict_injective_is_free() {
        // ℕ → ℕ ⊕ ℤ, n ↦ (n, 0) is strict and injective.
        let q = FineMonoid::free_nat(1);
        let p = FineMonoid::from_rows(2, &[vec![1, 0], vec![0, 1], vec![0, -1]]);
        let h = MonoidHom::new(&q, &p, vec![elem(&[1, 0])]).unwrap();
        let c = classify_morphism(&h);
        assert!(c.strict);
        assert_eq!(c.free, Tri::Yes);
        assert_eq!(c.rule, "strict and injective");
        assert!(c.witness.unwrap().verify(6).ok());
    }
}
