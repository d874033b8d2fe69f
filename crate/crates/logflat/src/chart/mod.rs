//! Charts `Q → P` of log maps: the rings `A(h,t)` and `B = A ⊗_{ℤ[Q]} ℤ[P]`,
//! the chart criteria, chart changes and square-zero lifting.

mod lift;
#[cfg(test)]
mod tests;

pub use lift::{
    homotopy_lift, homotopy_lift_with, verify_lift_uniqueness, Cover, HomotopyLift, LiftOptions, LiftProblem,
    LogElem, LogGroupMap, SquareZeroExtension, UnitMap,
};

use crate::abgrp::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::graded::{
    flat_over_base, graded_flat, nodal_criteria_panel, tor_leaf, Certificate, GradedRing, NodalPanel, Shape,
};
use crate::monoid::{Elem, FineMonoid, MonoidHom, MonoidIdeal};
use crate::morphism::{boundary, classify_morphism, diagonal, isomorphism, product, product_monoid, Tri};
use crate::polyalg::{
    linalg, toric_ideal, toric_ideal_named, Coef, Field, ModulePresentation, Mono, Poly, PolyRing, RingMap,
    RingPresentation, ToricAlgebra,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn as_chart_error(e: Error) -> Error {
    match e {
        Error::InvalidInput(s) => Error::ChartInvalid(s),
        other => other,
    }
}

/// A commutative square `t: Q → A`, `b: P → C`, `h: Q → P`, `f: A → C`.
#[derive(Clone, Debug)]
pub struct ChartData {
    pub h: MonoidHom,
    pub f: RingMap,
    /// Images in `A` of the generators of `Q`.
    pub t: Vec<Poly>,
    /// Images in `C` of the generators of `P`.
    pub b: Vec<Poly>,
    /// Variable names for the generators of `P`.
    pub p_names: Vec<String>,
    /// Spawning set used by the graded recursion.
    pub spawning: Vec<Elem>,
    t_map: RingMap,
    b_map: RingMap,
    p_toric: ToricAlgebra,
}

impl ChartData {
    pub fn new(
        h: MonoidHom,
        f: RingMap,
        t: Vec<Poly>,
        b: Vec<Poly>,
        p_names: Vec<String>,
        spawning: Vec<Elem>,
    ) -> Result<Self> {
        let (q, p) = (&h.source, &h.target);
        if t.len() != q.ngens() || b.len() != p.ngens() || p_names.len() != p.ngens() {
            return Err(Error::ChartInvalid("one image per generator of Q and one image and name per generator of P".into()));
        }
        let field = f.source.ring.field;
        let q_toric = toric_ideal(q, field);
        let p_toric = toric_ideal(p, field);
        let t_map = RingMap::new(q_toric.pres.clone(), f.source.clone(), t.clone())
            .map_err(|_| Error::ChartInvalid("t does not respect the relations of Q".into()))?;
        let b_map = RingMap::new(p_toric.pres.clone(), f.target.clone(), b.clone())
            .map_err(|_| Error::ChartInvalid("b does not respect the relations of P".into()))?;
        let chart = ChartData { h, f, t, b, p_names, spawning, t_map, b_map, p_toric };
        for (j, y) in chart.h.images.iter().enumerate() {
            let lhs = chart.f.apply(&chart.t[j]);
            let rhs = chart.eval_b(y)?;
            if !chart.c().equal(&lhs, &rhs) {
                return Err(Error::ChartInvalid(format!("the square does not commute on generator {j} of Q")));
            }
        }
        Ok(chart)
    }

    pub fn q(&self) -> &FineMonoid {
        &self.h.source
    }

    pub fn p(&self) -> &FineMonoid {
        &self.h.target
    }

    pub fn a(&self) -> &RingPresentation {
        &self.f.source
    }

    pub fn c(&self) -> &RingPresentation {
        &self.f.target
    }

    pub fn field(&self) -> Field {
        self.a().ring.field
    }

    /// `t(q)` for an element of `Q`.
    pub fn eval_t(&self, x: &[BigInt]) -> Result<Poly> {
        let m = toric_ideal(self.q(), self.field()).monomial_of(x).ok_or(Error::NotSubmonoid)?;
        Ok(self.t_map.apply(&self.t_map.source.ring.monomial(m, Coef::one())))
    }

    /// `b(p)` for an element of `P`.
    pub fn eval_b(&self, x: &[BigInt]) -> Result<Poly> {
        let m = self.p_toric.monomial_of(x).ok_or(Error::NotSubmonoid)?;
        Ok(self.b_map.apply(&self.p_toric.ring().monomial(m, Coef::one())))
    }

    /// `k ← ℕ →Δ ℕ² → k[x,y]/(xy)` with `t = 0`.
    pub fn nodal(field: Field) -> Self {
        let a = RingPresentation::polynomial(PolyRing::new(field, &[]));
        let c = RingPresentation::parse(field, &["x", "y"], &["x*y"]).expect("static ring");
        let f = RingMap::new(a.clone(), c.clone(), vec![]).expect("map from k");
        let b = vec![c.ring.var(0), c.ring.var(1)];
        let e = FineMonoid::free_nat(2).gens().to_vec();
        ChartData::new(diagonal(2), f, vec![Poly::zero()], b, vec!["x".into(), "y".into()], e)
            .expect("the nodal chart is valid")
    }

    /// `0 → ℕ` over `k[x]` with `b(1) = x`.
    pub fn smooth_divisor(field: Field) -> Self {
        let a = RingPresentation::polynomial(PolyRing::new(field, &[]));
        let c = RingPresentation::polynomial(PolyRing::new(field, &["x"]));
        let f = RingMap::new(a, c.clone(), vec![]).expect("map from k");
        let e = FineMonoid::free_nat(1).gens().to_vec();
        ChartData::new(boundary(), f, vec![], vec![c.ring.var(0)], vec!["x".into()], e)
            .expect("the smooth divisor chart is valid")
    }

    /// `k[t] ← ℕ →Δ ℕ² → k[t,x,y]/(xy − t)` with `t(1) = t`.
    pub fn nodal_family(field: Field) -> Self {
        let a = RingPresentation::polynomial(PolyRing::new(field, &["t"]));
        let c = RingPresentation::parse(field, &["t", "x", "y"], &["x*y - t"]).expect("static ring");
        let f = RingMap::new(a.clone(), c.clone(), vec![c.ring.var(0)]).expect("inclusion of k[t]");
        let b = vec![c.ring.var(1), c.ring.var(2)];
        let e = FineMonoid::free_nat(2).gens().to_vec();
        ChartData::new(diagonal(2), f, vec![a.ring.var(0)], b, vec!["x".into(), "y".into()], e)
            .expect("the family chart is valid")
    }

    /// `0 → ℕⁿ` over `k[ℕⁿ]` with the tautological `b`, the chart of the toric point.
    pub fn toric_point(n: usize, field: Field, names: Vec<String>) -> Result<Self> {
        let parts: Vec<MonoidHom> = (0..n).map(|_| boundary()).collect();
        let h = if n == 1 { boundary() } else { product(&parts)? };
        let k = RingPresentation::polynomial(PolyRing::new(field, &[]));
        let c = RingPresentation::polynomial(PolyRing::with_names(field, names.clone()));
        if c.ring.nvars() != n {
            return Err(Error::ChartInvalid("one name per generator of ℕⁿ".into()));
        }
        let f = RingMap::new(k, c.clone(), vec![])?;
        let b = (0..n).map(|i| c.ring.var(i)).collect();
        let e = h.target.gens().to_vec();
        ChartData::new(h, f, vec![], b, names, e)
    }

    /// The chart `Q ⊕ ℤᵘ → P ⊕ ℤᵘ` with the extra units sent to `1` in `A` and `C`.
    pub fn unit_extension(&self, u: usize) -> Result<ChartData> {
        let units = FineMonoid::group(&FgAbGroup::free(u));
        let h2 = product(&[self.h.clone(), isomorphism(&units)]).map_err(as_chart_error)?;
        let (_, sum) = product_monoid(&[self.p().clone(), units.clone()]);
        let extra = units.ngens();
        let mut t = self.t.clone();
        t.extend((0..extra).map(|_| self.a().ring.one()));
        let mut b = self.b.clone();
        b.extend((0..extra).map(|_| self.c().ring.one()));
        let mut names = self.p_names.clone();
        for i in 1..=u {
            names.push(format!("w{i}"));
            names.push(format!("w{i}_inv"));
        }
        let spawning = self
            .spawning
            .iter()
            .map(|e| {
                let mut raw = e.clone();
                raw.extend((0..u).map(|_| BigInt::zero()));
                sum.canon(&raw)
            })
            .collect();
        ChartData::new(h2, self.f.clone(), t, b, names, spawning)
    }
}

/// `A(h,t) = A[Q^gp ⊕ P]/I(h,t)` with its comparison map to `C[P^gp]`.
#[derive(Clone, Debug)]
pub struct AhtRing {
    pub ring: RingPresentation,
    /// Variables for the group generators of `Q^gp` (a variable and its inverse per free generator).
    pub q_vars: Vec<usize>,
    pub p_vars: Vec<usize>,
    /// The generators `t(q)[q,0] − [0,h(q)]`, one per generator of `Q`.
    pub generators: Vec<Poly>,
    /// `C[P^gp]`, presented with inverse variables.
    pub laurent: RingPresentation,
    /// `[q,p] ↦ b(p)[h(q)+p]`.
    pub comparison: RingMap,
}

fn group_names(prefix: &str, g: &FgAbGroup) -> Vec<String> {
    let mut names = vec![];
    for i in 0..g.ngens() {
        names.push(format!("{prefix}{}", i + 1));
        if i < g.rank() {
            names.push(format!("{prefix}{}_inv", i + 1));
        }
    }
    names
}

/// Monomial of `x` in a polynomial ring, placed on `vars`.
fn place(t: &ToricAlgebra, x: &[BigInt], ring: &PolyRing, vars: &[usize]) -> Result<Poly> {
    let m = t.monomial_of(x).ok_or(Error::NotSubmonoid)?;
    let mut full = vec![0u32; ring.nvars()];
    for (k, e) in m.iter().enumerate() {
        full[vars[k]] += e;
    }
    Ok(ring.monomial(full, Coef::one()))
}

pub fn build_a_ht(chart: &ChartData) -> Result<AhtRing> {
    let field = chart.field();
    let (q, p) = (chart.q(), chart.p());
    let a = chart.a();
    let qg = &q.gp().group;
    let qgroup = FineMonoid::group(qg);
    let qnames = group_names("q", qg);
    let qtoric = toric_ideal_named(&qgroup, field, qnames.clone());
    let ptoric = toric_ideal_named(p, field, chart.p_names.clone());
    let na = a.ring.nvars();
    let mut names = a.ring.names.clone();
    names.extend(qnames);
    names.extend(chart.p_names.iter().cloned());
    let s = PolyRing::with_names(field, names);
    let amap: Vec<usize> = (0..na).collect();
    let q_vars: Vec<usize> = (na..na + qgroup.ngens()).collect();
    let p_vars: Vec<usize> = (na + qgroup.ngens()..s.nvars()).collect();
    let mut ideal: Vec<Poly> = a.ideal.iter().map(|f| a.ring.embed(f, &s, &amap)).collect();
    ideal.extend(qtoric.pres.ideal.iter().map(|f| qtoric.ring().embed(f, &s, &q_vars)));
    ideal.extend(ptoric.pres.ideal.iter().map(|f| ptoric.ring().embed(f, &s, &p_vars)));
    let mut generators = vec![];
    for (j, g) in q.gens().iter().enumerate() {
        let coords = q.gp().coords_of(g).expect("generator lies in Q^gp");
        let qm = place(&qtoric, &coords, &s, &q_vars)?;
        let pm = place(&ptoric, &chart.h.images[j], &s, &p_vars)?;
        let tq = a.ring.embed(&chart.t[j], &s, &amap);
        generators.push(s.sub(&s.mul(&tq, &qm), &pm));
    }
    ideal.extend(generators.iter().cloned());
    let ring = RingPresentation::new(s.clone(), ideal);

    let c = chart.c();
    let pg = &p.gp().group;
    let pgroup = FineMonoid::group(pg);
    let gnames = group_names("g", pg);
    let gtoric = toric_ideal_named(&pgroup, field, gnames.clone());
    let nc = c.ring.nvars();
    let mut lnames = c.ring.names.clone();
    lnames.extend(gnames);
    let l = PolyRing::with_names(field, lnames);
    let cmap: Vec<usize> = (0..nc).collect();
    let g_vars: Vec<usize> = (nc..l.nvars()).collect();
    let mut lideal: Vec<Poly> = c.ideal.iter().map(|f| c.ring.embed(f, &l, &cmap)).collect();
    lideal.extend(gtoric.pres.ideal.iter().map(|f| gtoric.ring().embed(f, &l, &g_vars)));
    let laurent = RingPresentation::new(l.clone(), lideal);

    let hgp = chart.h.gp_hom();
    let mut images: Vec<Poly> = chart.f.images.iter().map(|f| c.ring.embed(f, &l, &cmap)).collect();
    for g in qgroup.gens() {
        images.push(place(&gtoric, &hgp.apply(g), &l, &g_vars)?);
    }
    for (j, g) in p.gens().iter().enumerate() {
        let coords = p.gp().coords_of(g).expect("generator lies in P^gp");
        let bj = c.ring.embed(&chart.b[j], &l, &cmap);
        images.push(l.mul(&bj, &place(&gtoric, &coords, &l, &g_vars)?));
    }
    let comparison = RingMap::new(ring.clone(), laurent.clone(), images)
        .map_err(|_| Error::ChartInvalid("comparison map to C[P^gp] is not well defined".into()))?;
    Ok(AhtRing { ring, q_vars, p_vars, generators, laurent, comparison })
}

/// `B` graded by `(P/Q)^gp`, with its map to `C` and the freeness status of `h`.
#[derive(Clone, Debug)]
pub struct ChartRing {
    pub graded: GradedRing,
    pub to_c: RingMap,
    /// Freeness of `h` as decided by the monoid classifier; when free, `B` is free over `A`
    /// on the monomials `[s]` of a basis `S`.
    pub free: Tri,
    pub free_rule: &'static str,
}

pub fn build_b(chart: &ChartData) -> Result<ChartRing> {
    let graded =
        GradedRing::tensor_ring(chart.a(), &chart.h, &chart.t, chart.p_names.clone(), chart.spawning.clone())?;
    let mut images = chart.f.images.clone();
    images.extend(chart.b.iter().cloned());
    let to_c = RingMap::new(graded.ring.clone(), chart.c().clone(), images)
        .map_err(|_| Error::ChartInvalid("B → C is not well defined".into()))?;
    let class = classify_morphism(&chart.h);
    Ok(ChartRing { graded, to_c, free: class.free, free_rule: class.rule })
}

/// `M` viewed as a module over the source of a surjective ring map.
pub fn restrict_along(map: &RingMap, m: &ModulePresentation) -> Result<ModulePresentation> {
    if m.over != map.target {
        return Err(Error::InvalidInput("module is not defined over the target ring".into()));
    }
    if !map.is_surjective() {
        return Err(Error::UnsupportedShape("restriction of scalars along a non-surjective map B → C".into()));
    }
    let r = m.rank;
    let mut rels = vec![];
    for col in &m.relations {
        let lifted = col
            .iter()
            .map(|f| map.lift(f).ok_or(Error::NotSurjective))
            .collect::<Result<Vec<_>>>()?;
        rels.push(lifted);
    }
    for g in map.kernel() {
        if map.source.is_zero(&g) {
            continue;
        }
        for i in 0..r {
            let mut col = vec![Poly::zero(); r];
            col[i] = g.clone();
            rels.push(col);
        }
    }
    Ok(ModulePresentation::new(map.source.clone(), r, rels))
}

#[derive(Clone, Debug)]
pub struct ChartVerdict {
    pub log_flat: bool,
    pub certificate: Certificate,
}

/// Log flatness over the chart base: graded flatness of `M` over `(G, B)`.
pub fn second_chart_criterion(chart: &ChartData, m: &ModulePresentation) -> Result<ChartVerdict> {
    if !chart.h.is_injective() {
        return Err(Error::NotInjectiveH);
    }
    let b = build_b(chart)?;
    let mb = restrict_along(&b.to_c, m)?;
    let v = graded_flat(&b.graded, &mb)?;
    let certificate = Certificate::node("second chart criterion", "log flat iff graded flat over (G, B)".into(), vec![v.certificate]);
    Ok(ChartVerdict { log_flat: v.flat, certificate })
}

#[derive(Clone, Debug)]
pub struct PointVerdict {
    pub flat: bool,
    /// Each prime ideal of `P` with the vanishing of `Tor₁(M, k[P]/k[I])`.
    pub primes: Vec<(MonoidIdeal, bool)>,
    pub certificate: Certificate,
}

/// Log flatness over the log point `Spec k` with chart `P`, via `Tor₁` against every prime of `P`.
pub fn log_flat_over_point(p: &FineMonoid, m: &ModulePresentation) -> Result<PointVerdict> {
    let names = m.ring().names.clone();
    if names.len() != p.ngens() {
        return Err(Error::InvalidInput("module is not defined over k[P]".into()));
    }
    let ring = GradedRing::monoid_algebra_named(p, m.ring().field, names);
    if m.over != ring.ring {
        return Err(Error::InvalidInput("module is not defined over k[P]".into()));
    }
    let mut primes = vec![];
    let mut leaves = vec![];
    for i in p.prime_ideals() {
        let j = ring.to_ring_ideal(&i)?;
        let label = if j.is_empty() {
            "(0)".to_string()
        } else {
            format!("({})", j.iter().map(|g| ring.ring.format(g)).collect::<Vec<_>>().join(", "))
        };
        let leaf = tor_leaf(m, &j, label)?;
        primes.push((i, leaf.holds));
        leaves.push(leaf);
    }
    let certificate = Certificate::node("log point", "Tor1 against k[P]/k[I] for every prime I".into(), leaves);
    Ok(PointVerdict { flat: certificate.holds, primes, certificate })
}

/// How two charts of the same map are related.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartRelation {
    Identical,
    /// The second chart is `unit_extension(units)` of the first.
    UnitExtension { units: usize },
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// The canonical map `B → B′`.
    pub forward: RingMap,
    /// Its inverse `B′ → B`, found by lifting generators.
    pub inverse: RingMap,
    /// The induced isomorphism of grading groups.
    pub gamma: GroupHom,
    /// Number of standard monomials of `B` checked for independent images.
    pub monomials_checked: usize,
    pub isomorphism: bool,
    pub verdicts: (bool, bool),
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.isomorphism && self.verdicts.0 == self.verdicts.1
    }
}

fn same_chart(x: &ChartData, y: &ChartData) -> bool {
    x.q() == y.q()
        && x.p() == y.p()
        && x.h.images == y.h.images
        && x.a() == y.a()
        && x.c() == y.c()
        && x.t.iter().zip(&y.t).all(|(f, g)| x.a().equal(f, g))
        && x.b.iter().zip(&y.b).all(|(f, g)| x.c().equal(f, g))
        && x.p_names == y.p_names
}

/// Standard monomials of `R` of total degree at most `d`.
fn standard_monomials_upto(r: &RingPresentation, d: u32) -> Vec<Mono> {
    let n = r.ring.nvars();
    let leads: Vec<Mono> = r.gb().iter().map(|g| g.lm().clone()).collect();
    let mut out = vec![];
    let mut cur = vec![0u32; n];
    fn rec(var: usize, left: u32, cur: &mut Vec<u32>, leads: &[Mono], out: &mut Vec<Mono>) {
        if var == cur.len() {
            if !leads.iter().any(|l| crate::polyalg::divides(l, cur)) {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left {
            cur[var] = e;
            rec(var + 1, left - e, cur, leads, out);
        }
        cur[var] = 0;
    }
    rec(0, d, &mut cur, &leads, &mut out);
    out
}

/// Do the normal forms of `images` span a space of dimension `images.len()`?
fn independent(r: &RingPresentation, images: &[Poly]) -> bool {
    let mut monos: Vec<Mono> = vec![];
    for f in images {
        for (m, _) in &f.terms {
            if !monos.contains(m) {
                monos.push(m.clone());
            }
        }
    }
    let rows: linalg::Mat = images
        .iter()
        .map(|f| {
            let mut row = vec![Coef::zero(); monos.len()];
            for (m, c) in &f.terms {
                let i = monos.iter().position(|x| x == m).expect("collected above");
                row[i] = c.clone();
            }
            row
        })
        .collect();
    linalg::rank(&r.ring.field, &rows) == images.len()
}

/// The map of grading groups determined by the degrees of the `P`-variables.
fn grading_map(b: &GradedRing, b2: &GradedRing, vars: &[usize], vars2: &[usize]) -> Result<GroupHom> {
    let degs: Vec<Elem> = vars.iter().map(|&v| b.degrees[v].clone()).collect();
    let degs2: Vec<Elem> = vars2.iter().map(|&v| b2.degrees[v].clone()).collect();
    let free = FgAbGroup::free(vars.len());
    let pi = GroupHom::from_images(free.clone(), b.group.clone(), &degs)?;
    let pi2 = GroupHom::from_images(free, b2.group.clone(), &degs2)?;
    let kernel = pi.kernel();
    for j in 0..kernel.group.ngens() {
        if !b2.group.is_zero_elem(&pi2.apply(&kernel.embed.image_of_gen(j))) {
            return Err(Error::ChartsUnrelated("gradings are not compatible".into()));
        }
    }
    let mut images = vec![];
    for i in 0..b.group.ngens() {
        let pre = pi.solve(&b.group.basis(i)).ok_or_else(|| Error::ChartsUnrelated("P does not generate G".into()))?;
        images.push(pi2.apply(&pre));
    }
    GroupHom::from_images(b.group.clone(), b2.group.clone(), &images)
        .map_err(|_| Error::ChartsUnrelated("gradings are not compatible".into()))
}

/// Builds `B` and `B′`, certifies that the canonical map is a graded isomorphism, and compares
/// the second-chart verdicts for `M`.
pub fn chart_change_invariance(
    chart: &ChartData,
    other: &ChartData,
    relation: ChartRelation,
    m: &ModulePresentation,
    window: u32,
) -> Result<InvarianceReport> {
    if chart.c() != other.c() {
        return Err(Error::ChartsUnrelated("charts map to different rings C".into()));
    }
    if chart.a() != other.a() {
        return Err(Error::ChartsUnrelated("charts have different base rings A".into()));
    }
    let expected = match relation {
        ChartRelation::Identical => chart.clone(),
        ChartRelation::UnitExtension { units } => chart.unit_extension(units)?,
    };
    if !same_chart(&expected, other) {
        return Err(Error::ChartsUnrelated("the declared relation between the charts does not hold".into()));
    }
    let b = build_b(chart)?;
    let b2 = build_b(other)?;
    let na = chart.a().ring.nvars();
    let np = chart.p().ngens();
    let s2 = b2.graded.poly_ring();
    let images: Vec<Poly> = (0..na + np).map(|i| s2.var(i)).collect();
    let forward = RingMap::new(b.graded.ring.clone(), b2.graded.ring.clone(), images)
        .map_err(|_| Error::ChartsUnrelated("canonical map B → B′ is not well defined".into()))?;
    let lifts = (0..s2.nvars())
        .map(|i| forward.lift(&s2.var(i)).ok_or_else(|| Error::ChartsUnrelated("B → B′ is not surjective".into())))
        .collect::<Result<Vec<_>>>()?;
    let inverse = RingMap::new(b2.graded.ring.clone(), b.graded.ring.clone(), lifts)
        .map_err(|_| Error::ChartsUnrelated("inverse candidate is not well defined".into()))?;
    let s = b.graded.poly_ring();
    let roundtrip_b = (0..s.nvars()).all(|i| b.graded.ring.equal(&inverse.apply(&forward.apply(&s.var(i))), &s.var(i)));
    let roundtrip_b2 =
        (0..s2.nvars()).all(|i| b2.graded.ring.equal(&forward.apply(&inverse.apply(&s2.var(i))), &s2.var(i)));
    let p_vars: Vec<usize> = (na..na + np).collect();
    let gamma = grading_map(&b.graded, &b2.graded, &p_vars, &p_vars)?;
    let graded_ok = gamma.is_injective()
        && gamma.is_surjective()
        && (0..s.nvars()).all(|i| gamma.apply(&b.graded.degrees[i]) == b2.graded.degrees[i]);
    let monos = standard_monomials_upto(&b.graded.ring, window);
    let mapped: Vec<Poly> = monos.iter().map(|mo| forward.apply(&s.monomial(mo.clone(), Coef::one()))).collect();
    let bijective_window = independent(&b2.graded.ring, &mapped);
    let v1 = second_chart_criterion(chart, m)?.log_flat;
    let v2 = second_chart_criterion(other, m)?.log_flat;
    Ok(InvarianceReport {
        forward,
        inverse,
        gamma,
        monomials_checked: monos.len(),
        isomorphism: roundtrip_b && roundtrip_b2 && graded_ok && bijective_window,
        verdicts: (v1, v2),
    })
}

/// Fiber verdicts for a module over `k[t,x,y]/(xy − t)`.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub graded_flat: bool,
    pub flat_over_line: bool,
    /// The panel of `M/tM` over `k[x,y]/(xy)`.
    pub special: NodalPanel,
    /// Graded flatness of `M/(t−1)M` over `k[x,x⁻¹]`.
    pub generic: bool,
    /// Set when the graded verdict differs from the fiberwise prediction.
    pub discrepancy: Option<String>,
}

impl FamilyReport {
    /// The graded verdict implies both fiber verdicts.
    pub fn implication_holds(&self) -> bool {
        !self.graded_flat || (self.special.graded_flat && self.generic)
    }
}

/// Compares graded flatness over the nodal family with flatness over `k[t]` and the fibers
/// at `t = 0` and `t = 1`.
pub fn family_check(m: &ModulePresentation) -> Result<FamilyReport> {
    let field = m.ring().field;
    let chart = ChartData::nodal_family(field);
    let b = build_b(&chart)?;
    let fam = &b.graded;
    let mb = restrict_along(&b.to_c, m)?;
    let graded = graded_flat(fam, &mb)?.flat;
    let Shape::Chart(cs) = &fam.shape else { unreachable!("tensor rings carry a chart shape") };
    let flat_over_line = flat_over_base(&cs.base, &mb)?.holds;
    let s = fam.poly_ring();
    let nodal = GradedRing::nodal(field);
    let n = nodal.poly_ring();
    let to_special = RingMap::new(fam.ring.clone(), nodal.ring.clone(), vec![Poly::zero(), n.var(0), n.var(1)])?;
    let special = nodal_criteria_panel(&mb.base_change(&to_special)?)?;
    let k = RingPresentation::polynomial(PolyRing::new(field, &[]));
    let line = GradedRing::group_algebra(&k, &FgAbGroup::free(1), vec!["x".into(), "y".into()])?;
    let l = line.poly_ring();
    let to_generic = RingMap::new(fam.ring.clone(), line.ring.clone(), vec![l.one(), l.var(0), l.var(1)])?;
    let generic = graded_flat(&line, &mb.base_change(&to_generic)?)?.flat;
    let predicted = flat_over_line && special.graded_flat && generic;
    let discrepancy = (predicted != graded).then(|| {
        format!(
            "graded verdict {graded} but flat over k[{}] {flat_over_line}, special fiber {}, generic fiber {generic}",
            s.names[0], special.graded_flat
        )
    });
    Ok(FamilyReport { graded_flat: graded, flat_over_line, special, generic, discrepancy })
}
