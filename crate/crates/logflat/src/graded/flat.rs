//! Graded flatness: dispatch over ring shapes, with certificate trees.

use super::ring::{Base, BaseKind, ChartShape, GradedRing, Shape};
use crate::abgrp::{FgAbGroup, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::monoid::{Elem, FineMonoid, MonoidHom, MonoidIdeal};
use crate::morphism::{classify_morphism, Tri};
use crate::polyalg::{
    regular_element_test, tor1_quotient, Coef, Ctx, ModuleOrder, ModulePresentation, MonomialOrder, Poly, PolyRing,
    Subquotient,
};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::fmt;

/// One node of a verdict's justification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub rule: String,
    pub holds: bool,
    pub detail: String,
    /// A nonzero `Tor₁` class or a zero divisor, when the node fails.
    pub witness: Option<String>,
    pub children: Vec<Certificate>,
}

impl Certificate {
    pub fn leaf(rule: &str, holds: bool, detail: String, witness: Option<String>) -> Self {
        Certificate { rule: rule.into(), holds, detail, witness, children: vec![] }
    }

    pub fn node(rule: &str, detail: String, children: Vec<Certificate>) -> Self {
        let holds = children.iter().all(|c| c.holds);
        Certificate { rule: rule.into(), holds, detail, witness: None, children }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    fn render(&self, depth: usize, out: &mut String) {
        let mark = if self.holds { "ok" } else { "FAIL" };
        out.push_str(&format!("{}[{mark}] {}: {}", "  ".repeat(depth), self.rule, self.detail));
        if let Some(w) = &self.witness {
            out.push_str(&format!(" (witness {w})"));
        }
        out.push('\n');
        for c in &self.children {
            c.render(depth + 1, out);
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        write!(f, "{}", s.trim_end())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVerdict {
    pub flat: bool,
    pub certificate: Certificate,
}

fn format_vector(ring: &PolyRing, v: &[Poly]) -> String {
    format!("({})", v.iter().map(|f| ring.format(f)).collect::<Vec<_>>().join(", "))
}

/// A generator of a nonzero subquotient, formatted.
pub fn subquotient_witness(sq: &Subquotient) -> Option<String> {
    let ctx = sq.module.ctx();
    let gb = sq.module.gb();
    (0..sq.gens.len())
        .find(|&i| !ctx.reduces_to_zero(&ctx.unit(i), gb))
        .map(|i| format_vector(sq.module.ring(), &sq.gens[i]))
}

/// Leaf recording whether `Tor₁(M, B/J)` vanishes.
pub fn tor_leaf(m: &ModulePresentation, j: &[Poly], label: String) -> Result<Certificate> {
    let t = tor1_quotient(m, j)?;
    let zero = t.is_zero();
    let witness = if zero { None } else { subquotient_witness(&t) };
    Ok(Certificate::leaf("Tor1 vanishing", zero, label, witness))
}

fn ideal_label(ring: &PolyRing, j: &[Poly]) -> String {
    format!("B/({})", j.iter().map(|f| ring.format(f)).collect::<Vec<_>>().join(", "))
}

/// Product of the `k[t]`-leading coefficients of a Gröbner basis of the
/// relation module computed with the other variables eliminated first.
fn leading_coefficient_product(m: &ModulePresentation, t: usize) -> Poly {
    let ring = m.ring();
    let others: Vec<usize> = (0..ring.nvars()).filter(|&i| i != t).collect();
    let er = ring.with_order(MonomialOrder { blocks: vec![others.clone(), vec![t]] });
    let ctx = Ctx::new(&er, ModuleOrder::Pot);
    let gens: Vec<_> = m.submodule().into_iter().map(|v| ctx.from_terms(v.terms)).collect();
    let gb = ctx.groebner(&gens);
    let mut h = ring.one();
    for g in &gb {
        let pos = g.lead_pos();
        let lm = g.lm();
        let same_x = |mono: &[u32]| others.iter().all(|&i| mono[i] == lm[i]);
        let coef: Vec<(Vec<u32>, Coef)> = g
            .terms
            .iter()
            .filter(|(p, mono, _)| *p == pos && same_x(mono))
            .map(|(_, mono, c)| {
                let mut pure = vec![0u32; ring.nvars()];
                pure[t] = mono[t];
                (pure, c.clone())
            })
            .collect();
        h = ring.mul(&h, &ring.from_terms(coef));
    }
    h
}

/// Flatness of `M` over the base `A` of a graded ring.
pub fn flat_over_base(base: &Base, m: &ModulePresentation) -> Result<Certificate> {
    let ring = m.ring();
    Ok(match base.classify(ring)? {
        BaseKind::Zero => Certificate::leaf("flat over A", true, "A is the zero ring".into(), None),
        BaseKind::Field => Certificate::leaf("flat over A", true, "A is a field".into(), None),
        BaseKind::Line(t) => {
            let h = leading_coefficient_product(m, t);
            let ok = regular_element_test(&h, m);
            let name = &ring.names[t];
            let witness = if ok { None } else { Some(format!("{} is a zero divisor", ring.format(&h))) };
            Certificate::leaf("flat over A", ok, format!("torsion-free over k[{name}]"), witness)
        }
    })
}

fn check_module(ring: &GradedRing, m: &ModulePresentation) -> Result<()> {
    if m.over != ring.ring {
        return Err(Error::InvalidInput("module is not defined over the graded ring".into()));
    }
    Ok(())
}

/// Decides graded flatness of `M` over the graded ring, for the supported shapes.
pub fn graded_flat(ring: &GradedRing, m: &ModulePresentation) -> Result<GradedVerdict> {
    check_module(ring, m)?;
    let certificate = match &ring.shape {
        Shape::Plain => {
            return Err(Error::UnsupportedShape("graded ring has no monoid, chart or group-algebra structure".into()))
        }
        Shape::MonoidAlgebra(_) => monoid_algebra_flat(ring, m)?,
        Shape::Chart(cs) => chart_flat(ring, cs, m)?,
        Shape::GroupAlgebra(ga) => {
            let leaf = flat_over_base(&ga.base, m)?;
            Certificate::node("group algebra", "graded flat iff flat over A".into(), vec![leaf])
        }
        Shape::Trivial(base) => {
            let leaf = flat_over_base(base, m)?;
            Certificate::node("trivial grading", "graded flat iff flat".into(), vec![leaf])
        }
    };
    Ok(GradedVerdict { flat: certificate.holds, certificate })
}

fn monoid_algebra_flat(ring: &GradedRing, m: &ModulePresentation) -> Result<Certificate> {
    let Shape::MonoidAlgebra(t) = &ring.shape else { unreachable!() };
    let mut leaves = vec![];
    for i in t.monoid.prime_ideals() {
        let j = ring.to_ring_ideal(&i)?;
        leaves.push(tor_leaf(m, &j, ideal_label(ring.poly_ring(), &j))?);
    }
    Ok(Certificate::node("monoid algebra", "Tor1 against k[P]/k[I] for every prime I".into(), leaves))
}

/// Checks that `E` together with the units of `h(Q)` generates `P`.
fn spawning_generates(cs: &ChartShape) -> Result<bool> {
    let (q, p) = (&cs.h.source, &cs.h.target);
    let amb = p.ambient();
    let mut gens = cs.spawning.clone();
    for (g, unit) in q.gens().iter().zip(q.unit_mask()) {
        if *unit {
            let y = cs.h.apply(g)?;
            gens.push(amb.neg(&y));
            gens.push(y);
        }
    }
    let span = FineMonoid::new(amb.clone(), gens)?;
    Ok(p.gens().iter().all(|g| span.contains(g)))
}

/// Is `(F/Q')^gp → G` injective, where `F` is spanned by the variables `fvars`
/// and `Q'` is generated by `q_face_images`?
fn face_grading_injective(ring: &GradedRing, cs: &ChartShape, fmask: &[bool], q_face_images: &[Elem]) -> bool {
    let p = &cs.h.target;
    let fvars: Vec<usize> = (0..p.ngens()).filter(|&j| fmask[j]).map(|j| cs.p_vars[j]).collect();
    let fgens: Vec<&Elem> = p.gens().iter().zip(fmask).filter(|(_, m)| **m).map(|(g, _)| g).collect();
    let images: Vec<Elem> = fvars.iter().map(|&v| ring.degrees[v].clone()).collect();
    let phi = GroupHom::from_images(FgAbGroup::free(fvars.len()), ring.group.clone(), &images)
        .expect("map from a free group is well defined");
    let hq = Subgroup::generated(p.ambient(), q_face_images);
    let kernel = phi.kernel();
    let amb = p.ambient();
    (0..kernel.group.ngens()).all(|j| {
        let k = kernel.embed.image_of_gen(j);
        let mut x = amb.zero();
        for (c, g) in k.iter().zip(&fgens) {
            x = amb.add(&x, &amb.scale(c, g));
        }
        hq.contains(&x)
    })
}

/// The ring `B_e = B/([e])` with its chart structure over the face complementary to `⟨e⟩`.
fn chart_child(ring: &GradedRing, cs: &ChartShape, e: &Elem) -> Result<(GradedRing, Poly)> {
    let (q, p) = (&cs.h.source, &cs.h.target);
    let s = ring.poly_ring();
    let ideal = MonoidIdeal::new(p, vec![e.clone()])?;
    if !ideal.is_prime() {
        return Err(Error::UnsupportedShape(format!("the ideal generated by the spawning element {e:?} is not prime")));
    }
    let fmask = ideal.complement_mask();
    let face = p.face_monoid(&fmask);
    let qmask: Vec<bool> =
        cs.h.images.iter().map(|y| face.contains(y)).collect();
    let qface = q.face_monoid(&qmask);
    let images: Vec<Elem> = cs.h.images.iter().zip(&qmask).filter(|(_, m)| **m).map(|(y, _)| y.clone()).collect();
    if !face_grading_injective(ring, cs, &fmask, &images) {
        return Err(Error::UnsupportedShape("grading group of a face does not inject into G".into()));
    }
    let h2 = MonoidHom::new(&qface, &face, images)?;
    let mut base = cs.base.clone();
    let mut t2 = vec![];
    for (j, keep) in qmask.iter().enumerate() {
        if *keep {
            t2.push(cs.t[j].clone());
        } else {
            base.ideal.push(cs.t[j].clone());
        }
    }
    let p_vars: Vec<usize> = (0..p.ngens()).filter(|&j| fmask[j]).map(|j| cs.p_vars[j]).collect();
    let names: Vec<String> = p_vars.iter().map(|&v| s.names[v].clone()).collect();
    let toric = crate::polyalg::toric_ideal_named(&face, s.field, names);
    let spawning = cs.spawning.iter().filter(|x| face.contains(x)).cloned().collect();
    let mono = cs.monomial(s, e).ok_or(Error::NotSubmonoid)?;
    let child = ChartShape { base, h: h2, t: t2, p_vars, spawning, toric, inherited: true };
    let g = GradedRing {
        group: ring.group.clone(),
        ring: ring.ring.quotient(std::slice::from_ref(&mono)),
        degrees: ring.degrees.clone(),
        shape: Shape::Chart(child),
    };
    Ok((g, mono))
}

fn chart_flat(ring: &GradedRing, cs: &ChartShape, m: &ModulePresentation) -> Result<Certificate> {
    // Faces of a free chart with a spawning set stay free, so only the outermost level is classified.
    if !cs.inherited {
        let class = classify_morphism(&cs.h);
        if class.free != Tri::Yes {
            return Err(Error::UnsupportedShape(format!("chart morphism is not certified free ({})", class.rule)));
        }
    }
    if !spawning_generates(cs)? {
        return Err(Error::UnsupportedShape("spawning set and units do not generate P".into()));
    }
    let s = ring.poly_ring();
    let mut children = vec![flat_over_base(&cs.base, m)?];
    for e in &cs.spawning {
        let (child, mono) = chart_child(ring, cs, e)?;
        let label = ideal_label(s, std::slice::from_ref(&mono));
        let tor = tor_leaf(m, std::slice::from_ref(&mono), label.clone())?;
        let me = m.over_ring(child.ring.clone());
        let sub = graded_flat(&child, &me)?.certificate;
        children.push(Certificate::node(
            "spawning element",
            format!("e = {}: Tor1 against {label} and graded flatness of M/eM over {label}", s.format(&mono)),
            vec![tor, sub],
        ));
    }
    Ok(Certificate::node("chart recursion", "flat over A, then each spawning element".into(), children))
}

/// Tor₁ test against an explicit family of homogeneous ideals.
pub fn homogeneous_ideal_test(ring: &GradedRing, m: &ModulePresentation, ideals: &[Vec<Poly>]) -> Result<GradedVerdict> {
    check_module(ring, m)?;
    let mut leaves = vec![];
    for j in ideals {
        if !ring.is_homogeneous_ideal(j) {
            return Err(Error::NotHomogeneous);
        }
        leaves.push(tor_leaf(m, j, ideal_label(ring.poly_ring(), j))?);
    }
    let certificate =
        Certificate::node("homogeneous ideals", format!("Tor1 against {} homogeneous ideals", ideals.len()), leaves);
    Ok(GradedVerdict { flat: certificate.holds, certificate })
}

/// Ideals generated by at most `max_gens` distinct nonzero monomials in `vars`
/// of total degree between 1 and `max_degree`.
pub fn monomial_ideal_family(ring: &GradedRing, vars: &[usize], max_gens: usize, max_degree: u32) -> Vec<Vec<Poly>> {
    let s = ring.poly_ring();
    let n = s.nvars();
    let mut monos: Vec<Poly> = vec![];
    let mut seen: BTreeMap<String, ()> = BTreeMap::new();
    fn rec(vars: &[usize], left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        match vars.split_first() {
            None => out.push(cur.clone()),
            Some((&v, rest)) => {
                for e in 0..=left {
                    cur[v] = e;
                    rec(rest, left - e, cur, out);
                }
                cur[v] = 0;
            }
        }
    }
    let mut exps = vec![];
    rec(vars, max_degree, &mut vec![0; n], &mut exps);
    exps.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum::<u32>()).then_with(|| s.cmp(a, b)));
    for e in exps {
        if e.iter().all(|x| *x == 0) {
            continue;
        }
        let f = ring.ring.nf(&s.monomial(e, Coef::from_integer(BigInt::from(1))));
        if f.is_zero() {
            continue;
        }
        if seen.insert(s.format(&f), ()).is_none() {
            monos.push(f);
        }
    }
    let mut out = vec![];
    fn subsets(items: &[Poly], k: usize, start: usize, cur: &mut Vec<Poly>, out: &mut Vec<Vec<Poly>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            subsets(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    subsets(&monos, max_gens, 0, &mut vec![], &mut out);
    out
}
