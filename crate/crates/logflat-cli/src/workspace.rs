//! Construction of library objects from a validated problem file.

use crate::problem::{to_elem, Int, LogElemSpec, ModuleClass, Object, ObjectSpec, ProblemFile, TaskSpec};
use anyhow::{anyhow, bail, Context, Result};
use logflat::abgrp::FgAbGroup;
use logflat::chart::{ChartData, LiftProblem, LogElem, SquareZeroExtension};
use logflat::descent::{fiber_product_ring, pullback_p, DescentDatum, GluingDatum};
use logflat::graded::GradedRing;
use logflat::monmod::PModule;
use logflat::monoid::{Elem, FineMonoid, MonoidHom, MonoidIdeal};
use logflat::polyalg::{Field, ModulePresentation, Poly, PolyRing, RingMap, RingPresentation};
use std::collections::{BTreeMap, BTreeSet};

pub enum Built {
    Monoid(FineMonoid),
    Hom(MonoidHom),
    MonoidModule(PModule),
    Ring(RingPresentation),
    Module(ModulePresentation),
    Grading(GradedRing),
    Chart(ChartData),
    Gluing(GluingDatum),
    /// The datum and the name of its gluing.
    Datum(DescentDatum, String),
    Lift(LiftProblem),
}

pub struct Workspace {
    pub field: Field,
    objects: BTreeMap<String, Built>,
}

/// Checks everything that does not need computation: the version, unique object names, and that
/// every reference names an earlier object of the right kind.
pub fn validate(file: &ProblemFile) -> Result<()> {
    if file.version != 1 {
        bail!("unsupported version {} (expected 1)", file.version);
    }
    let mut kinds: BTreeMap<&str, &'static str> = BTreeMap::new();
    for obj in &file.objects {
        for (name, allowed) in object_references(&obj.spec) {
            check_ref(&kinds, &format!("object '{}'", obj.name), &name, allowed)?;
        }
        if kinds.insert(&obj.name, obj.spec.kind()).is_some() {
            bail!("duplicate object name '{}'", obj.name);
        }
    }
    let mut task_names = BTreeSet::new();
    for (i, task) in file.tasks.iter().enumerate() {
        let label = task_label(task.name.as_deref(), i);
        if let Some(n) = &task.name {
            if !task_names.insert(n.as_str()) {
                bail!("duplicate task name '{n}'");
            }
        }
        for (name, allowed) in task.spec.references() {
            check_ref(&kinds, &format!("task '{label}'"), name, allowed)?;
        }
        if let TaskSpec::Roundtrip { gluing, module, datum } = &task.spec {
            match (gluing, module, datum) {
                (Some(_), Some(_), None) | (None, None, Some(_)) => {}
                _ => bail!("task '{label}': roundtrip needs either gluing and module, or datum"),
            }
        }
    }
    Ok(())
}

pub fn task_label(name: Option<&str>, index: usize) -> String {
    name.map(str::to_string).unwrap_or_else(|| format!("task{}", index + 1))
}

fn check_ref(kinds: &BTreeMap<&str, &'static str>, owner: &str, name: &str, allowed: &[&str]) -> Result<()> {
    match kinds.get(name) {
        None => bail!("{owner} refers to '{name}', which is not an earlier object"),
        Some(k) if !allowed.contains(k) => {
            bail!("{owner} refers to '{name}' of kind {k}, expected {}", allowed.join(" or "))
        }
        Some(_) => Ok(()),
    }
}

fn object_references(spec: &ObjectSpec) -> Vec<(String, &'static [&'static str])> {
    const RING: &[&str] = &["ring"];
    const MODULE: &[&str] = &["module"];
    let mut out: Vec<(String, &'static [&'static str])> = vec![];
    let mut push = |o: Option<&String>, kinds: &'static [&'static str]| {
        if let Some(n) = o {
            out.push((n.clone(), kinds));
        }
    };
    match spec {
        ObjectSpec::Monoid { .. } | ObjectSpec::Ring { .. } => {}
        ObjectSpec::MonoidHom { source, target, .. } => {
            push(Some(source), &["monoid"]);
            push(Some(target), &["monoid"]);
        }
        ObjectSpec::ModuleOverMonoid { monoid, .. } => push(Some(monoid), &["monoid"]),
        ObjectSpec::Module { ring, direct_sum, .. } => {
            push(Some(ring), RING);
            for m in direct_sum.iter().flatten() {
                push(Some(m), MODULE);
            }
        }
        ObjectSpec::Grading { monoid, ring, .. } => {
            push(monoid.as_ref(), &["monoid"]);
            push(ring.as_ref(), RING);
        }
        ObjectSpec::Chart { hom, base, target, .. } => {
            push(hom.as_ref(), &["monoid_hom"]);
            push(base.as_ref(), RING);
            push(target.as_ref(), RING);
        }
        ObjectSpec::Gluing { c1, c2, c0, .. } => {
            for r in [c1, c2, c0] {
                push(r.as_ref(), RING);
            }
        }
        ObjectSpec::DescentDatum { gluing, pullback_of, m1, m2, .. } => {
            push(Some(gluing), &["gluing"]);
            for m in [pullback_of, m1, m2] {
                push(m.as_ref(), MODULE);
            }
        }
        ObjectSpec::LiftProblem { hom, chart_monoid, .. } => {
            push(Some(hom), &["monoid_hom"]);
            push(Some(chart_monoid), &["monoid"]);
        }
    }
    out
}

fn group(rank: usize, torsion: &[Int]) -> Result<FgAbGroup> {
    Ok(FgAbGroup::new(rank, to_elem(torsion))?)
}

fn elems(v: &[Vec<Int>]) -> Vec<Elem> {
    v.iter().map(|e| to_elem(e)).collect()
}

fn polys(r: &RingPresentation, v: &[String]) -> Result<Vec<Poly>> {
    v.iter().map(|s| r.parse_poly(s).with_context(|| format!("cannot parse '{s}'"))).collect()
}

fn columns(r: &RingPresentation, v: &[Vec<String>]) -> Result<Vec<Vec<Poly>>> {
    v.iter().map(|c| polys(r, c)).collect()
}

/// Columns of a row-major `rows × cols` matrix of polynomials.
fn matrix_columns(r: &RingPresentation, m: &[Vec<String>], rows: usize, cols: usize) -> Result<Vec<Vec<Poly>>> {
    if m.len() != rows || m.iter().any(|row| row.len() != cols) {
        bail!("expected a {rows} x {cols} matrix");
    }
    let parsed = columns(r, m)?;
    Ok((0..cols).map(|j| parsed.iter().map(|row| row[j].clone()).collect()).collect())
}

fn ring_map(src: &RingPresentation, tgt: &RingPresentation, images: &[String]) -> Result<RingMap> {
    Ok(RingMap::new(src.clone(), tgt.clone(), polys(tgt, images)?)?)
}

impl Workspace {
    pub fn build(file: &ProblemFile, field: Field) -> Result<Workspace> {
        validate(file)?;
        let mut ws = Workspace { field, objects: BTreeMap::new() };
        for obj in &file.objects {
            let built = ws.build_object(obj).with_context(|| format!("object '{}'", obj.name))?;
            ws.objects.insert(obj.name.clone(), built);
        }
        Ok(ws)
    }

    pub fn get(&self, name: &str) -> Result<&Built> {
        self.objects.get(name).ok_or_else(|| anyhow!("unknown object '{name}'"))
    }

    pub fn monoid(&self, n: &str) -> Result<&FineMonoid> {
        match self.get(n)? {
            Built::Monoid(m) => Ok(m),
            _ => bail!("'{n}' is not a monoid"),
        }
    }

    pub fn hom(&self, n: &str) -> Result<&MonoidHom> {
        match self.get(n)? {
            Built::Hom(h) => Ok(h),
            _ => bail!("'{n}' is not a monoid_hom"),
        }
    }

    pub fn monoid_module(&self, n: &str) -> Result<&PModule> {
        match self.get(n)? {
            Built::MonoidModule(m) => Ok(m),
            _ => bail!("'{n}' is not a module_over_monoid"),
        }
    }

    pub fn ring(&self, n: &str) -> Result<&RingPresentation> {
        match self.get(n)? {
            Built::Ring(r) => Ok(r),
            _ => bail!("'{n}' is not a ring"),
        }
    }

    pub fn module(&self, n: &str) -> Result<&ModulePresentation> {
        match self.get(n)? {
            Built::Module(m) => Ok(m),
            _ => bail!("'{n}' is not a module"),
        }
    }

    pub fn grading(&self, n: &str) -> Result<&GradedRing> {
        match self.get(n)? {
            Built::Grading(g) => Ok(g),
            _ => bail!("'{n}' is not a grading"),
        }
    }

    pub fn chart(&self, n: &str) -> Result<&ChartData> {
        match self.get(n)? {
            Built::Chart(c) => Ok(c),
            _ => bail!("'{n}' is not a chart"),
        }
    }

    pub fn gluing(&self, n: &str) -> Result<&GluingDatum> {
        match self.get(n)? {
            Built::Gluing(g) => Ok(g),
            _ => bail!("'{n}' is not a gluing"),
        }
    }

    pub fn datum(&self, n: &str) -> Result<&DescentDatum> {
        match self.get(n)? {
            Built::Datum(d, _) => Ok(d),
            _ => bail!("'{n}' is not a descent_datum"),
        }
    }

    pub fn datum_gluing(&self, n: &str) -> Result<&str> {
        match self.get(n)? {
            Built::Datum(_, g) => Ok(g),
            _ => bail!("'{n}' is not a descent_datum"),
        }
    }

    pub fn lift(&self, n: &str) -> Result<&LiftProblem> {
        match self.get(n)? {
            Built::Lift(l) => Ok(l),
            _ => bail!("'{n}' is not a lift_problem"),
        }
    }

    fn build_object(&self, obj: &Object) -> Result<Built> {
        let field = self.field;
        Ok(match &obj.spec {
            ObjectSpec::Monoid { rank, torsion, gens } => Built::Monoid(FineMonoid::new(group(*rank, torsion)?, elems(gens))?),
            ObjectSpec::MonoidHom { source, target, images } => {
                Built::Hom(MonoidHom::new(self.monoid(source)?, self.monoid(target)?, elems(images))?)
            }
            ObjectSpec::ModuleOverMonoid { monoid, class, gens, components, rank, inverted } => {
                let p = self.monoid(monoid)?;
                Built::MonoidModule(match class {
                    ModuleClass::Ideal => PModule::ideal(&MonoidIdeal::new(p, elems(gens))?),
                    ModuleClass::Free => PModule::free(p, rank.ok_or_else(|| anyhow!("a free module needs 'rank'"))?),
                    ModuleClass::Localized => PModule::localized(p, elems(inverted), elems(gens))?,
                    ModuleClass::Embedded => {
                        let comps = components.clone().unwrap_or_else(|| vec![0; gens.len()]);
                        if comps.len() != gens.len() {
                            bail!("'components' needs one entry per generator");
                        }
                        let ncomp = rank.unwrap_or_else(|| comps.iter().max().map_or(1, |c| c + 1));
                        PModule::embedded(p, ncomp, elems(gens).into_iter().zip(comps).collect())?
                    }
                })
            }
            ObjectSpec::Ring { vars, relations } => {
                let v: Vec<&str> = vars.iter().map(String::as_str).collect();
                let r: Vec<&str> = relations.iter().map(String::as_str).collect();
                Built::Ring(RingPresentation::parse(field, &v, &r)?)
            }
            ObjectSpec::Module { ring, rank, relations, ideal, direct_sum } => {
                let r = self.ring(ring)?;
                let forms = [rank.is_some() || !relations.is_empty(), ideal.is_some(), direct_sum.is_some()];
                if forms.iter().filter(|b| **b).count() > 1 {
                    bail!("use only one of rank/relations, ideal, direct_sum");
                }
                let m = if let Some(j) = ideal {
                    r.quotient_module(&polys(r, j)?)
                } else if let Some(parts) = direct_sum {
                    let mut it = parts.iter();
                    let first = it.next().ok_or_else(|| anyhow!("direct_sum needs at least one module"))?;
                    let mut acc = self.module(first)?.clone();
                    for p in it {
                        acc = acc.direct_sum(self.module(p)?)?;
                    }
                    if acc.over != *r {
                        bail!("summands are not modules over '{ring}'");
                    }
                    acc
                } else {
                    let rank = rank.unwrap_or(1);
                    let rels = columns(r, relations)?;
                    if rels.iter().any(|c| c.len() != rank) {
                        bail!("every relation needs {rank} entries");
                    }
                    ModulePresentation::new(r.clone(), rank, rels)
                };
                Built::Module(m)
            }
            ObjectSpec::Grading { preset, monoid, vars, ring, rank, torsion, degrees } => {
                Built::Grading(match (preset.as_deref(), monoid, ring) {
                    (Some("nodal"), None, None) => GradedRing::nodal(field),
                    (Some(other), None, None) => bail!("unknown grading preset '{other}'"),
                    (None, Some(m), None) => match vars {
                        Some(v) => GradedRing::monoid_algebra_named(self.monoid(m)?, field, v.clone()),
                        None => GradedRing::monoid_algebra(self.monoid(m)?, field),
                    },
                    (None, None, Some(r)) => {
                        let g = group(rank.ok_or_else(|| anyhow!("a grading needs 'rank'"))?, torsion)?;
                        if degrees.is_empty() {
                            let names = vars.clone().ok_or_else(|| anyhow!("a group algebra needs 'vars'"))?;
                            GradedRing::group_algebra(self.ring(r)?, &g, names)?
                        } else {
                            GradedRing::new(g, self.ring(r)?.clone(), elems(degrees))?
                        }
                    }
                    _ => bail!("a grading needs exactly one of 'preset', 'monoid', 'ring'"),
                })
            }
            ObjectSpec::Chart { preset, n, vars, unit_extension, hom, base, target, f, t, b, spawning } => {
                let chart = match preset.as_deref() {
                    Some("nodal") => ChartData::nodal(field),
                    Some("smooth_divisor") => ChartData::smooth_divisor(field),
                    Some("nodal_family") => ChartData::nodal_family(field),
                    Some("toric_point") => {
                        let n = n.ok_or_else(|| anyhow!("the toric_point preset needs 'n'"))?;
                        let names = vars.clone().unwrap_or_else(|| (1..=n).map(|i| format!("x{i}")).collect());
                        ChartData::toric_point(n, field, names)?
                    }
                    Some(other) => bail!("unknown chart preset '{other}'"),
                    None => {
                        let need = |o: &Option<String>, what: &str| o.clone().ok_or_else(|| anyhow!("a chart needs '{what}'"));
                        let h = self.hom(&need(hom, "hom")?)?.clone();
                        let a = self.ring(&need(base, "base")?)?;
                        let c = self.ring(&need(target, "target")?)?;
                        let fmap = ring_map(a, c, f)?;
                        let names = vars.clone().ok_or_else(|| anyhow!("a chart needs 'vars' naming the generators of P"))?;
                        let spawn = if spawning.is_empty() { h.target.gens().to_vec() } else { elems(spawning) };
                        ChartData::new(h, fmap, polys(a, t)?, polys(c, b)?, names, spawn)?
                    }
                };
                Built::Chart(match unit_extension {
                    Some(u) => chart.unit_extension(*u)?,
                    None => chart,
                })
            }
            ObjectSpec::Gluing { preset, c1, c2, c0, f1, f2 } => Built::Gluing(match preset.as_deref() {
                Some("nodal") => GluingDatum::nodal(field),
                Some(other) => bail!("unknown gluing preset '{other}'"),
                None => {
                    let need = |o: &Option<String>, what: &str| o.clone().ok_or_else(|| anyhow!("a gluing needs '{what}'"));
                    let r0 = self.ring(&need(c0, "c0")?)?;
                    let m1 = ring_map(self.ring(&need(c1, "c1")?)?, r0, f1)?;
                    let m2 = ring_map(self.ring(&need(c2, "c2")?)?, r0, f2)?;
                    fiber_product_ring(&m1, &m2)?
                }
            }),
            ObjectSpec::DescentDatum { gluing, pullback_of, m1, m2, phi, phi_inv } => {
                let g = self.gluing(gluing)?;
                let d = match (pullback_of, m1, m2) {
                    (Some(m), None, None) => {
                        let m = self.module(m)?;
                        if m.over != g.c {
                            bail!("'pullback_of' is not a module over the glued ring");
                        }
                        pullback_p(g, m)?
                    }
                    (None, Some(a), Some(b)) => {
                        let c0 = g.c0();
                        let (a, b) = (self.module(a)?.clone(), self.module(b)?.clone());
                        let fwd = matrix_columns(c0, phi, b.rank, a.rank).context("phi")?;
                        let inv = phi_inv.as_ref().map(|p| matrix_columns(c0, p, a.rank, b.rank).context("phi_inv")).transpose()?;
                        DescentDatum::new(g, a, b, fwd, inv)?
                    }
                    _ => bail!("a descent datum needs either 'pullback_of' or both 'm1' and 'm2'"),
                };
                Built::Datum(d, gluing.clone())
            }
            ObjectSpec::LiftProblem { extension, hom, chart_monoid, a, b, eta } => {
                let ext = match extension.as_str() {
                    "dual_numbers" => SquareZeroExtension::dual_numbers(field),
                    "trivial" => SquareZeroExtension::trivial(field),
                    other => bail!("unknown extension '{other}'"),
                };
                let (big, small) = (ext.big.clone(), ext.small.clone());
                let log = |r: &RingPresentation, v: &[LogElemSpec]| -> Result<Vec<LogElem>> {
                    v.iter().map(|x| Ok(LogElem::new(to_elem(&x.chart), r.parse_poly(&x.unit)?))).collect()
                };
                Built::Lift(LiftProblem::new(
                    ext,
                    self.hom(hom)?.clone(),
                    self.monoid(chart_monoid)?.clone(),
                    log(&big, a)?,
                    log(&small, b)?,
                    polys(&small, eta)?,
                )?)
            }
        })
    }
}

/// The ring `k` with no variables, used when a task has to name the base field.
pub fn point_ring(field: Field) -> RingPresentation {
    RingPresentation::polynomial(PolyRing::new(field, &[]))
}
