//! Running tasks and rendering their results as JSON.

use crate::problem::TaskSpec;
use crate::workspace::Workspace;
use anyhow::{bail, Result};
use logflat::chart::{chart_change_invariance, family_check, homotopy_lift, log_flat_over_point, second_chart_criterion, ChartRelation};
use logflat::descent::{descend_d, hom_ext_fiber_product, roundtrip_datum, roundtrip_module, tor_gate_side, RoundtripReport};
use logflat::graded::{graded_flat, nodal_criteria_panel, Certificate};
use logflat::monmod::{BasisOutcome, FlatVerdict, MElem};
use logflat::morphism::{classify_morphism, PartitionKind, Tri};
use logflat::polyalg::{ModulePresentation, Poly, RingPresentation};
use num_bigint::BigInt;
use serde_json::{json, Value};

/// Settings shared by all tasks of a run.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub window: usize,
}

/// A task outcome: an optional yes/no verdict and a structured result.
pub struct Outcome {
    pub verdict: Option<bool>,
    pub result: Value,
}

pub fn int(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(i) => json!(i),
        Err(_) => json!(v.to_string()),
    }
}

pub fn elem(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn melem(m: &MElem) -> Value {
    json!({"elem": elem(&m.0), "component": m.1})
}

fn poly(r: &RingPresentation, p: &Poly) -> Value {
    json!(r.format(p))
}

fn polys(r: &RingPresentation, ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(|p| poly(r, p)).collect())
}

fn ring(r: &RingPresentation) -> Value {
    json!({"vars": r.ring.names, "relations": polys(r, &r.ideal), "dimension": r.vector_space_dim()})
}

fn module(m: &ModulePresentation) -> Value {
    let rels: Vec<Value> = m.relations.iter().map(|c| polys(&m.over, c)).collect();
    json!({"rank": m.rank, "relations": rels, "dimension": m.vector_space_dim()})
}

pub fn certificate(c: &Certificate) -> Value {
    let mut v = json!({"rule": c.rule, "holds": c.holds, "detail": c.detail});
    if let Some(w) = &c.witness {
        v["witness"] = json!(w);
    }
    if !c.children.is_empty() {
        v["children"] = Value::Array(c.children.iter().map(certificate).collect());
    }
    v
}

fn tri(t: Tri) -> Option<bool> {
    match t {
        Tri::Yes => Some(true),
        Tri::No => Some(false),
        Tri::Undecided => None,
    }
}

fn roundtrip(r: &RoundtripReport) -> Outcome {
    Outcome {
        verdict: Some(r.canonical_iso),
        result: json!({
            "gate": r.gate,
            "canonical_iso": r.canonical_iso,
            "dims": [r.dims.0, r.dims.1],
            "refuted": r.refuted,
            "consistent": r.consistent(),
        }),
    }
}

fn same_ring(m: &ModulePresentation, r: &RingPresentation, what: &str) -> Result<()> {
    if m.over != *r {
        bail!("module is not defined over the {what}");
    }
    Ok(())
}

pub fn run(ws: &Workspace, spec: &TaskSpec, settings: Settings) -> Result<Outcome> {
    Ok(match spec {
        TaskSpec::Classify { hom } => {
            let c = classify_morphism(ws.hom(hom)?);
            let partition = c.partition.map(|p| match p {
                PartitionKind::Partition => "partition",
                PartitionKind::WithBoundary => "partition_with_boundary",
            });
            Outcome {
                verdict: tri(c.flat),
                result: json!({
                    "injective": c.injective,
                    "strict": c.strict,
                    "vertical": c.vertical,
                    "flat": c.flat.as_str(),
                    "free": c.free.as_str(),
                    "witness": c.witness.as_ref().map(|w| w.kind_name()),
                    "obstruction": c.obstruction,
                    "rule": c.rule,
                    "partition": partition,
                }),
            }
        }
        TaskSpec::Primes { monoid } => {
            let p = ws.monoid(monoid)?;
            let primes: Vec<Value> = p
                .prime_ideals()
                .iter()
                .map(|i| {
                    let face: Vec<usize> = i.complement_mask().iter().enumerate().filter(|(_, b)| **b).map(|(j, _)| j).collect();
                    json!({"gens": i.gens.iter().map(|g| elem(g)).collect::<Vec<_>>(), "face": face})
                })
                .collect();
            Outcome { verdict: None, result: json!({"count": primes.len(), "primes": primes}) }
        }
        TaskSpec::Flat { module } => match ws.monoid_module(module)?.is_flat()? {
            FlatVerdict::Flat => Outcome { verdict: Some(true), result: json!({"flat": true}) },
            FlatVerdict::NotFlat { witness } => Outcome {
                verdict: Some(false),
                result: json!({"flat": false, "witness": [melem(&witness.0), melem(&witness.1)]}),
            },
        },
        TaskSpec::Basis { module, window } => {
            let w = window.unwrap_or(settings.window);
            match ws.monoid_module(module)?.extract_basis(w)? {
                BasisOutcome::Basis(b) => Outcome {
                    verdict: Some(true),
                    result: json!({
                        "basis": b.elems.iter().map(melem).collect::<Vec<_>>(),
                        "covers_generators": b.covers_generators,
                        "window": w,
                        "window_checked": b.window_checked,
                    }),
                },
                BasisOutcome::NotFlat { witness } => Outcome {
                    verdict: Some(false),
                    result: json!({"flat": false, "witness": [melem(&witness.0), melem(&witness.1)]}),
                },
            }
        }
        TaskSpec::GradedFlat { grading, module } => {
            let g = ws.grading(grading)?;
            let m = ws.module(module)?;
            same_ring(m, &g.ring, "graded ring")?;
            let v = graded_flat(g, m)?;
            Outcome { verdict: Some(v.flat), result: json!({"flat": v.flat, "certificate": certificate(&v.certificate)}) }
        }
        TaskSpec::NodalPanel { module } => {
            let p = nodal_criteria_panel(ws.module(module)?)?;
            Outcome {
                verdict: Some(p.graded_flat),
                result: json!({
                    "graded_flat": p.graded_flat,
                    "tor_maximal": p.tor_maximal,
                    "injective_map": p.injective_map,
                    "both_regular": p.both_regular,
                    "both_graded_flat": p.both_graded_flat,
                    "x_regular": p.x_regular,
                    "x_graded_flat": p.x_graded_flat,
                    "y_regular": p.y_regular,
                    "y_graded_flat": p.y_graded_flat,
                    "localized": p.localized,
                    "all_agree": p.all_agree(),
                }),
            }
        }
        TaskSpec::LogFlatPoint { monoid, module } => {
            let v = log_flat_over_point(ws.monoid(monoid)?, ws.module(module)?)?;
            let primes: Vec<Value> =
                v.primes.iter().map(|(i, ok)| json!({"gens": i.gens.iter().map(|g| elem(g)).collect::<Vec<_>>(), "flat": ok})).collect();
            Outcome {
                verdict: Some(v.flat),
                result: json!({"flat": v.flat, "primes": primes, "certificate": certificate(&v.certificate)}),
            }
        }
        TaskSpec::ChartCriterion { chart, module } => {
            let c = ws.chart(chart)?;
            let m = ws.module(module)?;
            same_ring(m, c.c(), "chart's target ring")?;
            let v = second_chart_criterion(c, m)?;
            Outcome {
                verdict: Some(v.log_flat),
                result: json!({"log_flat": v.log_flat, "certificate": certificate(&v.certificate)}),
            }
        }
        TaskSpec::ChartInvariance { chart, other, units, module, window } => {
            let relation = match units {
                None => ChartRelation::Identical,
                Some(u) => ChartRelation::UnitExtension { units: *u },
            };
            let w = window.unwrap_or(settings.window);
            let r = chart_change_invariance(ws.chart(chart)?, ws.chart(other)?, relation, ws.module(module)?, w as u32)?;
            Outcome {
                verdict: Some(r.holds()),
                result: json!({
                    "isomorphism": r.isomorphism,
                    "verdicts": [r.verdicts.0, r.verdicts.1],
                    "monomials_checked": r.monomials_checked,
                    "window": w,
                    "holds": r.holds(),
                }),
            }
        }
        TaskSpec::Family { module } => {
            let r = family_check(ws.module(module)?)?;
            Outcome {
                verdict: Some(r.graded_flat),
                result: json!({
                    "graded_flat": r.graded_flat,
                    "flat_over_line": r.flat_over_line,
                    "special_fiber_flat": r.special.graded_flat,
                    "special_panel_agrees": r.special.all_agree(),
                    "generic_fiber_flat": r.generic,
                    "implication_holds": r.implication_holds(),
                    "discrepancy": r.discrepancy,
                }),
            }
        }
        TaskSpec::Lift { problem } => {
            let p = ws.lift(problem)?;
            let l = homotopy_lift(p)?;
            let big = &l.cover.big;
            let roots: Vec<Value> = l
                .cover
                .roots
                .iter()
                .map(|r| json!({"var": big.ring.names[r.var], "order": int(&r.order), "value": poly(big, &r.value)}))
                .collect();
            let identities = l.check(p)?;
            Outcome {
                verdict: Some(identities),
                result: json!({
                    "cases": l.cases,
                    "cover": {
                        "ring": ring(big),
                        "roots": roots,
                        "rank": int(&l.cover.rank()),
                        "rank_certified": l.cover.rank_certified,
                    },
                    "l": {
                        "chart": l.l.chart.iter().map(|e| elem(e)).collect::<Vec<_>>(),
                        "units": polys(big, &l.l.units),
                    },
                    "alpha": polys(&l.cover.small, &l.alpha.units),
                    "beta": polys(big, &l.beta.units),
                    "identities_hold": identities,
                }),
            }
        }
        TaskSpec::Glue { gluing } => {
            let g = ws.gluing(gluing)?;
            Outcome {
                verdict: Some(g.cocartesian && g.kernels_annihilate),
                result: json!({
                    "ring": ring(&g.c),
                    "recipe_generators": g.recipe_generators,
                    "p1": polys(g.c1(), &g.p1.images),
                    "p2": polys(g.c2(), &g.p2.images),
                    "cocartesian": g.cocartesian,
                    "kernels_annihilate": g.kernels_annihilate,
                }),
            }
        }
        TaskSpec::Descend { datum } => {
            let d = ws.datum(datum)?;
            let g = descent_gluing(ws, datum)?;
            let out = descend_d(g, d)?;
            let gates = [tor_gate_side(g, 1, &d.m1)?, tor_gate_side(g, 2, &d.m2)?];
            let gens: Vec<Value> = out.gens.iter().map(|v| polys(&g.c, v)).collect();
            Outcome {
                verdict: None,
                result: json!({"module": module(&out.module), "generators": gens, "branch_gates": gates}),
            }
        }
        TaskSpec::HomExt { gluing, module, other } => {
            let g = ws.gluing(gluing)?;
            let (m, n) = (ws.module(module)?, ws.module(other)?);
            same_ring(m, &g.c, "glued ring")?;
            same_ring(n, &g.c, "glued ring")?;
            let r = hom_ext_fiber_product(g, m, n)?;
            Outcome {
                verdict: Some(r.holds()),
                result: json!({
                    "hom": r.hom,
                    "hom_fiber_product": r.hom_fiber_product,
                    "hom_map_injective": r.hom_map_injective,
                    "ext1": r.ext1,
                    "ext1_fiber_product": r.ext1_fiber_product,
                }),
            }
        }
        TaskSpec::Roundtrip { gluing, module, datum } => match (gluing, module, datum) {
            (Some(g), Some(m), None) => {
                let g = ws.gluing(g)?;
                let m = ws.module(m)?;
                same_ring(m, &g.c, "glued ring")?;
                roundtrip(&roundtrip_module(g, m)?)
            }
            (None, None, Some(d)) => roundtrip(&roundtrip_datum(descent_gluing(ws, d)?, ws.datum(d)?)?),
            _ => bail!("roundtrip needs either gluing and module, or datum"),
        },
    })
}

/// The gluing a descent datum was declared over.
fn descent_gluing<'a>(ws: &'a Workspace, datum: &str) -> Result<&'a logflat::descent::GluingDatum> {
    ws.gluing(ws.datum_gluing(datum)?)
}
