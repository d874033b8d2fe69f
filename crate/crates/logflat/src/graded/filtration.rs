//! Filtrations of graded modules over `k[P]` with quotients `(k[P]/k[𝔓]){g}`.

use super::ring::{GradedModule, GradedRing, Shape};
use crate::error::{Error, Result};
use crate::monoid::{Elem, FineMonoid, MonoidIdeal};
use crate::polyalg::{divides, Mono, ModuleMap, ModulePresentation, Poly, ToricAlgebra};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, HashSet, VecDeque};

/// One step `Mᵢ₊₁ = Mᵢ + A·x` with `A·x ≅ (A/k[𝔓]){g}`.
#[derive(Clone, Debug)]
pub struct FiltrationStep {
    /// The new generator, as an element of the original free module.
    pub generator: Vec<Poly>,
    pub degree: Elem,
    pub prime: MonoidIdeal,
}

#[derive(Clone, Debug)]
pub struct Filtration {
    pub steps: Vec<FiltrationStep>,
    /// Largest weight for which graded dimensions were compared.
    pub checked_weight: u32,
    /// Graded dimensions of `M` agree with the sum over the quotients.
    pub verified: bool,
}

fn fine_setup(ring: &GradedRing) -> Result<&ToricAlgebra> {
    let Shape::MonoidAlgebra(t) = &ring.shape else {
        return Err(Error::UnsupportedShape("filtrations are computed over monoid algebras".into()));
    };
    if !t.monoid.is_sharp() {
        return Err(Error::UnsupportedShape("filtrations need a monoid without units".into()));
    }
    if ring.group != *t.monoid.ambient() || ring.degrees != t.monoid.gens() {
        return Err(Error::UnsupportedShape("filtrations need the fine grading by P^gp".into()));
    }
    Ok(t)
}

/// `I` with `p + q ∈ I` for some `p, q ∉ I`: returns `p`.
fn primeness_witness(i: &MonoidIdeal) -> Result<Elem> {
    let p = &i.owner;
    let mask = i.complement_mask();
    let outside: Vec<&Elem> = p.gens().iter().zip(&mask).filter(|(_, m)| **m).map(|(g, _)| g).collect();
    let amb = p.ambient();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([amb.zero()]);
    seen.insert(amb.zero());
    while let Some(x) = queue.pop_front() {
        if seen.len() > 100_000 {
            break;
        }
        for g in &outside {
            let y = amb.add(&x, g);
            if i.contains(&y)? {
                return Ok(x);
            }
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Err(Error::UnsupportedIdealClass("no witness of non-primeness found".into()))
}

fn ring_monomial(t: &ToricAlgebra, p: &[BigInt]) -> Result<Poly> {
    let m = t.monomial_of(p).ok_or(Error::NotSubmonoid)?;
    Ok(t.ring().monomial(m, num_rational::BigRational::from_integer(1.into())))
}

/// `Ann(x)` for `x` in `M`, as an ideal of the ring.
fn annihilator_of(m: &ModulePresentation, x: &[Poly]) -> Result<Vec<Poly>> {
    let map = ModuleMap::new(m.over.as_module(), m.clone(), vec![x.to_vec()])?;
    let mut gens: Vec<Poly> = map.kernel().gens.into_iter().map(|v| v[0].clone()).collect();
    gens.extend(m.over.gb().iter().cloned());
    Ok(gens)
}

/// Computes a filtration by repeatedly splitting off `A·x` for a homogeneous
/// `x` whose annihilator is `k[𝔓]` with `𝔓` prime, then compares graded
/// dimensions up to weight `check_weight`.
pub fn filtration(m: &GradedModule, check_weight: u32) -> Result<Filtration> {
    let ring = &m.ring;
    let t = fine_setup(ring)?;
    let s = ring.poly_ring();
    let r = m.module.rank;
    let mut cur = m.module.clone();
    let mut steps = vec![];
    while !cur.is_zero() {
        let ctx = cur.ctx();
        let i = (0..r).find(|&i| !ctx.reduces_to_zero(&ctx.unit(i), cur.gb())).expect("nonzero module has a nonzero generator");
        let mut x = vec![Poly::zero(); r];
        x[i] = s.one();
        let mut shift = m.shifts[i].clone();
        let prime = loop {
            let ann = annihilator_of(&cur, &x)?;
            let ideal = ring.to_monoid_ideal(&ann)?;
            if ideal.is_prime() {
                break ideal;
            }
            let p = primeness_witness(&ideal)?;
            let mono = ring_monomial(t, &p)?;
            x = x.iter().map(|f| s.mul(f, &mono)).collect();
            shift = ring.group.add(&shift, &p);
        };
        let mut rels = cur.relations.clone();
        rels.push(x.clone());
        cur = ModulePresentation::new(cur.over.clone(), r, rels);
        steps.push(FiltrationStep { generator: x, degree: shift, prime });
    }
    let verified = hilbert_check(m, t, &steps, check_weight)?;
    Ok(Filtration { steps, checked_weight: check_weight, verified })
}

/// Dimensions of the graded pieces of `M` of weight at most `bound`.
fn graded_dims(module: &ModulePresentation, shifts: &[Elem], p: &FineMonoid, bound: i64) -> BTreeMap<Elem, usize> {
    let amb = p.ambient();
    let n = module.ring().nvars();
    let weights: Vec<i64> = p.gens().iter().map(|g| p.weight(g).to_i64().expect("weight fits")).collect();
    let mut leads: Vec<Vec<Mono>> = vec![vec![]; module.rank];
    for g in module.gb() {
        leads[g.lead_pos()].push(g.lm().clone());
    }
    let mut out = BTreeMap::new();
    for (pos, h) in shifts.iter().enumerate() {
        let budget = bound - p.weight(h).to_i64().expect("weight fits");
        if budget < 0 {
            continue;
        }
        let mut monos = vec![];
        enumerate(&weights, 0, budget, &mut vec![0u32; n], &mut monos);
        for mono in monos {
            if leads[pos].iter().any(|l| divides(l, &mono)) {
                continue;
            }
            let lambda: Vec<BigInt> = mono.iter().map(|e| BigInt::from(*e)).collect();
            let d = amb.add(h, &p.combine(&lambda));
            *out.entry(d).or_insert(0) += 1;
        }
    }
    out
}

fn enumerate(weights: &[i64], var: usize, budget: i64, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
    if var == weights.len() {
        out.push(cur.clone());
        return;
    }
    let mut e = 0u32;
    loop {
        cur[var] = e;
        let used = weights[var] * e as i64;
        if used > budget {
            break;
        }
        enumerate(weights, var + 1, budget - used, cur, out);
        e += 1;
    }
    cur[var] = 0;
}

fn hilbert_check(m: &GradedModule, t: &ToricAlgebra, steps: &[FiltrationStep], bound: u32) -> Result<bool> {
    let p = &t.monoid;
    let bound = bound as i64;
    let whole = graded_dims(&m.module, &m.shifts, p, bound);
    let mut sum: BTreeMap<Elem, usize> = BTreeMap::new();
    for st in steps {
        let j = m.ring.to_ring_ideal(&st.prime)?;
        let piece = m.ring.ring.quotient_module(&j);
        for (d, k) in graded_dims(&piece, std::slice::from_ref(&st.degree), p, bound) {
            *sum.entry(d).or_insert(0) += k;
        }
    }
    Ok(whole == sum)
}
