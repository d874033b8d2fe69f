//! Graded modules over a group algebra `A[G]` and their degree-zero parts.

use super::ring::{GradedModule, GradedRing, GroupAlgebraShape, Shape};
use crate::error::{Error, Result};
use crate::polyalg::{ModuleMap, ModulePresentation, Poly, PolyRing, RingPresentation};
use num_bigint::BigInt;

fn shape(ring: &GradedRing) -> Result<&GroupAlgebraShape> {
    match &ring.shape {
        Shape::GroupAlgebra(g) => Ok(g),
        _ => Err(Error::UnsupportedShape("expected a group algebra A[G]".into())),
    }
}

/// The base ring `A` presented on its own variables.
pub fn base_ring(ring: &GradedRing) -> Result<RingPresentation> {
    let ga = shape(ring)?;
    let s = ring.poly_ring();
    let a = PolyRing::with_names(s.field, ga.base_names.clone());
    let images = augmentation_images(s, &a, ga);
    let ideal = ga.base.ideal.iter().map(|f| s.substitute(f, &images, &a)).collect();
    Ok(RingPresentation::new(a, ideal))
}

/// Images of the variables under `A[G] → A`, `[g] ↦ 1`.
fn augmentation_images(s: &PolyRing, a: &PolyRing, ga: &GroupAlgebraShape) -> Vec<Poly> {
    let mut images = vec![a.one(); s.nvars()];
    for (k, &v) in ga.base.vars.iter().enumerate() {
        images[v] = a.var(k);
    }
    images
}

/// `M₀` for a graded `A[G]`-module, computed as `M ⊗_{A[G]} A` along the augmentation.
pub fn degree_zero_part(m: &GradedModule) -> Result<ModulePresentation> {
    let ring = &m.ring;
    let ga = shape(ring)?;
    let a = base_ring(ring)?;
    let images = augmentation_images(ring.poly_ring(), &a.ring, ga);
    let s = ring.poly_ring();
    let rels = m.module.relations.iter().map(|c| c.iter().map(|f| a.nf(&s.substitute(f, &images, &a.ring))).collect()).collect();
    Ok(ModulePresentation::new(a, m.module.rank, rels))
}

/// `N ⊗_A A[G]`, with every generator in degree 0.
pub fn extend_scalars_ag(ring: &GradedRing, n: &ModulePresentation) -> Result<GradedModule> {
    let ga = shape(ring)?;
    let a = base_ring(ring)?;
    if n.over != a {
        return Err(Error::InvalidInput("module is not defined over the base ring A".into()));
    }
    let s = ring.poly_ring();
    let rels = n
        .relations
        .iter()
        .map(|c| c.iter().map(|f| n.ring().embed(f, s, &ga.base.vars)).collect())
        .collect();
    let module = ModulePresentation::new(ring.ring.clone(), n.rank, rels);
    GradedModule::new(ring, module, vec![ring.group.zero(); n.rank])
}

/// The monomial `[g]` of the group part.
fn group_monomial(ring: &GradedRing, g: &[BigInt]) -> Result<Poly> {
    let ga = shape(ring)?;
    let s = ring.poly_ring();
    let m = ga.toric.monomial_of(g).ok_or(Error::NotSubmonoid)?;
    let mut full = vec![0u32; s.nvars()];
    for (k, e) in m.iter().enumerate() {
        full[ga.g_vars[k]] += e;
    }
    Ok(s.monomial(full, num_rational::BigRational::from_integer(1.into())))
}

/// Mutually inverse maps `M₀ ⊗ A[G] ⇄ M`, `eᵢ ↦ [−hᵢ]eᵢ` and `eᵢ ↦ [hᵢ]eᵢ`.
#[derive(Clone, Debug)]
pub struct GroupAlgebraRoundtrip {
    pub degree_zero: ModulePresentation,
    pub to_module: ModuleMap,
    pub from_module: ModuleMap,
}

/// Builds and checks the canonical isomorphism `M₀ ⊗_A A[G] ≅ M`. Both maps must be
/// well defined and their composites must fix every generator.
pub fn roundtrip_ag(m: &GradedModule) -> Result<GroupAlgebraRoundtrip> {
    let ring = &m.ring;
    let g = &ring.group;
    let m0 = degree_zero_part(m)?;
    let ext = extend_scalars_ag(ring, &m0)?;
    let r = m.module.rank;
    let unit = |i: usize, f: Poly| {
        let mut v = vec![Poly::zero(); r];
        v[i] = f;
        v
    };
    let mut there = vec![];
    let mut back = vec![];
    for (i, h) in m.shifts.iter().enumerate() {
        there.push(unit(i, group_monomial(ring, &g.neg(h))?));
        back.push(unit(i, group_monomial(ring, h)?));
    }
    let to_module = ModuleMap::new(ext.module.clone(), m.module.clone(), there)?;
    let from_module = ModuleMap::new(m.module.clone(), ext.module.clone(), back)?;
    for i in 0..r {
        let e = unit(i, ring.poly_ring().one());
        if !m.module.is_zero_elem(&sub(&to_module.apply(&from_module.apply(&e)), &e, ring.poly_ring()))
            || !ext.module.is_zero_elem(&sub(&from_module.apply(&to_module.apply(&e)), &e, ring.poly_ring()))
        {
            return Err(Error::InvalidInput("roundtrip maps are not mutually inverse".into()));
        }
    }
    Ok(GroupAlgebraRoundtrip { degree_zero: m0, to_module, from_module })
}

fn sub(a: &[Poly], b: &[Poly], s: &PolyRing) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| s.sub(x, y)).collect()
}
