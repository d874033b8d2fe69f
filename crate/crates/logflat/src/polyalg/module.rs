//! Quotient rings, finitely presented modules, kernels and `Tor₁`.

use super::field::Coef;
use super::groebner::{ideal_groebner, ideal_nf, Ctx, ModuleOrder, Vector};
use super::poly::{divides, Mono, MonomialOrder, Poly, PolyRing};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// `S/I` for a polynomial ring `S`; the Gröbner basis of `I` is computed once.
#[derive(Clone)]
pub struct RingPresentation {
    pub ring: PolyRing,
    pub ideal: Vec<Poly>,
    gb: Arc<OnceLock<Vec<Poly>>>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.ideal.iter().map(|g| self.ring.format(g)).collect();
        write!(f, "{}[{}]/({})", self.ring.field, self.ring.names.join(","), gens.join(", "))
    }
}

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gb() == other.gb()
    }
}

impl RingPresentation {
    pub fn new(ring: PolyRing, ideal: Vec<Poly>) -> Self {
        let ideal = ideal.into_iter().filter(|g| !g.is_zero()).collect();
        RingPresentation { ring, ideal, gb: Arc::new(OnceLock::new()) }
    }

    pub fn polynomial(ring: PolyRing) -> Self {
        Self::new(ring, vec![])
    }

    /// Builds `S/I` from variable names and generator strings.
    pub fn parse(field: super::field::Field, vars: &[&str], ideal: &[&str]) -> Result<Self> {
        let ring = PolyRing::new(field, vars);
        let gens = ideal.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ring, gens))
    }

    pub fn gb(&self) -> &[Poly] {
        self.gb.get_or_init(|| ideal_groebner(&self.ring, &self.ideal))
    }

    pub fn nf(&self, f: &Poly) -> Poly {
        ideal_nf(&self.ring, f, self.gb())
    }

    pub fn is_zero(&self, f: &Poly) -> bool {
        self.nf(f).is_zero()
    }

    pub fn equal(&self, f: &Poly, g: &Poly) -> bool {
        self.is_zero(&self.ring.sub(f, g))
    }

    pub fn is_zero_ring(&self) -> bool {
        self.gb().iter().any(|g| g.is_constant())
    }

    pub fn contains_all(&self, gens: &[Poly]) -> bool {
        gens.iter().all(|g| self.is_zero(g))
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        self.ring.parse(s)
    }

    pub fn format(&self, f: &Poly) -> String {
        self.ring.format(f)
    }

    /// `S/(I + J)`.
    pub fn quotient(&self, more: &[Poly]) -> RingPresentation {
        let mut ideal = self.ideal.clone();
        ideal.extend(more.iter().cloned());
        RingPresentation::new(self.ring.clone(), ideal)
    }

    /// The ring as a module of rank one.
    pub fn as_module(&self) -> ModulePresentation {
        ModulePresentation::free(self.clone(), 1)
    }

    /// `R/J` as an `R`-module.
    pub fn quotient_module(&self, j: &[Poly]) -> ModulePresentation {
        ModulePresentation::new(self.clone(), 1, j.iter().map(|g| vec![g.clone()]).collect())
    }

    pub fn vector_space_dim(&self) -> Option<usize> {
        self.as_module().vector_space_dim()
    }

    pub fn standard_monomials(&self) -> Option<Vec<Mono>> {
        self.as_module().standard_basis().map(|b| b.into_iter().map(|(_, m)| m).collect())
    }
}

/// `M = R^rank / ⟨relations⟩`, each relation a column of length `rank`.
#[derive(Clone)]
pub struct ModulePresentation {
    pub over: RingPresentation,
    pub rank: usize,
    pub relations: Vec<Vec<Poly>>,
    gb: Arc<OnceLock<Vec<Vector>>>,
}

impl fmt::Debug for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|c| format!("({})", c.iter().map(|p| self.over.format(p)).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "coker over {:?}: rank {} relations [{}]", self.over, self.rank, rels.join(", "))
    }
}

impl ModulePresentation {
    pub fn new(over: RingPresentation, rank: usize, relations: Vec<Vec<Poly>>) -> Self {
        let relations = relations.into_iter().filter(|c| c.iter().any(|p| !p.is_zero())).collect();
        ModulePresentation { over, rank, relations, gb: Arc::new(OnceLock::new()) }
    }

    pub fn free(over: RingPresentation, rank: usize) -> Self {
        Self::new(over, rank, vec![])
    }

    pub fn ring(&self) -> &PolyRing {
        &self.over.ring
    }

    pub fn ctx(&self) -> Ctx<'_> {
        Ctx::new(&self.over.ring, ModuleOrder::Pot)
    }

    /// Generators in `S^rank` of the submodule presenting `M` over `S`.
    pub fn submodule(&self) -> Vec<Vector> {
        let ctx = self.ctx();
        let mut out: Vec<Vector> = self.relations.iter().map(|c| ctx.from_polys(c)).collect();
        for g in self.over.gb() {
            for i in 0..self.rank {
                out.push(ctx.from_poly(g, i));
            }
        }
        out
    }

    pub fn gb(&self) -> &[Vector] {
        self.gb.get_or_init(|| self.ctx().groebner(&self.submodule()))
    }

    pub fn nf(&self, v: &[Poly]) -> Vec<Poly> {
        let ctx = self.ctx();
        ctx.to_polys(&ctx.nf(&ctx.from_polys(v), self.gb()), self.rank)
    }

    pub fn is_zero_elem(&self, v: &[Poly]) -> bool {
        let ctx = self.ctx();
        ctx.reduces_to_zero(&ctx.from_polys(v), self.gb())
    }

    pub fn is_zero(&self) -> bool {
        let ctx = self.ctx();
        (0..self.rank).all(|i| ctx.reduces_to_zero(&ctx.unit(i), self.gb()))
    }

    /// Monomial `k`-basis of `M` (pairs of position and monomial), or `None`
    /// when `M` is infinite dimensional.
    pub fn standard_basis(&self) -> Option<Vec<(usize, Mono)>> {
        let n = self.over.ring.nvars();
        let mut leads: Vec<Vec<&Mono>> = vec![vec![]; self.rank];
        for g in self.gb() {
            leads[g.lead_pos()].push(g.lm());
        }
        let mut out = vec![];
        for (pos, ls) in leads.iter().enumerate() {
            if ls.iter().any(|m| m.iter().all(|e| *e == 0)) {
                continue;
            }
            let mut bound = vec![0u32; n];
            for (i, b) in bound.iter_mut().enumerate() {
                let pure = ls
                    .iter()
                    .filter(|m| m.iter().enumerate().all(|(k, e)| k == i || *e == 0))
                    .map(|m| m[i])
                    .min()?;
                *b = pure;
            }
            let mut mono = vec![0u32; n];
            loop {
                if !ls.iter().any(|l| divides(l, &mono)) {
                    out.push((pos, mono.clone()));
                }
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    mono[k] += 1;
                    if mono[k] < bound[k] {
                        break;
                    }
                    mono[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
        let ring = &self.over.ring;
        out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| ring.cmp(&a.1, &b.1)));
        Some(out)
    }

    pub fn vector_space_dim(&self) -> Option<usize> {
        self.standard_basis().map(|b| b.len())
    }

    /// Coordinates of an element in the standard monomial basis.
    pub fn coords(&self, basis: &[(usize, Mono)], v: &[Poly]) -> Vec<Coef> {
        let index: HashMap<(usize, &Mono), usize> = basis.iter().enumerate().map(|(i, (p, m))| ((*p, m), i)).collect();
        let mut out = vec![Coef::zero(); basis.len()];
        let ctx = self.ctx();
        for (p, m, c) in ctx.nf(&ctx.from_polys(v), self.gb()).terms {
            let i = index[&(p, &m)];
            out[i] = c;
        }
        out
    }

    /// Basis element as a vector of polynomials.
    pub fn basis_vector(&self, b: &(usize, Mono)) -> Vec<Poly> {
        let mut v = vec![Poly::zero(); self.rank];
        v[b.0] = self.over.ring.monomial(b.1.clone(), Coef::from_integer(1.into()));
        v
    }

    /// Multiplication by `f` on `M`.
    pub fn mult_map(&self, f: &Poly) -> ModuleMap {
        let images = (0..self.rank)
            .map(|i| {
                let mut v = vec![Poly::zero(); self.rank];
                v[i] = f.clone();
                v
            })
            .collect();
        ModuleMap { source: self.clone(), target: self.clone(), images }
    }

    /// `M / JM`, presented over the same ring.
    pub fn quotient_by_ideal(&self, j: &[Poly]) -> ModulePresentation {
        let mut rels = self.relations.clone();
        for g in j {
            for i in 0..self.rank {
                let mut v = vec![Poly::zero(); self.rank];
                v[i] = g.clone();
                rels.push(v);
            }
        }
        ModulePresentation::new(self.over.clone(), self.rank, rels)
    }

    /// `M ⊗_R R/J`, presented over `R/J`.
    pub fn restrict_to_quotient(&self, j: &[Poly]) -> ModulePresentation {
        ModulePresentation::new(self.over.quotient(j), self.rank, self.relations.clone())
    }

    /// Base change along a ring map whose source is the ring of `M`.
    pub fn base_change(&self, map: &super::ringmap::RingMap) -> Result<ModulePresentation> {
        same_ring(&self.over, &map.source)?;
        let rels = self.relations.iter().map(|c| c.iter().map(|f| map.apply(f)).collect()).collect();
        Ok(ModulePresentation::new(map.target.clone(), self.rank, rels))
    }

    /// Same relations, read over another presentation of the same polynomial ring.
    pub fn over_ring(&self, over: RingPresentation) -> ModulePresentation {
        ModulePresentation::new(over, self.rank, self.relations.clone())
    }

    /// Direct sum with another module over the same ring.
    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<ModulePresentation> {
        same_ring(&self.over, &other.over)?;
        let n = self.rank + other.rank;
        let mut rels = vec![];
        for c in &self.relations {
            let mut v = c.clone();
            v.resize(n, Poly::zero());
            rels.push(v);
        }
        for c in &other.relations {
            let mut v = vec![Poly::zero(); self.rank];
            v.extend(c.iter().cloned());
            rels.push(v);
        }
        Ok(ModulePresentation::new(self.over.clone(), n, rels))
    }
}

fn same_ring(a: &RingPresentation, b: &RingPresentation) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::InvalidInput("modules live over different rings".into()))
    }
}

/// Generators of `{a ∈ S^n : Σ aᵢ vᵢ ∈ N}` for `vᵢ ∈ S^b` and `N ⊆ S^b`.
pub fn preimage_kernel(ring: &PolyRing, images: &[Vector], b: usize, sub: &[Vector]) -> Vec<Vector> {
    let ctx = Ctx::new(ring, ModuleOrder::Pot);
    let mut gens = vec![];
    for (i, v) in images.iter().enumerate() {
        gens.push(ctx.add(v, &ctx.unit(b + i)));
    }
    gens.extend(sub.iter().cloned());
    let gb = ctx.groebner(&gens);
    gb.into_iter()
        .filter(|g| g.lead_pos() >= b)
        .map(|g| ctx.reindex(&g, |p| p - b))
        .collect()
}

/// Syzygies over `R = S/I` of the columns `cols` (each in `R^b`).
pub fn syzygies(over: &RingPresentation, cols: &[Vec<Poly>], b: usize) -> Vec<Vec<Poly>> {
    let ctx = Ctx::new(&over.ring, ModuleOrder::Pot);
    let images: Vec<Vector> = cols.iter().map(|c| ctx.from_polys(c)).collect();
    let sub: Vec<Vector> = over.gb().iter().flat_map(|g| (0..b).map(|i| ctx.from_poly(g, i)).collect::<Vec<_>>()).collect();
    let n = cols.len();
    preimage_kernel(&over.ring, &images, b, &sub)
        .into_iter()
        .map(|v| ctx.to_polys(&v, n))
        .map(|v| v.into_iter().map(|p| over.nf(&p)).collect::<Vec<_>>())
        .filter(|v: &Vec<Poly>| v.iter().any(|p| !p.is_zero()))
        .collect()
}

/// Submodule of a presented module, with its own presentation.
#[derive(Clone, Debug)]
pub struct Subquotient {
    /// Generators as elements of the ambient module.
    pub gens: Vec<Vec<Poly>>,
    /// Presentation of the submodule on those generators.
    pub module: ModulePresentation,
}

impl Subquotient {
    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }
}

/// Presentation of the submodule of `S^m / sub` generated by `gens`.
fn present_generated(over: &RingPresentation, gens: Vec<Vector>, m: usize, sub: &[Vector]) -> Subquotient {
    let ctx = Ctx::new(&over.ring, ModuleOrder::Pot);
    let r = gens.len();
    let rels = preimage_kernel(&over.ring, &gens, m, sub);
    let module = ModulePresentation::new(over.clone(), r, rels.iter().map(|v| ctx.to_polys(v, r)).collect());
    Subquotient { gens: gens.iter().map(|v| ctx.to_polys(v, m)).collect(), module }
}

/// `R`-linear map between presented modules, given by images of generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: ModulePresentation,
    pub target: ModulePresentation,
    pub images: Vec<Vec<Poly>>,
}

impl ModuleMap {
    pub fn new(source: ModulePresentation, target: ModulePresentation, images: Vec<Vec<Poly>>) -> Result<Self> {
        same_ring(&source.over, &target.over)?;
        if images.len() != source.rank || images.iter().any(|v| v.len() != target.rank) {
            return Err(Error::InvalidInput("map matrix has the wrong shape".into()));
        }
        let m = ModuleMap { source, target, images };
        if !m.is_well_defined() {
            return Err(Error::InvalidInput("map does not respect the source relations".into()));
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        let ring = &self.source.over.ring;
        let mut out = vec![Poly::zero(); self.target.rank];
        for (a, img) in v.iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(img) {
                *o = ring.add(o, &ring.mul(a, x));
            }
        }
        self.target.nf(&out)
    }

    pub fn is_well_defined(&self) -> bool {
        self.source.relations.iter().all(|r| self.target.is_zero_elem(&self.apply(r)))
    }

    pub fn kernel(&self) -> Subquotient {
        let ctx = self.source.ctx();
        let images: Vec<Vector> = self.images.iter().map(|c| ctx.from_polys(c)).collect();
        let gens = preimage_kernel(self.source.ring(), &images, self.target.rank, &self.target.submodule());
        present_generated(&self.source.over, gens, self.source.rank, &self.source.submodule())
    }

    pub fn is_injective(&self) -> bool {
        let k = self.kernel();
        k.gens.iter().all(|g| self.source.is_zero_elem(g))
    }

    pub fn cokernel(&self) -> ModulePresentation {
        let mut rels = self.target.relations.clone();
        rels.extend(self.images.iter().cloned());
        ModulePresentation::new(self.target.over.clone(), self.target.rank, rels)
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn image(&self) -> Subquotient {
        let ctx = self.target.ctx();
        let gens = self.images.iter().map(|c| ctx.from_polys(c)).collect();
        present_generated(&self.target.over, gens, self.target.rank, &self.target.submodule())
    }
}

/// Kernel of multiplication by `f` on `M`.
pub fn mult_kernel(m: &ModulePresentation, f: &Poly) -> Subquotient {
    m.mult_map(f).kernel()
}

/// Is `f` a nonzerodivisor on `M`?
pub fn regular_element_test(f: &Poly, m: &ModulePresentation) -> bool {
    m.mult_map(f).is_injective()
}

/// `Tor₁^R(M, N)` computed from two syzygy steps of `M`.
pub fn tor1(m: &ModulePresentation, n: &ModulePresentation) -> Result<Subquotient> {
    same_ring(&m.over, &n.over)?;
    let over = &m.over;
    let ring = &over.ring;
    let ctx = Ctx::new(ring, ModuleOrder::Pot);
    let (m0, m1, p) = (m.rank, m.relations.len(), n.rank);
    let kn = n.submodule();
    // d1 ⊗ N on S^{p·m1} → S^{p·m0}.
    let mut d1 = vec![];
    for col in &m.relations {
        for t in 0..p {
            let terms = col.iter().enumerate().flat_map(|(i, f)| {
                f.terms.iter().map(move |(mono, c)| (i * p + t, mono.clone(), c.clone()))
            });
            d1.push(ctx.from_terms(terms.collect()));
        }
    }
    let mut target_sub = vec![];
    for i in 0..m0 {
        for w in &kn {
            target_sub.push(ctx.reindex(w, |q| i * p + q));
        }
    }
    let kernel = preimage_kernel(ring, &d1, p * m0, &target_sub);
    // im(d2 ⊗ N) + K_N^{m1}.
    let f2 = syzygies(over, &m.relations, m0);
    let mut denom = vec![];
    for s in &f2 {
        for t in 0..p {
            let terms = s.iter().enumerate().flat_map(|(j, f)| {
                f.terms.iter().map(move |(mono, c)| (j * p + t, mono.clone(), c.clone()))
            });
            denom.push(ctx.from_terms(terms.collect()));
        }
    }
    for j in 0..m1 {
        for w in &kn {
            denom.push(ctx.reindex(w, |q| j * p + q));
        }
    }
    Ok(present_generated(over, kernel, p * m1, &denom))
}

/// `Tor₁^R(M, R/J)`.
pub fn tor1_quotient(m: &ModulePresentation, j: &[Poly]) -> Result<Subquotient> {
    tor1(m, &m.over.quotient_module(j))
}

/// `Ann_S(M)` as a Gröbner basis; it contains the defining ideal of `R`.
pub fn annihilator(m: &ModulePresentation) -> Vec<Poly> {
    let ring = m.ring();
    let ctx = m.ctx();
    let n = m.rank;
    if n == 0 {
        return vec![ring.one()];
    }
    let image = ctx.from_terms((0..n).map(|i| (i * n + i, ring.one_mono(), Coef::from_integer(1.into()))).collect());
    let sub: Vec<Vector> = (0..n)
        .flat_map(|i| m.submodule().into_iter().map(move |w| (i, w)))
        .map(|(i, w)| ctx.reindex(&w, |q| i * n + q))
        .collect();
    let gens: Vec<Poly> = preimage_kernel(ring, &[image], n * n, &sub).iter().map(|v| ctx.component(v, 0)).collect();
    ideal_groebner(ring, &gens)
}

/// Gröbner basis of `I ∩ k[remaining variables]`, returned in the original ring.
pub fn eliminate(ring: &PolyRing, gens: &[Poly], elim: &[usize]) -> Vec<Poly> {
    let n = ring.nvars();
    let rest: Vec<usize> = (0..n).filter(|i| !elim.contains(i)).collect();
    let order = MonomialOrder { blocks: vec![elim.to_vec(), rest] };
    let er = ring.with_order(order);
    let gens: Vec<Poly> = gens.iter().map(|g| er.resort(g)).collect();
    let gb = ideal_groebner(&er, &gens);
    let kept: Vec<Poly> =
        gb.into_iter().filter(|g| elim.iter().all(|&i| !g.uses_var(i))).map(|g| ring.resort(&g)).collect();
    ideal_groebner(ring, &kept)
}

/// `(I : g^∞)` via an auxiliary variable `w` with `1 − w·g`.
pub fn saturate(ring: &PolyRing, gens: &[Poly], g: &Poly) -> Vec<Poly> {
    let n = ring.nvars();
    let mut names = ring.names.clone();
    names.push(format!("{}_sat", names.join("")));
    let mut blocks = vec![vec![n]];
    blocks.extend(ring.order.blocks.iter().cloned());
    let big = PolyRing { field: ring.field, names, order: MonomialOrder { blocks } };
    let map: Vec<usize> = (0..n).collect();
    let mut eg: Vec<Poly> = gens.iter().map(|f| ring.embed(f, &big, &map)).collect();
    let wg = big.mul(&big.var(n), &ring.embed(g, &big, &map));
    eg.push(big.sub(&big.one(), &wg));
    let gb = ideal_groebner(&big, &eg);
    let kept: Vec<Poly> = gb
        .into_iter()
        .filter(|f| !f.uses_var(n))
        .map(|f| ring.from_terms(f.terms.into_iter().map(|(mut m, c)| {
            m.truncate(n);
            (m, c)
        }).collect()))
        .collect();
    ideal_groebner(ring, &kept)
}

/// `I ∩ J`.
pub fn intersect(ring: &PolyRing, i: &[Poly], j: &[Poly]) -> Vec<Poly> {
    let n = ring.nvars();
    let mut names = ring.names.clone();
    names.push(format!("{}_int", names.join("")));
    let mut blocks = vec![vec![n]];
    blocks.extend(ring.order.blocks.iter().cloned());
    let big = PolyRing { field: ring.field, names, order: MonomialOrder { blocks } };
    let map: Vec<usize> = (0..n).collect();
    let t = big.var(n);
    let one_t = big.sub(&big.one(), &t);
    let mut gens = vec![];
    for f in i {
        gens.push(big.mul(&t, &ring.embed(f, &big, &map)));
    }
    for f in j {
        gens.push(big.mul(&one_t, &ring.embed(f, &big, &map)));
    }
    let gb = ideal_groebner(&big, &gens);
    let kept: Vec<Poly> = gb
        .into_iter()
        .filter(|f| !f.uses_var(n))
        .map(|f| ring.from_terms(f.terms.into_iter().map(|(mut m, c)| {
            m.truncate(n);
            (m, c)
        }).collect()))
        .collect();
    ideal_groebner(ring, &kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::Field;

    fn ring(vars: &[&str], ideal: &[&str]) -> RingPresentation {
        RingPresentation::parse(Field::Q, vars, ideal).unwrap()
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring(&["x", "y"], &[]);
        let x = r.parse_poly("x").unwrap();
        let y = r.parse_poly("y").unwrap();
        let syz = syzygies(&r, &[vec![x.clone()], vec![y.clone()]], 1);
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        // Proportional to (y, -x).
        let ring = &r.ring;
        assert!(ring.add(&ring.mul(&s[0], &x), &ring.mul(&s[1], &y)).is_zero());
        assert_eq!(s[0].degree(), Some(1));
        let unit = syzygies(&r, &[vec![ring.one()]], 1);
        assert!(unit.is_empty());
    }

    #[test]
    fn multiplication_kernel_on_truncated_ring() {
        let r = ring(&["x"], &["x^2"]);
        let m = r.as_module();
        let k = mult_kernel(&m, &r.parse_poly("x").unwrap());
        assert_eq!(k.module.vector_space_dim(), Some(1));
        assert!(!regular_element_test(&r.parse_poly("x").unwrap(), &m));
        let free = ring(&["x"], &[]).as_module();
        assert!(regular_element_test(&free.over.parse_poly("x").unwrap(), &free));
        let nodal = ring(&["x", "y"], &["x*y"]);
        assert!(!regular_element_test(&nodal.parse_poly("x").unwrap(), &nodal.as_module()));
    }

    #[test]
    fn tor_examples() {
        let r = ring(&["x", "y"], &[]);
        let m = r.quotient_module(&[r.parse_poly("x+y").unwrap()]);
        let k = [r.parse_poly("x").unwrap(), r.parse_poly("y").unwrap()];
        let t = tor1_quotient(&m, &k).unwrap();
        assert!(!t.is_zero());
        assert_eq!(t.module.vector_space_dim(), Some(1));
        let free = r.as_module();
        assert!(tor1_quotient(&free, &k).unwrap().is_zero());

        let s = ring(&["x"], &[]);
        let m = s.quotient_module(&[s.parse_poly("x-1").unwrap()]);
        assert!(tor1_quotient(&m, &[s.parse_poly("x").unwrap()]).unwrap().is_zero());
    }

    #[test]
    fn annihilator_and_dimension() {
        let r = ring(&["x", "y"], &["x^2", "y^3"]);
        assert_eq!(r.vector_space_dim(), Some(6));
        let m = r.quotient_module(&[r.parse_poly("x").unwrap()]);
        let ann = annihilator(&m);
        let rr = &r.ring;
        assert_eq!(ann, ideal_groebner(rr, &[rr.parse("x").unwrap(), rr.parse("y^3").unwrap()]));
        assert_eq!(ring(&["x"], &[]).vector_space_dim(), None);
    }

    #[test]
    fn saturation_and_intersection() {
        let r = PolyRing::new(Field::Q, &["x", "y"]);
        let i = vec![r.parse("x^2*y").unwrap(), r.parse("x*y^2").unwrap()];
        let sat = saturate(&r, &i, &r.parse("x").unwrap());
        assert_eq!(sat, vec![r.parse("y").unwrap()]);
        let inter = intersect(&r, &[r.parse("x").unwrap()], &[r.parse("y").unwrap()]);
        assert_eq!(inter, vec![r.parse("x*y").unwrap()]);
        let el = eliminate(&r, &[r.parse("x - y^2").unwrap(), r.parse("x^2 - 1").unwrap()], &[0]);
        assert_eq!(el, vec![r.parse("y^4 - 1").unwrap()]);
    }
}
