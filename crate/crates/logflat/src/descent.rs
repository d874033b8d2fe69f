//! Fibered products of rings along surjections and gluing of modules over them.

use crate::chart::restrict_along;
use crate::error::{Error, Result};
use crate::polyalg::linalg::{self, Mat};
use crate::polyalg::{
    syzygies, tor1_quotient, Coef, Mono, ModuleMap, ModulePresentation, Poly, PolyRing, RingMap, RingPresentation,
};
use num_traits::{One, Zero};

/// `C = C₁ ×_{C₀} C₂` for surjections `f₁: C₁ → C₀`, `f₂: C₂ → C₀`.
#[derive(Clone, Debug)]
pub struct GluingDatum {
    pub f1: RingMap,
    pub f2: RingMap,
    pub c: RingPresentation,
    pub p1: RingMap,
    pub p2: RingMap,
    /// `C → C₀`.
    pub q: RingMap,
    /// Generators of `C` before redundant ones were dropped.
    pub recipe_generators: usize,
    /// `C₁ ⊗_C C₂ ≅ C₀`, checked as `C₁/ker(p₂)C₁ = C₁/ker(f₁)`.
    pub cocartesian: bool,
    /// `ker(p₂)·ker(p₁) = 0` in `C`.
    pub kernels_annihilate: bool,
}

impl GluingDatum {
    pub fn c1(&self) -> &RingPresentation {
        &self.f1.source
    }

    pub fn c2(&self) -> &RingPresentation {
        &self.f2.source
    }

    pub fn c0(&self) -> &RingPresentation {
        &self.f1.target
    }

    /// `k[x] ×_k k[y]`, the two branches of the node.
    pub fn nodal(field: crate::polyalg::Field) -> Self {
        let c1 = RingPresentation::polynomial(PolyRing::new(field, &["x"]));
        let c2 = RingPresentation::polynomial(PolyRing::new(field, &["y"]));
        let c0 = RingPresentation::polynomial(PolyRing::new(field, &[]));
        let f1 = RingMap::new(c1, c0.clone(), vec![Poly::zero()]).expect("evaluation at 0");
        let f2 = RingMap::new(c2, c0, vec![Poly::zero()]).expect("evaluation at 0");
        fiber_product_ring(&f1, &f2).expect("the node is a fibered product")
    }
}

/// The product ring `C₁ × C₂` as `k[u, v, e]` with `e` the idempotent `(1, 0)`.
struct ProductRing {
    ring: RingPresentation,
    n1: usize,
}

impl ProductRing {
    fn new(c1: &RingPresentation, c2: &RingPresentation) -> Self {
        let (n1, n2) = (c1.ring.nvars(), c2.ring.nvars());
        let mut names: Vec<String> = c1.ring.names.iter().map(|n| format!("a_{n}")).collect();
        names.extend(c2.ring.names.iter().map(|n| format!("b_{n}")));
        names.push("idem".into());
        let s = PolyRing::with_names(c1.ring.field, names);
        let e = s.var(n1 + n2);
        let not_e = s.sub(&s.one(), &e);
        let m1: Vec<usize> = (0..n1).collect();
        let m2: Vec<usize> = (n1..n1 + n2).collect();
        let mut ideal = vec![s.sub(&s.mul(&e, &e), &e)];
        for i in 0..n1 {
            ideal.push(s.mul(&not_e, &s.var(i)));
        }
        for j in 0..n2 {
            ideal.push(s.mul(&e, &s.var(n1 + j)));
        }
        ideal.extend(c1.ideal.iter().map(|g| s.mul(&e, &c1.ring.embed(g, &s, &m1))));
        ideal.extend(c2.ideal.iter().map(|g| s.mul(&not_e, &c2.ring.embed(g, &s, &m2))));
        ProductRing { ring: RingPresentation::new(s, ideal), n1 }
    }

    fn pair(&self, c1: &RingPresentation, c2: &RingPresentation, a: &Poly, b: &Poly) -> Poly {
        let s = &self.ring.ring;
        let n2 = c2.ring.nvars();
        let e = s.var(self.n1 + n2);
        let m1: Vec<usize> = (0..self.n1).collect();
        let m2: Vec<usize> = (self.n1..self.n1 + n2).collect();
        let left = s.mul(&e, &c1.ring.embed(a, s, &m1));
        let right = s.mul(&s.sub(&s.one(), &e), &c2.ring.embed(b, s, &m2));
        self.ring.nf(&s.add(&left, &right))
    }
}

/// Presents `C₁ ×_{C₀} C₂` on the pairs `(xᵢ, pᵢ)`, `(q_j, y_j)` and `(0, k)` for `k ∈ ker f₂`,
/// dropping pairs that are generated by the others.
pub fn fiber_product_ring(f1: &RingMap, f2: &RingMap) -> Result<GluingDatum> {
    if f1.target != f2.target {
        return Err(Error::InvalidInput("the two maps need a common target C₀".into()));
    }
    if !f1.is_surjective() || !f2.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let (c1, c2) = (&f1.source, &f2.source);
    let mut pairs: Vec<(String, Poly, Poly)> = vec![];
    for i in 0..c1.ring.nvars() {
        let x = c1.ring.var(i);
        let p = f2.lift(&f1.apply(&x)).ok_or(Error::NotSurjective)?;
        pairs.push((c1.ring.names[i].clone(), x, p));
    }
    for j in 0..c2.ring.nvars() {
        let y = c2.ring.var(j);
        let q = f1.lift(&f2.apply(&y)).ok_or(Error::NotSurjective)?;
        pairs.push((c2.ring.names[j].clone(), q, y));
    }
    for (l, k) in f2.kernel().into_iter().filter(|k| !c2.is_zero(k)).enumerate() {
        pairs.push((format!("z{}", l + 1), Poly::zero(), k));
    }
    let recipe_generators = pairs.len();
    let prod = ProductRing::new(c1, c2);
    let field = c1.ring.field;
    let images = |ps: &[(String, Poly, Poly)]| -> Vec<Poly> { ps.iter().map(|(_, a, b)| prod.pair(c1, c2, a, b)).collect() };
    let mut k = pairs.len();
    while k > 0 {
        k -= 1;
        let mut rest = pairs.clone();
        let (_, a, b) = rest.remove(k);
        let names: Vec<String> = rest.iter().map(|(n, _, _)| n.clone()).collect();
        let src = RingPresentation::polynomial(PolyRing::with_names(field, names));
        let map = RingMap::new(src, prod.ring.clone(), images(&rest))?;
        if map.lift(&prod.pair(c1, c2, &a, &b)).is_some() {
            pairs = rest;
        }
    }
    let names: Vec<String> = pairs.iter().map(|(n, _, _)| n.clone()).collect();
    let free = RingPresentation::polynomial(PolyRing::with_names(field, names));
    let embed = RingMap::new(free, prod.ring.clone(), images(&pairs))?;
    let c = RingPresentation::new(embed.source.ring.clone(), embed.kernel());
    let p1 = RingMap::new(c.clone(), c1.clone(), pairs.iter().map(|(_, a, _)| c1.nf(a)).collect())?;
    let p2 = RingMap::new(c.clone(), c2.clone(), pairs.iter().map(|(_, _, b)| c2.nf(b)).collect())?;
    let q = p1.then(f1)?;
    let k1 = p1.kernel();
    let k2 = p2.kernel();
    let j: Vec<Poly> = k2.iter().map(|g| p1.apply(g)).collect();
    let kf1 = f1.kernel();
    let cocartesian = c1.quotient(&j).contains_all(&kf1) && c1.quotient(&kf1).contains_all(&j);
    let kernels_annihilate = k1.iter().all(|a| k2.iter().all(|b| c.is_zero(&c.ring.mul(a, b))));
    Ok(GluingDatum { f1: f1.clone(), f2: f2.clone(), c, p1, p2, q, recipe_generators, cocartesian, kernels_annihilate })
}

/// Modules over the two branches glued along an isomorphism over `C₀`.
#[derive(Clone, Debug)]
pub struct DescentDatum {
    pub m1: ModulePresentation,
    pub m2: ModulePresentation,
    /// Images in `M₂ ⊗ C₀` of the generators of `M₁ ⊗ C₀`.
    pub phi: Vec<Vec<Poly>>,
    pub phi_inv: Vec<Vec<Poly>>,
}

fn identity_columns(r: usize, ring: &PolyRing) -> Vec<Vec<Poly>> {
    (0..r)
        .map(|i| {
            let mut v = vec![Poly::zero(); r];
            v[i] = ring.one();
            v
        })
        .collect()
}

impl DescentDatum {
    /// Checks that `φ` is a well-defined isomorphism. When `phi_inv` is absent it is computed by
    /// linear algebra, which needs `M₁ ⊗ C₀` to be finite dimensional.
    pub fn new(
        g: &GluingDatum,
        m1: ModulePresentation,
        m2: ModulePresentation,
        phi: Vec<Vec<Poly>>,
        phi_inv: Option<Vec<Vec<Poly>>>,
    ) -> Result<Self> {
        if m1.over != *g.c1() || m2.over != *g.c2() {
            return Err(Error::InvalidInput("modules are not defined over the branches".into()));
        }
        let n1 = m1.base_change(&g.f1)?;
        let n2 = m2.base_change(&g.f2)?;
        let forward = ModuleMap::new(n1.clone(), n2.clone(), phi.clone())?;
        let phi_inv = match phi_inv {
            Some(p) => p,
            None => invert_fd(&forward)?,
        };
        let backward = ModuleMap::new(n2.clone(), n1.clone(), phi_inv.clone())?;
        let s = g.c0().ring.clone();
        let ok1 = identity_columns(n1.rank, &s).iter().all(|e| n1.is_zero_elem(&sub(&s, &backward.apply(&forward.apply(e)), e)));
        let ok2 = identity_columns(n2.rank, &s).iter().all(|e| n2.is_zero_elem(&sub(&s, &forward.apply(&backward.apply(e)), e)));
        if !ok1 || !ok2 {
            return Err(Error::InvalidInput("clutching map is not invertible".into()));
        }
        Ok(DescentDatum { m1, m2, phi, phi_inv })
    }
}

fn sub(s: &PolyRing, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| s.sub(x, y)).collect()
}

/// A finite-dimensional module with its standard monomial basis.
struct Fd {
    m: ModulePresentation,
    basis: Vec<(usize, Mono)>,
}

impl Fd {
    fn new(m: &ModulePresentation) -> Result<Self> {
        let basis = m.standard_basis().ok_or(Error::NotFiniteDimensional)?;
        Ok(Fd { m: m.clone(), basis })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, v: &[Poly]) -> Vec<Coef> {
        self.m.coords(&self.basis, v)
    }

    fn vector(&self, i: usize) -> Vec<Poly> {
        self.m.basis_vector(&self.basis[i])
    }

    /// Matrix of multiplication by `f`.
    fn act(&self, f: &Poly) -> Mat {
        let s = self.m.ring();
        let cols: Vec<Vec<Coef>> =
            (0..self.dim()).map(|i| self.coords(&self.vector(i).iter().map(|p| s.mul(f, p)).collect::<Vec<_>>())).collect();
        transpose(&cols, self.dim())
    }

    /// Matrix of the `k`-linear map to `other` sending each basis vector `v` to `map(v)`.
    fn to(&self, other: &Fd, map: impl Fn(&[Poly]) -> Vec<Poly>) -> Mat {
        let cols: Vec<Vec<Coef>> = (0..self.dim()).map(|i| other.coords(&map(&self.vector(i)))).collect();
        transpose(&cols, other.dim())
    }
}

fn transpose(cols: &[Vec<Coef>], rows: usize) -> Mat {
    (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// Inverse of a bijective map between finite-dimensional modules, on generators.
fn invert_fd(map: &ModuleMap) -> Result<Vec<Vec<Poly>>> {
    let src = Fd::new(&map.source)?;
    let tgt = Fd::new(&map.target)?;
    if src.dim() != tgt.dim() {
        return Err(Error::InvalidInput("clutching map between spaces of different dimension".into()));
    }
    let a = src.to(&tgt, |v| map.apply(v));
    let field = map.source.ring().field;
    let s = map.source.ring();
    let mut out = vec![];
    for e in identity_columns(map.target.rank, s) {
        let y = tgt.coords(&e);
        let x = linalg::solve(&field, &a, &y, src.dim())
            .ok_or_else(|| Error::InvalidInput("clutching map is not surjective".into()))?;
        let mut v = vec![Poly::zero(); map.source.rank];
        for (c, i) in x.iter().zip(0..) {
            let b = src.vector(i);
            for (o, p) in v.iter_mut().zip(&b) {
                *o = s.add(o, &s.scale(p, c));
            }
        }
        out.push(map.source.nf(&v));
    }
    Ok(out)
}

/// `P(M) = (M ⊗ C₁, M ⊗ C₂)` with the identity clutching.
pub fn pullback_p(g: &GluingDatum, m: &ModulePresentation) -> Result<DescentDatum> {
    let m1 = m.base_change(&g.p1)?;
    let m2 = m.base_change(&g.p2)?;
    let id = identity_columns(m.rank, &g.c0().ring);
    DescentDatum::new(g, m1, m2, id.clone(), Some(id))
}

/// `D(M₁, M₂, φ) = M₁ ×_{M₀} M₂` as the kernel of `M₁ ⊕ M₂ → M₂ ⊗ C₀`, `(a, b) ↦ φ(a) − b`.
pub struct Descended {
    pub module: ModulePresentation,
    /// Generators of `D` as elements of `M₁ ⊕ M₂` restricted to `C`.
    pub gens: Vec<Vec<Poly>>,
}

fn difference_map(g: &GluingDatum, d: &DescentDatum) -> Result<ModuleMap> {
    let r1 = restrict_along(&g.p1, &d.m1)?;
    let r2 = restrict_along(&g.p2, &d.m2)?;
    let m0 = restrict_along(&g.q, &d.m2.base_change(&g.f2)?)?;
    let src = r1.direct_sum(&r2)?;
    let s = g.c.ring.clone();
    let mut images = vec![];
    for col in &d.phi {
        images.push(col.iter().map(|f| g.q.lift(f).ok_or(Error::NotSurjective)).collect::<Result<Vec<_>>>()?);
    }
    for e in identity_columns(d.m2.rank, &s) {
        images.push(e.iter().map(|f| s.neg(f)).collect());
    }
    ModuleMap::new(src, m0, images)
}

pub fn descend_d(g: &GluingDatum, d: &DescentDatum) -> Result<Descended> {
    let k = difference_map(g, d)?.kernel();
    Ok(Descended { module: k.module, gens: k.gens })
}

/// `Tor₁^C(M, C₀) = 0`.
pub fn tor_gate(g: &GluingDatum, m: &ModulePresentation) -> Result<bool> {
    Ok(tor1_quotient(m, &g.q.kernel())?.is_zero())
}

/// `Tor₁^{Cᵢ}(Mᵢ, C₀) = 0` for the branch `side ∈ {1, 2}`.
pub fn tor_gate_side(g: &GluingDatum, side: usize, m: &ModulePresentation) -> Result<bool> {
    let f = if side == 1 { &g.f1 } else { &g.f2 };
    Ok(tor1_quotient(m, &f.kernel())?.is_zero())
}

/// Outcome of comparing an object with its image under `DP` or `PD`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub gate: bool,
    /// The canonical comparison map is an isomorphism.
    pub canonical_iso: bool,
    /// `k`-dimensions of the two sides, when finite.
    pub dims: (Option<usize>, Option<usize>),
    /// The two sides are certainly not isomorphic (their dimensions differ).
    pub refuted: bool,
}

impl RoundtripReport {
    /// The gate forces the canonical map to be an isomorphism. The converse can fail: the map is
    /// injective as soon as the connecting map `Tor₁(M, C₀) → M` vanishes, which happens for the
    /// residue field of the node.
    pub fn consistent(&self) -> bool {
        !self.gate || self.canonical_iso
    }
}

/// `M → DP(M)`, `m ↦ (m ⊗ 1, m ⊗ 1)`, checked for injectivity and for having image `D`.
pub fn roundtrip_module(g: &GluingDatum, m: &ModulePresentation) -> Result<RoundtripReport> {
    let gate = tor_gate(g, m)?;
    let datum = pullback_p(g, m)?;
    let diff = difference_map(g, &datum)?;
    let k = diff.kernel();
    let s = &g.c.ring;
    let mut images = vec![];
    for e in identity_columns(m.rank, s) {
        let mut v = e.clone();
        v.extend(e);
        images.push(v);
    }
    let unit = ModuleMap::new(m.clone(), diff.source.clone(), images)?;
    let injective = unit.is_injective();
    let coker = unit.cokernel();
    let onto_kernel = k.gens.iter().all(|v| coker.is_zero_elem(v));
    let dims = (m.vector_space_dim(), k.module.vector_space_dim());
    let refuted = matches!(dims, (Some(a), Some(b)) if a != b);
    Ok(RoundtripReport { gate, canonical_iso: injective && onto_kernel, dims, refuted })
}

/// `PD(d) → d` on both branches, checked to be isomorphisms compatible with the clutchings.
pub fn roundtrip_datum(g: &GluingDatum, d: &DescentDatum) -> Result<RoundtripReport> {
    let gate = tor_gate_side(g, 1, &d.m1)? && tor_gate_side(g, 2, &d.m2)?;
    let desc = descend_d(g, d)?;
    let r1 = d.m1.rank;
    let mut ok = true;
    let mut eps = vec![];
    for (side, (p, target)) in [(&g.p1, &d.m1), (&g.p2, &d.m2)].into_iter().enumerate() {
        let pulled = desc.module.base_change(p)?;
        let images: Vec<Vec<Poly>> = desc
            .gens
            .iter()
            .map(|v| {
                let part = if side == 0 { &v[..r1] } else { &v[r1..] };
                part.iter().map(|f| p.apply(f)).collect()
            })
            .collect();
        let map = ModuleMap::new(pulled, target.clone(), images.clone())?;
        ok &= map.is_injective() && map.is_surjective();
        eps.push(images);
    }
    let n2 = d.m2.base_change(&g.f2)?;
    let phi = ModuleMap::new(d.m1.base_change(&g.f1)?, n2.clone(), d.phi.clone())?;
    let s0 = &g.c0().ring;
    for (a, b) in eps[0].iter().zip(&eps[1]) {
        let a0: Vec<Poly> = a.iter().map(|f| g.f1.apply(f)).collect();
        let b0: Vec<Poly> = b.iter().map(|f| g.f2.apply(f)).collect();
        ok &= n2.is_zero_elem(&sub(s0, &phi.apply(&a0), &b0));
    }
    Ok(RoundtripReport { gate, canonical_iso: ok, dims: (None, None), refuted: false })
}

/// Dimensions on both sides of `Hom_C(M,N) = Hom_{C₁} ×_{Hom_{C₀}} Hom_{C₂}` and the same for `Ext¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomExtReport {
    pub hom: usize,
    pub hom_fiber_product: usize,
    /// The restriction map from `Hom_C(M,N)` into the fiber product is injective.
    pub hom_map_injective: bool,
    pub ext1: usize,
    pub ext1_fiber_product: usize,
}

impl HomExtReport {
    pub fn holds(&self) -> bool {
        self.hom == self.hom_fiber_product && self.hom_map_injective && self.ext1 == self.ext1_fiber_product
    }
}

/// The cochain maps `N^r → N^s`, `φ ↦ (Σᵢ relₖ[i]·φᵢ)ₖ`, for a list of columns.
fn cochain(n: &Fd, cols: &[Vec<Poly>], r: usize) -> Mat {
    let d = n.dim();
    let mut m = vec![vec![Coef::zero(); r * d]; cols.len() * d];
    for (k, col) in cols.iter().enumerate() {
        for (i, f) in col.iter().enumerate().take(r) {
            let a = n.act(f);
            for (x, row) in a.iter().enumerate() {
                for (y, c) in row.iter().enumerate() {
                    m[k * d + x][i * d + y] = c.clone();
                }
            }
        }
    }
    m
}

fn block_diag(a: &Mat, copies: usize, rows: usize, cols: usize) -> Mat {
    let mut m = vec![vec![Coef::zero(); cols * copies]; rows * copies];
    for b in 0..copies {
        for (x, row) in a.iter().enumerate() {
            for (y, c) in row.iter().enumerate() {
                m[b * rows + x][b * cols + y] = c.clone();
            }
        }
    }
    m
}

/// Places blocks side by side in one row band.
fn hstack(blocks: &[&Mat], rows: usize, widths: &[usize]) -> Mat {
    let total: usize = widths.iter().sum();
    let mut m = vec![vec![Coef::zero(); total]; rows];
    let mut off = 0;
    for (b, w) in blocks.iter().zip(widths) {
        for (x, row) in b.iter().enumerate() {
            for (y, c) in row.iter().enumerate() {
                m[x][off + y] = c.clone();
            }
        }
        off += w;
    }
    m
}

fn neg(field: &crate::polyalg::Field, a: &Mat) -> Mat {
    a.iter().map(|r| r.iter().map(|c| field.neg(c)).collect()).collect()
}

fn rank(field: &crate::polyalg::Field, m: &Mat) -> usize {
    if m.is_empty() {
        0
    } else {
        linalg::rank(field, m)
    }
}

/// Side data: `M`'s relation columns over the ring, their syzygies and `N` as a `k`-space.
struct Side {
    rels: Vec<Vec<Poly>>,
    syz: Vec<Vec<Poly>>,
    n: Fd,
}

impl Side {
    fn new(over: &RingPresentation, rels: Vec<Vec<Poly>>, r: usize, n: &ModulePresentation) -> Result<Self> {
        let syz = syzygies(over, &rels, r);
        Ok(Side { rels, syz, n: Fd::new(n)? })
    }

    fn d1(&self, r: usize) -> Mat {
        cochain(&self.n, &self.rels, r)
    }

    fn d2(&self) -> Mat {
        cochain(&self.n, &self.syz, self.rels.len())
    }
}

/// Compares `Hom` and `Ext¹` over `C` with the fiber products of the branch groups, for gated
/// finite-dimensional `M` and `N`.
pub fn hom_ext_fiber_product(g: &GluingDatum, m: &ModulePresentation, n: &ModulePresentation) -> Result<HomExtReport> {
    if !tor_gate(g, m)? || !tor_gate(g, n)? {
        return Err(Error::GateFailed("Tor1(-, C0) does not vanish".into()));
    }
    let field = g.c.ring.field;
    let r = m.rank;
    let rels: Vec<Vec<Poly>> = m.relations.clone();
    let map_rels = |f: &RingMap| -> Vec<Vec<Poly>> { rels.iter().map(|c| c.iter().map(|p| f.apply(p)).collect()).collect() };
    let n1 = n.base_change(&g.p1)?;
    let n2 = n.base_change(&g.p2)?;
    let n0 = n.base_change(&g.q)?;
    let whole = Side::new(&g.c, rels.clone(), r, n)?;
    let one = Side::new(g.c1(), map_rels(&g.p1), r, &n1)?;
    let two = Side::new(g.c2(), map_rels(&g.p2), r, &n2)?;
    let zero = Side::new(g.c0(), map_rels(&g.q), r, &n0)?;
    let s = rels.len();
    let (d, d1, d2, d0) = (whole.n.dim(), one.n.dim(), two.n.dim(), zero.n.dim());

    // Hom over C.
    let hom = r * d - rank(&field, &whole.d1(r));
    // Hom fiber product: (φ₁, φ₂) cocycles with equal images in N₀^r.
    let pi1 = one.n.to(&zero.n, |v| v.iter().map(|f| g.f1.apply(f)).collect());
    let pi2 = two.n.to(&zero.n, |v| v.iter().map(|f| g.f2.apply(f)).collect());
    let a1 = one.d1(r);
    let a2 = two.d1(r);
    let zero_a = |rows: usize, cols: usize| -> Mat { vec![vec![Coef::zero(); cols]; rows] };
    let mut sys: Mat = hstack(&[&a1, &zero_a(s * d2, r * d2)], s * d1, &[r * d1, r * d2]);
    sys.extend(hstack(&[&zero_a(s * d2, r * d1), &a2], s * d2, &[r * d1, r * d2]));
    sys.extend(hstack(
        &[&block_diag(&pi1, r, d0, d1), &neg(&field, &block_diag(&pi2, r, d0, d2))],
        r * d0,
        &[r * d1, r * d2],
    ));
    let hom_fiber_product = r * (d1 + d2) - rank(&field, &sys);
    // Restriction Hom_C(M,N) → Hom_{C₁} × Hom_{C₂}.
    let homs = linalg::nullspace(&field, &whole.d1(r), r * d);
    let rho1 = whole.n.to(&one.n, |v| v.iter().map(|f| g.p1.apply(f)).collect());
    let rho2 = whole.n.to(&two.n, |v| v.iter().map(|f| g.p2.apply(f)).collect());
    let restrict = |phi: &[Coef]| -> Vec<Coef> {
        let mut out = vec![];
        for (rho, dd) in [(&rho1, d1), (&rho2, d2)] {
            for i in 0..r {
                for row in rho.iter().take(dd) {
                    let mut acc = Coef::zero();
                    for (y, c) in row.iter().enumerate() {
                        acc = field.add(&acc, &field.mul(c, &phi[i * d + y]));
                    }
                    out.push(acc);
                }
            }
        }
        out
    };
    let restricted: Mat = homs.iter().map(|h| restrict(h)).collect();
    let hom_map_injective = rank(&field, &restricted) == homs.len();

    // Ext¹ over C.
    let ext1 = s * d - rank(&field, &whole.d2()) - rank(&field, &whole.d1(r));
    // Ext¹ fiber product: cocycles (z₁, z₂) whose images in N₀^s differ by a coboundary.
    let (t1, t2) = (one.syz.len(), two.syz.len());
    let b1 = one.d2();
    let b2 = two.d2();
    let c0 = zero.d1(r);
    let widths = [s * d1, s * d2, r * d0];
    let mut v: Mat = hstack(&[&b1], t1 * d1, &widths);
    let mut row2 = hstack(&[&zero_a(t2 * d2, s * d1), &b2], t2 * d2, &widths);
    v.append(&mut row2);
    v.extend(hstack(
        &[&block_diag(&pi1, s, d0, d1), &neg(&field, &block_diag(&pi2, s, d0, d2)), &neg(&field, &c0)],
        s * d0,
        &widths,
    ));
    let dim_v = widths.iter().sum::<usize>() - rank(&field, &v);
    let ker_c0 = r * d0 - rank(&field, &c0);
    let ext1_fiber_product = dim_v - ker_c0 - rank(&field, &one.d1(r)) - rank(&field, &two.d1(r));
    Ok(HomExtReport { hom, hom_fiber_product, hom_map_injective, ext1, ext1_fiber_product })
}

/// Truncated look at `C = k[x,y] ×_{k[x]} k`, the contraction of the line `y = 0`.
#[derive(Clone, Debug)]
pub struct LineContraction {
    pub max_degree: u32,
    /// `x ∈ C_{≤d}` for the largest degree checked.
    pub x_in_c: bool,
    /// For each degree `1..=d`, the number of elements of `C` in that degree not generated by
    /// lower-degree elements.
    pub new_generators: Vec<usize>,
}

/// Linear algebra in degrees `≤ d` for the line contraction; the count of new generators in every
/// degree shows that `C` is not finitely generated.
pub fn line_contraction(field: crate::polyalg::Field, max_degree: u32) -> LineContraction {
    let s = PolyRing::new(field, &["x", "y"]);
    let monos = |deg: u32| -> Vec<Mono> { (0..=deg).map(|a| vec![a, deg - a]).collect() };
    // C_d: homogeneous f with f(x, 0) = 0 for d ≥ 1, i.e. the span of monomials with y-exponent ≥ 1.
    let in_c = |m: &Mono| m[1] >= 1;
    let basis_c = |deg: u32| -> Vec<Poly> {
        monos(deg).into_iter().filter(in_c).map(|m| s.monomial(m, Coef::one())).collect()
    };
    let coords = |f: &Poly, deg: u32| -> Vec<Coef> {
        monos(deg)
            .iter()
            .map(|m| f.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c.clone()).unwrap_or_else(Coef::zero))
            .collect()
    };
    let mut new_generators = vec![];
    for deg in 1..=max_degree {
        let mut products = vec![];
        for i in 1..deg {
            for a in basis_c(i) {
                for b in basis_c(deg - i) {
                    products.push(coords(&s.mul(&a, &b), deg));
                }
            }
        }
        let all = basis_c(deg).len();
        new_generators.push(all - rank(&field, &products));
    }
    let x = s.var(0);
    let x_in_c = (0..=max_degree).any(|deg| {
        let basis: Mat = basis_c(deg).iter().map(|b| coords(b, deg)).collect();
        let target = coords(&x, deg);
        let aug: Mat = basis.iter().cloned().chain(std::iter::once(target.clone())).collect();
        target.iter().any(|c| !c.is_zero()) && rank(&field, &aug) == rank(&field, &basis)
    });
    LineContraction { max_degree, x_in_c, new_generators }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Field;

    fn module(c: &RingPresentation, rels: &[&str]) -> ModulePresentation {
        let gens: Vec<Poly> = rels.iter().map(|s| c.parse_poly(s).unwrap()).collect();
        c.quotient_module(&gens)
    }

    #[test]
    fn node_is_a_fibered_product() {
        let g = GluingDatum::nodal(Field::Q);
        assert_eq!(g.c, RingPresentation::parse(Field::Q, &["x", "y"], &["x*y"]).unwrap());
        assert!(g.cocartesian);
        assert!(g.kernels_annihilate);
        assert_eq!(g.recipe_generators, 3);
    }

    #[test]
    fn fat_points_glue_to_dimension_four() {
        let q = Field::Q;
        let c1 = RingPresentation::parse(q, &["x"], &["x^2"]).unwrap();
        let c2 = RingPresentation::parse(q, &["y"], &["y^3"]).unwrap();
        let c0 = RingPresentation::polynomial(PolyRing::new(q, &[]));
        let f1 = RingMap::new(c1, c0.clone(), vec![Poly::zero()]).unwrap();
        let f2 = RingMap::new(c2, c0, vec![Poly::zero()]).unwrap();
        let g = fiber_product_ring(&f1, &f2).unwrap();
        assert_eq!(g.c.vector_space_dim(), Some(4));
        assert_eq!(g.c, RingPresentation::parse(q, &["x", "y"], &["x*y", "x^2", "y^3"]).unwrap());
        assert!(g.cocartesian);
    }

    #[test]
    fn trivial_gluing() {
        let k = RingPresentation::polynomial(PolyRing::new(Field::Q, &[]));
        let id = RingMap::identity(&k);
        let g = fiber_product_ring(&id, &id).unwrap();
        assert_eq!(g.c.vector_space_dim(), Some(1));
        assert!(g.cocartesian);
    }

    #[test]
    fn non_surjective_map_is_refused() {
        let q = Field::Q;
        let c1 = RingPresentation::polynomial(PolyRing::new(q, &["x", "y"]));
        let c0 = RingPresentation::polynomial(PolyRing::new(q, &["x"]));
        let k = RingPresentation::polynomial(PolyRing::new(q, &[]));
        let f1 = RingMap::new(c1, c0.clone(), vec![c0.ring.var(0), Poly::zero()]).unwrap();
        let f2 = RingMap::new(k, c0, vec![]).unwrap();
        assert!(matches!(fiber_product_ring(&f1, &f2), Err(Error::NotSurjective)));
    }

    #[test]
    fn antidiagonal_is_not_recovered_from_its_pullback() {
        let g = GluingDatum::nodal(Field::Q);
        let line = module(&g.c, &["x + y"]);
        let point = module(&g.c, &["x", "y"]);
        let pl = pullback_p(&g, &line).unwrap();
        let pp = pullback_p(&g, &point).unwrap();
        assert_eq!(pl.m1.vector_space_dim(), Some(1));
        assert_eq!(pl.m2.vector_space_dim(), Some(1));
        assert_eq!(pp.m1.vector_space_dim(), Some(1));
        let d = descend_d(&g, &pl).unwrap();
        assert_eq!(d.module.vector_space_dim(), Some(1));
        let k = roundtrip_module(&g, &point).unwrap();
        assert!(!k.gate && k.canonical_iso && k.consistent());
        let r = roundtrip_module(&g, &line).unwrap();
        assert!(!r.gate);
        assert!(!r.canonical_iso);
        assert_eq!(r.dims, (Some(2), Some(1)));
        assert!(r.refuted);
        assert!(r.consistent());
    }

    #[test]
    fn gated_modules_roundtrip() {
        let g = GluingDatum::nodal(Field::Q);
        for rels in [vec![], vec!["x - 1"], vec!["y^2 - 2"]] {
            let m = module(&g.c, &rels);
            let r = roundtrip_module(&g, &m).unwrap();
            assert!(r.gate && r.canonical_iso, "{rels:?}");
        }
        let sum = module(&g.c, &["x - 1"]).direct_sum(&g.c.as_module()).unwrap();
        assert!(roundtrip_module(&g, &sum).unwrap().canonical_iso);
    }

    #[test]
    fn structure_descends() {
        let g = GluingDatum::nodal(Field::Q);
        let d = pullback_p(&g, &g.c.as_module()).unwrap();
        assert_eq!(d.m1.rank, 1);
        assert!(d.m1.relations.is_empty());
        let down = descend_d(&g, &d).unwrap();
        assert!(roundtrip_datum(&g, &d).unwrap().canonical_iso);
        assert_eq!(down.module.vector_space_dim(), None);
    }

    #[test]
    fn point_datum_descends_to_point() {
        let g = GluingDatum::nodal(Field::Q);
        let d = pullback_p(&g, &module(&g.c, &["x", "y"])).unwrap();
        let down = descend_d(&g, &d).unwrap();
        assert_eq!(down.module.vector_space_dim(), Some(1));
        assert!(roundtrip_datum(&g, &d).unwrap().canonical_iso);
    }

    #[test]
    fn gate_examples() {
        let g = GluingDatum::nodal(Field::Q);
        assert!(tor_gate(&g, &g.c.as_module()).unwrap());
        assert!(!tor_gate(&g, &module(&g.c, &["x + y"])).unwrap());
        assert!(tor_gate(&g, &module(&g.c, &["x - 1"])).unwrap());
    }

    #[test]
    fn hom_and_ext_agree_on_gated_point() {
        let g = GluingDatum::nodal(Field::Q);
        let m = module(&g.c, &["x - 1"]);
        let r = hom_ext_fiber_product(&g, &m, &m).unwrap();
        assert_eq!((r.hom, r.hom_fiber_product), (1, 1));
        // 0 → C → C → M → 0 via x − 1, so Ext¹(M, M) = M/(x − 1)M = k.
        assert_eq!((r.ext1, r.ext1_fiber_product), (1, 1));
        assert!(r.holds());
        let free = hom_ext_fiber_product(&g, &g.c.as_module(), &m).unwrap();
        assert_eq!((free.hom, free.hom_fiber_product, free.ext1, free.ext1_fiber_product), (1, 1, 0, 0));
        let two = module(&g.c, &["x^2 - 3*x + 2"]);
        let r2 = hom_ext_fiber_product(&g, &two, &two).unwrap();
        assert_eq!((r2.hom, r2.ext1), (2, 2));
        assert!(r2.holds());
        let bad = module(&g.c, &["x + y"]);
        assert!(matches!(hom_ext_fiber_product(&g, &bad, &m), Err(Error::GateFailed(_))));
    }

    #[test]
    fn contraction_is_not_finitely_generated() {
        let r = line_contraction(Field::Q, 6);
        assert!(!r.x_in_c);
        assert_eq!(r.new_generators, vec![1; 6]);
    }
}
