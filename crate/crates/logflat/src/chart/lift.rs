//! Lifting charts along square-zero extensions `A′ → A`, up to unit-valued homotopies.
//!
//! Log structures are modelled in chart-generated form: an element of `M^gp` is a pair of
//! a chart element in `R^gp` and a unit of the ring, for a fixed fine monoid `R`.

use crate::abgrp::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::monoid::{Elem, FineMonoid, MonoidHom};
use crate::polyalg::toric::relation_lattice;
use crate::polyalg::{linalg, Coef, Poly, PolyRing, RingPresentation};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// `A′ → A = A′/I` with `I² = 0`; `A′` must be finite dimensional.
#[derive(Clone, Debug)]
pub struct SquareZeroExtension {
    pub big: RingPresentation,
    pub ideal: Vec<Poly>,
    pub small: RingPresentation,
}

impl SquareZeroExtension {
    pub fn new(big: RingPresentation, ideal: Vec<Poly>) -> Result<Self> {
        for f in &ideal {
            for g in &ideal {
                if !big.is_zero(&big.ring.mul(f, g)) {
                    return Err(Error::HomotopyInvalid("the kernel does not square to zero".into()));
                }
            }
        }
        if big.vector_space_dim().is_none() {
            return Err(Error::NotFiniteDimensional);
        }
        let small = big.quotient(&ideal);
        Ok(SquareZeroExtension { big, ideal, small })
    }

    /// `k[ε]/(ε²) → k`.
    pub fn dual_numbers(field: crate::polyalg::Field) -> Self {
        let big = RingPresentation::parse(field, &["e"], &["e^2"]).expect("static ring");
        let eps = big.ring.var(0);
        Self::new(big, vec![eps]).expect("ε² = 0")
    }

    /// `k → k` with zero kernel.
    pub fn trivial(field: crate::polyalg::Field) -> Self {
        let big = RingPresentation::polynomial(PolyRing::new(field, &[]));
        Self::new(big, vec![]).expect("zero kernel")
    }
}

/// Unit arithmetic in a finite-dimensional quotient ring.
struct Units<'a>(&'a RingPresentation);

impl Units<'_> {
    fn mul(&self, f: &Poly, g: &Poly) -> Poly {
        self.0.nf(&self.0.ring.mul(f, g))
    }

    fn inv(&self, f: &Poly) -> Result<Poly> {
        let r = self.0;
        let basis = r.as_module().standard_basis().ok_or(Error::NotFiniteDimensional)?;
        let module = r.as_module();
        let n = basis.len();
        let cols: Vec<Vec<Coef>> = basis
            .iter()
            .map(|b| module.coords(&basis, &[r.ring.mul(f, &module.basis_vector(b)[0])]))
            .collect();
        let rows: linalg::Mat = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let one = module.coords(&basis, &[r.ring.one()]);
        let x = linalg::solve(&r.ring.field, &rows, &one, n)
            .ok_or_else(|| Error::HomotopyInvalid(format!("{} is not a unit", r.format(f))))?;
        let mut out = Poly::zero();
        for (c, b) in x.iter().zip(&basis) {
            out = r.ring.add(&out, &r.ring.scale(&module.basis_vector(b)[0], c));
        }
        Ok(r.nf(&out))
    }

    fn pow(&self, f: &Poly, e: &BigInt) -> Result<Poly> {
        let base = if e.is_negative() { self.inv(f)? } else { f.clone() };
        let k = e.abs().to_u32().ok_or_else(|| Error::HomotopyInvalid("exponent too large".into()))?;
        let mut out = self.0.ring.one();
        for _ in 0..k {
            out = self.mul(&out, &base);
        }
        Ok(self.0.nf(&out))
    }

    fn div(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        Ok(self.mul(f, &self.inv(g)?))
    }

    fn eq(&self, f: &Poly, g: &Poly) -> bool {
        self.0.equal(f, g)
    }
}

/// An element of `R^gp × B*`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogElem {
    pub chart: Elem,
    pub unit: Poly,
}

/// A homomorphism `G → B*` given on the canonical generators of `G`.
#[derive(Clone, Debug)]
pub struct UnitMap {
    pub source: FgAbGroup,
    pub units: Vec<Poly>,
}

/// A homomorphism `G → R^gp × B*` given on the canonical generators of `G`.
#[derive(Clone, Debug)]
pub struct LogGroupMap {
    pub source: FgAbGroup,
    pub chart: Vec<Elem>,
    pub units: Vec<Poly>,
}

fn eval_units(r: &RingPresentation, units: &[Poly], x: &[BigInt]) -> Result<Poly> {
    let u = Units(r);
    let mut out = r.ring.one();
    for (f, e) in units.iter().zip(x) {
        if !e.is_zero() {
            out = u.mul(&out, &u.pow(f, e)?);
        }
    }
    Ok(out)
}

impl UnitMap {
    pub fn apply(&self, r: &RingPresentation, x: &[BigInt]) -> Result<Poly> {
        eval_units(r, &self.units, x)
    }
}

impl LogGroupMap {
    pub fn apply(&self, chart_group: &FgAbGroup, r: &RingPresentation, x: &[BigInt]) -> Result<LogElem> {
        let mut c = chart_group.zero();
        for (g, e) in self.chart.iter().zip(x) {
            c = chart_group.add(&c, &chart_group.scale(e, g));
        }
        Ok(LogElem { chart: c, unit: eval_units(r, &self.units, x)? })
    }

    /// Torsion generators are sent to elements of matching order.
    fn respects_torsion(&self, chart_group: &FgAbGroup, r: &RingPresentation) -> Result<bool> {
        let u = Units(r);
        for i in self.source.rank()..self.source.ngens() {
            let n = self.source.gen_order(i);
            if !chart_group.is_zero_elem(&chart_group.scale(&n, &self.chart[i])) || !u.eq(&u.pow(&self.units[i], &n)?, &r.ring.one()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn units_only(&self) -> UnitMap {
        UnitMap { source: self.source.clone(), units: self.units.clone() }
    }
}

/// Expresses each canonical generator of `m^gp` through the monoid generators.
fn generator_words(m: &FineMonoid) -> Vec<Vec<BigInt>> {
    let gp = m.gp();
    let to_sub = GroupHom::from_images(FgAbGroup::free(m.ngens()), gp.group.clone(), &gp.gen_coords)
        .expect("map from a free group is well defined");
    (0..gp.group.ngens())
        .map(|j| to_sub.solve(&gp.group.basis(j)).expect("generators span the groupification"))
        .collect()
}

/// Extends generator data `m → R^gp × B*` to `m^gp`, checking every relation of `m`.
fn extend_to_gp(m: &FineMonoid, data: &[LogElem], chart_group: &FgAbGroup, r: &RingPresentation) -> Result<LogGroupMap> {
    let u = Units(r);
    for d in data {
        u.inv(&d.unit)?;
    }
    for rel in relation_lattice(m) {
        let mut c = chart_group.zero();
        for (d, e) in data.iter().zip(&rel) {
            c = chart_group.add(&c, &chart_group.scale(e, &d.chart));
        }
        let units: Vec<Poly> = data.iter().map(|d| d.unit.clone()).collect();
        if !chart_group.is_zero_elem(&c) || !u.eq(&eval_units(r, &units, &rel)?, &r.ring.one()) {
            return Err(Error::HomotopyInvalid("generator images do not respect the relations of the monoid".into()));
        }
    }
    let mut chart = vec![];
    let mut units = vec![];
    for w in generator_words(m) {
        let mut c = chart_group.zero();
        let mut f = r.ring.one();
        for (d, e) in data.iter().zip(&w) {
            c = chart_group.add(&c, &chart_group.scale(e, &d.chart));
            if !e.is_zero() {
                f = u.mul(&f, &u.pow(&d.unit, e)?);
            }
        }
        chart.push(c);
        units.push(f);
    }
    Ok(LogGroupMap { source: m.gp().group.clone(), chart, units })
}

/// A lifting problem: `a: Q → M′`, `b: P → M`, `η: Q^gp → A*` with `η·bh = ia`.
#[derive(Clone, Debug)]
pub struct LiftProblem {
    pub ext: SquareZeroExtension,
    pub h: MonoidHom,
    /// The chart monoid `R` of the log structure on `A′`.
    pub chart_monoid: FineMonoid,
    /// `a` on generators of `Q`, units in `A′`.
    pub a: Vec<LogElem>,
    /// `b` on generators of `P`, units in `A`.
    pub b: Vec<LogElem>,
    /// `η` on generators of `Q`, units in `A`.
    pub eta: Vec<Poly>,
    a_gp: LogGroupMap,
    b_gp: LogGroupMap,
    eta_gp: UnitMap,
}

impl LiftProblem {
    pub fn new(
        ext: SquareZeroExtension,
        h: MonoidHom,
        chart_monoid: FineMonoid,
        a: Vec<LogElem>,
        b: Vec<LogElem>,
        eta: Vec<Poly>,
    ) -> Result<Self> {
        let (q, p) = (h.source.clone(), h.target.clone());
        if a.len() != q.ngens() || eta.len() != q.ngens() || b.len() != p.ngens() {
            return Err(Error::HomotopyInvalid("one image per generator is required".into()));
        }
        let rg = chart_monoid.ambient().clone();
        MonoidHom::new(&q, &chart_monoid, a.iter().map(|x| x.chart.clone()).collect())
            .map_err(|_| Error::HomotopyInvalid("chart part of a is not a monoid map Q → R".into()))?;
        MonoidHom::new(&p, &chart_monoid, b.iter().map(|x| x.chart.clone()).collect())
            .map_err(|_| Error::HomotopyInvalid("chart part of b is not a monoid map P → R".into()))?;
        let a_gp = extend_to_gp(&q, &a, &rg, &ext.big)?;
        let b_gp = extend_to_gp(&p, &b, &rg, &ext.small)?;
        let eta_elems: Vec<LogElem> = eta.iter().map(|f| LogElem { chart: rg.zero(), unit: f.clone() }).collect();
        let eta_gp = extend_to_gp(&q, &eta_elems, &rg, &ext.small)?.units_only();
        let problem = LiftProblem { ext, h, chart_monoid, a, b, eta, a_gp, b_gp, eta_gp };
        let small = Units(&problem.ext.small);
        for (j, y) in problem.h.images.iter().enumerate() {
            let coords = p.gp().coords_of(y).expect("image lies in P^gp");
            let by = problem.b_gp.apply(&rg, &problem.ext.small, &coords)?;
            let lhs = small.mul(&problem.eta[j], &by.unit);
            if by.chart != problem.a[j].chart || !small.eq(&lhs, &problem.a[j].unit) {
                return Err(Error::HomotopyInvalid(format!("η·bh = ia fails on generator {j} of Q")));
            }
        }
        Ok(problem)
    }

    pub fn chart_group(&self) -> &FgAbGroup {
        self.chart_monoid.ambient()
    }
}

/// A root `x^n = u` adjoined to the cover.
#[derive(Clone, Debug)]
pub struct Root {
    pub var: usize,
    pub order: BigInt,
    pub value: Poly,
}

/// `B′ = A′[x₁,…,x_k]/(x_j^{n_j} − u_j)` and `B = B′/IB′`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub big: RingPresentation,
    pub small: RingPresentation,
    pub roots: Vec<Root>,
    /// `dim_k B′ = dim_k A′ · Π n_j`, so `B′` is free over `A′` on the monomials `x^e`, `e_j < n_j`.
    pub rank_certified: bool,
}

impl Cover {
    pub fn rank(&self) -> BigInt {
        self.roots.iter().map(|r| r.order.clone()).product()
    }
}

/// The triple `(l, α, β)`, possibly over a root cover `B′`.
#[derive(Clone, Debug)]
pub struct HomotopyLift {
    pub cover: Cover,
    /// `l: P^gp → R^gp × B′*`.
    pub l: LogGroupMap,
    /// `α: P^gp → B*`.
    pub alpha: UnitMap,
    /// `β: Q^gp → B′*`.
    pub beta: UnitMap,
    /// Which of the three cases of the construction were used.
    pub cases: Vec<u8>,
}

/// Choices that change the lift without changing the cover.
#[derive(Clone, Debug, Default)]
pub struct LiftOptions {
    /// Added to the chosen preimage of each free generator of `h(Q^gp)`; must lie in `ker h`.
    pub preimage_shifts: Vec<Elem>,
    /// Lifts of the free generators of the cokernel of `h(Q^gp) → P^gp`.
    pub free_sections: Option<Vec<Elem>>,
    /// Elements of `I`; the lift of the `k`-th free cokernel generator is multiplied by `1 + perturb[k]`.
    pub perturb: Vec<Poly>,
}

/// Mutable cover under construction.
struct CoverBuilder {
    ring: RingPresentation,
    ideal: Vec<Poly>,
    roots: Vec<Root>,
}

impl CoverBuilder {
    fn adjoin(&mut self, n: &BigInt, u: &Poly) -> Result<Poly> {
        let old = &self.ring.ring;
        let k = self.roots.len() + 1;
        let mut names = old.names.clone();
        names.push(format!("x{k}"));
        let s = PolyRing::with_names(old.field, names);
        let map: Vec<usize> = (0..old.nvars()).collect();
        let up = |f: &Poly| old.embed(f, &s, &map);
        let var = old.nvars();
        let x = s.var(var);
        let e = n.to_u32().ok_or_else(|| Error::HomotopyInvalid("root order too large".into()))?;
        let mut ideal: Vec<Poly> = self.ring.ideal.iter().map(up).collect();
        ideal.push(s.sub(&s.pow(&x, e), &up(u)));
        self.ideal = self.ideal.iter().map(up).collect();
        for r in &mut self.roots {
            r.value = up(&r.value);
        }
        self.roots.push(Root { var, order: n.clone(), value: up(u) });
        self.ring = RingPresentation::new(s, ideal);
        Ok(x)
    }

    /// Re-embeds a polynomial from an earlier stage of the cover.
    fn lift(&self, f: &Poly) -> Poly {
        let s = &self.ring.ring;
        let n = s.nvars();
        s.from_terms(
            f.terms
                .iter()
                .map(|(m, c)| {
                    let mut full = m.clone();
                    full.resize(n, 0);
                    (full, c.clone())
                })
                .collect(),
        )
    }

    fn small(&self) -> RingPresentation {
        self.ring.quotient(&self.ideal)
    }
}

fn lift_all(cb: &CoverBuilder, fs: &[Poly]) -> Vec<Poly> {
    fs.iter().map(|f| cb.lift(f)).collect()
}

/// Solves the lifting problem following the surjective / torsion-free cokernel / torsion
/// cokernel factorization. Roots are always adjoined for torsion generators.
pub fn homotopy_lift(problem: &LiftProblem) -> Result<HomotopyLift> {
    homotopy_lift_with(problem, &LiftOptions::default())
}

pub fn homotopy_lift_with(problem: &LiftProblem, opts: &LiftOptions) -> Result<HomotopyLift> {
    let rg = problem.chart_group();
    let (q, p) = (&problem.h.source, &problem.h.target);
    let qg = q.gp().group.clone();
    let pg = p.gp().group.clone();
    let hg = problem.h.gp_hom();
    let image = hg.image();
    let gg = image.group.clone();
    let h1_images: Vec<Elem> =
        (0..qg.ngens()).map(|j| image.coords_of(&hg.image_of_gen(j)).expect("image of a generator")).collect();
    let h1 = GroupHom::from_images(qg.clone(), gg.clone(), &h1_images)?;
    let mut cb = CoverBuilder { ring: problem.ext.big.clone(), ideal: problem.ext.ideal.clone(), roots: vec![] };
    let mut cases = vec![];

    // Stage 1: Q^gp → G = h(Q^gp), giving l₁ on G, α₁ on G and β on Q^gp.
    let (l1, beta_units) = if hg.is_injective() {
        let mut chart = vec![];
        let mut units = vec![];
        for i in 0..gg.ngens() {
            let pre = h1.solve(&gg.basis(i)).expect("h₁ is surjective");
            let x = problem.a_gp.apply(rg, &problem.ext.big, &pre)?;
            chart.push(x.chart);
            units.push(x.unit);
        }
        (LogGroupMap { source: gg.clone(), chart, units }, vec![problem.ext.big.ring.one(); qg.ngens()])
    } else {
        cases.push(1);
        let kernel = hg.kernel();
        let mut chart = vec![];
        let mut units: Vec<Poly> = vec![];
        for i in 0..gg.ngens() {
            let basis = gg.basis(i);
            let bg = problem.b_gp.apply(rg, &problem.ext.small, &image.embed.apply(&basis))?;
            if i < gg.rank() {
                let mut pre = h1.solve(&basis).expect("h₁ is surjective");
                if let Some(shift) = opts.preimage_shifts.get(i) {
                    if !kernel.contains(shift) {
                        return Err(Error::HomotopyInvalid("preimage shift is not in the kernel of h".into()));
                    }
                    pre = qg.add(&pre, shift);
                }
                let x = problem.a_gp.apply(rg, &problem.ext.big, &pre)?;
                chart.push(x.chart);
                units.push(cb.lift(&x.unit));
            } else {
                let n = gg.gen_order(i);
                let m = cb.lift(&bg.unit);
                let u = Units(&cb.ring).pow(&m, &n)?;
                let x = cb.adjoin(&n, &u)?;
                units = lift_all(&cb, &units);
                let m = cb.lift(&m);
                chart.push(bg.chart);
                units.push(Units(&cb.ring).div(&m, &x)?);
            }
        }
        let l1 = LogGroupMap { source: gg.clone(), chart, units };
        let mut beta = vec![];
        for j in 0..qg.ngens() {
            let aq = problem.a_gp.apply(rg, &problem.ext.big, &qg.basis(j))?;
            let lq = l1.apply(rg, &cb.ring, &h1.image_of_gen(j))?;
            if aq.chart != lq.chart {
                return Err(Error::HomotopyInvalid("chart parts of a and bh differ".into()));
            }
            beta.push(Units(&cb.ring).div(&cb.lift(&aq.unit), &lq.unit)?);
        }
        (l1, beta)
    };

    // Stage 2: G → P^gp injective, with β = 1 on this step.
    let (coker, proj) = image.embed.cokernel();
    let mut free_lifts: Vec<(Elem, LogElem)> = vec![];
    let mut torsion_lifts: Vec<(Elem, LogElem)> = vec![];
    if coker.rank() > 0 {
        cases.push(2);
    }
    if coker.ngens() > coker.rank() {
        cases.push(3);
    }
    for k in 0..coker.ngens() {
        let fk = coker.basis(k);
        let section = match (&opts.free_sections, k < coker.rank()) {
            (Some(s), true) => {
                let e = s.get(k).cloned().ok_or_else(|| Error::HomotopyInvalid("missing free section".into()))?;
                if proj.apply(&e) != fk {
                    return Err(Error::HomotopyInvalid("free section does not map to the cokernel generator".into()));
                }
                e
            }
            _ => proj.solve(&fk).expect("projection is surjective"),
        };
        let bs = problem.b_gp.apply(rg, &problem.ext.small, &section)?;
        let m = cb.lift(&bs.unit);
        if k < coker.rank() {
            let m = match opts.perturb.get(k) {
                Some(eps) => {
                    if !problem.ext.small.is_zero(eps) {
                        return Err(Error::HomotopyInvalid("perturbation does not lie in I".into()));
                    }
                    let one_plus = cb.ring.ring.add(&cb.ring.ring.one(), &cb.lift(eps));
                    Units(&cb.ring).mul(&m, &one_plus)
                }
                None => m,
            };
            free_lifts.push((section, LogElem { chart: bs.chart, unit: m }));
        } else {
            let n = coker.gen_order(k);
            let multiple = image.coords_of(&pg.scale(&n, &section)).expect("n·p lies in the image");
            let current = LogGroupMap { units: lift_all(&cb, &l1.units), ..l1.clone() };
            let ag = current.apply(rg, &cb.ring, &multiple)?;
            if ag.chart != rg.scale(&n, &bs.chart) {
                return Err(Error::HomotopyInvalid("chart parts of a and b disagree on n·p".into()));
            }
            let mn = Units(&cb.ring).pow(&m, &n)?;
            let u = Units(&cb.ring).div(&ag.unit, &mn)?;
            let x = cb.adjoin(&n, &u)?;
            let m = cb.lift(&m);
            torsion_lifts.push((section, LogElem { chart: bs.chart, unit: Units(&cb.ring).mul(&x, &m) }));
        }
    }

    // Assemble l on the canonical generators of P^gp.
    let l1_units = lift_all(&cb, &l1.units);
    let l1 = LogGroupMap { units: l1_units, ..l1 };
    let mut chart = vec![];
    let mut units = vec![];
    let big = Units(&cb.ring);
    let lifts: Vec<&(Elem, LogElem)> = free_lifts.iter().chain(torsion_lifts.iter()).collect();
    for i in 0..pg.ngens() {
        let pi = pg.basis(i);
        let c = proj.apply(&pi);
        let mut rest = pi.clone();
        let mut value = LogElem { chart: rg.zero(), unit: cb.ring.ring.one() };
        for (k, (sec, le)) in lifts.iter().enumerate() {
            let e = &c[k];
            if e.is_zero() {
                continue;
            }
            rest = pg.sub(&rest, &pg.scale(e, sec));
            value.chart = rg.add(&value.chart, &rg.scale(e, &le.chart));
            value.unit = big.mul(&value.unit, &big.pow(&cb.lift(&le.unit), e)?);
        }
        let g = image.coords_of(&rest).expect("remainder lies in the image of h");
        let lg = l1.apply(rg, &cb.ring, &g)?;
        chart.push(rg.add(&value.chart, &lg.chart));
        units.push(big.mul(&value.unit, &lg.unit));
    }
    let l = LogGroupMap { source: pg.clone(), chart, units };
    let small = cb.small();
    let su = Units(&small);
    let mut alpha = vec![];
    for i in 0..pg.ngens() {
        let bi = problem.b_gp.apply(rg, &problem.ext.small, &pg.basis(i))?;
        alpha.push(su.div(&l.units[i], &cb.lift(&bi.unit))?);
    }
    let beta = UnitMap { source: qg, units: lift_all(&cb, &beta_units) };
    let rank_certified = certify_rank(&problem.ext.big, &cb)?;
    let cover = Cover { big: cb.ring.clone(), small, roots: cb.roots.clone(), rank_certified };
    let lift = HomotopyLift { cover, l, alpha: UnitMap { source: pg, units: alpha }, beta, cases };
    if !verify_identities(problem, &lift)? {
        return Err(Error::HomotopyInvalid("constructed lift fails the homotopy identities".into()));
    }
    Ok(lift)
}

fn certify_rank(a: &RingPresentation, cb: &CoverBuilder) -> Result<bool> {
    let da = a.vector_space_dim().ok_or(Error::NotFiniteDimensional)?;
    let db = cb.ring.vector_space_dim().ok_or(Error::NotFiniteDimensional)?;
    let rank: BigInt = cb.roots.iter().map(|r| r.order.clone()).product();
    Ok(BigInt::from(db) == BigInt::from(da) * rank)
}

/// `α·b = il`, `β·lh = a` and `η = iβ·αh` on canonical generators, plus well-definedness of `l`.
pub fn verify_identities(problem: &LiftProblem, lift: &HomotopyLift) -> Result<bool> {
    let rg = problem.chart_group();
    let cover = &lift.cover;
    let (q, p) = (&problem.h.source, &problem.h.target);
    let up = |f: &Poly| embed_into(f, &cover.big.ring);
    let big = Units(&cover.big);
    let small = Units(&cover.small);
    if !lift.l.respects_torsion(rg, &cover.big)? {
        return Ok(false);
    }
    for r in &cover.roots {
        let x = cover.big.ring.var(r.var);
        let e = r.order.to_u32().expect("small root order");
        if !cover.big.equal(&cover.big.ring.pow(&x, e), &r.value) {
            return Ok(false);
        }
    }
    let pg = &p.gp().group;
    for i in 0..pg.ngens() {
        let b = problem.b_gp.apply(rg, &problem.ext.small, &pg.basis(i))?;
        let l = lift.l.apply(rg, &cover.big, &pg.basis(i))?;
        if b.chart != l.chart || !small.eq(&small.mul(&lift.alpha.units[i], &up(&b.unit)), &l.unit) {
            return Ok(false);
        }
    }
    let qg = &q.gp().group;
    let hg = problem.h.gp_hom();
    for j in 0..qg.ngens() {
        let a = problem.a_gp.apply(rg, &problem.ext.big, &qg.basis(j))?;
        let hq = hg.image_of_gen(j);
        let lh = lift.l.apply(rg, &cover.big, &hq)?;
        if a.chart != lh.chart || !big.eq(&big.mul(&lift.beta.units[j], &lh.unit), &up(&a.unit)) {
            return Ok(false);
        }
        let eta = problem.eta_gp.apply(&problem.ext.small, &qg.basis(j))?;
        let ah = lift.alpha.apply(&cover.small, &hq)?;
        if !small.eq(&up(&eta), &small.mul(&lift.beta.units[j], &ah)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn embed_into(f: &Poly, s: &PolyRing) -> Poly {
    let n = s.nvars();
    s.from_terms(
        f.terms
            .iter()
            .map(|(m, c)| {
                let mut full = m.clone();
                full.resize(n, 0);
                (full, c.clone())
            })
            .collect(),
    )
}

/// The unique `γ: P^gp → B′*` with `γ·l′ = l`, `iγ·α′ = α` and `β′ = β·γh`.
pub fn verify_lift_uniqueness(problem: &LiftProblem, first: &HomotopyLift, second: &HomotopyLift) -> Result<UnitMap> {
    let cover = &first.cover;
    if cover.big != second.cover.big || cover.small != second.cover.small {
        return Err(Error::LiftsIncompatible("the lifts live over different covers".into()));
    }
    let rg = problem.chart_group();
    let big = Units(&cover.big);
    let small = Units(&cover.small);
    let pg = &problem.h.target.gp().group;
    let mut gamma = vec![];
    for i in 0..pg.ngens() {
        if first.l.chart[i] != second.l.chart[i] {
            return Err(Error::LiftsIncompatible(format!("chart parts differ on generator {i} of P^gp")));
        }
        let g = big.div(&first.l.units[i], &second.l.units[i])?;
        if !big.eq(&big.mul(&g, &second.l.units[i]), &first.l.units[i])
            || !small.eq(&small.mul(&g, &second.alpha.units[i]), &first.alpha.units[i])
        {
            return Err(Error::LiftsIncompatible(format!("γ fails on generator {i} of P^gp")));
        }
        gamma.push(g);
    }
    let gamma = UnitMap { source: pg.clone(), units: gamma };
    let gl = LogGroupMap { source: pg.clone(), chart: vec![rg.zero(); pg.ngens()], units: gamma.units.clone() };
    if !gl.respects_torsion(rg, &cover.big)? {
        return Err(Error::LiftsIncompatible("γ is not a homomorphism on torsion".into()));
    }
    let hg = problem.h.gp_hom();
    for j in 0..hg.source.ngens() {
        let gh = gamma.apply(&cover.big, &hg.image_of_gen(j))?;
        if !big.eq(&second.beta.units[j], &big.mul(&first.beta.units[j], &gh)) {
            return Err(Error::LiftsIncompatible(format!("β′ = β·γh fails on generator {j} of Q^gp")));
        }
    }
    Ok(gamma)
}

impl HomotopyLift {
    /// `γ = 1` as a map into the cover.
    pub fn is_trivial_gamma(gamma: &UnitMap, cover: &Cover) -> bool {
        gamma.units.iter().all(|g| cover.big.equal(g, &cover.big.ring.one()))
    }

    pub fn check(&self, problem: &LiftProblem) -> Result<bool> {
        verify_identities(problem, self)
    }
}

impl LogElem {
    pub fn new(chart: Elem, unit: Poly) -> Self {
        LogElem { chart, unit }
    }
}
