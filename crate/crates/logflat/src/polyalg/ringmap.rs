//! Homomorphisms between quotient rings.

use super::groebner::{ideal_groebner, ideal_nf};
use super::module::RingPresentation;
use super::poly::{MonomialOrder, Poly, PolyRing};
use crate::error::{Error, Result};
use std::sync::{Arc, OnceLock};

/// `S/I → T/J` given by the images of the variables of `S`.
#[derive(Clone, Debug)]
pub struct RingMap {
    pub source: RingPresentation,
    pub target: RingPresentation,
    pub images: Vec<Poly>,
    graph: Arc<OnceLock<(PolyRing, Vec<Poly>)>>,
}

impl RingMap {
    pub fn new(source: RingPresentation, target: RingPresentation, images: Vec<Poly>) -> Result<Self> {
        if images.len() != source.ring.nvars() {
            return Err(Error::InvalidInput("one image per source variable is required".into()));
        }
        if source.ring.field != target.ring.field {
            return Err(Error::InvalidInput("ring map between different coefficient fields".into()));
        }
        let m = RingMap { source, target, images, graph: Arc::new(OnceLock::new()) };
        if !m.is_well_defined() {
            return Err(Error::InvalidInput("ring map does not respect the source ideal".into()));
        }
        Ok(m)
    }

    pub fn identity(r: &RingPresentation) -> Self {
        let images = (0..r.ring.nvars()).map(|i| r.ring.var(i)).collect();
        RingMap { source: r.clone(), target: r.clone(), images, graph: Arc::new(OnceLock::new()) }
    }

    pub fn apply(&self, f: &Poly) -> Poly {
        self.target.nf(&self.source.ring.substitute(f, &self.images, &self.target.ring))
    }

    pub fn is_well_defined(&self) -> bool {
        self.source.ideal.iter().all(|g| self.apply(g).is_zero())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &RingMap) -> Result<RingMap> {
        if self.target != next.source {
            return Err(Error::InvalidInput("ring maps are not composable".into()));
        }
        let images = self.images.iter().map(|f| next.apply(f)).collect();
        RingMap::new(self.source.clone(), next.target.clone(), images)
    }

    /// Ring `k[target vars, source vars]` eliminating target variables, and
    /// the Gröbner basis of the graph ideal.
    fn graph(&self) -> &(PolyRing, Vec<Poly>) {
        self.graph.get_or_init(|| {
            let (nt, ns) = (self.target.ring.nvars(), self.source.ring.nvars());
            let mut names: Vec<String> = self.target.ring.names.iter().map(|n| format!("t_{n}")).collect();
            names.extend(self.source.ring.names.iter().map(|n| format!("s_{n}")));
            let order = MonomialOrder { blocks: vec![(0..nt).collect(), (nt..nt + ns).collect()] };
            let big = PolyRing { field: self.target.ring.field, names, order };
            let tmap: Vec<usize> = (0..nt).collect();
            let mut gens: Vec<Poly> =
                self.target.gb().iter().map(|g| self.target.ring.embed(g, &big, &tmap)).collect();
            for (i, img) in self.images.iter().enumerate() {
                let s = big.var(nt + i);
                gens.push(big.sub(&s, &self.target.ring.embed(img, &big, &tmap)));
            }
            let gb = ideal_groebner(&big, &gens);
            (big, gb)
        })
    }

    fn to_source(&self, f: &Poly) -> Poly {
        let nt = self.target.ring.nvars();
        self.source.ring.from_terms(f.terms.iter().map(|(m, c)| (m[nt..].to_vec(), c.clone())).collect())
    }

    /// Gröbner basis of the kernel, as an ideal of `S` containing `I`.
    pub fn kernel(&self) -> Vec<Poly> {
        let nt = self.target.ring.nvars();
        let (_, gb) = self.graph();
        let mut gens: Vec<Poly> =
            gb.iter().filter(|g| (0..nt).all(|i| !g.uses_var(i))).map(|g| self.to_source(g)).collect();
        gens.extend(self.source.ideal.iter().cloned());
        ideal_groebner(&self.source.ring, &gens)
    }

    pub fn is_injective(&self) -> bool {
        self.source.contains_all(&self.kernel())
    }

    /// A preimage of `f`, if `f` lies in the image.
    pub fn lift(&self, f: &Poly) -> Option<Poly> {
        let nt = self.target.ring.nvars();
        let (big, gb) = self.graph();
        let tmap: Vec<usize> = (0..nt).collect();
        let r = ideal_nf(big, &self.target.ring.embed(f, big, &tmap), gb);
        if (0..nt).any(|i| r.uses_var(i)) {
            return None;
        }
        Some(self.source.nf(&self.to_source(&r)))
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.target.ring.nvars()).all(|i| self.lift(&self.target.ring.var(i)).is_some())
    }
}
