//! The ten equivalent conditions for graded flatness over `k[x,y]/(xy)`.

use super::flat::graded_flat;
use super::ring::GradedRing;
use crate::error::{Error, Result};
use crate::monoid::FineMonoid;
use crate::polyalg::{
    annihilator, ideal_groebner, regular_element_test, tor1_quotient, ModuleMap, ModulePresentation, Poly,
    RingMap,
};

/// Panel entries, numbered as the conditions they record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodalPanel {
    /// 1. graded flat over `B`.
    pub graded_flat: bool,
    /// 2. `Tor₁(M, B/𝔪) = 0`.
    pub tor_maximal: bool,
    /// 3. `M/yM ⊕ M/xM → M`, `(m,n) ↦ xm + yn` is injective.
    pub injective_map: bool,
    /// 4. conditions 6 and 8 together.
    pub both_regular: bool,
    /// 5. conditions 7 and 9 together.
    pub both_graded_flat: bool,
    /// 6. `Tor₁(M, B/x) = 0` and `y` is `M/xM`-regular.
    pub x_regular: bool,
    /// 7. `Tor₁(M, B/x) = 0` and `M/xM` is graded flat over `k[y]`.
    pub x_graded_flat: bool,
    /// 8. `Tor₁(M, B/y) = 0` and `x` is `M/yM`-regular.
    pub y_regular: bool,
    /// 9. `Tor₁(M, B/y) = 0` and `M/yM` is graded flat over `k[x]`.
    pub y_graded_flat: bool,
    /// 10. condition 3 after localizing at `𝔪`.
    pub localized: bool,
}

impl NodalPanel {
    pub fn entries(&self) -> [bool; 10] {
        [
            self.graded_flat,
            self.tor_maximal,
            self.injective_map,
            self.both_regular,
            self.both_graded_flat,
            self.x_regular,
            self.x_graded_flat,
            self.y_regular,
            self.y_graded_flat,
            self.localized,
        ]
    }

    pub fn all_agree(&self) -> bool {
        let e = self.entries();
        e.iter().all(|x| *x == e[0])
    }
}

/// Is `M`, a module killed by the other variable, graded flat over `k[w]` for the variable `keep`?
fn quotient_line_flat(b: &GradedRing, m: &ModulePresentation, keep: usize) -> Result<bool> {
    let s = b.poly_ring();
    let line = GradedRing::monoid_algebra_named(&FineMonoid::free_nat(1), s.field, vec![s.names[keep].clone()]);
    let mut images = vec![Poly::zero(); 2];
    images[keep] = line.poly_ring().var(0);
    let map = RingMap::new(b.ring.clone(), line.ring.clone(), images)?;
    Ok(graded_flat(&line, &m.base_change(&map)?)?.flat)
}

/// The map `M/yM ⊕ M/xM → M`, `(m,n) ↦ xm + yn`.
pub fn nodal_sum_map(m: &ModulePresentation) -> Result<ModuleMap> {
    let s = m.ring();
    let (x, y) = (s.var(0), s.var(1));
    let src = m.quotient_by_ideal(std::slice::from_ref(&y)).direct_sum(&m.quotient_by_ideal(std::slice::from_ref(&x)))?;
    let r = m.rank;
    let mut images = vec![];
    for f in [&x, &y] {
        for i in 0..r {
            let mut col = vec![Poly::zero(); r];
            col[i] = f.clone();
            images.push(col);
        }
    }
    ModuleMap::new(src, m.clone(), images)
}

/// Evaluates every condition independently for a module over `k[x,y]/(xy)`.
pub fn nodal_criteria_panel(m: &ModulePresentation) -> Result<NodalPanel> {
    let b = GradedRing::nodal(m.ring().field);
    if m.over != b.ring {
        return Err(Error::InvalidInput("module is not defined over k[x,y]/(xy)".into()));
    }
    let s = b.poly_ring();
    let (x, y) = (s.var(0), s.var(1));
    let graded = graded_flat(&b, m)?.flat;
    let tor_maximal = tor1_quotient(m, &[x.clone(), y.clone()])?.is_zero();
    let sum = nodal_sum_map(m)?;
    let injective_map = sum.is_injective();
    let tor_x = tor1_quotient(m, std::slice::from_ref(&x))?.is_zero();
    let tor_y = tor1_quotient(m, std::slice::from_ref(&y))?.is_zero();
    let mx = m.quotient_by_ideal(std::slice::from_ref(&x));
    let my = m.quotient_by_ideal(std::slice::from_ref(&y));
    let x_regular = tor_x && regular_element_test(&y, &mx);
    let y_regular = tor_y && regular_element_test(&x, &my);
    let x_graded_flat = tor_x && quotient_line_flat(&b, &mx, 1)?;
    let y_graded_flat = tor_y && quotient_line_flat(&b, &my, 0)?;
    let kernel = sum.kernel();
    let mut ann = annihilator(&kernel.module);
    ann.push(x);
    ann.push(y);
    let localized = ideal_groebner(s, &ann).iter().any(|g| g.is_constant());
    Ok(NodalPanel {
        graded_flat: graded,
        tor_maximal,
        injective_map,
        both_regular: x_regular && y_regular,
        both_graded_flat: x_graded_flat && y_graded_flat,
        x_regular,
        x_graded_flat,
        y_regular,
        y_graded_flat,
        localized,
    })
}
