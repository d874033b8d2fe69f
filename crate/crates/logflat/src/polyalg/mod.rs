//! Exact commutative algebra over ℚ and 𝔽ₚ: Gröbner bases, presented modules,
//! syzygies, `Tor₁`, toric ideals and ring maps.

pub mod field;
pub mod groebner;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod ringmap;
pub mod toric;

pub use field::{Coef, Field};
pub use groebner::{ideal_groebner, ideal_nf, Ctx, ModuleOrder, Vector};
pub use module::{
    annihilator, eliminate, intersect, mult_kernel, preimage_kernel, regular_element_test, saturate, syzygies,
    tor1, tor1_quotient, ModuleMap, ModulePresentation, RingPresentation, Subquotient,
};
pub use poly::{divides, Mono, MonomialOrder, Poly, PolyRing};
pub use ringmap::RingMap;
pub use toric::{default_names, toric_ideal, toric_ideal_named, ToricAlgebra};
