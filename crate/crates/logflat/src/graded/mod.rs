//! Rings graded by finitely generated abelian groups, homogeneous ideals and
//! decision procedures for graded flatness.

pub mod filtration;
pub mod flat;
pub mod groupalg;
pub mod nodal;
pub mod ring;

pub use filtration::{filtration, Filtration, FiltrationStep};
pub use flat::{
    flat_over_base, graded_flat, homogeneous_ideal_test, monomial_ideal_family, tor_leaf, Certificate, GradedVerdict,
};
pub use groupalg::{base_ring, degree_zero_part, extend_scalars_ag, roundtrip_ag, GroupAlgebraRoundtrip};
pub use nodal::{nodal_criteria_panel, nodal_sum_map, NodalPanel};
pub use ring::{Base, BaseKind, ChartShape, GradedModule, GradedRing, GroupAlgebraShape, Shape};
