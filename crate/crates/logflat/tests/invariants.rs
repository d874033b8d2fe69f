//! Property tests for the structural invariants of each layer.

use logflat::abgrp::{FgAbGroup, GroupHom};
use logflat::chart::{build_a_ht, homotopy_lift, ChartData, LiftProblem, LogElem, SquareZeroExtension};
use logflat::descent::{
    descend_d, fiber_product_ring, pullback_p, roundtrip_module, tor_gate, tor_gate_side, GluingDatum,
};
use logflat::graded::{graded_flat, nodal_criteria_panel, GradedRing};
use logflat::monmod::{BasisOutcome, PModule};
use logflat::monoid::{elem, FineMonoid, MonoidIdeal};
use logflat::morphism::diagonal;
use logflat::polyalg::{syzygies, Field, ModulePresentation, Poly, PolyRing, RingMap, RingPresentation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn q() -> Field {
    Field::Q
}

/// A polynomial in two variables from coefficients on the monomials of degree at most two.
fn poly2(s: &PolyRing, c: &[i64]) -> Poly {
    let monos = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
    c.iter().zip(monos).fold(Poly::zero(), |acc, (k, m)| s.add(&acc, &s.monomial(m.to_vec(), BigInt::from(*k).into())))
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_and_image_ranks_add_up(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 2)) {
        let images: Vec<Vec<BigInt>> = (0..3).map(|j| rows.iter().map(|r| BigInt::from(r[j])).collect()).collect();
        let h = GroupHom::from_images(FgAbGroup::free(3), FgAbGroup::free(2), &images).unwrap();
        prop_assert_eq!(h.kernel().group.rank() + h.image().group.rank(), 3);
        for v in (0..h.kernel().group.ngens()).map(|i| h.kernel().embed.image_of_gen(i)) {
            prop_assert!(FgAbGroup::free(2).is_zero_elem(&h.apply(&v)));
        }
    }

    #[test]
    fn torsion_arithmetic_is_reduced(a in -20i64..20, b in -20i64..20, n in 2i64..7) {
        let g = FgAbGroup::cyclic(n);
        let s = g.add(&elem(&[a]), &elem(&[b]));
        prop_assert_eq!(g.reduce(&s), s.clone());
        prop_assert!(g.is_zero_elem(&g.add(&s, &g.neg(&s))));
    }

    #[test]
    fn primes_of_submonoids_are_prime(extra in prop::collection::vec((0i64..3, 0i64..3), 0..2)) {
        let mut gens = vec![vec![1, 0], vec![0, 1]];
        gens.extend(extra.iter().map(|(a, b)| vec![*a, *b]).filter(|v| v != &vec![0, 0]));
        let p = FineMonoid::from_rows(2, &gens);
        let primes = p.prime_ideals();
        prop_assert_eq!(primes.len(), 4);
        prop_assert!(primes.iter().all(|i| i.is_prime()));
    }

    #[test]
    fn flat_ideals_have_certified_bases(pts in prop::collection::vec((0i64..4, 0i64..4), 1..4)) {
        let n2 = FineMonoid::free_nat(2);
        let gens: Vec<_> = pts.iter().map(|(a, b)| elem(&[*a, *b])).collect();
        let m = PModule::ideal(&MonoidIdeal::new(&n2, gens).unwrap());
        let flat = m.is_flat().unwrap().is_flat();
        // An ideal of ℕ² is flat exactly when it is principal.
        let minimal: Vec<_> = pts
            .iter()
            .filter(|p| !pts.iter().any(|o| o != *p && o.0 <= p.0 && o.1 <= p.1))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        prop_assert_eq!(flat, minimal.len() == 1);
        match m.extract_basis(3).unwrap() {
            BasisOutcome::Basis(b) => prop_assert!(flat && b.covers_generators && b.elems.len() == 1),
            BasisOutcome::NotFlat { .. } => prop_assert!(!flat),
        }
    }

    #[test]
    fn normal_forms_are_canonical(f in coeffs(), g in coeffs(), h in coeffs()) {
        let s = PolyRing::new(q(), &["x", "y"]);
        let r = RingPresentation::new(s.clone(), vec![poly2(&s, &g)]);
        let nf = r.nf(&poly2(&s, &f));
        prop_assert_eq!(r.nf(&nf), nf.clone());
        let shifted = s.add(&poly2(&s, &f), &s.mul(&poly2(&s, &h), &poly2(&s, &g)));
        prop_assert!(r.equal(&shifted, &poly2(&s, &f)));
    }

    #[test]
    fn syzygies_are_relations(f in coeffs(), g in coeffs()) {
        let s = PolyRing::new(q(), &["x", "y"]);
        let r = RingPresentation::polynomial(s.clone());
        let cols = vec![vec![poly2(&s, &f)], vec![poly2(&s, &g)]];
        for z in syzygies(&r, &cols, 1) {
            let sum = s.add(&s.mul(&z[0], &cols[0][0]), &s.mul(&z[1], &cols[1][0]));
            prop_assert!(sum.is_zero());
        }
    }

    #[test]
    fn ring_maps_compose(a in coeffs(), b in coeffs(), f in coeffs()) {
        let s = PolyRing::new(q(), &["x", "y"]);
        let r = RingPresentation::polynomial(s.clone());
        let g = RingMap::new(r.clone(), r.clone(), vec![poly2(&s, &a), s.var(1)]).unwrap();
        let h = RingMap::new(r.clone(), r.clone(), vec![s.var(0), poly2(&s, &b)]).unwrap();
        let gh = g.then(&h).unwrap();
        let x = poly2(&s, &f);
        prop_assert_eq!(gh.apply(&x), h.apply(&g.apply(&x)));
    }

    #[test]
    fn nodal_panel_entries_agree(f in coeffs()) {
        let b = GradedRing::nodal(q());
        let m = b.ring.quotient_module(&[poly2(b.poly_ring(), &f)]);
        let panel = nodal_criteria_panel(&m).unwrap();
        prop_assert!(panel.all_agree(), "{:?}", panel.entries());
        prop_assert_eq!(graded_flat(&b, &m).unwrap().flat, panel.graded_flat);
    }

    #[test]
    fn comparison_map_kills_chart_relations(units in 0usize..2) {
        let chart = ChartData::nodal(q()).unit_extension(units).unwrap();
        let aht = build_a_ht(&chart).unwrap();
        for g in &aht.generators {
            prop_assert!(aht.laurent.is_zero(&aht.comparison.apply(g)));
        }
    }

    #[test]
    fn lifts_satisfy_their_identities(c in 1i64..5, d in 0i64..5) {
        let ext = SquareZeroExtension::dual_numbers(q());
        let (a, b) = (ext.big.clone(), ext.small.clone());
        let unit = |r: &RingPresentation, s: &str| r.parse_poly(s).unwrap();
        let p = LiftProblem::new(
            ext,
            diagonal(2),
            FineMonoid::free_nat(2),
            vec![LogElem::new(elem(&[1, 1]), unit(&a, &format!("{c} + {d}*e")))],
            vec![LogElem::new(elem(&[1, 0]), unit(&b, &format!("{c}"))), LogElem::new(elem(&[0, 1]), b.ring.one())],
            vec![b.ring.one()],
        )
        .unwrap();
        let l = homotopy_lift(&p).unwrap();
        prop_assert!(l.check(&p).unwrap());
    }

    #[test]
    fn fat_point_gluings_are_cocartesian(m in 1u32..4, n in 1u32..4) {
        let c1 = RingPresentation::parse(q(), &["x"], &[&format!("x^{m}")]).unwrap();
        let c2 = RingPresentation::parse(q(), &["y"], &[&format!("y^{n}")]).unwrap();
        let c0 = RingPresentation::polynomial(PolyRing::new(q(), &[]));
        let f1 = RingMap::new(c1, c0.clone(), vec![Poly::zero()]).unwrap();
        let f2 = RingMap::new(c2, c0, vec![Poly::zero()]).unwrap();
        let g = fiber_product_ring(&f1, &f2).unwrap();
        prop_assert!(g.cocartesian && g.kernels_annihilate);
        prop_assert_eq!(g.c.vector_space_dim(), Some((m + n - 1) as usize));
    }

    #[test]
    fn gates_are_inherited_and_synthesized(f in coeffs()) {
        let g = GluingDatum::nodal(q());
        let m = g.c.quotient_module(&[poly2(&g.c.ring, &f)]);
        let gate = tor_gate(&g, &m).unwrap();
        let p = pullback_p(&g, &m).unwrap();
        let sides = tor_gate_side(&g, 1, &p.m1).unwrap() && tor_gate_side(&g, 2, &p.m2).unwrap();
        prop_assert!(!gate || sides);
        if sides {
            prop_assert!(tor_gate(&g, &descend_d(&g, &p).unwrap().module).unwrap());
        }
        prop_assert!(roundtrip_module(&g, &m).unwrap().consistent());
    }

    #[test]
    fn gated_modules_are_closed_under_sums(f in coeffs(), h in coeffs()) {
        let g = GluingDatum::nodal(q());
        let a = g.c.quotient_module(&[poly2(&g.c.ring, &f)]);
        let b = g.c.quotient_module(&[poly2(&g.c.ring, &h)]);
        let sum: ModulePresentation = a.direct_sum(&b).unwrap();
        let both = tor_gate(&g, &a).unwrap() && tor_gate(&g, &b).unwrap();
        prop_assert_eq!(tor_gate(&g, &sum).unwrap(), both);
    }
}
