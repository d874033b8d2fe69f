use super::*;
use crate::abgrp::FgAbGroup;
use crate::monoid::elem;
use crate::polyalg::{eliminate, Field};

fn q() -> Field {
    Field::Q
}

fn module(c: &RingPresentation, rels: &[&str]) -> ModulePresentation {
    let gens: Vec<Poly> = rels.iter().map(|s| c.parse_poly(s).unwrap()).collect();
    c.quotient_module(&gens)
}

#[test]
fn a_ht_for_trivial_q() {
    let chart = ChartData::smooth_divisor(q());
    let aht = build_a_ht(&chart).unwrap();
    assert_eq!(aht.ring, RingPresentation::parse(q(), &["x"], &[]).unwrap());
    assert!(aht.q_vars.is_empty());
    let l = &aht.laurent.ring;
    let image = aht.comparison.apply(&aht.ring.ring.var(0));
    assert_eq!(image, l.parse("x*g1").unwrap());
}

#[test]
fn a_ht_for_nodal_chart() {
    let chart = ChartData::nodal(q());
    let aht = build_a_ht(&chart).unwrap();
    let expected = RingPresentation::parse(q(), &["q1", "q1_inv", "x", "y"], &["q1*q1_inv - 1", "x*y"]).unwrap();
    assert_eq!(aht.ring, expected);
    for g in &aht.generators {
        assert!(aht.comparison.apply(g).is_zero());
    }
}

#[test]
fn a_ht_with_unit_parameter_inverts_the_product() {
    let k = RingPresentation::polynomial(PolyRing::new(q(), &[]));
    let c = RingPresentation::parse(q(), &["x", "y"], &["x*y - 1"]).unwrap();
    let f = RingMap::new(k.clone(), c.clone(), vec![]).unwrap();
    let e = FineMonoid::free_nat(2).gens().to_vec();
    let b = vec![c.ring.var(0), c.ring.var(1)];
    let chart = ChartData::new(diagonal(2), f, vec![k.ring.one()], b, vec!["x".into(), "y".into()], e).unwrap();
    let aht = build_a_ht(&chart).unwrap();
    let s = &aht.ring.ring;
    // Eliminating the Laurent variable q1 leaves the localization k[x, y, (xy)^-1].
    let rest = eliminate(s, &aht.ring.ideal, &[0]);
    let target = RingPresentation::new(s.clone(), vec![s.parse("x*y*q1_inv - 1").unwrap()]);
    assert!(target.contains_all(&rest));
    assert!(RingPresentation::new(s.clone(), rest).contains_all(&target.ideal));
    let loc = RingPresentation::parse(q(), &["x", "y", "w"], &["x*y*w - 1"]).unwrap();
    let to_loc = RingMap::new(
        aht.ring.clone(),
        loc.clone(),
        vec![loc.parse_poly("x*y").unwrap(), loc.ring.var(2), loc.ring.var(0), loc.ring.var(1)],
    )
    .unwrap();
    assert!(to_loc.is_injective());
    assert!(to_loc.is_surjective());
}

#[test]
fn invalid_square_is_rejected() {
    let k = RingPresentation::polynomial(PolyRing::new(q(), &[]));
    let c = RingPresentation::parse(q(), &["x", "y"], &[]).unwrap();
    let f = RingMap::new(k.clone(), c.clone(), vec![]).unwrap();
    let e = FineMonoid::free_nat(2).gens().to_vec();
    let b = vec![c.ring.var(0), c.ring.var(1)];
    let r = ChartData::new(diagonal(2), f, vec![Poly::zero()], b, vec!["x".into(), "y".into()], e);
    assert!(matches!(r, Err(Error::ChartInvalid(_))));
}

#[test]
fn b_for_standard_charts() {
    let nodal = build_b(&ChartData::nodal(q())).unwrap();
    assert_eq!(nodal.graded.ring, RingPresentation::parse(q(), &["x", "y"], &["x*y"]).unwrap());
    assert_eq!(nodal.graded.group, FgAbGroup::free(1));
    assert_eq!(nodal.graded.degrees, vec![elem(&[1]), elem(&[-1])]);
    assert_eq!(nodal.free, Tri::Yes);

    let smooth = build_b(&ChartData::smooth_divisor(q())).unwrap();
    assert_eq!(smooth.graded.ring, RingPresentation::parse(q(), &["x"], &[]).unwrap());
    assert_eq!(smooth.graded.degrees, vec![elem(&[1])]);

    let family = build_b(&ChartData::nodal_family(q())).unwrap();
    assert_eq!(family.graded.ring, RingPresentation::parse(q(), &["t", "x", "y"], &["x*y - t"]).unwrap());
    assert_eq!(family.graded.degrees, vec![elem(&[0]), elem(&[1]), elem(&[-1])]);
}

#[test]
fn second_criterion_examples() {
    let nodal = ChartData::nodal(q());
    let c = nodal.c().clone();
    assert!(second_chart_criterion(&nodal, &c.as_module()).unwrap().log_flat);
    assert!(!second_chart_criterion(&nodal, &module(&c, &["x + y"])).unwrap().log_flat);

    let smooth = ChartData::smooth_divisor(q());
    let c = smooth.c().clone();
    assert!(!second_chart_criterion(&smooth, &module(&c, &["x"])).unwrap().log_flat);
    assert!(second_chart_criterion(&smooth, &module(&c, &["x - 1"])).unwrap().log_flat);
}

#[test]
fn non_injective_chart_is_refused() {
    let k = RingPresentation::polynomial(PolyRing::new(q(), &[]));
    let f = RingMap::new(k.clone(), k.clone(), vec![]).unwrap();
    let n2 = FineMonoid::free_nat(2);
    let n1 = FineMonoid::free_nat(1);
    let h = MonoidHom::new(&n2, &n1, vec![elem(&[1]), elem(&[1])]).unwrap();
    let chart =
        ChartData::new(h, f, vec![Poly::zero(), Poly::zero()], vec![Poly::zero()], vec!["z".into()], vec![elem(&[1])])
            .unwrap();
    assert!(matches!(second_chart_criterion(&chart, &k.as_module()), Err(Error::NotInjectiveH)));
}

#[test]
fn toric_point_verdicts() {
    let p = FineMonoid::free_nat(2);
    let c = RingPresentation::parse(q(), &["x", "y"], &[]).unwrap();
    let free = log_flat_over_point(&p, &c.as_module()).unwrap();
    assert!(free.flat);
    assert_eq!(free.primes.len(), 4);
    assert!(!log_flat_over_point(&p, &module(&c, &["x", "y"])).unwrap().flat);
    let line = log_flat_over_point(&p, &module(&c, &["x + y"])).unwrap();
    assert!(!line.flat);
    let failing: Vec<_> = line.primes.iter().filter(|(_, ok)| !ok).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0].0.complement_mask(), vec![false, false]);
    let hyperbola = log_flat_over_point(&p, &module(&c, &["x + y - 1"])).unwrap();
    assert!(hyperbola.flat);
    assert!(hyperbola.primes.iter().all(|(_, ok)| *ok));
}

#[test]
fn point_chart_agrees_with_point_test() {
    let chart = ChartData::toric_point(2, q(), vec!["x".into(), "y".into()]).unwrap();
    let p = FineMonoid::free_nat(2);
    let c = chart.c().clone();
    for rels in [vec![], vec!["x"], vec!["x + y"], vec!["x + y - 1"], vec!["x*y"], vec!["x", "y"], vec!["x^2 - y"]] {
        let m = module(&c, &rels);
        assert_eq!(
            second_chart_criterion(&chart, &m).unwrap().log_flat,
            log_flat_over_point(&p, &m).unwrap().flat,
            "{rels:?}"
        );
    }
}

#[test]
fn unit_extension_is_invariant() {
    let nodal = ChartData::nodal(q());
    let ext = nodal.unit_extension(1).unwrap();
    let m = module(nodal.c(), &["x + y"]);
    let r = chart_change_invariance(&nodal, &ext, ChartRelation::UnitExtension { units: 1 }, &m, 4).unwrap();
    assert!(r.isomorphism);
    assert_eq!(r.verdicts, (false, false));
    assert!(r.holds());
    let same = chart_change_invariance(&nodal, &nodal, ChartRelation::Identical, &m, 4).unwrap();
    assert!(same.holds());
}

#[test]
fn unrelated_charts_are_refused() {
    let nodal = ChartData::nodal(q());
    let smooth = ChartData::smooth_divisor(q());
    let m = nodal.c().as_module();
    let r = chart_change_invariance(&nodal, &smooth, ChartRelation::Identical, &m, 3);
    assert!(matches!(r, Err(Error::ChartsUnrelated(_))));
    let ext = nodal.unit_extension(1).unwrap();
    let r = chart_change_invariance(&nodal, &ext, ChartRelation::Identical, &m, 3);
    assert!(matches!(r, Err(Error::ChartsUnrelated(_))));
}

#[test]
fn family_fibers_are_consistent() {
    let c = ChartData::nodal_family(q()).c().clone();
    for rels in [vec![], vec!["t"], vec!["x - 1"], vec!["x + y"], vec!["x - y"]] {
        let r = family_check(&module(&c, &rels)).unwrap();
        assert!(r.implication_holds(), "{rels:?}");
        assert!(r.discrepancy.is_none(), "{rels:?}: {:?}", r.discrepancy);
    }
    let whole = family_check(&c.as_module()).unwrap();
    assert!(whole.graded_flat && whole.special.graded_flat && whole.generic);
}

fn f5() -> Field {
    Field::prime(5).unwrap()
}

fn le(chart: &[i64], ring: &RingPresentation, unit: &str) -> LogElem {
    LogElem::new(elem(chart), ring.parse_poly(unit).unwrap())
}

fn trivial_problem() -> LiftProblem {
    let ext = SquareZeroExtension::trivial(q());
    let n = FineMonoid::free_nat(1);
    let (a, b) = (ext.big.clone(), ext.small.clone());
    LiftProblem::new(ext, MonoidHom::identity(&n), n, vec![le(&[1], &a, "1")], vec![le(&[1], &b, "1")], vec![b.ring.one()])
        .unwrap()
}

fn diagonal_problem() -> LiftProblem {
    let ext = SquareZeroExtension::dual_numbers(q());
    let (a, b) = (ext.big.clone(), ext.small.clone());
    LiftProblem::new(
        ext,
        diagonal(2),
        FineMonoid::free_nat(2),
        vec![le(&[1, 1], &a, "1 + e")],
        vec![le(&[1, 0], &b, "1"), le(&[0, 1], &b, "1")],
        vec![b.ring.one()],
    )
    .unwrap()
}

fn doubling_problem() -> LiftProblem {
    let ext = SquareZeroExtension::dual_numbers(f5());
    let (a, b) = (ext.big.clone(), ext.small.clone());
    let n = FineMonoid::free_nat(1);
    let h = MonoidHom::new(&n, &n, vec![elem(&[2])]).unwrap();
    LiftProblem::new(ext, h, n, vec![le(&[2], &a, "1 + e")], vec![le(&[1], &b, "1")], vec![b.ring.one()]).unwrap()
}

fn torsion_target_problem() -> LiftProblem {
    let ext = SquareZeroExtension::dual_numbers(f5());
    let (a, b) = (ext.big.clone(), ext.small.clone());
    let n = FineMonoid::free_nat(1);
    let p = FineMonoid::group(&FgAbGroup::cyclic(2));
    let h = MonoidHom::new(&n, &p, vec![elem(&[1])]).unwrap();
    let r = FineMonoid::new(FgAbGroup::trivial(), vec![]).unwrap();
    LiftProblem::new(ext, h, r, vec![le(&[], &a, "2 + e")], vec![le(&[], &b, "4")], vec![b.parse_poly("3").unwrap()])
        .unwrap()
}

fn folding_problem() -> LiftProblem {
    let ext = SquareZeroExtension::dual_numbers(q());
    let (a, b) = (ext.big.clone(), ext.small.clone());
    let n2 = FineMonoid::free_nat(2);
    let h = MonoidHom::new(&n2, &n2, vec![elem(&[1, 0]), elem(&[1, 0])]).unwrap();
    LiftProblem::new(
        ext,
        h,
        n2,
        vec![le(&[1, 0], &a, "1 + e"), le(&[1, 0], &a, "1")],
        vec![le(&[1, 0], &b, "1"), le(&[0, 1], &b, "1")],
        vec![b.ring.one(), b.ring.one()],
    )
    .unwrap()
}

#[test]
fn lift_with_zero_kernel() {
    let p = trivial_problem();
    let l = homotopy_lift(&p).unwrap();
    assert!(l.cover.roots.is_empty());
    assert!(l.alpha.units.iter().all(|u| l.cover.small.equal(u, &l.cover.small.ring.one())));
    assert!(l.beta.units.iter().all(|u| l.cover.big.equal(u, &l.cover.big.ring.one())));
}

#[test]
fn lift_with_free_cokernel() {
    let p = diagonal_problem();
    let l = homotopy_lift(&p).unwrap();
    assert_eq!(l.cases, vec![2]);
    assert!(l.cover.roots.is_empty());
    assert!(l.beta.units.iter().all(|u| l.cover.big.equal(u, &l.cover.big.ring.one())));
    assert!(l.check(&p).unwrap());
}

#[test]
fn lift_with_torsion_cokernel_adjoins_a_square_root() {
    let p = doubling_problem();
    let l = homotopy_lift(&p).unwrap();
    assert_eq!(l.cases, vec![3]);
    assert_eq!(l.cover.roots.len(), 1);
    let root = &l.cover.roots[0];
    assert_eq!(root.order, BigInt::from(2));
    let big = &l.cover.big;
    assert!(big.equal(&root.value, &big.parse_poly("1 + e").unwrap()));
    assert!(big.is_zero(&big.parse_poly("x1^2 - 1 - e").unwrap()));
    assert!(l.cover.rank_certified);
    assert_eq!(big.vector_space_dim(), Some(4));
    let x = big.ring.var(root.var);
    assert!(l.cover.small.equal(&l.alpha.units[0], &x));
    assert!(l.check(&p).unwrap());
}

#[test]
fn lift_onto_torsion_group() {
    let p = torsion_target_problem();
    let l = homotopy_lift(&p).unwrap();
    assert_eq!(l.cases, vec![1]);
    assert_eq!(l.cover.roots.len(), 1);
    assert!(l.cover.rank_certified);
    assert!(l.check(&p).unwrap());
}

#[test]
fn lift_of_folding_map() {
    let p = folding_problem();
    let l = homotopy_lift(&p).unwrap();
    assert_eq!(l.cases, vec![1, 2]);
    assert!(l.cover.roots.is_empty());
    assert!(l.check(&p).unwrap());
}

#[test]
fn gamma_between_lifts() {
    let p = diagonal_problem();
    let l = homotopy_lift(&p).unwrap();
    let g = verify_lift_uniqueness(&p, &l, &l).unwrap();
    assert!(HomotopyLift::is_trivial_gamma(&g, &l.cover));

    let image = p.h.gp_hom().image();
    let (coker, proj) = image.embed.cokernel();
    let s0 = proj.solve(&coker.basis(0)).unwrap();
    let s1 = p.h.target.gp().group.add(&s0, &image.embed.image_of_gen(0));
    let other = homotopy_lift_with(&p, &LiftOptions { free_sections: Some(vec![s1]), ..Default::default() }).unwrap();
    let g = verify_lift_uniqueness(&p, &l, &other).unwrap();
    assert!(!HomotopyLift::is_trivial_gamma(&g, &l.cover));

    let eps = p.ext.big.ring.var(0);
    let bumped = homotopy_lift_with(&p, &LiftOptions { perturb: vec![eps], ..Default::default() }).unwrap();
    assert!(verify_lift_uniqueness(&p, &bumped, &other).is_ok());

    let shifted = folding_problem();
    let base = homotopy_lift(&shifted).unwrap();
    let k = shifted.h.gp_hom().kernel();
    let opts = LiftOptions { preimage_shifts: vec![k.embed.image_of_gen(0)], ..Default::default() };
    let moved = homotopy_lift_with(&shifted, &opts).unwrap();
    let g = verify_lift_uniqueness(&shifted, &base, &moved).unwrap();
    assert!(!HomotopyLift::is_trivial_gamma(&g, &base.cover));
}

#[test]
fn lifts_over_different_covers_are_incompatible() {
    let p = doubling_problem();
    let l = homotopy_lift(&p).unwrap();
    let mut other = l.clone();
    other.cover.big = p.ext.big.clone();
    assert!(matches!(verify_lift_uniqueness(&p, &l, &other), Err(Error::LiftsIncompatible(_))));
}

#[test]
fn broken_homotopy_is_rejected() {
    let ext = SquareZeroExtension::dual_numbers(q());
    let (a, b) = (ext.big.clone(), ext.small.clone());
    let r = LiftProblem::new(
        ext,
        diagonal(2),
        FineMonoid::free_nat(2),
        vec![le(&[1, 1], &a, "2")],
        vec![le(&[1, 0], &b, "1"), le(&[0, 1], &b, "1")],
        vec![b.ring.one()],
    );
    assert!(matches!(r, Err(Error::HomotopyInvalid(_))));
}
