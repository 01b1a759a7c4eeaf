//! Worked examples for each operation, checked against exact expected values.

mod common;

use std::collections::BTreeMap;

use nblow_core::fixture::builtin;
use nblow_core::geometry::{
    diagonal_fixture, incidence_set, min_separating_degree, orbit, separates, Direction, HomogeneousForm,
    LinearAutomorphism, ProjectivePoint,
};
use nblow_core::sequence::{
    closure_orbit, coherence_check, decompose_stable, idealizer_check, left_torsion, right_torsion, torsion_verdict,
    validate_gen_naive, validate_with_t, veronese, IdealSequence, ViolationKind,
};
use nblow_core::sparse::{check_bounding, derived_bound, union_bound, verify_estimates};
use nblow_core::{BoundingFunction, Colength, Error, Monomial, MonomialIdeal, OrbitIdealData, SparseSetWindow};

use common::{in_product_many, monomials_up_to, raw};

fn i(s: &str) -> MonomialIdeal {
    MonomialIdeal::parse(2, s).unwrap()
}

fn mono(s: &str) -> Monomial {
    Monomial::parse(2, s).unwrap()
}

fn m(k: u32) -> MonomialIdeal {
    MonomialIdeal::maximal_power(2, k)
}

fn big_m() -> MonomialIdeal {
    i("x^2, y^2")
}

fn data(slots: &[(i64, MonomialIdeal)]) -> OrbitIdealData {
    OrbitIdealData::single_orbit(2, slots.iter().cloned()).unwrap()
}

fn eg1_seed() -> OrbitIdealData {
    data(&[(0, m(1)), (1, big_m())])
}

mod monomial {
    use super::*;

    #[test]
    fn minimalize() {
        let pruned = MonomialIdeal::minimalize(2, [mono("x^3"), mono("x^2*y"), mono("x^2"), mono("y")]).unwrap();
        assert_eq!(pruned, i("x^2, y"));
        assert_eq!(i("x^3, y^3").add(&m(4)).unwrap(), i("x^3, x^2*y^2, y^3"));
        let g = i("x^4, x^3*y, x*y^3, y^4");
        assert_eq!(g.gens().len(), 4);
        assert_eq!(MonomialIdeal::minimalize(2, g.gens().iter().cloned()).unwrap(), g);
    }

    #[test]
    fn sums() {
        let j = i("x^2, x*y^3");
        assert_eq!(j.add(&MonomialIdeal::unit(2)).unwrap(), MonomialIdeal::unit(2));
        assert_eq!(j.add(&MonomialIdeal::zero(2)).unwrap(), j);
    }

    #[test]
    fn products() {
        assert_eq!(big_m().multiply(&m(1)).unwrap(), m(3));
        let eg3 = builtin("eg3").unwrap();
        let get = |n: &str| eg3.scope.get(n).unwrap().clone();
        assert_eq!(get("P").multiply(&get("J")).unwrap(), get("K"));
        let b = big_m().multiply(&i("x^3, y^3")).unwrap().multiply(&m(1)).unwrap();
        assert_eq!(b, m(6));
        assert_ne!(b, m(5));
        assert_eq!(big_m().multiply(&MonomialIdeal::unit(2)).unwrap(), big_m());
    }

    #[test]
    fn staircase_oracle_gives_m6() {
        let factors = vec![raw(&big_m()), raw(&i("x^3, y^3")), raw(&m(1))];
        for u in monomials_up_to(2, 10) {
            assert_eq!(in_product_many(&factors, u.exponents()), u.degree() >= 6, "{u}");
        }
    }

    #[test]
    fn intersections() {
        assert_eq!(i("x").intersect(&i("y")).unwrap(), i("x*y"));
        assert_eq!(big_m().intersect(&MonomialIdeal::unit(2)).unwrap(), big_m());
        assert_eq!(i("x^2, y").intersect(&i("x, y^2")).unwrap(), i("x^2, x*y, y^2"));
    }

    #[test]
    fn colons() {
        let eg3 = builtin("eg3").unwrap();
        let get = |n: &str| eg3.scope.get(n).unwrap().clone();
        let k = get("K");
        assert_eq!(k.colon(&get("J")).unwrap(), get("P"));
        assert_eq!(k.colon(&get("P")).unwrap(), get("J"));
        assert_eq!(k.colon(&get("I")).unwrap(), get("Q"));
        assert_eq!(k.colon(&get("Q")).unwrap(), get("I"));
        assert_eq!(m(6).colon(&big_m()).unwrap(), m(4));
        assert_eq!(big_m().colon(&MonomialIdeal::unit(2)).unwrap(), big_m());
        assert!(matches!(big_m().colon(&MonomialIdeal::zero(2)), Err(Error::ColonByZero)));
    }

    #[test]
    fn membership_and_containment() {
        let k = builtin("eg3").unwrap().scope.get("K").unwrap().clone();
        assert!(!k.contains(&mono("x^6*y^6")).unwrap());
        assert!(big_m().is_subset(&m(2)).unwrap());
        assert!(!m(2).is_subset(&big_m()).unwrap());
        assert!(!big_m().contains(&mono("x*y")).unwrap());
        assert!(MonomialIdeal::unit(2).contains(&Monomial::one(2)).unwrap());
    }

    #[test]
    fn colengths() {
        assert_eq!(m(1).colength(), Colength::Finite(1));
        for k in 1..8u64 {
            assert_eq!(m(k as u32).colength(), Colength::Finite(k * (k + 1) / 2));
        }
        assert_eq!(big_m().colength(), Colength::Finite(4));
        assert_eq!(i("x^2").colength(), Colength::Infinite);
    }

    #[test]
    fn json_form() {
        assert_eq!(serde_json::to_string(&big_m()).unwrap(), "[[2,0],[0,2]]");
        assert_eq!(serde_json::to_string(&MonomialIdeal::unit(2)).unwrap(), "[[0,0]]");
        assert_eq!(serde_json::to_string(&MonomialIdeal::zero(2)).unwrap(), "[]");
    }
}

mod data {
    use super::*;

    #[test]
    fn twists() {
        let d = eg1_seed();
        assert_eq!(d.twist(1), data(&[(1, m(1)), (2, big_m())]));
        assert_eq!(d.twist(2).twist(-2), d);
        assert_eq!(d.twist(0), d);
    }

    #[test]
    fn products() {
        let d = eg1_seed();
        assert_eq!(d.multiply(&d.twist(1)).unwrap(), data(&[(0, m(1)), (1, m(3)), (2, big_m())]));
        let eg2 = data(&[(0, big_m()), (1, m(1)), (2, big_m())]);
        let hat = data(&[(0, big_m()), (1, m(1)), (2, m(2))]);
        let expected = data(&[(0, big_m()), (1, m(3)), (2, m(3)), (3, big_m())]);
        assert_eq!(eg2.multiply(&eg2.twist(1)).unwrap(), expected);
        assert_eq!(hat.multiply(&eg2.twist(1)).unwrap(), expected);
        assert_eq!(d.multiply(&OrbitIdealData::unit(2)).unwrap(), d);
    }

    #[test]
    fn colons() {
        let seq = IdealSequence::naive(eg1_seed(), 4).unwrap();
        let q = seq.term(2).unwrap().colon(&seq.term(1).unwrap().twist(1)).unwrap();
        assert_eq!(q.slot(0, 1), m(2));
        let d = eg1_seed();
        assert_eq!(d.colon(&OrbitIdealData::unit(2)).unwrap(), d);
    }

    #[test]
    fn widths() {
        assert_eq!(eg1_seed().orbit_width(0).unwrap(), 1);
        assert_eq!(data(&[(0, big_m()), (1, m(1)), (2, big_m())]).orbit_width(0).unwrap(), 2);
        assert_eq!(data(&[(0, m(1))]).orbit_width(0).unwrap(), 0);
        assert!(eg1_seed().orbit_width(7).is_err());
    }
}

mod sequences {
    use super::*;

    #[test]
    fn naive_terms() {
        let seq = IdealSequence::naive(eg1_seed(), 6).unwrap();
        assert_eq!(seq.term(3).unwrap(), data(&[(0, m(1)), (1, m(3)), (2, m(3)), (3, big_m())]));
        let t = IdealSequence::naive(data(&[(0, m(1)), (1, m(2))]), 6).unwrap();
        assert_eq!(t.term(3).unwrap(), data(&[(0, m(1)), (1, m(3)), (2, m(3)), (3, m(2))]));
        assert!(seq.term(0).unwrap().is_unit());
    }

    #[test]
    fn validation() {
        let r = validate_gen_naive(&IdealSequence::naive(eg1_seed(), 8).unwrap()).unwrap();
        assert!(r.ok);
        assert_eq!(r.t_effective, Some(1));

        let nn = builtin("not-naive").unwrap().sequence.with_horizon(10).unwrap();
        let h = right_torsion(&nn).unwrap().sequence;
        assert!(validate_with_t(&h, 2).unwrap().ok);
        let fail = validate_with_t(&h, 1).unwrap();
        assert!(!fail.ok);
        assert_eq!(fail.first_violation.unwrap().kind, ViolationKind::Equality);

        let one = data(&[(0, m(1))]);
        let two = data(&[(0, m(2)), (1, m(1))]);
        let table = IdealSequence::table(vec![OrbitIdealData::unit(2), one, two.clone(), two], 1).unwrap();
        let bad = validate_gen_naive(&table).unwrap();
        let v = bad.first_violation.unwrap();
        assert_eq!((v.kind, v.m, v.n), (ViolationKind::Containment, 1, 1));
    }

    #[test]
    fn stable_forms() {
        let s = decompose_stable(&IdealSequence::naive(eg1_seed(), 10).unwrap()).unwrap();
        let o = &s.orbits[&0];
        assert_eq!((o.width, &o.a, &o.b, &o.c), (1, &vec![m(1)], &m(3), &vec![big_m()]));

        let nn = builtin("not-naive").unwrap().sequence.with_horizon(10).unwrap();
        let n = i("x^3, y^3");
        let s = decompose_stable(&nn).unwrap();
        let o = &s.orbits[&0];
        assert_eq!(o.width, 2);
        assert_eq!(o.a, vec![big_m(), big_m().multiply(&n).unwrap()]);
        assert_eq!(o.b, m(6));
        assert_eq!(o.c, vec![n.multiply(&m(1)).unwrap(), m(1)]);
        for k in 2..=10 {
            assert_eq!(s.recompose(k).unwrap(), nn.term(k).unwrap());
        }
    }

    #[test]
    fn right_torsion_examples() {
        let eg1 = IdealSequence::naive(eg1_seed(), 10).unwrap();
        let r = right_torsion(&eg1).unwrap();
        for n in 2..=10i64 {
            let mut slots = vec![(0, m(1))];
            slots.extend((1..n).map(|j| (j, m(3))));
            slots.push((n, m(2)));
            assert_eq!(r.sequence.term(n as usize).unwrap(), data(&slots));
        }
        assert_eq!(r.d[&0], vec![m(2)]);
        assert_eq!(r.reference()[&0], vec![big_m()]);

        let eg2 = builtin("eg2").unwrap().sequence.with_horizon(10).unwrap();
        assert_eq!(right_torsion(&eg2).unwrap().sequence.term(1).unwrap(), data(&[(0, big_m()), (1, m(1)), (2, m(2))]));

        let eg3 = builtin("eg3").unwrap();
        let get = |n: &str| eg3.scope.get(n).unwrap().clone();
        let seq = eg3.sequence.with_horizon(10).unwrap();
        assert_eq!(right_torsion(&seq).unwrap().sequence.term(1).unwrap(), data(&[(0, get("I")), (1, get("Q"))]));
        assert_eq!(left_torsion(&seq).unwrap().sequence.term(1).unwrap(), data(&[(0, get("P")), (1, get("J"))]));
    }

    #[test]
    fn left_torsion_of_eg1_is_trivial() {
        let eg1 = IdealSequence::naive(eg1_seed(), 10).unwrap();
        assert!(left_torsion(&eg1).unwrap().sequence.window_eq(&eg1).unwrap());
    }

    #[test]
    fn verdicts() {
        let v = torsion_verdict(&IdealSequence::naive(eg1_seed(), 10).unwrap()).unwrap();
        assert!(!v.right_closed() && v.left_closed());
        let eg2 = builtin("eg2").unwrap().sequence.with_horizon(10).unwrap();
        let v = torsion_verdict(&eg2).unwrap();
        assert!(!v.right_closed() && !v.left_closed());
        let v = torsion_verdict(&IdealSequence::naive(data(&[(0, m(1))]), 10).unwrap()).unwrap();
        assert!(v.right_closed() && v.left_closed());
    }

    #[test]
    fn closures() {
        let eg2 = builtin("eg2").unwrap().sequence.with_horizon(10).unwrap();
        let c = closure_orbit(&eg2, 8).unwrap();
        let limit = data(&[(0, m(2)), (1, m(1)), (2, m(2))]);
        assert!(c.same_limit);
        assert_eq!(c.right_first.fixed_seed, Some(limit.clone()));
        assert_eq!(c.left_first.fixed_seed, Some(limit));

        let eg3 = builtin("eg3").unwrap().sequence.with_horizon(10).unwrap();
        let c = closure_orbit(&eg3, 8).unwrap();
        assert_eq!(c.fixed_points, 2);

        let closed = IdealSequence::naive(data(&[(0, m(1))]), 10).unwrap();
        let c = closure_orbit(&closed, 8).unwrap();
        assert_eq!(c.right_first.visited.len(), 1);
        assert_eq!(c.right_first.applied.len(), 2);
    }

    #[test]
    fn idealizers() {
        let eg1 = IdealSequence::naive(eg1_seed(), 10).unwrap();
        let t = right_torsion(&eg1).unwrap().sequence;
        assert_eq!(idealizer_check(&eg1, &t).unwrap().n0, 1);
        assert_eq!(idealizer_check(&eg1, &eg1).unwrap().n0, 0);
        for name in ["eg2", "eg3", "not-naive"] {
            let seq = builtin(name).unwrap().sequence.with_horizon(10).unwrap();
            let t = right_torsion(&seq).unwrap();
            let r = idealizer_check(&seq, &t.sequence).unwrap();
            assert!(r.n0 <= t.source.threshold, "{name}: n0 = {}", r.n0);
        }
    }

    fn scaled_chain(k: usize, exponent: impl Fn(usize) -> u32) -> Vec<OrbitIdealData> {
        let seq = IdealSequence::naive(eg1_seed(), k).unwrap();
        (0..=k)
            .map(|n| {
                let z = OrbitIdealData::single_orbit(2, [(0, m(exponent(n)))]).unwrap();
                seq.term(n).unwrap().multiply(&z).unwrap()
            })
            .collect()
    }

    #[test]
    fn coherence() {
        let equal = IdealSequence::naive(eg1_seed(), 10).unwrap().terms(10).unwrap();
        let r = coherence_check(&equal, &eg1_seed()).unwrap();
        assert!(r.coherent_in_window);
        assert_eq!(r.first_stable_index, 0);

        // Strictly larger from index 3 on, then propagated by products.
        let r = coherence_check(&scaled_chain(10, |n| u32::from(n < 3)), &eg1_seed()).unwrap();
        assert!(r.coherent_in_window);
        assert_eq!(r.first_stable_index, 3);
        assert_eq!(r.strict_indices, vec![2]);

        // Strict growth into every even index.
        let r = coherence_check(&scaled_chain(10, |n| ((11 - n) / 2) as u32), &eg1_seed()).unwrap();
        assert!(!r.coherent_in_window);
        assert_eq!(r.strict_indices, vec![1, 3, 5, 7, 9]);
    }

    #[test]
    fn veronese_examples() {
        let nn = builtin("not-naive").unwrap().sequence.with_horizon(10).unwrap();
        let h = right_torsion(&nn).unwrap().sequence;
        assert!(veronese(&h, 2).unwrap().naive);
        let eg1 = IdealSequence::naive(eg1_seed(), 10).unwrap();
        for p in 1..=4 {
            assert!(veronese(&eg1, p).unwrap().naive);
        }
        let table = IdealSequence::table(h.terms(10).unwrap(), 2).unwrap();
        let r = veronese(&table, 1).unwrap();
        assert!(r.below_t && !r.naive);
    }
}

mod sparse {
    use super::*;

    #[test]
    fn prefix_counts() {
        assert_eq!(SparseSetWindow::arithmetic(0, 2, 100).unwrap().prefix_count(10).unwrap(), 5);
        assert_eq!(SparseSetWindow::empty(100).prefix_count(50).unwrap(), 0);
        assert_eq!(SparseSetWindow::full(100).prefix_count(37).unwrap(), 37);
    }

    #[test]
    fn bounding_checks() {
        let finite = SparseSetWindow::new([4, 9, 17, 40], 500).unwrap();
        assert!(check_bounding(&finite, &BoundingFunction::finite(&finite), 30).ok);
        let squares = SparseSetWindow::squares(10_000);
        assert!(check_bounding(&squares, &BoundingFunction::parse("4*m^2").unwrap(), 20).ok);
        let evens = SparseSetWindow::arithmetic(0, 2, 1000).unwrap();
        let r = check_bounding(&evens, &BoundingFunction::linear(5), 3);
        assert!(r.first_failure.is_some_and(|(m, _)| m <= 3));
    }

    #[test]
    fn unions() {
        let s = SparseSetWindow::squares(5000);
        let n = BoundingFunction::parse("4*m^2").unwrap();
        let (set, bound, r) = union_bound(&[(s.clone(), n.clone())], 10).unwrap();
        assert_eq!((set, bound), (s.clone(), n.clone()));
        assert!(r.ok);

        let a = SparseSetWindow::new([3, 8, 20], 2000).unwrap();
        let b = SparseSetWindow::new([1, 2, 50, 51, 90], 2000).unwrap();
        let (_, bound, r) =
            union_bound(&[(a.clone(), BoundingFunction::finite(&a)), (b.clone(), BoundingFunction::finite(&b))], 20)
                .unwrap();
        assert!(r.ok);
        for m in 1..=20 {
            assert_eq!(bound.eval(m), Some(5 * 2 * m));
        }

        let (_, bound, r) = union_bound(&[(s.clone(), n.clone()), (s.clone(), n.clone()), (s, n.clone())], 10).unwrap();
        assert!(r.ok);
        assert!((1..=10).all(|m| bound.eval(m) == n.eval(3 * m)));
    }

    #[test]
    fn shifted_sets() {
        let s = SparseSetWindow::new([0, 1, 5, 6, 12], 20).unwrap();
        assert_eq!(s.shifted_self(1).unwrap().members(), &[1, 6]);
        assert_eq!(s.shifted_self(12).unwrap().members(), &[1, 5, 6, 12]);
        assert!(SparseSetWindow::new([0, 10, 30], 40).unwrap().shifted_self(5).unwrap().is_empty());
    }

    #[test]
    fn derived_bounds() {
        // Gaps between cubes from 27 on all exceed 18, so every S_d below is empty.
        let cubes = SparseSetWindow::new((3..=16u64).map(|k| k * k * k), 4097).unwrap();
        let arbitrary: BTreeMap<u64, BoundingFunction> =
            (1..=6).map(|m| (3 * m, BoundingFunction::linear(1))).collect();
        let r = derived_bound(&cubes, arbitrary, 6).unwrap();
        assert!(r.precondition_failures.is_empty());
        assert!(r.check.ok);

        let finite = SparseSetWindow::new([2, 3, 4, 30, 31], 1000).unwrap();
        let shifted =
            (1..=5).map(|m| (3 * m, BoundingFunction::finite(&finite.shifted_self(3 * m).unwrap()))).collect();
        let r = derived_bound(&finite, shifted, 5).unwrap();
        assert!(r.precondition_failures.is_empty() && r.check.ok);

        let evens = SparseSetWindow::arithmetic(0, 2, 600).unwrap();
        let shifted = (1..=4).map(|m| (3 * m, BoundingFunction::linear(10))).collect();
        assert!(!derived_bound(&evens, shifted, 4).unwrap().precondition_failures.is_empty());
    }

    #[test]
    fn estimates() {
        for s in [SparseSetWindow::empty(1000), SparseSetWindow::full(1000)] {
            for d in 1..=10 {
                let r = verify_estimates(&s, d).unwrap();
                assert!(r.ineq1_ok && r.ineq2_ok);
            }
        }
    }
}

mod geometry {
    use super::*;

    fn p(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_i64(c).unwrap()
    }

    #[test]
    fn orbits() {
        let id = LinearAutomorphism::diagonal(&[1, 1, 1]).unwrap();
        let o = orbit(&p(&[1, 2, 3]), &id, 4, Direction::Forward).unwrap();
        assert_eq!(o.repetition, Some((1, 0)));

        let (x, sigma) = diagonal_fixture();
        let o = orbit(&x, &sigma, 6, Direction::Forward).unwrap();
        for (k, pt) in o.points.iter().enumerate() {
            assert_eq!(pt, &p(&[1, 2i64.pow(k as u32), 3i64.pow(k as u32)]));
        }
        assert_eq!(o.repetition, None);

        let cyc = LinearAutomorphism::from_row_major(&[0, 0, 1, 1, 0, 0, 0, 1, 0]).unwrap();
        let o = orbit(&p(&[1, 2, 3]), &cyc, 6, Direction::Forward).unwrap();
        assert_eq!(o.repetition, Some((3, 0)));
    }

    #[test]
    fn incidences() {
        let (x, sigma) = diagonal_fixture();
        let pts = orbit(&x, &sigma, 50, Direction::Forward).unwrap().points;
        assert!(incidence_set(&pts, &HomogeneousForm::parse(3, "x0").unwrap()).unwrap().is_empty());
        assert_eq!(incidence_set(&pts, &HomogeneousForm::parse(3, "x1-x0").unwrap()).unwrap().members(), &[0]);
        let line = HomogeneousForm::vanishing_at(&[pts[2].clone(), pts[5].clone()], 1).unwrap().unwrap();
        let s = incidence_set(&pts, &line).unwrap();
        assert!(s.contains(2) && s.contains(5));
    }

    #[test]
    fn separation() {
        assert!(separates(&[p(&[1, 0, 0]), p(&[0, 1, 0])], 1).unwrap().ok);
        for d in 0..=5u32 {
            let line: Vec<_> = (0..d as i64 + 2).map(|t| p(&[1, t, 0])).collect();
            assert!(!separates(&line, d).unwrap().ok, "D = {d}");
            assert!(separates(&line, d + 1).unwrap().ok, "D = {d}");
        }
        assert_eq!(min_separating_degree(&[p(&[4, 5, 6])]).unwrap(), 0);
        let general = [p(&[1, 0, 0]), p(&[0, 1, 0]), p(&[0, 0, 1]), p(&[1, 1, 1]), p(&[1, 2, 3]), p(&[2, 7, 1])];
        assert!(separates(&general, 2).unwrap().ok);
    }
}
