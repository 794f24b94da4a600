mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use toric_ci::anticanonical::{build_complex, classify_cone, discrepancy, SingularityVerdict};
use toric_ci::fan::{cox_data, Fan};
use toric_ci::fwps::FakeWps;
use toric_ci::lattice::rational::solve;
use toric_ci::lattice::{big_vec, Rat};

use common::checks::{self, matrix, minkowski_faces, points2, smith_form};
use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_form_identities(m in matrix()) {
        smith_form(&m)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn minkowski_faces_decompose_uniquely(a in points2(6), b in points2(6)) {
        minkowski_faces(&a, &b)?;
    }

    #[test]
    fn homogenized_newton_polytope(exps in points2(6), c in prop::collection::vec(-3i64..=3, 6)) {
        checks::homogenized_newton_polytope(&exps, &c)?;
    }

    #[test]
    fn gale_sequence_is_exact(w in prop::collection::vec(1i64..=5, 4..=5), t in 2i64..=4, eta in prop::collection::vec(0i64..4, 5)) {
        let eta: Vec<Vec<i64>> = eta.iter().take(w.len()).map(|e| vec![e % t]).collect();
        let Ok(z) = FakeWps::from_weights(&w, &[t], &eta) else { return Ok(()) };
        let fan = z.fan();
        let cox = cox_data(fan).unwrap();
        for k in 0..fan.dim() {
            let a: Vec<BigInt> = fan.rays().iter().map(|v| v[k].clone()).collect();
            prop_assert!(cox.degree(&a).unwrap().is_zero());
        }
        prop_assert_eq!(cox.class_group().free_rank(), 1);
        prop_assert_eq!(cox.class_group().torsion_order(), z.class_group().torsion_order());
    }

    #[test]
    fn section_counts_match_monomials(w in prop::collection::vec(1i64..=4, 4..=5), d in 1i64..=12) {
        let Ok(z) = FakeWps::from_weights(&w, &[], &[]) else { return Ok(()) };
        let (ws, eta, t) = degree_data(&z);
        let c = z.class_group().element_i64(&[d], &[]).unwrap();
        prop_assert_eq!(z.component_dimension(&c).unwrap(), monomial_count(&ws, &eta, &t, d, &[]));
    }

    #[test]
    fn simplicial_cones_are_log_terminal(
        rays in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3),
        lam in prop::collection::vec(0i64..=5, 3),
    ) {
        let rays: Vec<Vec<BigInt>> = rays.iter().map(|r| big_vec(r)).collect();
        prop_assume!(!det(&rays).is_zero());
        prop_assume!(rays.iter().all(|r| toric_ci::lattice::is_primitive(r)));
        prop_assume!(lam.iter().any(|&l| l > 0));
        let fan = Fan::new(3, rays.clone(), vec![vec![0, 1, 2]]).unwrap();
        let a = build_complex(&fan, &[vec![0, 1, 2]]).unwrap();
        let v: Vec<BigInt> = (0..3).map(|i| rays.iter().zip(&lam).map(|(r, &l)| &r[i] * l).sum()).collect();
        let v = toric_ci::lattice::primitive(&v).unwrap();
        let rep = discrepancy(&a, &v).unwrap();
        prop_assert!(rep.discrepancy > -Rat::one());
        // v = sum mu_i v_i and the discrepancy is sum mu_i - 1
        let m: Vec<Vec<Rat>> = (0..3).map(|i| rays.iter().map(|r| Rat::from_integer(r[i].clone())).collect()).collect();
        let mu = solve(&m, &v.iter().map(|x| Rat::from_integer(x.clone())).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(rep.discrepancy, mu.iter().sum::<Rat>() - Rat::one());
        // verdict agrees with the barycentric oracle
        let expected = simplex_verdict(&rays);
        let got = classify_cone(&rays);
        let got = match got {
            SingularityVerdict::Terminal => Oracle::Terminal,
            SingularityVerdict::CanonicalNotTerminal { .. } => Oracle::Canonical,
            SingularityVerdict::LogTerminalOnly { .. } => Oracle::LogTerminal,
        };
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn gale_sequence_on_fixture_fans() {
    for fan in fixture_fans() {
        let cox = cox_data(&fan).unwrap();
        for k in 0..fan.dim() {
            let a: Vec<BigInt> = fan.rays().iter().map(|v| v[k].clone()).collect();
            assert!(cox.degree(&a).unwrap().is_zero());
        }
    }
}
