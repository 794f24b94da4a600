//! Property checks shared by the proptest suite and the acceptance run.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use toric_ci::fan::Fan;
use toric_ci::laurent::{homogenize, Coefficient, LaurentPolynomial, LaurentSystem};
use toric_ci::lattice::{big_vec, smith_normal_form, IntMat, Rat};
use toric_ci::polytope::{minkowski_sum, Polytope};

use super::{det, is_unimodular};

pub type CheckResult = Result<(), TestCaseError>;

pub fn matrix() -> impl Strategy<Value = IntMat> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-30i64..=30, c), r).prop_map(move |rows| IntMat::from_rows(c, rows))
    })
}

pub fn points2(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 1..=max)
}

pub fn polygon(pts: &[Vec<i64>]) -> Polytope {
    Polytope::from_int_points(&pts.iter().map(|p| big_vec(p)).collect::<Vec<_>>()).unwrap()
}

fn vertex_sum_hull(p: &Polytope, f: &[usize], q: &Polytope, g: &[usize]) -> Polytope {
    let pts: Vec<Vec<Rat>> = f
        .iter()
        .flat_map(|&i| g.iter().map(move |&j| p.vertices()[i].iter().zip(&q.vertices()[j]).map(|(a, b)| a + b).collect()))
        .collect();
    Polytope::convex_hull(&pts).unwrap()
}

/// The complete fan of a full-dimensional polygon: facet normals in
/// angular order.
pub fn polygon_fan(p: &Polytope) -> Fan {
    let mut rays: Vec<Vec<BigInt>> = p.facets().iter().map(|h| h.normal.clone()).collect();
    let angle = |v: &Vec<BigInt>| {
        let x = i64::try_from(&v[0]).unwrap() as f64;
        let y = i64::try_from(&v[1]).unwrap() as f64;
        y.atan2(x)
    };
    rays.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap());
    let k = rays.len();
    let cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    Fan::new(2, rays, cones).unwrap()
}

/// `U M V = S` with unimodular `U`, `V`, a divisibility chain on the
/// diagonal and the product of the invariant factors equal to the gcd of
/// the minors of that size.
pub fn smith_form(m: &IntMat) -> CheckResult {
    let f = smith_normal_form(m);
    prop_assert_eq!(&(&f.u * m) * &f.v, f.s.clone());
    prop_assert!(is_unimodular(&f.u) && is_unimodular(&f.v));
    prop_assert!(f.s.is_diagonal());
    let d = f.invariant_factors();
    prop_assert!(d.iter().all(|x| x.is_positive()));
    for w in d.windows(2) {
        prop_assert!(w[1].is_multiple_of(&w[0]));
    }
    let k = d.len();
    if k > 0 {
        let prod: BigInt = d.iter().product();
        let rows = m.row_vecs();
        let mut g = BigInt::zero();
        for ri in itertools::Itertools::combinations(0..m.rows(), k) {
            for ci in itertools::Itertools::combinations(0..m.cols(), k) {
                let minor: Vec<Vec<BigInt>> = ri.iter().map(|&i| ci.iter().map(|&j| rows[i][j].clone()).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        prop_assert_eq!(g, prod);
    }
    Ok(())
}

/// Every face of `P + Q` is the sum of exactly one pair of faces, and the
/// recorded decomposition names that pair.
pub fn minkowski_faces(a: &[Vec<i64>], b: &[Vec<i64>]) -> CheckResult {
    let p = polygon(a);
    let q = polygon(b);
    let m = minkowski_sum(&[p.clone(), q.clone()]).unwrap();
    for (k, face) in m.sum.faces().iter().enumerate() {
        let target = m.sum.face_polytope(face);
        let matches: Vec<(Vec<usize>, Vec<usize>)> = p
            .faces()
            .iter()
            .flat_map(|f| q.faces().iter().map(move |g| (f.vertices.clone(), g.vertices.clone())))
            .filter(|(f, g)| vertex_sum_hull(&p, f, &q, g) == target)
            .collect();
        prop_assert_eq!(matches.len(), 1);
        prop_assert_eq!(&matches[0].0, &m.parts[k][0]);
        prop_assert_eq!(&matches[0].1, &m.parts[k][1]);
    }
    Ok(())
}

/// Homogenizing `f` over the normal fan of `B(f) + [0,1]^2` sends each
/// exponent `nu` to `P* nu + a`, so `B(g) = P* B(f) + a`, and no variable
/// divides `g`.
pub fn homogenized_newton_polytope(exps: &[Vec<i64>], coeffs: &[i64]) -> CheckResult {
    let mut exps = exps.to_vec();
    exps.sort();
    exps.dedup();
    let terms: Vec<(Vec<BigInt>, Coefficient)> = exps
        .iter()
        .zip(coeffs)
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (big_vec(e), Coefficient::Value(Rat::from_integer(c.into()))))
        .collect();
    prop_assume!(!terms.is_empty());
    let f = LaurentPolynomial::new(2, terms).unwrap();
    let square = polygon(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    let fan = polygon_fan(&minkowski_sum(&[f.newton_polytope(), square]).unwrap().sum);
    let g = homogenize(&LaurentSystem::new(vec![f.clone()]).unwrap(), &fan).unwrap();
    let a = &g.shifts[0];
    let rays = fan.rays().to_vec();
    let mut expected: Vec<(Vec<BigInt>, Coefficient)> = f
        .terms()
        .iter()
        .map(|(nu, c)| (rays.iter().zip(a).map(|(v, ai)| &v[0] * &nu[0] + &v[1] * &nu[1] + ai).collect(), c.clone()))
        .collect();
    expected.sort();
    let got: Vec<_> = g.polys[0].terms().iter().map(|(e, c)| (e.clone(), c.clone())).collect();
    prop_assert_eq!(got, expected);
    let image = f.newton_polytope().affine_image(&rays, a).unwrap();
    prop_assert_eq!(g.polys[0].newton_polytope(), image);
    for i in 0..rays.len() {
        prop_assert!(g.polys[0].terms().keys().any(|e| e[i].is_zero()));
    }
    Ok(())
}
