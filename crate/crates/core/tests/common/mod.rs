//! Independent oracles shared by the property and acceptance suites. None of
//! them go through the library's normal forms, cell scans or closed-form
//! intersection numbers.

#![allow(dead_code)]

pub mod checks;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use toric_ci::fan::Fan;
use toric_ci::fwps::FakeWps;
use toric_ci::lattice::{big_vec, IntMat, Rat};

pub fn fan(dim: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    Fan::from_i64(dim, rays, cones).unwrap()
}

pub fn p2() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

pub fn p1xp1() -> Fan {
    fan(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]])
}

pub fn p3() -> Fan {
    let rays: Vec<Vec<BigInt>> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]].iter().map(|r| big_vec(r)).collect();
    Fan::all_subsets(3, rays, 3).unwrap()
}

pub fn surface_fan() -> Fan {
    fan(
        3,
        &[&[-2, -2, 1], &[2, 0, 1], &[0, 2, 1], &[0, 0, 1], &[0, 0, -1]],
        &[&[0, 1, 3], &[0, 2, 3], &[1, 2, 3], &[0, 1, 4], &[0, 2, 4], &[1, 2, 4]],
    )
}

pub fn fixture_fans() -> Vec<Fan> {
    let mut out = vec![p2(), p1xp1(), p3(), surface_fan()];
    for (w, t, eta) in [
        (vec![1, 1, 1, 2], vec![], vec![]),
        (vec![1, 1, 2, 3], vec![], vec![]),
        (vec![1, 1, 1, 1, 1], vec![3], vec![vec![0], vec![0], vec![1], vec![1], vec![2]]),
        (vec![1, 1, 1, 2, 2, 2], vec![2, 2], vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 1], vec![1, 0], vec![1, 1]]),
    ] {
        out.push(FakeWps::from_weights(&w, &t, &eta).unwrap().fan().clone());
    }
    out
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Index of the sublattice spanned by linearly independent `rays` in its
/// saturation: the gcd of the maximal minors.
pub fn saturation_index(rays: &[Vec<BigInt>]) -> BigInt {
    let k = rays.len();
    let n = rays[0].len();
    (0..n)
        .combinations(k)
        .map(|rows| det(&rows.iter().map(|&i| rays.iter().map(|v| v[i].clone()).collect()).collect::<Vec<_>>()))
        .fold(BigInt::zero(), |acc, d| acc.gcd(&d))
}

/// Lattice points of `conv(0, v_1, ..., v_k)` for independent `v_i`, found
/// by running over barycentric coordinates with denominator the saturation
/// index. Returns the points as `(level numerator, index, point)` where the
/// level `sum lambda_i` is `numerator / index`; origin and vertices are
/// skipped.
pub fn simplex_lattice_points(rays: &[Vec<BigInt>]) -> Vec<(i64, i64, Vec<BigInt>)> {
    let k = rays.len();
    let n = rays[0].len();
    let d = saturation_index(rays);
    let d: i64 = (&d).try_into().expect("small index");
    let mut out = Vec::new();
    for lam in (0..k).map(|_| 0..=d).multi_cartesian_product() {
        let total: i64 = lam.iter().sum();
        if total == 0 || total > d || (total == d && lam.iter().any(|&l| l == d)) {
            continue;
        }
        let num: Vec<BigInt> = (0..n)
            .map(|i| rays.iter().zip(&lam).map(|(v, &l)| &v[i] * l).sum::<BigInt>())
            .collect();
        if num.iter().all(|x| x.is_multiple_of(&BigInt::from(d))) {
            out.push((total, d, num.iter().map(|x| x / d).collect()));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    Terminal,
    Canonical,
    LogTerminal,
}

pub fn simplex_verdict(rays: &[Vec<BigInt>]) -> Oracle {
    let pts = simplex_lattice_points(rays);
    if pts.iter().any(|(t, d, _)| t < d) {
        Oracle::LogTerminal
    } else if pts.is_empty() {
        Oracle::Terminal
    } else {
        Oracle::Canonical
    }
}

/// Torsion-free weights and torsion residues of the generator degrees.
pub fn degree_data(z: &FakeWps) -> (Vec<i64>, Vec<Vec<i64>>, Vec<i64>) {
    let to = |x: &BigInt| -> i64 { x.try_into().unwrap() };
    let w = z.degrees().iter().map(|g| to(&g.free[0])).collect();
    let eta = z.degrees().iter().map(|g| g.torsion.iter().map(to).collect()).collect();
    let t = z.class_group().torsion().iter().map(to).collect();
    (w, eta, t)
}

/// Number of exponent vectors `e >= 0` of degree `(d, residue)`, by dynamic
/// programming over the degree and torsion residues.
pub fn monomial_count(w: &[i64], eta: &[Vec<i64>], t: &[i64], d: i64, residue: &[i64]) -> BigInt {
    let states: Vec<Vec<i64>> = if t.is_empty() {
        vec![Vec::new()]
    } else {
        t.iter().map(|&o| 0..o).multi_cartesian_product().collect()
    };
    let index = |r: &[i64]| states.iter().position(|s| s == r).unwrap();
    let du = d as usize;
    // table[deg][state]
    let mut table = vec![vec![BigInt::zero(); states.len()]; du + 1];
    table[0][0] = BigInt::one();
    for (x, e) in w.iter().zip(eta) {
        let x = *x as usize;
        for deg in x..=du {
            for (si, s) in states.iter().enumerate() {
                // the previous state before adding one copy of this variable
                let prev: Vec<i64> = s.iter().zip(e).zip(t).map(|((a, b), o)| (a - b).rem_euclid(*o)).collect();
                let pi = index(&prev);
                let add = table[deg - x][pi].clone();
                table[deg][si] += add;
            }
        }
    }
    let target: Vec<i64> = residue.iter().zip(t).map(|(r, o)| r.rem_euclid(*o)).collect();
    table[du][index(&target)].clone()
}

/// Self-intersection `H^n` of the class `H = (1, 0)` on a fake weighted
/// projective space, from the leading coefficient of the lattice-point
/// counts `N(m) = #monomials of degree (m c, 0)` with `c = lcm(x) |T|`,
/// where `N` is the Ehrhart polynomial of a lattice polytope.
pub fn ehrhart_top_intersection(z: &FakeWps) -> Rat {
    let (w, eta, t) = degree_data(z);
    let n = w.len() - 1;
    let order: i64 = t.iter().product();
    let c = w.iter().fold(1i64, |a, b| a.lcm(b)) * order;
    let zero = vec![0; t.len()];
    let counts: Vec<BigInt> = (0..=n as i64).map(|m| monomial_count(&w, &eta, &t, m * c, &zero)).collect();
    // n-th forward difference at 0
    let mut diff = counts;
    for _ in 0..n {
        diff = diff.windows(2).map(|p| &p[1] - &p[0]).collect();
    }
    Rat::new(diff[0].clone(), BigInt::from(c).pow(n as u32))
}

/// `-K^3` of a complete intersection with relation degrees `u_j` whose
/// anticanonical class is `k` times `(1, ...)`, via the Ehrhart oracle.
pub fn ehrhart_minus_k_cubed(z: &FakeWps, u: &[i64], k: i64) -> Rat {
    let prod: i64 = u.iter().product();
    ehrhart_top_intersection(z) * Rat::from_integer(BigInt::from(k.pow(3) * prod))
}

pub fn is_unimodular(m: &IntMat) -> bool {
    det(&m.row_vecs()).abs().is_one()
}
