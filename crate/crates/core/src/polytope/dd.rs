//! Double description for polyhedral cones `{x : A x >= 0, E x = 0}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::rational::{dot_int, nullspace, solve, to_rat_vec, Rat};
use crate::lattice::primitive;

/// Generators of a cone: `cone(rays) + span(lineality)`.
///
/// Rays are primitive integer vectors and pairwise non-parallel; they are
/// only determined modulo the lineality space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeGenerators {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn contains(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

fn int_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| to_rat_vec(r)).collect()
}

/// Extreme rays and lineality space of `{x in Q^dim : A x >= 0, E x = 0}`.
pub fn extreme_rays(dim: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> ConeGenerators {
    let all: Vec<Vec<BigInt>> = ineqs.iter().chain(eqs).cloned().collect();
    let lineality = nullspace(&int_rows(&all), dim);

    // restrict to the complement of the lineality inside {E x = 0}
    let complement: Vec<Vec<BigInt>> = eqs.iter().chain(&lineality).cloned().collect();
    let basis = nullspace(&int_rows(&complement), dim);
    let d = basis.len();
    if d == 0 {
        return ConeGenerators {
            rays: Vec::new(),
            lineality,
        };
    }
    let reduced: Vec<Vec<BigInt>> = ineqs
        .iter()
        .map(|a| basis.iter().map(|b| dot_int(a, b)).collect())
        .filter(|row: &Vec<BigInt>| row.iter().any(|x| !x.is_zero()))
        .collect();
    let mut rays: Vec<Vec<BigInt>> = pointed_rays(d, &reduced)
        .into_iter()
        .map(|y| {
            let x: Vec<BigInt> = (0..dim)
                .map(|i| basis.iter().zip(&y).map(|(b, c)| &b[i] * c).sum())
                .collect();
            primitive(&x).expect("nonzero ray")
        })
        .collect();
    rays.sort();
    ConeGenerators { rays, lineality }
}

/// Extreme rays of a pointed cone `{y : A y >= 0}` in `Q^d`; `A` has rank `d`.
fn pointed_rays(d: usize, a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = a.len();
    // pick d independent rows for the initial simplicial cone
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<Rat>> = Vec::new();
    for (i, row) in a.iter().enumerate() {
        let mut trial = chosen_rows.clone();
        trial.push(to_rat_vec(row));
        if crate::lattice::rational::rank(&trial) == trial.len() {
            chosen.push(i);
            chosen_rows = trial;
            if chosen.len() == d {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), d, "cone is not pointed after removing lineality");

    let mut rays: Vec<(Vec<BigInt>, Bits)> = (0..d)
        .map(|j| {
            let rhs: Vec<Rat> = (0..d)
                .map(|i| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() })
                .collect();
            let y = solve(&chosen_rows, &rhs).expect("independent rows");
            let y = crate::lattice::rational::primitive_from_rat(&y);
            let mut z = Bits::new(m);
            for (k, &i) in chosen.iter().enumerate() {
                if k != j {
                    z.set(i);
                }
            }
            (y, z)
        })
        .collect();

    for (i, row) in a.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|(r, _)| dot_int(row, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, (_, z)) in rays.iter_mut().enumerate() {
                if values[k].is_zero() {
                    z.set(i);
                }
            }
            continue;
        }
        let mut next: Vec<(Vec<BigInt>, Bits)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, (_, z))| k == p || k == q || !z.contains(&common));
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(yq, yp)| &values[p] * yq - &values[q] * yp)
                    .collect();
                let mut z = common;
                z.set(i);
                next.push((primitive(&v).expect("adjacent rays are independent"), z));
            }
        }
        for (k, (r, z)) in rays.into_iter().enumerate() {
            if values[k].is_positive() {
                next.push((r, z));
            } else if values[k].is_zero() {
                let mut z = z;
                z.set(i);
                next.push((r, z));
            }
        }
        rays = next;
    }
    rays.into_iter().map(|(r, _)| r).collect()
}

/// H-description of `cone(gens) + span(lineality)`: returns `(ineqs, eqs)`
/// with the cone equal to `{x : ineqs x >= 0, eqs x = 0}`.
pub fn facets_of_cone(
    dim: usize,
    gens: &[Vec<BigInt>],
    lineality: &[Vec<BigInt>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let dual = extreme_rays(dim, gens, lineality);
    (dual.rays, dual.lineality)
}
