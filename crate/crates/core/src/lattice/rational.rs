//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

pub fn to_rat_vec(v: &[BigInt]) -> Vec<Rat> {
    v.iter().cloned().map(Rat::from_integer).collect()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairing of an integer vector with a rational vector.
pub fn dot_int_rat(a: &[BigInt], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .map(|(x, y)| y * x)
        .fold(Rat::zero(), |acc, t| acc + t)
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form. Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn rank_int(rows: &[Vec<BigInt>]) -> usize {
    let m: Vec<Vec<Rat>> = rows.iter().map(|r| to_rat_vec(r)).collect();
    rank(&m)
}

/// Basis of `{x : rows * x = 0}` over the rationals, scaled to primitive
/// integer vectors.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); ncols];
            x[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -m[i][f].clone();
            }
            primitive_from_rat(&x)
        })
        .collect()
}

/// A solution of `rows * x = rhs`, with free variables set to zero.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][ncols].clone();
    }
    Some(x)
}

/// Scales a nonzero rational vector to a primitive integer vector with the
/// same direction.
pub fn primitive_from_rat(v: &[Rat]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    super::primitive(&ints).unwrap_or(ints)
}

pub fn floor(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn abs_max(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a.into(), b.into())
    }

    #[test]
    fn solve_three_by_three() {
        // rays of the 1/2(1,1,1) cone: e1, e2, (1,1,2)
        let rows = vec![
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1), r(0, 1)],
            vec![r(1, 1), r(1, 1), r(2, 1)],
        ];
        let x = solve(&rows, &[r(-1, 1), r(-1, 1), r(-1, 1)]).unwrap();
        assert_eq!(x, vec![r(-1, 1), r(-1, 1), r(1, 2)]);
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![vec![r(1, 1), r(1, 1)], vec![r(2, 1), r(2, 1)]];
        assert!(solve(&rows, &[r(1, 1), r(3, 1)]).is_none());
    }

    #[test]
    fn nullspace_is_primitive() {
        let rows = vec![vec![r(2, 1), r(4, 1), r(6, 1)]];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(dot_rat(&rows[0], &to_rat_vec(&v)).is_zero());
        }
    }
}
