use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMat;

/// Smith normal form `U * M * V = S` with unimodular `U`, `V`.
///
/// The nonzero diagonal entries of `S` are positive and form a divisibility
/// chain `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMat,
    pub s: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        (0..self.s.rows().min(self.s.cols()))
            .take_while(|&i| !self.s[(i, i)].is_zero())
            .count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|i| self.s[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMat) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pi, pj)) = min_abs_position(&s, t..rows, t..cols) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !s[(i, t)].is_zero() {
                    let q = s[(i, t)].div_floor(&s[(t, t)]);
                    s.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !s[(t, j)].is_zero() {
                    let q = s[(t, j)].div_floor(&s[(t, t)]);
                    s.col_axpy(j, t, &q);
                    v.col_axpy(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; move it up
                let in_col = (t + 1..rows).filter(|&i| !s[(i, t)].is_zero()).map(|i| (i, t));
                let in_row = (t + 1..cols).filter(|&j| !s[(t, j)].is_zero()).map(|j| (t, j));
                let (bi, bj) = in_col
                    .chain(in_row)
                    .min_by(|a, b| s[*a].abs().cmp(&s[*b].abs()))
                    .unwrap();
                if bi != t {
                    s.swap_rows(t, bi);
                    u.swap_rows(t, bi);
                } else {
                    s.swap_cols(t, bj);
                    v.swap_cols(t, bj);
                }
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)]))
            });
            match offender {
                Some(i) => {
                    // row_t += row_i brings the offending entry into row t
                    let minus_one = -BigInt::one();
                    s.row_axpy(t, i, &minus_one);
                    u.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

fn min_abs_position(
    m: &IntMat,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let a = m[(i, j)].abs();
            if a.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Basis of the integer kernel `{x in Z^cols : M x = 0}`, as vectors.
pub fn integer_kernel(m: &IntMat) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank()..m.cols()).map(|j| snf.v.col(j)).collect()
}

/// Some integer solution of `M x = b`, if one exists.
pub fn solve_integer(m: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows());
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let r = snf.rank();
    if ub[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..r {
        let (q, rem) = ub[i].div_rem(&snf.s[(i, i)]);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(snf.v.mul_vec(&y))
}

/// Row-style Hermite normal form: returns `(H, U)` with `U * M = H`,
/// `U` unimodular, `H` in row echelon form with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hermite_normal_form(m: &IntMat) -> (IntMat, IntMat) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMat::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !h[(i, c)].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[(i, c)].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = h[(i, c)].div_floor(&h[(p, c)]);
                    h.row_axpy(i, p, &q);
                    u.row_axpy(i, p, &q);
                }
            }
        }
        let Some(p) = (r..rows).find(|&i| !h[(i, c)].is_zero()) else {
            continue;
        };
        h.swap_rows(r, p);
        u.swap_rows(r, p);
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            h.row_axpy(i, r, &q);
            u.row_axpy(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Basis (as rows) of the lattice generated by the given vectors.
pub fn lattice_basis(generators: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if generators.is_empty() {
        return Vec::new();
    }
    let m = IntMat::from_rows(dim, generators.iter().cloned());
    let (h, _) = hermite_normal_form(&m);
    h.row_vecs()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}
