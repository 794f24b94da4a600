//! Enumeration of terminal Fano threefolds arising as general complete
//! intersections of `s` base point free relations in fake weighted
//! projective spaces of dimension `s + 3`.
//!
//! The search runs per weight tuple `(x_0..x_n; u_1..u_s)`: torsion chains,
//! torsion parts of the degrees, a generation prefilter, the terminality
//! test on the cones of dimension `n - s`, and deduplication up to
//! automorphisms of the class group.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::anticanonical::{classify_cone, cone_multiplicity, SingularityVerdict};
use crate::error::{Error, Result};
use crate::fwps::{FakeWps, InvariantSet};
use crate::lattice::{AbelianGroup, DegreeMap, GroupElement};

/// Search bounds for a given number of relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundContext {
    pub s: usize,
    pub n: usize,
    /// Upper bound for the largest weight `x_n`.
    pub weight_cap: i64,
    /// Drops the lcm condition on torsion orders and allows one more
    /// torsion factor. Used to check that the bounds lose nothing.
    pub relaxed_torsion: bool,
    /// Skips the torsion search when the torsion-free candidate is not
    /// terminal. Forgetting the torsion of the grading gives a finite cover
    /// that is etale in codimension one, and terminality of the quotient
    /// lifts to such covers.
    pub cover_pruning: bool,
    /// Drops weight tuples with `gcd(x_i : i not in I) >= sum(x_i : i in I)`
    /// for some index set `I` of size `2..=n-s`. Such a cone carries the
    /// lattice point `sum(x_i v_i : i in I) / gcd` at height at least one,
    /// so no candidate on the tuple is terminal.
    pub gcd_prefilter: bool,
}

impl BoundContext {
    pub fn new(s: usize) -> Result<Self> {
        let weight_cap = match s {
            1 => 41,
            2 => 21,
            3 => 1,
            _ => return Err(Error::InvalidArgument(format!("number of relations must be 1, 2 or 3, got {s}"))),
        };
        Ok(BoundContext {
            s,
            n: s + 3,
            weight_cap,
            relaxed_torsion: false,
            cover_pruning: true,
            gcd_prefilter: true,
        })
    }

    pub fn with_weight_cap(mut self, cap: i64) -> Self {
        self.weight_cap = cap;
        self
    }

    pub fn with_relaxed_torsion(mut self) -> Self {
        self.relaxed_torsion = true;
        self
    }

    pub fn without_cover_pruning(mut self) -> Self {
        self.cover_pruning = false;
        self
    }

    pub fn without_gcd_prefilter(mut self) -> Self {
        self.gcd_prefilter = false;
        self
    }

    fn max_torsion_rank(&self) -> usize {
        if self.relaxed_torsion {
            self.n - 1
        } else {
            self.n - 2
        }
    }
}

/// `m = lcm(x_0, ..., x_n)`.
pub fn weight_lcm(x: &[i64]) -> i64 {
    x.iter().fold(1, |acc, &a| acc.lcm(&a))
}

/// Smallest admissible relation degree: a multiple of `m` that is at least
/// `2 x_n`, so `2m` when `x_n = m` and `m` otherwise.
pub fn min_relation_degree(x: &[i64]) -> i64 {
    let m = weight_lcm(x);
    if x.last() == Some(&m) {
        2 * m
    } else {
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightTuple {
    pub weights: Vec<i64>,
    pub relations: Vec<i64>,
}

impl WeightTuple {
    /// `l_ji = u_j / x_i`.
    pub fn multiplicity(&self, j: usize, i: usize) -> i64 {
        self.relations[j] / self.weights[i]
    }
}

/// Whether every `k` of the weights are coprime.
pub fn subsets_coprime(x: &[i64], k: usize) -> bool {
    x.iter().copied().combinations(k).all(|c| c.iter().fold(0, |acc, a| acc.gcd(a)) == 1)
}

fn coprime_after_dropping_two(x: &[i64]) -> bool {
    subsets_coprime(x, x.len() - 2)
}

/// Whether `gcd(x_i : i not in I) < sum(x_i : i in I)` for every index set
/// `I` with `2 <= |I| <= max_size`.
pub fn gcd_sum_condition(x: &[i64], max_size: usize) -> bool {
    let r = x.len();
    (2..=max_size.min(r)).all(|k| {
        (0..r).combinations(k).all(|idx| {
            let inside: i64 = idx.iter().map(|&i| x[i]).sum();
            let outside = (0..r).filter(|i| !idx.contains(i)).fold(0, |acc, i| acc.gcd(&x[i]));
            outside < inside
        })
    })
}

/// Whether `(n - 3) M < x_0 + ... + x_n` with `M` the minimal relation
/// degree.
pub fn fano_inequality(x: &[i64]) -> bool {
    let n = x.len() as i64 - 1;
    (n - 3) * min_relation_degree(x) < x.iter().sum::<i64>()
}

/// Ordered tuples of length `len` with entries in `1..=cap`, every `k` of
/// them coprime and satisfying [`fano_inequality`].
///
/// Entries are chosen from the largest down. Since `M >= 2 x_n` and `M` is
/// at least the lcm of any chosen entries, a branch is cut once the entries
/// still to come cannot lift the sum above `(n - 3)` times that bound.
pub fn fano_weight_tuples(len: usize, cap: i64, k: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut desc = Vec::with_capacity(len);
    fano_tuples_rec(len, cap, k, &mut desc, 1, &mut out);
    out.sort();
    out
}

fn fano_tuples_rec(len: usize, hi: i64, k: usize, desc: &mut Vec<i64>, l: i64, out: &mut Vec<Vec<i64>>) {
    let n = len as i64 - 1;
    if desc.len() == len {
        let mut x = desc.clone();
        x.reverse();
        if subsets_coprime(&x, k) && fano_inequality(&x) {
            out.push(x);
        }
        return;
    }
    for a in (1..=hi).rev() {
        let top = desc.first().copied().unwrap_or(a);
        let l2 = l.lcm(&a);
        let lower = if top == 1 { 2 } else { (2 * top).max(l2) };
        let rest = (len - desc.len() - 1) as i64;
        let best = desc.iter().sum::<i64>() + a + rest * a;
        if (n - 3) * lower >= best {
            // smaller entries only lower the attainable sum
            if l2 <= 2 * top {
                break;
            }
            continue;
        }
        desc.push(a);
        fano_tuples_rec(len, a, k, desc, l2, out);
        desc.pop();
    }
}

/// Ordered weight tuples with every `n - 1` weights coprime, together with
/// ordered relation degrees `u_j` that are multiples of every weight with
/// `u_j >= 2 x_n` and `sum u_j < sum x_i`.
pub fn enumerate_weight_tuples(ctx: &BoundContext) -> Vec<WeightTuple> {
    let len = ctx.n + 1;
    let mut out = Vec::new();
    let mut x = Vec::with_capacity(len);
    weight_tuples_rec(ctx, len, &mut x, &mut out);
    out
}

fn weight_tuples_rec(ctx: &BoundContext, len: usize, x: &mut Vec<i64>, out: &mut Vec<WeightTuple>) {
    if x.len() == len {
        if !coprime_after_dropping_two(x) {
            return;
        }
        if ctx.gcd_prefilter && !gcd_sum_condition(x, ctx.n - ctx.s) {
            return;
        }
        let total: i64 = x.iter().sum();
        let lo = min_relation_degree(x);
        if ctx.s as i64 * lo >= total {
            return;
        }
        let m = weight_lcm(x);
        let degrees: Vec<i64> = (1..).map(|k| k * m).skip_while(|&u| u < lo).take_while(|&u| u < total).collect();
        for us in degrees.iter().copied().combinations_with_replacement(ctx.s) {
            if us.iter().sum::<i64>() < total {
                out.push(WeightTuple {
                    weights: x.clone(),
                    relations: us,
                });
            }
        }
        return;
    }
    let start = x.last().copied().unwrap_or(1);
    for a in start..=ctx.weight_cap {
        x.push(a);
        weight_tuples_rec(ctx, len, x, out);
        x.pop();
    }
}

/// Common bound for the torsion orders: each `t_k` divides it.
pub fn torsion_bound(ctx: &BoundContext, tuple: &WeightTuple) -> i64 {
    let mut g = tuple.relations.iter().fold(0, |acc, u| acc.gcd(u));
    if ctx.relaxed_torsion {
        return g;
    }
    let r = tuple.weights.len();
    for j in 0..tuple.relations.len() {
        for skip in 0..r {
            let l = (0..r)
                .filter(|&i| i != skip)
                .fold(1, |acc: i64, i| acc.lcm(&tuple.multiplicity(j, i)));
            g = g.gcd(&l);
        }
    }
    g
}

/// Invariant-factor chains `t_1 | ... | t_q` with `t_k >= 2` dividing the
/// torsion bound, including the empty chain.
pub fn torsion_chains(ctx: &BoundContext, tuple: &WeightTuple) -> Vec<Vec<i64>> {
    let g = torsion_bound(ctx, tuple);
    let divs: Vec<i64> = (2..=g).filter(|d| g % d == 0).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<i64>::new()];
    for _ in 0..ctx.max_torsion_rank() {
        let mut next = Vec::new();
        for c in &frontier {
            for &d in &divs {
                if c.last().is_none_or(|&p| d % p == 0) {
                    let mut c2 = c.clone();
                    c2.push(d);
                    next.push(c2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Torsion part of the specifying data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionData {
    pub orders: Vec<i64>,
    /// `eta_i`, one residue vector per weight.
    pub eta: Vec<Vec<i64>>,
    /// Torsion parts of the relation degrees.
    pub zeta: Vec<Vec<i64>>,
}

fn torsion_elements(t: &[i64]) -> Vec<Vec<i64>> {
    t.iter().map(|&tk| 0..tk).multi_cartesian_product().collect()
}

fn reduce(v: &[i64], t: &[i64]) -> Vec<i64> {
    v.iter().zip(t).map(|(a, tk)| a.rem_euclid(*tk)).collect()
}

fn scale(k: i64, v: &[i64], t: &[i64]) -> Vec<i64> {
    reduce(&v.iter().map(|a| k * a).collect::<Vec<_>>(), t)
}

/// Torsion parts making every relation degree `u_j` equal to `l_ji w_i`
/// for all `i`. `eta_0` runs over representatives modulo `x_0 T`, and
/// equal weights get their residues as multisets.
///
/// For `x_0 = 1` (so `eta_0 = 0`) assignments are cut as soon as some
/// `n - 2` of the residues `eta_1, ..., eta_n` fail to generate `T`; together
/// with the column `(1, 0)` they would give `n - 1` degrees not generating
/// the class group.
pub fn enumerate_torsion(tuple: &WeightTuple, orders: &[i64]) -> Vec<TorsionData> {
    let mut out = Vec::new();
    for_each_torsion(tuple, orders, |d| out.push(d));
    out
}

struct TorsionSearch<'a> {
    t: &'a [i64],
    /// Allowed residues per column; columns of equal weight share a list.
    allowed: Vec<&'a [Vec<i64>]>,
    same_block_as_previous: Vec<bool>,
    prune: bool,
    n: usize,
    /// Primes dividing `|T|`.
    primes: Vec<i64>,
}

impl TorsionSearch<'_> {
    fn run(&self, eta: &mut Vec<Vec<i64>>, idx: &mut Vec<usize>, emit: &mut dyn FnMut(&[Vec<i64>])) {
        let k = eta.len();
        if k == self.n + 1 {
            emit(eta);
            return;
        }
        let list = self.allowed[k];
        let lo = if self.same_block_as_previous[k] { idx[k - 1] } else { 0 };
        for (pos, e) in list.iter().enumerate().skip(lo) {
            eta.push(e.clone());
            idx.push(pos);
            if !self.prune || self.prefix_generates(eta) {
                self.run(eta, idx, emit);
            }
            eta.pop();
            idx.pop();
        }
    }

    /// Every `n - 2` of `eta_1, ..., eta_k` containing `eta_k` generate `T`.
    /// Smaller sets `S` containing `eta_k` must leave a quotient `T / <S>`
    /// that the remaining `n - 2 - |S|` residues can still generate, which
    /// is read off the ranks of `S` in `T / pT` for each prime `p`.
    fn prefix_generates(&self, eta: &[Vec<i64>]) -> bool {
        let k = eta.len() - 1;
        let size = self.n - 2;
        (0..size.min(k)).all(|m| {
            (1..k).combinations(m).all(|mut a| {
                a.push(k);
                let sub: Vec<&Vec<i64>> = a.iter().map(|&i| &eta[i]).collect();
                if a.len() == size {
                    generates(&sub, 0, self.t)
                } else {
                    self.primes.iter().all(|&p| {
                        let r = self.t.iter().filter(|&&tk| tk % p == 0).count();
                        r <= rank_mod_p(&sub, self.t, p) + size - a.len()
                    })
                }
            })
        })
    }
}

fn prime_factors(mut m: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Rank of the images of `vectors` in `T / pT`.
fn rank_mod_p(vectors: &[&Vec<i64>], t: &[i64], p: i64) -> usize {
    let coords: Vec<usize> = (0..t.len()).filter(|&k| t[k] % p == 0).collect();
    let mut rows: Vec<Vec<i64>> = vectors.iter().map(|v| coords.iter().map(|&k| v[k].rem_euclid(p)).collect()).collect();
    let mut rank = 0;
    for c in 0..coords.len() {
        let Some(i) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, i);
        let inv = (1..p).find(|y| rows[rank][c] * y % p == 1).expect("p is prime");
        for j in 0..rows.len() {
            if j != rank && rows[j][c] != 0 {
                let f = rows[j][c] * inv % p;
                for l in c..coords.len() {
                    rows[j][l] = (rows[j][l] - f * rows[rank][l]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn for_each_torsion(tuple: &WeightTuple, orders: &[i64], mut f: impl FnMut(TorsionData)) {
    let t = orders;
    let elems = torsion_elements(t);
    let x = &tuple.weights;
    let n = x.len() - 1;
    let s = tuple.relations.len();
    let x0 = x[0];
    // the shear (x, eta) -> (x, eta + x c) moves eta_0 within eta_0 + x_0 T,
    // whose least element has entries below gcd(x_0, t_k)
    let reps: Vec<i64> = t.iter().map(|tk| x0.gcd(tk)).collect();
    for eta0 in &torsion_elements(&reps) {
        let zeta: Vec<Vec<i64>> = (0..s).map(|j| scale(tuple.multiplicity(j, 0), eta0, t)).collect();
        let allowed_for = |i: usize| -> Vec<Vec<i64>> {
            elems
                .iter()
                .filter(|e| (0..s).all(|j| scale(tuple.multiplicity(j, i), e, t) == zeta[j]))
                .cloned()
                .collect()
        };
        let lists: Vec<Vec<Vec<i64>>> = (0..=n).map(allowed_for).collect();
        if lists.iter().any(Vec::is_empty) {
            continue;
        }
        let search = TorsionSearch {
            t,
            allowed: lists.iter().map(Vec::as_slice).collect(),
            same_block_as_previous: (0..=n).map(|i| i >= 2 && x[i] == x[i - 1]).collect(),
            prune: x0 == 1 && !t.is_empty(),
            n,
            primes: t.last().map_or(Vec::new(), |&tq| prime_factors(tq)),
        };
        let mut eta = vec![eta0.clone()];
        let mut idx = vec![0];
        search.run(&mut eta, &mut idx, &mut |e| {
            f(TorsionData {
                orders: t.to_vec(),
                eta: e.to_vec(),
                zeta: zeta.clone(),
            })
        });
    }
}

/// Columns `(x_i, eta_i)` and relation degrees `(u_j, zeta_j)` as plain
/// integer vectors.
type Columns = (Vec<Vec<i64>>, Vec<Vec<i64>>);

fn columns(tuple: &WeightTuple, tors: &TorsionData) -> Columns {
    let w = tuple
        .weights
        .iter()
        .zip(&tors.eta)
        .map(|(x, e)| std::iter::once(*x).chain(e.iter().copied()).collect())
        .collect();
    let mu = tuple
        .relations
        .iter()
        .zip(&tors.zeta)
        .map(|(u, z)| std::iter::once(*u).chain(z.iter().copied()).collect())
        .collect();
    (w, mu)
}

/// Automorphisms of `Z/t_1 x ... x Z/t_q` as images of the generators.
fn torsion_automorphisms(t: &[i64]) -> Vec<Vec<Vec<i64>>> {
    let elems = torsion_elements(t);
    let q = t.len();
    let images: Vec<Vec<Vec<i64>>> = (0..q)
        .map(|k| {
            elems
                .iter()
                .filter(|e| scale(t[k], e, t).iter().all(|&a| a == 0))
                .cloned()
                .collect()
        })
        .collect();
    images
        .iter()
        .map(|v| v.iter())
        .multi_cartesian_product()
        .map(|imgs| imgs.into_iter().cloned().collect::<Vec<_>>())
        // a surjective endomorphism of a finite group is bijective
        .filter(|imgs| generates(imgs, 0, t))
        .collect()
}

/// Whether the vectors generate `Z^free x Z/t_1 x ... x Z/t_q`, decided by
/// a Hermite reduction of the vectors together with the relations `t_k e_k`.
fn generates<V: AsRef<[i64]>>(vectors: &[V], free: usize, t: &[i64]) -> bool {
    let dim = free + t.len();
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.as_ref().iter().map(|&a| i128::from(a)).collect())
        .collect();
    for (k, &tk) in t.iter().enumerate() {
        let mut r = vec![0; dim];
        r[free + k] = i128::from(tk);
        rows.push(r);
    }
    for c in 0..dim {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).expect("nonempty");
            for &i in &nz {
                if i != p {
                    let f = rows[i][c] / rows[p][c];
                    for j in c..dim {
                        let d = f * rows[p][j];
                        rows[i][j] -= d;
                    }
                }
            }
        }
        let Some(i) = rows.iter().position(|r| r[c] != 0) else {
            return false;
        };
        if rows[i][c].abs() != 1 {
            return false;
        }
        rows.swap_remove(i);
    }
    true
}

fn apply_aut(imgs: &[Vec<i64>], e: &[i64], t: &[i64]) -> Vec<i64> {
    let mut out = vec![0; t.len()];
    for (k, ek) in e.iter().enumerate() {
        for (o, im) in out.iter_mut().zip(&imgs[k]) {
            *o += ek * im;
        }
    }
    reduce(&out, t)
}

/// Lexicographically least `(sorted columns, sorted relation degrees)` over
/// automorphisms of `Z x T` that fix the free part: an automorphism of `T`
/// followed by a shear `(x, eta) -> (x, eta + x c)`.
pub fn canonical_form(orders: &[i64], cols: &Columns, auts: &[Vec<Vec<i64>>]) -> Columns {
    let t = orders;
    let elems = torsion_elements(t);
    let unit_columns: Vec<&Vec<i64>> = cols.0.iter().filter(|v| v[0] == 1).collect();
    let mut best: Option<Columns> = None;
    for aut in auts {
        // with a weight one column the least form contains (1, 0), so only
        // the shears clearing a weight one column matter
        let shears: Vec<Vec<i64>> = if unit_columns.is_empty() {
            elems.clone()
        } else {
            unit_columns
                .iter()
                .map(|v| scale(-1, &apply_aut(aut, &v[1..], t), t))
                .collect()
        };
        for c in &shears {
            let f = |v: &Vec<i64>| -> Vec<i64> {
                let e = apply_aut(aut, &v[1..], t);
                let sheared: Vec<i64> = e.iter().zip(c).map(|(a, b)| a + v[0] * b).collect();
                std::iter::once(v[0]).chain(reduce(&sheared, t)).collect()
            };
            let mut w: Vec<Vec<i64>> = cols.0.iter().map(f).collect();
            let mut mu: Vec<Vec<i64>> = cols.1.iter().map(f).collect();
            w.sort();
            mu.sort();
            let key = (w, mu);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.expect("the identity is an automorphism")
}

fn degree_data(orders: &[i64], cols: &Columns) -> Result<(DegreeMap, Vec<GroupElement>)> {
    let group = AbelianGroup::from_chain(1, orders.iter().map(|&t| BigInt::from(t)).collect());
    let elem = |v: &Vec<i64>| {
        group.element(
            vec![BigInt::from(v[0])],
            v[1..].iter().map(|&a| BigInt::from(a)).collect(),
        )
    };
    let images = cols.0.iter().map(elem).collect::<Result<Vec<_>>>()?;
    let mu = cols.1.iter().map(elem).collect::<Result<Vec<_>>>()?;
    Ok((DegreeMap { group, images }, mu))
}

/// Whether every `n - 1` of the generator degrees generate the class
/// group, i.e. all two-dimensional cones are regular.
fn codim_two_regular(degrees: &[Vec<i64>], t: &[i64]) -> bool {
    let r = degrees.len();
    (0..r).tuple_combinations().all(|(a, b)| {
        let sub: Vec<&Vec<i64>> = (0..r).filter(|&i| i != a && i != b).map(|i| &degrees[i]).collect();
        generates(&sub, 1, t)
    })
}

/// Singularity verdict of the general complete intersection of `s`
/// relations, read off from the cells over the cones of dimension `n - s`.
pub fn terminality_filter(z: &FakeWps, s: usize) -> SingularityVerdict {
    let mut non_canonical = Vec::new();
    let mut non_terminal = Vec::new();
    for c in z.sigma_x_maximal_cones(s) {
        match classify_cone(&z.fan().cone_rays(&c)) {
            SingularityVerdict::Terminal => {}
            SingularityVerdict::CanonicalNotTerminal { witnesses } => non_terminal.extend(witnesses),
            SingularityVerdict::LogTerminalOnly { witnesses } => non_canonical.extend(witnesses),
        }
    }
    non_canonical.sort();
    non_canonical.dedup();
    non_terminal.sort();
    non_terminal.dedup();
    if !non_canonical.is_empty() {
        SingularityVerdict::LogTerminalOnly {
            witnesses: non_canonical,
        }
    } else if !non_terminal.is_empty() {
        SingularityVerdict::CanonicalNotTerminal {
            witnesses: non_terminal,
        }
    } else {
        SingularityVerdict::Terminal
    }
}

fn is_terminal(z: &FakeWps, s: usize) -> bool {
    z.sigma_x_maximal_cones(s)
        .iter()
        .all(|c| classify_cone(&z.fan().cone_rays(c)).is_terminal())
}

/// A family of terminal Fano threefolds, given by its generator degrees
/// `Q` and relation degrees `mu` in canonical form.
#[derive(Clone, Debug)]
pub struct Family {
    pub s: usize,
    pub tuple: WeightTuple,
    pub torsion: Vec<i64>,
    pub ambient: FakeWps,
    pub relations: Vec<GroupElement>,
    pub invariants: InvariantSet,
    /// Whether `X` is smooth, i.e. every cone of dimension `n - s` is regular.
    pub smooth: bool,
    canonical: Columns,
}

impl Family {
    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    /// Generator degrees as integer columns `(x_i, eta_i)`.
    pub fn degree_columns(&self) -> &[Vec<i64>] {
        &self.canonical.0
    }

    /// Relation degrees as integer columns `(u_j, zeta_j)`.
    pub fn relation_columns(&self) -> &[Vec<i64>] {
        &self.canonical.1
    }

    /// Weights compared from the largest down, torsion-free families
    /// first, then relation degrees, torsion orders and degree data.
    fn sort_key(&self) -> (usize, Vec<i64>, bool, &[i64], &[i64], &Columns) {
        (
            self.s,
            self.tuple.weights.iter().rev().copied().collect(),
            self.has_torsion(),
            &self.tuple.relations,
            &self.torsion,
            &self.canonical,
        )
    }
}

/// Counts along the pipeline for one weight tuple.
#[derive(Clone, Debug)]
pub struct TupleReport {
    pub tuple: WeightTuple,
    pub candidates: usize,
    pub codim_two_regular: usize,
    pub terminal: usize,
    pub families: Vec<Family>,
}

/// Runs the pipeline on one weight tuple; families come out in canonical
/// order.
pub fn classify_tuple(ctx: &BoundContext, tuple: &WeightTuple) -> Result<TupleReport> {
    let s = ctx.s;
    let mut report = TupleReport {
        tuple: tuple.clone(),
        candidates: 0,
        codim_two_regular: 0,
        terminal: 0,
        families: Vec::new(),
    };
    for orders in torsion_chains(ctx, tuple) {
        if !orders.is_empty() && ctx.cover_pruning && report.families.is_empty() {
            break;
        }
        let mut auts = None;
        let mut seen: BTreeMap<Columns, bool> = BTreeMap::new();
        let mut candidates = Vec::new();
        for_each_torsion(tuple, &orders, |d| candidates.push(d));
        for tors in candidates {
            report.candidates += 1;
            let cols = columns(tuple, &tors);
            if !codim_two_regular(&cols.0, &orders) {
                continue;
            }
            report.codim_two_regular += 1;
            let auts = auts.get_or_insert_with(|| torsion_automorphisms(&orders));
            let key = canonical_form(&orders, &cols, auts);
            let (q, _) = degree_data(&orders, &key)?;
            if seen.contains_key(&key) {
                continue;
            }
            let z = FakeWps::from_degree_data(&q)?;
            let terminal = is_terminal(&z, s);
            report.terminal += usize::from(terminal);
            seen.insert(key, terminal);
        }
        for (key, terminal) in seen {
            if terminal {
                report.families.push(family(ctx, tuple, &orders, key)?);
            }
        }
    }
    Ok(report)
}

fn family(ctx: &BoundContext, tuple: &WeightTuple, orders: &[i64], key: Columns) -> Result<Family> {
    let (q, mu) = degree_data(orders, &key)?;
    let z = FakeWps::from_degree_data(&q)?;
    for m in &mu {
        debug_assert!(z.is_base_point_free(m)?);
    }
    let invariants = z.invariants(&mu)?;
    let smooth = z
        .sigma_x_maximal_cones(ctx.s)
        .iter()
        .all(|c| cone_multiplicity(&z.fan().cone_rays(c)).is_one());
    Ok(Family {
        s: ctx.s,
        tuple: tuple.clone(),
        torsion: orders.to_vec(),
        ambient: z,
        relations: mu,
        invariants,
        smooth,
        canonical: key,
    })
}

/// Sorts families by number of relations, then weights from the largest
/// down, torsion-free before torsion, relation degrees and degree data.
pub fn sort_families(families: &mut [Family]) {
    families.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Full classification for the given numbers of relations.
pub fn classify(s_values: &[usize], parallel: bool) -> Result<Vec<Family>> {
    let mut out = Vec::new();
    for &s in s_values {
        let ctx = BoundContext::new(s)?;
        for report in classify_bounded(&ctx, parallel)? {
            out.extend(report.families);
        }
    }
    sort_families(&mut out);
    Ok(out)
}

/// Per-tuple reports for one bound context, in tuple order.
pub fn classify_bounded(ctx: &BoundContext, parallel: bool) -> Result<Vec<TupleReport>> {
    let tuples = enumerate_weight_tuples(ctx);
    if parallel {
        tuples.par_iter().map(|t| classify_tuple(ctx, t)).collect()
    } else {
        tuples.iter().map(|t| classify_tuple(ctx, t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use crate::anticanonical::{build_complex, classify_singularities};

    fn tuple(x: &[i64], u: &[i64]) -> WeightTuple {
        WeightTuple {
            weights: x.to_vec(),
            relations: u.to_vec(),
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(min_relation_degree(&[1, 1, 1, 1, 1]), 2);
        assert_eq!(min_relation_degree(&[1, 1, 1, 2, 3]), 6);
        assert_eq!(min_relation_degree(&[1, 1, 1, 1, 2]), 4);
        assert!(BoundContext::new(4).is_err());
    }

    #[test]
    fn weight_tuples() {
        let s3 = enumerate_weight_tuples(&BoundContext::new(3).unwrap());
        assert_eq!(s3, vec![tuple(&[1; 7], &[2, 2, 2])]);
        let s1 = enumerate_weight_tuples(&BoundContext::new(1).unwrap());
        assert!(s1.contains(&tuple(&[1; 5], &[4])));
        assert!(s1.iter().all(|t| t.weights[4] <= 41));
        for t in &s1 {
            assert!(t.relations[0] < t.weights.iter().sum::<i64>());
            assert!((0..5).all(|i| t.multiplicity(0, i) >= 2 && t.relations[0] % t.weights[i] == 0));
        }
    }

    #[test]
    fn torsion_orders() {
        let ctx = BoundContext::new(1).unwrap();
        let quartic = tuple(&[1; 5], &[4]);
        let chains = torsion_chains(&ctx, &quartic);
        assert!(chains.contains(&vec![]));
        assert!(chains.contains(&vec![2]) && chains.contains(&vec![4]));
        assert!(chains.iter().all(|c| c.len() <= 2));
        let ctx2 = BoundContext::new(2).unwrap();
        assert_eq!(torsion_chains(&ctx2, &tuple(&[1; 6], &[2, 3])), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn pruned_torsion_search_loses_nothing() {
        let sorted = |mut cols: Vec<Vec<i64>>| {
            cols.sort();
            cols
        };
        let cases: [(&[i64], &[i64], &[i64]); 6] = [
            (&[1; 5], &[4], &[2]),
            (&[1; 5], &[4], &[4]),
            (&[1; 5], &[4], &[2, 2]),
            (&[1, 1, 1, 2, 2], &[4], &[2]),
            (&[1; 6], &[2, 2], &[2, 2]),
            (&[1, 1, 1, 2, 2, 2], &[4, 4], &[2, 2]),
        ];
        for (x, u, t) in cases {
            let tu = tuple(x, u);
            let search: BTreeSet<Vec<Vec<i64>>> = enumerate_torsion(&tu, t)
                .iter()
                .map(|d| columns(&tu, d).0)
                .filter(|c| codim_two_regular(c, t))
                .map(sorted)
                .collect();
            // every assignment with eta_0 = 0 meeting the relation degrees
            let elems = torsion_elements(t);
            let zero = vec![0; t.len()];
            let mut brute = BTreeSet::new();
            for rest in (1..x.len()).map(|_| elems.iter()).multi_cartesian_product() {
                let eta: Vec<Vec<i64>> = std::iter::once(zero.clone()).chain(rest.into_iter().cloned()).collect();
                let ok = (0..u.len()).all(|j| (0..x.len()).all(|i| scale(tu.multiplicity(j, i), &eta[i], t) == zero));
                let cols: Vec<Vec<i64>> =
                    x.iter().zip(&eta).map(|(xi, e)| std::iter::once(*xi).chain(e.iter().copied()).collect()).collect();
                if ok && codim_two_regular(&cols, t) {
                    brute.insert(sorted(cols));
                }
            }
            assert_eq!(search, brute, "{x:?} {u:?} {t:?}");
        }
    }

    #[test]
    fn equal_columns_collapse() {
        let t = [3];
        let auts = torsion_automorphisms(&t);
        assert_eq!(auts.len(), 2);
        let a: Columns = (vec![vec![1, 0], vec![1, 1], vec![1, 2]], vec![vec![2, 0]]);
        let b: Columns = (vec![vec![1, 0], vec![1, 2], vec![1, 1]], vec![vec![2, 0]]);
        assert_eq!(canonical_form(&t, &a, &auts), canonical_form(&t, &b, &auts));
        // the unit -1 of Z/3
        let c: Columns = (vec![vec![1, 0], vec![1, 1], vec![1, 1]], vec![vec![2, 0]]);
        let d: Columns = (vec![vec![1, 0], vec![1, 2], vec![1, 2]], vec![vec![2, 0]]);
        assert_eq!(canonical_form(&t, &c, &auts), canonical_form(&t, &d, &auts));
        assert_ne!(canonical_form(&t, &a, &auts), canonical_form(&t, &c, &auts));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(torsion_automorphisms(&[]).len(), 1);
        assert_eq!(torsion_automorphisms(&[2, 2]).len(), 6);
        assert_eq!(torsion_automorphisms(&[5]).len(), 4);
        assert_eq!(torsion_automorphisms(&[2, 4]).len(), 8);
    }

    #[test]
    fn quartic_is_terminal() {
        let z = FakeWps::from_weights(&[1; 5], &[], &[]).unwrap();
        assert!(terminality_filter(&z, 1).is_terminal());
    }

    #[test]
    fn index_three_point_is_rejected() {
        // P(1,1,1,3) contains the cone of 1/3(1,1,1)
        let z = FakeWps::from_weights(&[1, 1, 1, 3], &[], &[]).unwrap();
        let v = terminality_filter(&z, 0);
        assert!(matches!(v, SingularityVerdict::CanonicalNotTerminal { .. }));
        let a = build_complex(z.fan(), &z.sigma_x_maximal_cones(0)).unwrap();
        assert_eq!(classify_singularities(&a), v);
    }

    #[test]
    fn filter_agrees_with_complex() {
        for (x, s) in [(vec![1, 1, 1, 2, 3], 1), (vec![1, 1, 2, 3, 5], 1), (vec![1, 1, 1, 1, 2, 2], 2)] {
            let z = FakeWps::from_weights(&x, &[], &[]).unwrap();
            let a = build_complex(z.fan(), &z.sigma_x_maximal_cones(s)).unwrap();
            assert_eq!(classify_singularities(&a), terminality_filter(&z, s));
        }
    }

    #[test]
    fn quartic_families() {
        let ctx = BoundContext::new(1).unwrap();
        let r = classify_tuple(&ctx, &tuple(&[1; 5], &[4])).unwrap();
        assert_eq!(r.families.len(), 1);
        let f = &r.families[0];
        assert!(f.smooth && !f.has_torsion());
        assert_eq!(f.invariants.h0_minus_k, BigInt::from(5));
    }

    #[test]
    fn three_relations() {
        let fams = classify(&[3], false).unwrap();
        assert_eq!(fams.len(), 4);
        assert_eq!(fams.iter().filter(|f| f.has_torsion()).count(), 3);
        assert_eq!(fams.iter().filter(|f| f.smooth).count(), 1);
    }

    #[test]
    fn fano_tuples_match_brute_force() {
        for (len, cap, k) in [(5, 24, 3), (6, 12, 5), (7, 8, 6)] {
            let mut brute = Vec::new();
            let mut x = vec![1; len];
            loop {
                if x.windows(2).all(|w| w[0] <= w[1]) && subsets_coprime(&x, k) && fano_inequality(&x) {
                    brute.push(x.clone());
                }
                let Some(p) = (0..len).find(|&i| x[i] < cap) else { break };
                x[p] += 1;
                for v in &mut x[..p] {
                    *v = 1;
                }
            }
            brute.sort();
            assert_eq!(fano_weight_tuples(len, cap, k), brute, "len {len}");
        }
    }

    #[test]
    fn septuples() {
        assert_eq!(fano_weight_tuples(7, 60, 6), vec![vec![1; 7], vec![2, 2, 3, 3, 3, 3, 3]]);
        // dropping both 2s leaves the common factor 3
        assert!(!coprime_after_dropping_two(&[2, 2, 3, 3, 3, 3, 3]));
        assert!(gcd_sum_condition(&[1; 7], 3));
    }

    #[test]
    fn gcd_condition_closes_equal_tails() {
        assert!(gcd_sum_condition(&[1, 1, 1, 2, 2], 3));
        assert!(!gcd_sum_condition(&[1, 1, 1, 3, 3], 3));
        assert!(!gcd_sum_condition(&[1, 2, 2, 7, 7], 3));
    }
}
