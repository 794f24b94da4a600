use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::normal_form::{hermite_normal_form, smith_normal_form};
use super::IntMat;
use crate::error::{Error, Result};

/// Finitely generated abelian group `Z^free_rank x Z/t_1 x ... x Z/t_q`
/// with `t_1 | t_2 | ... | t_q` and every `t_k >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

/// Element of an [`AbelianGroup`]; torsion residues are kept reduced into
/// `[0, t_k)`, so equality is componentwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

/// Homomorphism `Z^r -> K` given by the images of the canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMap {
    pub group: AbelianGroup,
    pub images: Vec<GroupElement>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds a group from arbitrary cyclic orders; they are brought into
    /// invariant-factor form. Orders equal to one are dropped. Use
    /// [`DegreeMap::from_orders`] when elements have to be carried along.
    pub fn new(free_rank: usize, orders: &[BigInt]) -> Result<Self> {
        Ok(DegreeMap::from_orders(free_rank, orders, &[])?.group)
    }

    /// Wraps an invariant-factor chain without normalization.
    pub(crate) fn from_chain(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        debug_assert!(torsion.iter().all(|t| t > &BigInt::one()));
        debug_assert!(torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        AbelianGroup { free_rank, torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    /// Builds an element, reducing the torsion residues.
    pub fn element(&self, free: Vec<BigInt>, torsion: Vec<BigInt>) -> Result<GroupElement> {
        if free.len() != self.free_rank {
            return Err(Error::DimensionMismatch {
                expected: self.free_rank,
                found: free.len(),
            });
        }
        if torsion.len() != self.torsion.len() {
            return Err(Error::DimensionMismatch {
                expected: self.torsion.len(),
                found: torsion.len(),
            });
        }
        let torsion = torsion
            .into_iter()
            .zip(&self.torsion)
            .map(|(x, t)| x.mod_floor(t))
            .collect();
        Ok(GroupElement { free, torsion })
    }

    /// Convenience constructor from machine integers.
    pub fn element_i64(&self, free: &[i64], torsion: &[i64]) -> Result<GroupElement> {
        self.element(
            free.iter().map(|&x| x.into()).collect(),
            torsion.iter().map(|&x| x.into()).collect(),
        )
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.free.len() == self.free_rank
            && g.torsion.len() == self.torsion.len()
            && g.torsion
                .iter()
                .zip(&self.torsion)
                .all(|(x, t)| !x.is_negative() && x < t)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        self.element(
            a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + y).collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.element(
            a.free.iter().map(|x| -x).collect(),
            a.torsion.iter().map(|x| -x).collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn scale(&self, k: &BigInt, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.element(
            a.free.iter().map(|x| x * k).collect(),
            a.torsion.iter().map(|x| x * k).collect(),
        )
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a GroupElement>) -> Result<GroupElement> {
        items
            .into_iter()
            .try_fold(self.zero(), |acc, g| self.add(&acc, g))
    }

    /// Whether the given elements generate the whole group.
    pub fn generated_by(&self, elements: &[GroupElement]) -> bool {
        let f = self.free_rank;
        let dim = f + self.torsion.len();
        if dim == 0 {
            return true;
        }
        if elements.len() < f + usize::from(!self.torsion.is_empty()) {
            return false;
        }
        let mut cols: Vec<Vec<BigInt>> = elements.iter().map(|g| g.coordinates()).collect();
        for (k, t) in self.torsion.iter().enumerate() {
            let mut c = vec![BigInt::zero(); dim];
            c[f + k] = t.clone();
            cols.push(c);
        }
        let m = IntMat::from_cols(dim, &cols);
        let snf = smith_normal_form(&m);
        snf.rank() == dim && snf.invariant_factors().iter().all(One::is_one)
    }

    /// Largest `q >= 1` such that `g = q * h` for some `h` in the group.
    pub fn divisibility_order(&self, g: &GroupElement) -> Result<BigInt> {
        self.check(g)?;
        if g.is_zero() {
            return Err(Error::ZeroElement);
        }
        let content = g.free.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if content.is_zero() {
            return Err(Error::TorsionElement);
        }
        let mut divisors = divisors(&content);
        divisors.reverse();
        for q in divisors {
            // q * h_k = g_k in Z/t_k is solvable iff gcd(q, t_k) | g_k
            let ok = g
                .torsion
                .iter()
                .zip(&self.torsion)
                .all(|(x, t)| x.is_multiple_of(&q.gcd(t)));
            if ok {
                return Ok(q);
            }
        }
        unreachable!("q = 1 always divides")
    }
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }

    /// Free coordinates followed by torsion residues.
    pub fn coordinates(&self) -> Vec<BigInt> {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .free
            .iter()
            .map(ToString::to_string)
            .chain(self.torsion.iter().map(|t| format!("{t}~")))
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join(", "))
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl DegreeMap {
    pub fn source_rank(&self) -> usize {
        self.images.len()
    }

    /// Presents the group `Z^free_rank x Z/o_1 x ... x Z/o_q` for arbitrary
    /// orders `o_k >= 1` in invariant-factor form and maps the given
    /// elements (coordinates: free part, then one residue per order) into it.
    pub fn from_orders(
        free_rank: usize,
        orders: &[BigInt],
        elements: &[Vec<BigInt>],
    ) -> Result<DegreeMap> {
        let dim = free_rank + orders.len();
        if orders.iter().any(|o| !o.is_positive()) {
            return Err(Error::InvalidArgument(
                "torsion orders must be positive".into(),
            ));
        }
        let mut relations = IntMat::zeros(dim, orders.len());
        for (k, o) in orders.iter().enumerate() {
            relations[(free_rank + k, k)] = o.clone();
        }
        let projection = cokernel_presentation(&relations);
        let images = elements
            .iter()
            .map(|e| {
                if e.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: e.len(),
                    });
                }
                projection.apply(e)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DegreeMap {
            group: projection.group,
            images,
        })
    }

    /// Image of an integer vector.
    pub fn apply(&self, a: &[BigInt]) -> Result<GroupElement> {
        if a.len() != self.images.len() {
            return Err(Error::DimensionMismatch {
                expected: self.images.len(),
                found: a.len(),
            });
        }
        let g = &self.group;
        let mut free = vec![BigInt::zero(); g.free_rank];
        let mut tors = vec![BigInt::zero(); g.torsion.len()];
        for (c, w) in a.iter().zip(&self.images) {
            for (x, y) in free.iter_mut().zip(&w.free) {
                *x += c * y;
            }
            for (x, y) in tors.iter_mut().zip(&w.torsion) {
                *x += c * y;
            }
        }
        g.element(free, tors)
    }

    pub fn is_surjective(&self) -> bool {
        self.group.generated_by(&self.images)
    }

    /// Some preimage of `target`, if one exists.
    pub fn preimage(&self, target: &GroupElement) -> Option<Vec<BigInt>> {
        let g = &self.group;
        let dim = g.free_rank + g.torsion.len();
        let r = self.images.len();
        let mut cols: Vec<Vec<BigInt>> = self.images.iter().map(|w| w.coordinates()).collect();
        for (k, t) in g.torsion.iter().enumerate() {
            let mut c = vec![BigInt::zero(); dim];
            c[g.free_rank + k] = t.clone();
            cols.push(c);
        }
        let m = IntMat::from_cols(dim, &cols);
        let x = super::solve_integer(&m, &target.coordinates())?;
        Some(x[..r].to_vec())
    }
}

/// `Z^rows / im(M)` in invariant-factor form together with the projection.
///
/// Free coordinates are normalized by a Hermite reduction of the images, so
/// for a pointed rank-one grading all free degrees come out positive.
pub fn cokernel_presentation(m: &IntMat) -> DegreeMap {
    let rows = m.rows();
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let factors = snf.invariant_factors();
    let torsion_idx: Vec<usize> = (0..rank).filter(|&i| !factors[i].is_one()).collect();
    let torsion: Vec<BigInt> = torsion_idx.iter().map(|&i| factors[i].clone()).collect();
    let free_rank = rows - rank;

    // images of e_j are the columns of U, read in the new coordinates
    let mut free_part = IntMat::zeros(free_rank, rows);
    for k in 0..free_rank {
        for j in 0..rows {
            free_part[(k, j)] = snf.u[(rank + k, j)].clone();
        }
    }
    let (free_part, _) = hermite_normal_form(&free_part);

    let group = AbelianGroup::from_chain(free_rank, torsion);
    let images = (0..rows)
        .map(|j| {
            let free = (0..free_rank).map(|k| free_part[(k, j)].clone()).collect();
            let tors = torsion_idx.iter().map(|&i| snf.u[(i, j)].clone()).collect();
            group.element(free, tors).expect("consistent dimensions")
        })
        .collect();
    DegreeMap { group, images }
}

/// Positive divisors in increasing order.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            let e = &n / &d;
            if e != d {
                large.push(e);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
