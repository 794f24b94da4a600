//! Fake weighted projective spaces: complete simplicial toric varieties with
//! `n + 1` rays and class group of rank one.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::anticanonical::{anticanonical_class, cone_gorenstein_index};
use crate::error::{Error, Result};
use crate::fan::{CoxData, Fan};
use crate::lattice::rational::Rat;
use crate::lattice::{
    gcd_all, integer_kernel, lattice_basis, lcm_all, AbelianGroup, DegreeMap, GroupElement, IntMat,
};
use crate::polytope::divisorial_polytope;

#[derive(Clone, Debug)]
pub struct FakeWps {
    degree_map: DegreeMap,
    fan: Fan,
}

/// Numerical data of a Fano complete intersection in a fake weighted
/// projective space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet {
    pub minus_k: GroupElement,
    pub minus_k_cubed: Rat,
    pub h0_minus_k: BigInt,
    pub fano_index: BigInt,
    pub gorenstein_index: BigInt,
}

/// Whether the gcd of every `len - 1` entries is one.
pub fn well_formed(weights: &[BigInt]) -> bool {
    let n = weights.len();
    if n < 2 {
        return true;
    }
    (0..n).all(|skip| {
        let g = gcd_all(weights.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| x));
        g.is_one()
    })
}

impl FakeWps {
    /// The Gale dual of a surjective degree map onto `Z x torsion` with
    /// positive free degrees. Columns are reordered by degree.
    pub fn from_degree_data(q: &DegreeMap) -> Result<FakeWps> {
        let g = &q.group;
        if g.free_rank() != 1 {
            return Err(Error::NotFakeWps(format!("class group {g} does not have rank one")));
        }
        if let Some(w) = q.images.iter().find(|w| !w.free[0].is_positive()) {
            return Err(Error::NonPointedGrading(format!("degree {w} is not positive")));
        }
        if !q.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let mut images = q.images.clone();
        images.sort();
        let q = DegreeMap {
            group: g.clone(),
            images,
        };
        let r = q.images.len();
        if r < 2 {
            return Err(Error::NotFakeWps("need at least two generator degrees".into()));
        }
        let n = r - 1;
        // ker Q is the projection of ker [Q | 0 ; Q_tors | diag(t)]
        let tq = g.torsion().len();
        let mut rows = IntMat::zeros(1 + tq, r + tq);
        for (i, w) in q.images.iter().enumerate() {
            rows[(0, i)] = w.free[0].clone();
            for k in 0..tq {
                rows[(1 + k, i)] = w.torsion[k].clone();
            }
        }
        for (k, t) in g.torsion().iter().enumerate() {
            rows[(1 + k, r + k)] = t.clone();
        }
        let kernel: Vec<Vec<BigInt>> = integer_kernel(&rows).into_iter().map(|v| v[..r].to_vec()).collect();
        let basis = lattice_basis(&kernel, r);
        debug_assert_eq!(basis.len(), n);
        let p = IntMat::from_rows(r, basis);
        let rays = p.col_vecs();
        if rays.iter().any(|v| !crate::lattice::is_primitive(v)) {
            return Err(Error::NotFakeWps(format!(
                "some {n} of the degrees do not generate the class group"
            )));
        }
        let fan = Fan::all_subsets(n, rays, n)?;
        Ok(FakeWps { degree_map: q, fan })
    }

    /// Degrees `(x_i, eta_i)` in `Z x Z/t_1 x ... x Z/t_q` with arbitrary
    /// orders `t_k`.
    pub fn from_weights(weights: &[i64], torsion: &[i64], eta: &[Vec<i64>]) -> Result<FakeWps> {
        let orders: Vec<BigInt> = torsion.iter().map(|&t| BigInt::from(t)).collect();
        let elems: Vec<Vec<BigInt>> = if torsion.is_empty() {
            weights.iter().map(|&x| vec![BigInt::from(x)]).collect()
        } else {
            if eta.len() != weights.len() {
                return Err(Error::DimensionMismatch {
                    expected: weights.len(),
                    found: eta.len(),
                });
            }
            weights
                .iter()
                .zip(eta)
                .map(|(&x, e)| std::iter::once(x).chain(e.iter().copied()).map(BigInt::from).collect())
                .collect()
        };
        Self::from_degree_data(&DegreeMap::from_orders(1, &orders, &elems)?)
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn degree_map(&self) -> &DegreeMap {
        &self.degree_map
    }

    pub fn class_group(&self) -> &AbelianGroup {
        &self.degree_map.group
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degree_map.images
    }

    pub fn weights(&self) -> Vec<BigInt> {
        self.degrees().iter().map(|w| w.free[0].clone()).collect()
    }

    pub fn cox(&self) -> CoxData {
        CoxData {
            degree_map: self.degree_map.clone(),
        }
    }

    /// `l_i >= 1` with `mu = l_i w_i` for every `i`, if they exist.
    pub fn multiplicities(&self, mu: &GroupElement) -> Result<Option<Vec<BigInt>>> {
        let k = self.class_group();
        if !k.contains(mu) {
            return Err(Error::GroupMismatch);
        }
        let mut out = Vec::new();
        for w in self.degrees() {
            let (l, rem) = mu.free[0].div_rem(&w.free[0]);
            if !rem.is_zero() || !l.is_positive() || k.scale(&l, w)? != *mu {
                return Ok(None);
            }
            out.push(l);
        }
        Ok(Some(out))
    }

    pub fn is_base_point_free(&self, mu: &GroupElement) -> Result<bool> {
        Ok(self.multiplicities(mu)?.is_some())
    }

    /// Dimension of the homogeneous component of degree `c` of the Cox ring.
    pub fn component_dimension(&self, c: &GroupElement) -> Result<BigInt> {
        if !self.class_group().contains(c) {
            return Err(Error::GroupMismatch);
        }
        if c.free[0].is_negative() {
            return Ok(BigInt::zero());
        }
        let a = self.degree_map.preimage(c).ok_or(Error::NotSurjective)?;
        Ok(match divisorial_polytope(self.fan.rays(), &a)? {
            Some(p) => BigInt::from(p.count_lattice_points(false)),
            None => BigInt::zero(),
        })
    }

    /// `h^0` of the class `w` on the complete intersection cut out by
    /// relations of degrees `mu`, as the Koszul alternating sum of Cox ring
    /// component dimensions.
    pub fn h0(&self, mu: &[GroupElement], w: &GroupElement) -> Result<BigInt> {
        let k = self.class_group();
        let mut total = BigInt::zero();
        for size in 0..=mu.len() {
            for subset in (0..mu.len()).combinations(size) {
                let shift = k.sum(subset.iter().map(|&j| &mu[j]))?;
                let term = self.component_dimension(&k.sub(w, &shift)?)?;
                if size % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
        }
        if total.is_negative() {
            return Err(Error::NegativeKoszul(format!("alternating sum {total} for class {w}")));
        }
        Ok(total)
    }

    /// `-K_X` for relations of degrees `mu`.
    pub fn minus_k(&self, mu: &[GroupElement]) -> Result<GroupElement> {
        anticanonical_class(&self.cox(), mu)
    }

    /// `(-K_X)^3 = k^3 prod u_j / (|torsion| prod x_i)` for a threefold
    /// `X` with base point free relation degrees.
    pub fn minus_k_cubed(&self, mu: &[GroupElement]) -> Result<Rat> {
        let n = self.dim();
        if n != mu.len() + 3 {
            return Err(Error::InvalidArgument(format!(
                "{} relations in dimension {n} do not cut out a threefold",
                mu.len()
            )));
        }
        for m in mu {
            if !self.is_base_point_free(m)? {
                return Err(Error::InvalidArgument(format!("relation degree {m} is not base point free")));
            }
        }
        let k = self.minus_k(mu)?.free[0].clone();
        if !k.is_positive() {
            return Err(Error::NotFano(format!("anticanonical degree {k}")));
        }
        let num: BigInt = k.pow(3) * mu.iter().map(|m| &m.free[0]).product::<BigInt>();
        let den: BigInt = self.class_group().torsion_order() * self.weights().iter().product::<BigInt>();
        Ok(Rat::new(num, den))
    }

    /// Cones of dimension `n - s`, the maximal cones of the ambient subfan
    /// of a general complete intersection of `s` base point free relations.
    pub fn sigma_x_maximal_cones(&self, s: usize) -> Vec<Vec<usize>> {
        let d = self.dim().saturating_sub(s);
        self.fan.cones().iter().filter(|c| c.len() == d).cloned().collect()
    }

    /// Least `iota` such that `iota * K_X` is Cartier near every cone of
    /// dimension at most `n - s`.
    pub fn gorenstein_index(&self, s: usize) -> BigInt {
        let idx: Vec<BigInt> = self
            .sigma_x_maximal_cones(s)
            .iter()
            .map(|c| cone_gorenstein_index(&self.fan.cone_rays(c)).expect("simplicial cones are Q-Gorenstein"))
            .collect();
        lcm_all(&idx)
    }

    pub fn invariants(&self, mu: &[GroupElement]) -> Result<InvariantSet> {
        let minus_k = self.minus_k(mu)?;
        let minus_k_cubed = self.minus_k_cubed(mu)?;
        let h0_minus_k = self.h0(mu, &minus_k)?;
        let fano_index = self.class_group().divisibility_order(&minus_k)?;
        Ok(InvariantSet {
            gorenstein_index: self.gorenstein_index(mu.len()),
            minus_k,
            minus_k_cubed,
            h0_minus_k,
            fano_index,
        })
    }
}
