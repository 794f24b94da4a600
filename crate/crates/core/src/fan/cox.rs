use itertools::Itertools;
use num_bigint::BigInt;

use super::Fan;
use crate::error::{Error, Result};
use crate::lattice::rational::{rank_int, solve, to_rat_vec, Rat};
use crate::lattice::{cokernel_presentation, AbelianGroup, DegreeMap, GroupElement};

/// Class group `K = Z^r / im(P*)` of the toric variety together with the
/// degrees `w_i = Q(e_i)` of the Cox ring variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxData {
    pub degree_map: DegreeMap,
}

impl CoxData {
    pub fn class_group(&self) -> &AbelianGroup {
        &self.degree_map.group
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degree_map.images
    }

    /// `Q(a)`.
    pub fn degree(&self, a: &[BigInt]) -> Result<GroupElement> {
        self.degree_map.apply(a)
    }
}

pub fn cox_data(fan: &Fan) -> Result<CoxData> {
    if rank_int(fan.rays()) != fan.dim() {
        return Err(Error::TorusFactor);
    }
    let pt = fan.generator_matrix().transpose();
    Ok(CoxData {
        degree_map: cokernel_presentation(&pt),
    })
}

/// A linear form `u` with `<u, v> = -1` for all given ray generators; free
/// directions are set to zero.
pub fn gorenstein_form(rays: &[Vec<BigInt>]) -> Option<Vec<Rat>> {
    let dim = rays.first().map_or(0, Vec::len);
    if rays.is_empty() {
        return Some(Vec::new());
    }
    let rows: Vec<Vec<Rat>> = rays.iter().map(|v| to_rat_vec(v)).collect();
    let rhs = vec![Rat::from_integer((-1).into()); rays.len()];
    solve(&rows, &rhs).map(|u| {
        debug_assert_eq!(u.len(), dim);
        u
    })
}

impl Fan {
    /// Gorenstein form of a cone of the fan.
    pub fn gorenstein_form(&self, cone: &[usize]) -> Result<Vec<Rat>> {
        if cone.is_empty() {
            return Ok(vec![Rat::from_integer(0.into()); self.dim()]);
        }
        gorenstein_form(&self.cone_rays(cone)).ok_or_else(|| Error::NotQGorenstein(cone.to_vec()))
    }
}

/// Dimension of the exceptional set `Zbar \ Zhat` of the Cox construction:
/// `r - min |I|` over ray sets `I` not contained in any cone. `None` when
/// every ray set lies in a cone (the set is empty).
pub fn irrelevant_locus_dimension(fan: &Fan) -> Option<usize> {
    let r = fan.num_rays();
    (1..=r).find_map(|k| {
        (0..r)
            .combinations(k)
            .any(|s| !fan.max_cones().iter().any(|c| s.iter().all(|i| c.contains(i))))
            .then_some(r - k)
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{example_surface_fan, p1xp1, p3};
    use super::*;
    use crate::lattice::big_vec;

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a.into(), b.into())
    }

    #[test]
    fn p3_cox_data() {
        let c = cox_data(&p3()).unwrap();
        assert_eq!(c.class_group(), &AbelianGroup::free(1));
        for w in c.degrees() {
            assert_eq!(w.free, big_vec(&[1]));
        }
    }

    #[test]
    fn weighted_plane() {
        let f = Fan::all_subsets(2, vec![big_vec(&[1, 0]), big_vec(&[0, 1]), big_vec(&[-1, -2])], 2).unwrap();
        let c = cox_data(&f).unwrap();
        let free: Vec<BigInt> = c.degrees().iter().map(|w| w.free[0].clone()).collect();
        assert_eq!(free, big_vec(&[1, 2, 1]));
    }

    #[test]
    fn product_of_lines() {
        let c = cox_data(&p1xp1()).unwrap();
        assert_eq!(c.class_group(), &AbelianGroup::free(2));
        assert!(c.degree_map.is_surjective());
    }

    #[test]
    fn surface_class_group() {
        let c = cox_data(&example_surface_fan()).unwrap();
        assert_eq!(c.class_group().free_rank(), 2);
    }

    #[test]
    fn torus_factor() {
        let f = Fan::from_i64(2, &[&[1, 0], &[-1, 0]], &[&[0], &[1]]).unwrap();
        assert_eq!(cox_data(&f), Err(Error::TorusFactor));
    }

    #[test]
    fn gorenstein_forms() {
        let smooth = gorenstein_form(&[big_vec(&[1, 0, 0]), big_vec(&[0, 1, 0]), big_vec(&[0, 0, 1])]);
        assert_eq!(smooth.unwrap(), vec![r(-1, 1); 3]);
        let half = gorenstein_form(&[big_vec(&[1, 0, 0]), big_vec(&[0, 1, 0]), big_vec(&[1, 1, 2])]);
        assert_eq!(half.unwrap(), vec![r(-1, 1), r(-1, 1), r(1, 2)]);
        // cone over a quadrilateral whose rays are not on a common affine hyperplane
        let quad = [big_vec(&[1, 0, 1]), big_vec(&[0, 1, 1]), big_vec(&[-1, 0, 1]), big_vec(&[0, -1, 2])];
        assert!(gorenstein_form(&quad).is_none());
    }

    #[test]
    fn irrelevant_locus() {
        assert_eq!(irrelevant_locus_dimension(&p3()), Some(0));
        assert_eq!(irrelevant_locus_dimension(&p1xp1()), Some(2));
    }
}
