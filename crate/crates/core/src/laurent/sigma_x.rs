use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::LaurentSystem;
use crate::error::{Error, Result};
use crate::fan::{irrelevant_locus_dimension, is_refinement, Fan};
use crate::lattice::rational::to_rat_vec;
use crate::polytope::{normal_quasifan, Polytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaXMode {
    /// Cone membership via the tropical hypersurfaces of generic systems.
    Generic,
    /// All cones of dimension at most `n - s`; needs a simplicial fan with
    /// a small exceptional set.
    SimplicialShortcut,
}

/// The subfan of cones whose orbits meet the complete intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaXResult {
    /// All cones, as ray index sets ordered by size, then lexicographically.
    pub cones: Vec<Vec<usize>>,
    pub maximal: Vec<Vec<usize>>,
}

impl SigmaXResult {
    fn from_cones(cones: Vec<Vec<usize>>) -> Self {
        let maximal = cones
            .iter()
            .filter(|c| !cones.iter().any(|d| d.len() > c.len() && c.iter().all(|i| d.contains(i))))
            .cloned()
            .collect();
        SigmaXResult { cones, maximal }
    }

    pub fn contains(&self, cone: &[usize]) -> bool {
        let mut c = cone.to_vec();
        c.sort_unstable();
        self.cones.contains(&c)
    }
}

/// Whether `w` lies on the tropical hypersurface of a generic polynomial
/// with Newton polytope `b`: the `w`-minimal face has at least two vertices.
pub(crate) fn on_tropical_hypersurface(b: &Polytope, w: &[BigInt]) -> bool {
    b.argmin(&to_rat_vec(w)).len() >= 2
}

pub fn compute_sigma_x(system: &LaurentSystem, fan: &Fan, mode: SigmaXMode) -> Result<SigmaXResult> {
    let n = fan.dim();
    let s = system.len();
    if system.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: system.dim(),
        });
    }
    match mode {
        SigmaXMode::SimplicialShortcut => {
            if !fan.is_simplicial() {
                return Err(Error::ShortcutPreconditions("fan is not simplicial".into()));
            }
            let r = fan.num_rays();
            if let Some(d) = irrelevant_locus_dimension(fan) {
                if d + n >= r {
                    return Err(Error::ShortcutPreconditions(format!(
                        "exceptional set has dimension {d}, not below r - n = {}",
                        r - n
                    )));
                }
            }
            let cones = fan.cones().iter().filter(|c| c.len() + s <= n).cloned().collect();
            Ok(SigmaXResult::from_cones(cones))
        }
        SigmaXMode::Generic => {
            if !system.is_generic() {
                return Err(Error::ExplicitCoefficients);
            }
            if !is_refinement(fan, &normal_quasifan(&system.newton_polytope().sum)) {
                return Err(Error::NotFFan);
            }
            let bs = system.newton_polytopes();
            let cones: Vec<Vec<usize>> = fan
                .cones()
                .par_iter()
                .filter(|c| {
                    let w = interior_point(fan, c);
                    bs.iter().all(|b| on_tropical_hypersurface(b, &w))
                })
                .cloned()
                .collect();
            let result = SigmaXResult::from_cones(cones);
            for c in &result.maximal {
                let d = fan.cone_dim(c);
                if d + s != n {
                    return Err(Error::Transversality {
                        cone: c.clone(),
                        found: d,
                        expected: n.saturating_sub(s),
                    });
                }
            }
            Ok(result)
        }
    }
}

/// Sum of the ray generators of a cone, a relative-interior point.
pub fn interior_point(fan: &Fan, cone: &[usize]) -> Vec<BigInt> {
    (0..fan.dim())
        .map(|k| cone.iter().fold(BigInt::zero(), |acc, &i| acc + &fan.rays()[i][k]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::tests::{example_surface_fan, p3};
    use crate::laurent::tests::surface_f;
    use crate::laurent::LaurentPolynomial;

    fn generic(f: &LaurentPolynomial) -> LaurentPolynomial {
        LaurentPolynomial::generic(f.dim(), &f.exponents().cloned().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn surface_example() {
        let sys = LaurentSystem::new(vec![generic(&surface_f())]).unwrap();
        let r = compute_sigma_x(&sys, &example_surface_fan(), SigmaXMode::Generic).unwrap();
        // indices are 0-based: sigma_14 is [0, 3]
        let expected = vec![vec![0, 3], vec![0, 4], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]];
        assert_eq!(r.maximal, expected);
        assert!(!r.contains(&[0, 1]));
    }

    #[test]
    fn explicit_coefficients_rejected() {
        let sys = LaurentSystem::new(vec![surface_f()]).unwrap();
        assert_eq!(
            compute_sigma_x(&sys, &example_surface_fan(), SigmaXMode::Generic),
            Err(Error::ExplicitCoefficients)
        );
    }

    #[test]
    fn constant_has_empty_sigma_x() {
        let f = LaurentPolynomial::generic(3, &[crate::lattice::big_vec(&[0, 0, 0])]).unwrap();
        let sys = LaurentSystem::new(vec![f]).unwrap();
        let r = compute_sigma_x(&sys, &p3(), SigmaXMode::Generic).unwrap();
        assert!(r.cones.is_empty());
    }

    #[test]
    fn shortcut_on_projective_space() {
        let f = LaurentPolynomial::generic(3, &[crate::lattice::big_vec(&[0, 0, 0])]).unwrap();
        let sys = LaurentSystem::new(vec![f]).unwrap();
        let r = compute_sigma_x(&sys, &p3(), SigmaXMode::SimplicialShortcut).unwrap();
        assert_eq!(r.maximal.len(), 6);
        assert!(r.maximal.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn shortcut_preconditions() {
        let sys = LaurentSystem::new(vec![surface_f()]).unwrap();
        // r = 5, n = 3, exceptional set of dimension 3
        let e = compute_sigma_x(&sys, &example_surface_fan(), SigmaXMode::SimplicialShortcut);
        assert!(matches!(e, Err(Error::ShortcutPreconditions(_))));
    }
}
