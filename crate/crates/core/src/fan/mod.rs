//! Rational polyhedral fans and the toric data attached to them.

mod cox;

pub use cox::{cox_data, gorenstein_form, irrelevant_locus_dimension, CoxData};

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::rational::{dot_int, rank_int};
use crate::lattice::{is_primitive, IntMat};
use crate::polytope::{extreme_rays, facets_of_cone, Quasifan};

/// A fan given by its primitive ray generators and maximal cones. Faces are
/// derived on demand.
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
    cones: OnceLock<Vec<Vec<usize>>>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            dim: self.dim,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
            cones: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for Fan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fan")
            .field("dim", &self.dim)
            .field("rays", &self.rays)
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

/// Result of [`validate_fan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanReport {
    pub complete: bool,
    pub simplicial: bool,
}

/// Cone in H-representation `{x : ineqs x >= 0, eqs x = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCone {
    pub ineqs: Vec<Vec<BigInt>>,
    pub eqs: Vec<Vec<BigInt>>,
    pub dim: usize,
}

impl HCone {
    pub fn from_generators(ambient: usize, rays: &[Vec<BigInt>], lineality: &[Vec<BigInt>]) -> HCone {
        let (ineqs, eqs) = facets_of_cone(ambient, rays, lineality);
        HCone {
            dim: ambient - eqs.len(),
            ineqs,
            eqs,
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.eqs.iter().all(|e| dot_int(e, x).is_zero())
            && self.ineqs.iter().all(|a| !dot_int(a, x).is_negative())
    }

    /// Whether `x` lies on some facet of the cone.
    fn on_facet(&self, xs: &[&Vec<BigInt>]) -> bool {
        self.ineqs.iter().any(|a| xs.iter().all(|x| dot_int(a, x).is_zero()))
    }
}

/// Anything that can be presented as a finite set of maximal cones.
pub trait MaximalCones {
    fn ambient_dim(&self) -> usize;
    fn maximal_hcones(&self) -> Vec<HCone>;
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        for v in &rays {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().all(Zero::is_zero) {
                return Err(Error::ZeroVector);
            }
            if !is_primitive(v) {
                return Err(Error::InvalidFan(format!("ray {v:?} is not primitive")));
            }
        }
        if rays.iter().duplicates().next().is_some() {
            return Err(Error::InvalidFan("repeated ray".into()));
        }
        let mut cones: Vec<Vec<usize>> = max_cones
            .into_iter()
            .map(|c| c.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        if let Some(&i) = cones.iter().flatten().find(|&&i| i >= rays.len()) {
            return Err(Error::InvalidFan(format!("cone refers to missing ray {i}")));
        }
        let used: HashSet<usize> = cones.iter().flatten().copied().collect();
        if let Some(i) = (0..rays.len()).find(|i| !used.contains(i)) {
            return Err(Error::InvalidFan(format!("ray {i} lies in no cone")));
        }
        cones.sort();
        cones.dedup();
        let maximal: Vec<Vec<usize>> = cones
            .iter()
            .filter(|c| !cones.iter().any(|d| d.len() > c.len() && c.iter().all(|i| d.contains(i))))
            .cloned()
            .collect();
        Ok(Fan {
            dim,
            rays,
            max_cones: maximal,
            cones: OnceLock::new(),
        })
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Fan> {
        Fan::new(
            dim,
            rays.iter().map(|r| crate::lattice::big_vec(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    /// The fan whose maximal cones are all `k`-subsets of the rays.
    pub fn all_subsets(dim: usize, rays: Vec<Vec<BigInt>>, k: usize) -> Result<Fan> {
        let cones = (0..rays.len()).combinations(k).collect();
        Fan::new(dim, rays, cones)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// `P`, with the rays as columns.
    pub fn generator_matrix(&self) -> IntMat {
        IntMat::from_cols(self.dim, &self.rays)
    }

    pub fn cone_rays(&self, cone: &[usize]) -> Vec<Vec<BigInt>> {
        cone.iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn cone_dim(&self, cone: &[usize]) -> usize {
        rank_int(&self.cone_rays(cone))
    }

    pub fn hcone(&self, cone: &[usize]) -> HCone {
        HCone::from_generators(self.dim, &self.cone_rays(cone), &[])
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone_dim(c) == c.len())
    }

    /// Every cone of the fan, including the zero cone, ordered by size and
    /// then lexicographically.
    pub fn cones(&self) -> &[Vec<usize>] {
        self.cones.get_or_init(|| {
            let mut all: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
            for c in &self.max_cones {
                for f in self.faces_of(c) {
                    all.insert((f.len(), f));
                }
            }
            all.into_iter().map(|(_, f)| f).collect()
        })
    }

    /// Faces of a cone of the fan, given by ray indices.
    pub fn faces_of(&self, cone: &[usize]) -> Vec<Vec<usize>> {
        if self.cone_dim(cone) == cone.len() {
            return (0..=cone.len())
                .flat_map(|k| cone.iter().copied().combinations(k))
                .collect();
        }
        let h = self.hcone(cone);
        let incidence: Vec<Vec<usize>> = h
            .ineqs
            .iter()
            .map(|a| cone.iter().copied().filter(|&i| dot_int(a, &self.rays[i]).is_zero()).collect())
            .collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(cone.to_vec());
        let mut stack = vec![cone.to_vec()];
        while let Some(f) = stack.pop() {
            for inc in &incidence {
                let meet: Vec<usize> = f.iter().copied().filter(|i| inc.contains(i)).collect();
                if meet.len() < f.len() && seen.insert(meet.clone()) {
                    stack.push(meet);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    /// Whether the rays with the given indices span a cone of the fan.
    pub fn is_cone(&self, idx: &[usize]) -> bool {
        let mut v = idx.to_vec();
        v.sort_unstable();
        self.cones().binary_search_by(|c| c.len().cmp(&v.len()).then(c.cmp(&v))).is_ok()
    }

    /// Indices of maximal cones containing the point.
    pub fn cones_containing(&self, x: &[BigInt]) -> Vec<usize> {
        (0..self.max_cones.len())
            .filter(|&k| self.hcone(&self.max_cones[k]).contains(x))
            .collect()
    }

    /// Restricts to the given cones (and their faces) as a new fan on the
    /// rays they use. Returns the fan and the map from new to old ray
    /// indices.
    pub fn subfan(&self, cones: &[Vec<usize>]) -> Result<(Fan, Vec<usize>)> {
        let used: Vec<usize> = cones.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let pos: BTreeMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let rays = used.iter().map(|&i| self.rays[i].clone()).collect();
        let cones = cones.iter().map(|c| c.iter().map(|i| pos[i]).collect()).collect();
        Ok((Fan::new(self.dim, rays, cones)?, used))
    }
}

impl MaximalCones for Fan {
    fn ambient_dim(&self) -> usize {
        self.dim
    }
    fn maximal_hcones(&self) -> Vec<HCone> {
        self.max_cones.iter().map(|c| self.hcone(c)).collect()
    }
}

impl MaximalCones for Quasifan {
    fn ambient_dim(&self) -> usize {
        Quasifan::ambient_dim(self)
    }
    fn maximal_hcones(&self) -> Vec<HCone> {
        self.maximal_cones()
            .map(|c| HCone::from_generators(self.ambient_dim(), &c.rays, self.lineality()))
            .collect()
    }
}

/// Checks the fan axioms and reports completeness and simpliciality.
pub fn validate_fan(fan: &Fan) -> Result<FanReport> {
    let n = fan.dim;
    let hcones: Vec<HCone> = fan.max_cones.iter().map(|c| fan.hcone(c)).collect();
    for (c, h) in fan.max_cones.iter().zip(&hcones) {
        let gens = extreme_rays(n, &h.ineqs, &h.eqs);
        if !gens.lineality.is_empty() {
            return Err(Error::InvalidFan(format!("cone {c:?} is not pointed")));
        }
        if gens.rays.len() != c.len() {
            return Err(Error::InvalidFan(format!("cone {c:?} has redundant generators")));
        }
    }
    for a in 0..fan.max_cones.len() {
        for b in a + 1..fan.max_cones.len() {
            let (ca, cb) = (&fan.max_cones[a], &fan.max_cones[b]);
            let ineqs: Vec<Vec<BigInt>> = hcones[a].ineqs.iter().chain(&hcones[b].ineqs).cloned().collect();
            let eqs: Vec<Vec<BigInt>> = hcones[a].eqs.iter().chain(&hcones[b].eqs).cloned().collect();
            let meet = extreme_rays(n, &ineqs, &eqs);
            let common: Vec<usize> = ca.iter().copied().filter(|i| cb.contains(i)).collect();
            let mut expected = fan.cone_rays(&common);
            expected.sort();
            if meet.rays != expected
                || !fan.faces_of(ca).contains(&common)
                || !fan.faces_of(cb).contains(&common)
            {
                return Err(Error::InvalidFan(format!(
                    "cones {ca:?} and {cb:?} do not intersect in a common face"
                )));
            }
        }
    }
    let simplicial = fan.is_simplicial();
    let complete = fan.max_cones.iter().all(|c| fan.cone_dim(c) == n) && ridges_paired(fan, &fan.max_cones, None);
    Ok(FanReport { complete, simplicial })
}

/// Every facet of the given full-dimensional cones is shared by exactly two
/// of them, except facets lying on the boundary of `inside`.
fn ridges_paired(fan: &Fan, cones: &[Vec<usize>], inside: Option<&HCone>) -> bool {
    let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for c in cones {
        let d = fan.cone_dim(c);
        for f in fan.faces_of(c) {
            if fan.cone_dim(&f) + 1 == d {
                *count.entry(f).or_default() += 1;
            }
        }
    }
    count.iter().all(|(f, &k)| {
        let boundary = inside.is_some_and(|h| {
            let rs: Vec<&Vec<BigInt>> = f.iter().map(|&i| &fan.rays[i]).collect();
            h.on_facet(&rs)
        });
        if boundary {
            k == 1
        } else {
            k == 2
        }
    })
}

/// Whether `fine` refines `coarse`: every cone of `fine` lies in a cone of
/// `coarse`, and both have the same support.
pub fn is_refinement(fine: &Fan, coarse: &impl MaximalCones) -> bool {
    if fine.dim != coarse.ambient_dim() {
        return false;
    }
    let targets = coarse.maximal_hcones();
    let inside = |c: &[usize], h: &HCone| fine.cone_rays(c).iter().all(|v| h.contains(v));
    if !fine.max_cones.iter().all(|c| targets.iter().any(|h| inside(c, h))) {
        return false;
    }
    // each coarse cone must be covered by the fine cones it contains
    targets.iter().all(|h| {
        if h.dim == 0 {
            return true;
        }
        let full: Vec<Vec<usize>> = fine
            .cones()
            .iter()
            .filter(|c| fine.cone_dim(c) == h.dim && inside(c, h))
            .cloned()
            .collect();
        !full.is_empty() && ridges_paired(fine, &full, Some(h))
    })
}
