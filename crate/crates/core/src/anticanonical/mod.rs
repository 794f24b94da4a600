//! The anticanonical complex of a complete intersection, singularity
//! verdicts read off from its lattice points, discrepancies of toric
//! divisors and the Gorenstein index.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::{gorenstein_form, CoxData, Fan};
use crate::lattice::rational::{dot_int_rat, rank_int, to_rat_vec, Rat};
use crate::lattice::{is_primitive, lcm_all, smith_normal_form, GroupElement, IntMat};
use crate::polytope::Polytope;

/// `A(sigma) = conv(0, v_i)`, which equals `sigma ∩ {<u, .> >= -1}` since
/// every generator lies on the level set `<u, .> = -1`.
#[derive(Clone, Debug)]
pub struct Cell {
    pub cone: Vec<usize>,
    pub form: Vec<Rat>,
    pub polytope: Polytope,
}

#[derive(Clone, Debug)]
pub struct AnticanonicalComplex {
    fan: Fan,
    maximal: Vec<Vec<usize>>,
    cells: BTreeMap<Vec<usize>, Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityVerdict {
    Terminal,
    /// Lattice points on the level `-1` boundary that are not vertices.
    CanonicalNotTerminal { witnesses: Vec<Vec<BigInt>> },
    /// Lattice points strictly between level `-1` and the origin.
    LogTerminalOnly { witnesses: Vec<Vec<BigInt>> },
}

impl SingularityVerdict {
    pub fn is_terminal(&self) -> bool {
        matches!(self, SingularityVerdict::Terminal)
    }

    pub fn is_canonical(&self) -> bool {
        !matches!(self, SingularityVerdict::LogTerminalOnly { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            SingularityVerdict::Terminal => "terminal",
            SingularityVerdict::CanonicalNotTerminal { .. } => "canonical-not-terminal",
            SingularityVerdict::LogTerminalOnly { .. } => "log-terminal-only",
        }
    }

    fn from_witnesses(mut non_canonical: Vec<Vec<BigInt>>, mut non_terminal: Vec<Vec<BigInt>>) -> Self {
        if !non_canonical.is_empty() {
            non_canonical.sort();
            non_canonical.dedup();
            SingularityVerdict::LogTerminalOnly {
                witnesses: non_canonical,
            }
        } else if !non_terminal.is_empty() {
            non_terminal.sort();
            non_terminal.dedup();
            SingularityVerdict::CanonicalNotTerminal {
                witnesses: non_terminal,
            }
        } else {
            SingularityVerdict::Terminal
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub ray: Vec<BigInt>,
    pub cone: Vec<usize>,
    pub boundary_point: Vec<Rat>,
    pub discrepancy: Rat,
}

/// Builds the cells over the cones generated by `cones` (the faces are
/// added). Every cone must be Q-Gorenstein.
pub fn build_complex(fan: &Fan, cones: &[Vec<usize>]) -> Result<AnticanonicalComplex> {
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in cones {
        let mut c = c.clone();
        c.sort_unstable();
        if !fan.is_cone(&c) {
            return Err(Error::InvalidFan(format!("{c:?} is not a cone of the fan")));
        }
        all.extend(fan.faces_of(&c));
    }
    let maximal: Vec<Vec<usize>> = all
        .iter()
        .filter(|c| !all.iter().any(|d| d.len() > c.len() && c.iter().all(|i| d.contains(i))))
        .cloned()
        .collect();
    let origin = vec![BigInt::zero(); fan.dim()];
    let mut cells = BTreeMap::new();
    for c in all {
        let form = fan.gorenstein_form(&c)?;
        let mut pts = vec![origin.clone()];
        pts.extend(fan.cone_rays(&c));
        let polytope = Polytope::from_int_points(&pts)?;
        cells.insert(
            c.clone(),
            Cell {
                cone: c,
                form,
                polytope,
            },
        );
    }
    Ok(AnticanonicalComplex {
        fan: fan.clone(),
        maximal,
        cells,
    })
}

impl AnticanonicalComplex {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.values()
    }

    pub fn cell(&self, cone: &[usize]) -> Option<&Cell> {
        self.cells.get(cone)
    }

    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.maximal
    }
}

/// Singularity verdict of the complex, decided on its maximal cells.
pub fn classify_singularities(a: &AnticanonicalComplex) -> SingularityVerdict {
    let mut non_canonical = Vec::new();
    let mut non_terminal = Vec::new();
    for c in &a.maximal {
        let rays = a.fan.cone_rays(c);
        match classify_cone(&rays) {
            SingularityVerdict::Terminal => {}
            SingularityVerdict::CanonicalNotTerminal { witnesses } => non_terminal.extend(witnesses),
            SingularityVerdict::LogTerminalOnly { witnesses } => non_canonical.extend(witnesses),
        }
    }
    SingularityVerdict::from_witnesses(non_canonical, non_terminal)
}

/// Verdict for the cell `conv(0, v_i)` of a single Q-Gorenstein cone.
/// Simplicial cones enumerate the fundamental parallelepiped; others scan
/// the cell.
pub fn classify_cone(rays: &[Vec<BigInt>]) -> SingularityVerdict {
    if rays.is_empty() {
        return SingularityVerdict::Terminal;
    }
    if rank_int(rays) == rays.len() {
        return classify_simplicial(rays);
    }
    let u = gorenstein_form(rays).expect("Q-Gorenstein cone");
    let mut pts = vec![vec![BigInt::zero(); rays[0].len()]];
    pts.extend(rays.iter().cloned());
    let cell = Polytope::from_int_points(&pts).expect("nonempty");
    let minus_one = -Rat::one();
    let mut non_canonical = Vec::new();
    let mut non_terminal = Vec::new();
    for p in cell.lattice_points(false) {
        if p.iter().all(Zero::is_zero) || rays.contains(&p) {
            continue;
        }
        if dot_int_rat(&p, &u) > minus_one {
            non_canonical.push(p);
        } else {
            non_terminal.push(p);
        }
    }
    SingularityVerdict::from_witnesses(non_canonical, non_terminal)
}

/// Nonzero points `sum lambda_i v_i` with `lambda in [0,1)^k` of the lattice
/// `lin(sigma) ∩ Z^n`, found from `U A V = D` as `lambda = frac(V (y / d))`.
fn classify_simplicial(rays: &[Vec<BigInt>]) -> SingularityVerdict {
    let n = rays[0].len();
    let k = rays.len();
    let snf = smith_normal_form(&IntMat::from_cols(n, rays));
    let d = snf.invariant_factors();
    let nontrivial: Vec<usize> = (0..k).filter(|&j| !d[j].is_one()).collect();
    let one = Rat::one();
    let mut non_canonical = Vec::new();
    let mut non_terminal = Vec::new();
    let ranges = nontrivial.iter().map(|&j| residues(&d[j]));
    for ys in ranges.multi_cartesian_product() {
        if ys.iter().all(Zero::is_zero) {
            continue;
        }
        let lambda: Vec<Rat> = (0..k)
            .map(|i| {
                let x: Rat = nontrivial
                    .iter()
                    .zip(&ys)
                    .map(|(&j, y)| Rat::new(&snf.v[(i, j)] * y, d[j].clone()))
                    .sum();
                fract(&x)
            })
            .collect();
        let total: Rat = lambda.iter().sum();
        if total > one {
            continue;
        }
        let point: Vec<BigInt> = (0..n)
            .map(|r| {
                let x: Rat = rays.iter().zip(&lambda).map(|(v, l)| l * Rat::from_integer(v[r].clone())).sum();
                x.to_integer()
            })
            .collect();
        if total < one {
            non_canonical.push(point);
        } else {
            non_terminal.push(point);
        }
    }
    SingularityVerdict::from_witnesses(non_canonical, non_terminal)
}

fn residues(d: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut y = BigInt::zero();
    while &y < d {
        out.push(y.clone());
        y += 1;
    }
    out
}

fn fract(x: &Rat) -> Rat {
    x - Rat::from_integer(x.numer().div_floor(x.denom()))
}

/// Discrepancy of the toric divisor of the ray through `v`.
pub fn discrepancy(a: &AnticanonicalComplex, v: &[BigInt]) -> Result<DiscrepancyReport> {
    if v.len() != a.fan.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.fan.dim(),
            found: v.len(),
        });
    }
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    if !is_primitive(v) {
        return Err(Error::InvalidArgument("vector is not primitive".into()));
    }
    let host = a
        .maximal
        .iter()
        .find(|c| a.fan.hcone(c).contains(v))
        .ok_or_else(|| Error::NotInSupport(v.iter().map(ToString::to_string).collect()))?;
    let u = &a.cells[host].form;
    let level = -dot_int_rat(v, u);
    let boundary_point = to_rat_vec(v).iter().map(|x| x / &level).collect();
    Ok(DiscrepancyReport {
        ray: v.to_vec(),
        cone: host.clone(),
        boundary_point,
        discrepancy: level - Rat::one(),
    })
}

/// Index of the sublattice spanned by the rays in `lin(sigma) ∩ Z^n`;
/// one exactly for regular cones.
pub fn cone_multiplicity(rays: &[Vec<BigInt>]) -> BigInt {
    if rays.is_empty() {
        return BigInt::one();
    }
    let snf = smith_normal_form(&IntMat::from_cols(rays[0].len(), rays));
    snf.invariant_factors().iter().product()
}

/// Least `iota` such that `<u, v_i> = -iota` has an integral solution `u`,
/// `None` if the cone is not Q-Gorenstein.
pub fn cone_gorenstein_index(rays: &[Vec<BigInt>]) -> Option<BigInt> {
    if rays.is_empty() {
        return Some(BigInt::one());
    }
    // U A^T V = D; with u = V z the system reads D z = -iota U 1
    let at = IntMat::from_rows(rays[0].len(), rays.iter().cloned());
    let snf = smith_normal_form(&at);
    let c = snf.u.mul_vec(&vec![BigInt::one(); rays.len()]);
    let d = snf.invariant_factors();
    if c[d.len()..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let needed: Vec<BigInt> = d.iter().zip(&c).map(|(dj, cj)| dj / dj.gcd(cj)).collect();
    Some(lcm_all(&needed))
}

pub fn gorenstein_index(a: &AnticanonicalComplex) -> BigInt {
    let idx: Vec<BigInt> = a
        .maximal
        .iter()
        .map(|c| cone_gorenstein_index(&a.fan.cone_rays(c)).expect("cells are Q-Gorenstein"))
        .collect();
    lcm_all(&idx)
}

/// `-K = sum w_i - sum mu_j` in the class group.
pub fn anticanonical_class(cox: &CoxData, mu: &[GroupElement]) -> Result<GroupElement> {
    let k = cox.class_group();
    if mu.iter().any(|m| !k.contains(m)) {
        return Err(Error::GroupMismatch);
    }
    let w = k.sum(cox.degrees())?;
    let m = k.sum(mu)?;
    k.sub(&w, &m)
}
