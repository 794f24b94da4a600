//! Rational convex polytopes: hulls, face lattices, lattice points.

mod dd;
mod minkowski;
mod normal_fan;

pub use dd::{extreme_rays, facets_of_cone, ConeGenerators};
pub use minkowski::{minkowski_sum, MinkowskiDecomposition};
pub use normal_fan::{normal_quasifan, NormalCone, Quasifan};

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::rational::{dot_int_rat, rank, rref, to_rat_vec, Rat};
use crate::lattice::lcm_all;

/// Affine inequality `<normal, x> >= offset` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot_int_rat(&self.normal, x) - &self.offset
    }
}

/// Face of a polytope, identified by the indices of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    /// Indices of the facets containing the face.
    pub facets: Vec<usize>,
}

/// A nonempty rational polytope given by both descriptions.
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<Vec<Rat>>,
    facets: Vec<Halfspace>,
    /// `<normal, x> = offset` on the affine hull.
    equations: Vec<Halfspace>,
    incidence: Vec<Vec<usize>>,
    faces: OnceLock<Vec<Face>>,
}

impl Clone for Polytope {
    fn clone(&self) -> Self {
        Polytope {
            ambient_dim: self.ambient_dim,
            vertices: self.vertices.clone(),
            facets: self.facets.clone(),
            equations: self.equations.clone(),
            incidence: self.incidence.clone(),
            faces: OnceLock::new(),
        }
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl fmt::Debug for Polytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "Polytope(dim {}, vertices {:?})", self.dim(), vs)
    }
}

fn scale_to_int(p: &[Rat]) -> (BigInt, Vec<BigInt>) {
    let l = lcm_all(p.iter().map(|x| x.denom()));
    let v = p.iter().map(|x| (x * &l).to_integer()).collect();
    (l, v)
}

impl Polytope {
    /// Convex hull of a nonempty point set.
    pub fn convex_hull(points: &[Vec<Rat>]) -> Result<Polytope> {
        let first = points.first().ok_or(Error::EmptyInput("point list"))?;
        let n = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let mut distinct: Vec<Vec<Rat>> = points.to_vec();
        distinct.sort();
        distinct.dedup();

        // dual of the cone over {1} x P
        let rows: Vec<Vec<BigInt>> = distinct
            .iter()
            .map(|p| {
                let (l, v) = scale_to_int(p);
                std::iter::once(l).chain(v).collect()
            })
            .collect();
        let dual = extreme_rays(n + 1, &rows, &[]);

        let split = |r: &Vec<BigInt>| -> Halfspace {
            let a = &r[1..];
            let g = crate::lattice::gcd_all(a);
            Halfspace {
                normal: a.iter().map(|x| x / &g).collect(),
                offset: Rat::new(-&r[0], g),
            }
        };
        let mut equations: Vec<Halfspace> = dual.lineality.iter().map(split).collect();
        equations.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
        let mut facets: Vec<Halfspace> = dual
            .rays
            .iter()
            .filter(|r| rows.iter().any(|p| crate::lattice::rational::dot_int(r, p).is_zero()))
            .map(split)
            .collect();
        facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));

        let eq_normals: Vec<Vec<Rat>> = equations.iter().map(|h| to_rat_vec(&h.normal)).collect();
        let vertices: Vec<Vec<Rat>> = distinct
            .into_iter()
            .filter(|p| {
                let mut normals = eq_normals.clone();
                normals.extend(
                    facets
                        .iter()
                        .filter(|h| h.eval(p).is_zero())
                        .map(|h| to_rat_vec(&h.normal)),
                );
                rank(&normals) == n
            })
            .collect();
        Ok(Self::assemble(n, vertices, facets, equations))
    }

    fn assemble(
        ambient_dim: usize,
        vertices: Vec<Vec<Rat>>,
        facets: Vec<Halfspace>,
        equations: Vec<Halfspace>,
    ) -> Polytope {
        let incidence = facets
            .iter()
            .map(|h| {
                (0..vertices.len())
                    .filter(|&i| h.eval(&vertices[i]).is_zero())
                    .collect()
            })
            .collect();
        Polytope {
            ambient_dim,
            vertices,
            facets,
            equations,
            incidence,
            faces: OnceLock::new(),
        }
    }

    pub fn from_int_points(points: &[Vec<BigInt>]) -> Result<Polytope> {
        let pts: Vec<Vec<Rat>> = points.iter().map(|p| to_rat_vec(p)).collect();
        Self::convex_hull(&pts)
    }

    /// `{x : <a_k, x> >= b_k}`; `Ok(None)` when empty, `Err(Unbounded)` when
    /// the set is not bounded.
    pub fn from_inequalities(
        dim: usize,
        normals: &[Vec<BigInt>],
        offsets: &[Rat],
    ) -> Result<Option<Polytope>> {
        if let Some(a) = normals.iter().find(|a| a.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: a.len(),
            });
        }
        // homogenize: t * (-b_k) + <a_k, x> >= 0, t >= 0
        let mut rows: Vec<Vec<BigInt>> = normals
            .iter()
            .zip(offsets)
            .map(|(a, b)| {
                let d = b.denom().clone();
                std::iter::once(-b.numer().clone())
                    .chain(a.iter().map(|x| x * &d))
                    .collect()
            })
            .collect();
        let mut t = vec![BigInt::zero(); dim + 1];
        t[0] = BigInt::one();
        rows.push(t);
        let gens = extreme_rays(dim + 1, &rows, &[]);
        if !gens.lineality.is_empty() || gens.rays.iter().any(|r| r[0].is_zero()) {
            // a ray with t = 0 is a recession direction, unless the set is empty
            let bounded_part: Vec<&Vec<BigInt>> =
                gens.rays.iter().filter(|r| r[0].is_positive()).collect();
            if bounded_part.is_empty() {
                return Ok(None);
            }
            return Err(Error::Unbounded);
        }
        if gens.rays.is_empty() {
            return Ok(None);
        }
        let points: Vec<Vec<Rat>> = gens
            .rays
            .iter()
            .map(|r| r[1..].iter().map(|x| Rat::new(x.clone(), r[0].clone())).collect())
            .collect();
        Self::convex_hull(&points).map(Some)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.equations
    }

    pub fn is_lattice_polytope(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(Rat::is_integer))
    }

    /// Integer vertices; `None` if some vertex is not integral.
    pub fn integer_vertices(&self) -> Option<Vec<Vec<BigInt>>> {
        self.vertices
            .iter()
            .map(|v| v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
            .collect()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|h| h.eval(x).is_zero())
            && self.facets.iter().all(|h| !h.eval(x).is_negative())
    }

    pub fn contains_int(&self, x: &[BigInt]) -> bool {
        self.contains(&to_rat_vec(x))
    }

    /// Whether `x` lies in the relative interior.
    pub fn contains_in_interior(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|h| h.eval(x).is_zero())
            && self.facets.iter().all(|h| h.eval(x).is_positive())
    }

    /// Minimum of a linear form over the polytope.
    pub fn min_of(&self, w: &[Rat]) -> Rat {
        self.vertices
            .iter()
            .map(|v| crate::lattice::rational::dot_rat(v, w))
            .min()
            .expect("nonempty")
    }

    /// Indices of the vertices minimizing `w`; these span a face.
    pub fn argmin(&self, w: &[Rat]) -> Vec<usize> {
        let m = self.min_of(w);
        (0..self.vertices.len())
            .filter(|&i| crate::lattice::rational::dot_rat(&self.vertices[i], w) == m)
            .collect()
    }

    /// Image under `x -> M x + t`, where `M` is given by its rows.
    pub fn affine_image(&self, m: &[Vec<BigInt>], t: &[BigInt]) -> Result<Polytope> {
        let pts: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| {
                m.iter()
                    .zip(t)
                    .map(|(row, ti)| dot_int_rat(row, v) + Rat::from_integer(ti.clone()))
                    .collect()
            })
            .collect();
        Self::convex_hull(&pts)
    }

    /// All nonempty faces, ordered by dimension and then vertex set; the
    /// polytope itself is the last entry.
    pub fn faces(&self) -> &[Face] {
        self.faces.get_or_init(|| self.compute_faces())
    }

    fn compute_faces(&self) -> Vec<Face> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        seen.insert(all.clone());
        let mut stack = vec![all];
        while let Some(face) = stack.pop() {
            for inc in &self.incidence {
                let meet: Vec<usize> = face.iter().copied().filter(|i| inc.binary_search(i).is_ok()).collect();
                if !meet.is_empty() && meet.len() < face.len() && seen.insert(meet.clone()) {
                    stack.push(meet);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|vs| {
                let facets: Vec<usize> = (0..self.facets.len())
                    .filter(|&k| vs.iter().all(|i| self.incidence[k].binary_search(i).is_ok()))
                    .collect();
                Face {
                    dim: self.affine_dim(&vs),
                    vertices: vs,
                    facets,
                }
            })
            .collect();
        faces.sort();
        faces
    }

    fn affine_dim(&self, vs: &[usize]) -> usize {
        let base = &self.vertices[vs[0]];
        let diffs: Vec<Vec<Rat>> = vs[1..]
            .iter()
            .map(|&i| self.vertices[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        if diffs.is_empty() {
            0
        } else {
            rank(&diffs)
        }
    }

    /// The face whose vertex set is exactly `vertices`.
    pub fn face_with_vertices(&self, vertices: &[usize]) -> Result<&Face> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        self.faces()
            .iter()
            .find(|f| f.vertices == vs)
            .ok_or(Error::NotAFace(vs))
    }

    /// The face as a polytope of its own.
    pub fn face_polytope(&self, face: &Face) -> Polytope {
        let pts: Vec<Vec<Rat>> = face.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
        Self::convex_hull(&pts).expect("nonempty face")
    }

    /// Lattice points (or relative-interior lattice points) in
    /// lexicographic order.
    pub fn lattice_points(&self, interior_only: bool) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        self.scan_lattice_points(interior_only, |p| {
            out.push(p);
            true
        });
        out.sort();
        out
    }

    pub fn count_lattice_points(&self, interior_only: bool) -> usize {
        let mut n = 0;
        self.scan_lattice_points(interior_only, |_| {
            n += 1;
            true
        });
        n
    }

    /// First lattice point (in scan order) satisfying `pred`.
    pub fn find_lattice_point(
        &self,
        interior_only: bool,
        mut pred: impl FnMut(&[BigInt]) -> bool,
    ) -> Option<Vec<BigInt>> {
        let mut found = None;
        self.scan_lattice_points(interior_only, |p| {
            if pred(&p) {
                found = Some(p);
                false
            } else {
                true
            }
        });
        found
    }

    /// Box scan over the free coordinates of the affine hull. The callback
    /// returns `false` to stop.
    fn scan_lattice_points(&self, interior_only: bool, mut visit: impl FnMut(Vec<BigInt>) -> bool) {
        let n = self.ambient_dim;
        // x_p = (c_p + sum_f m_pf y_f) / den_p for pivots p; y are free coordinates
        let mut eq: Vec<Vec<Rat>> = self
            .equations
            .iter()
            .map(|h| {
                let mut r = to_rat_vec(&h.normal);
                r.push(h.offset.clone());
                r
            })
            .collect();
        let pivots = rref(&mut eq);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let d = free.len();

        // each coordinate as an affine function of y with integer coefficients
        // over a common positive denominator: (c0, c[..d], den)
        let mut coord: Vec<(Vec<BigInt>, BigInt, BigInt)> = vec![(Vec::new(), BigInt::zero(), BigInt::one()); n];
        for (k, &f) in free.iter().enumerate() {
            let mut c = vec![BigInt::zero(); d];
            c[k] = BigInt::one();
            coord[f] = (c, BigInt::zero(), BigInt::one());
        }
        for (i, &p) in pivots.iter().enumerate() {
            let mut terms: Vec<Rat> = free.iter().map(|&f| -eq[i][f].clone()).collect();
            terms.push(eq[i][n].clone());
            let (den, ints) = scale_to_int(&terms);
            coord[p] = (ints[..d].to_vec(), ints[d].clone(), den);
        }
        // facets as integer affine functions of y
        let facet_rows: Vec<(Vec<BigInt>, BigInt)> = self
            .facets
            .iter()
            .map(|h| {
                let mut terms = vec![Rat::zero(); d + 1];
                for (j, a) in h.normal.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let (c, c0, den) = &coord[j];
                    for k in 0..d {
                        terms[k] += Rat::new(a * &c[k], den.clone());
                    }
                    terms[d] += Rat::new(a * c0, den.clone());
                }
                terms[d] -= &h.offset;
                let (_, ints) = scale_to_int(&terms);
                (ints[..d].to_vec(), ints[d].clone())
            })
            .collect();

        let lo: Vec<i128> = free
            .iter()
            .map(|&f| small(&self.vertices.iter().map(|v| v[f].clone()).min().unwrap().ceil().to_integer()))
            .collect();
        let hi: Vec<i128> = free
            .iter()
            .map(|&f| small(&self.vertices.iter().map(|v| v[f].clone()).max().unwrap().floor().to_integer()))
            .collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return;
        }
        let to_small = |v: &[BigInt]| v.iter().map(small).collect::<Vec<i128>>();
        let coord_s: Vec<(Vec<i128>, i128, i128)> =
            coord.iter().map(|(c, c0, den)| (to_small(c), small(c0), small(den))).collect();
        let facet_s: Vec<(Vec<i128>, i128)> = facet_rows.iter().map(|(c, c0)| (to_small(c), small(c0))).collect();

        let eval = |c: &[i128], c0: i128, y: &[i128]| -> i128 {
            c.iter().zip(y).fold(c0, |acc, (a, b)| acc + a * b)
        };
        let mut y = lo.clone();
        loop {
            let ok = facet_s.iter().all(|(c, c0)| {
                let v = eval(c, *c0, &y);
                if interior_only {
                    v > 0
                } else {
                    v >= 0
                }
            }) && coord_s.iter().all(|(c, c0, den)| eval(c, *c0, &y).rem_euclid(*den) == 0);
            if ok {
                let p: Vec<BigInt> = coord_s
                    .iter()
                    .map(|(c, c0, den)| BigInt::from(eval(c, *c0, &y) / den))
                    .collect();
                if !visit(p) {
                    return;
                }
            }
            // odometer
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                if y[k] < hi[k] {
                    y[k] += 1;
                    break;
                }
                y[k] = lo[k];
                k += 1;
            }
        }
    }
}

fn small(x: &BigInt) -> i128 {
    let v = x.to_i128().expect("lattice scan coordinates exceed the 128-bit range");
    assert!(v.abs() < 1 << 60, "lattice scan coordinates exceed the 128-bit range");
    v
}

/// Polytope `{u : <u, v_i> >= -a_i}` of the invariant divisor `sum a_i D_i`
/// on the toric variety with rays `v_i`. `Ok(None)` when empty.
pub fn divisorial_polytope(rays: &[Vec<BigInt>], a: &[BigInt]) -> Result<Option<Polytope>> {
    if rays.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: rays.len(),
            found: a.len(),
        });
    }
    let dim = rays.first().map_or(0, Vec::len);
    let offsets: Vec<Rat> = a.iter().map(|x| Rat::from_integer(-x)).collect();
    Polytope::from_inequalities(dim, rays, &offsets)
}
