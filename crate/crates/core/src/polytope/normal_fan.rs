use num_bigint::BigInt;

use super::{facets_of_cone, Polytope};
use crate::lattice::rational::{dot_rat, Rat};

/// Cone `sigma(F) = {w : F is contained in the w-minimal face}` of the
/// normal quasifan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalCone {
    /// Vertex set of the face `F`.
    pub face: Vec<usize>,
    /// Inner normals of the facets containing `F`.
    pub rays: Vec<Vec<BigInt>>,
}

/// Normal quasifan of a polytope. All cones share the lineality space
/// spanned by the normals of the affine hull equations.
#[derive(Clone, Debug)]
pub struct Quasifan {
    polytope: Polytope,
    lineality: Vec<Vec<BigInt>>,
    cones: Vec<NormalCone>,
}

impl Quasifan {
    pub fn ambient_dim(&self) -> usize {
        self.polytope.ambient_dim()
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    /// One cone per face, in the order of `Polytope::faces`; the last cone
    /// belongs to the polytope itself and equals the lineality space.
    pub fn cones(&self) -> &[NormalCone] {
        &self.cones
    }

    /// Cones of the vertices.
    pub fn maximal_cones(&self) -> impl Iterator<Item = &NormalCone> {
        self.cones.iter().filter(|c| c.face.len() == 1)
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    /// Dimension of a cone, including the lineality space.
    pub fn cone_dim(&self, c: &NormalCone) -> usize {
        let f = self.polytope.face_with_vertices(&c.face).expect("cone of a face");
        self.ambient_dim() - f.dim
    }

    /// Exact membership: `w` lies in `sigma(F)` iff every vertex of `F`
    /// minimizes `w` over the polytope.
    pub fn cone_contains(&self, c: &NormalCone, w: &[Rat]) -> bool {
        let m = self.polytope.min_of(w);
        c.face
            .iter()
            .all(|&i| dot_rat(&self.polytope.vertices()[i], w) == m)
    }

    /// Smallest cone containing `w`: the cone of the `w`-minimal face.
    pub fn cone_of(&self, w: &[Rat]) -> &NormalCone {
        let face = self.polytope.argmin(w);
        self.cones.iter().find(|c| c.face == face).expect("argmin is a face")
    }

    /// `(ineqs, eqs)` with `sigma(F) = {w : ineqs w >= 0, eqs w = 0}`.
    pub fn hrep(&self, c: &NormalCone) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
        facets_of_cone(self.ambient_dim(), &c.rays, &self.lineality)
    }
}

pub fn normal_quasifan(b: &Polytope) -> Quasifan {
    let lineality: Vec<Vec<BigInt>> = b.equations().iter().map(|h| h.normal.clone()).collect();
    let cones = b
        .faces()
        .iter()
        .map(|f| NormalCone {
            face: f.vertices.clone(),
            rays: f.facets.iter().map(|&k| b.facets()[k].normal.clone()).collect(),
        })
        .collect();
    Quasifan {
        polytope: b.clone(),
        lineality,
        cones,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::big_vec;
    use crate::lattice::rational::to_rat_vec;

    fn as_point(w: &[BigInt]) -> Vec<Rat> {
        to_rat_vec(w)
    }

    fn poly(v: &[&[i64]]) -> Polytope {
        Polytope::from_int_points(&v.iter().map(|p| big_vec(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn simplex_gives_projective_plane_fan() {
        let q = normal_quasifan(&poly(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert!(q.lineality().is_empty());
        let mut rays: Vec<Vec<BigInt>> = q.maximal_cones().flat_map(|c| c.rays.clone()).collect();
        rays.sort();
        rays.dedup();
        assert_eq!(rays, vec![big_vec(&[-1, -1]), big_vec(&[0, 1]), big_vec(&[1, 0])]);
        assert_eq!(q.maximal_cones().count(), 3);
        for c in q.maximal_cones() {
            assert_eq!(q.cone_dim(c), 2);
        }
    }

    #[test]
    fn point_gives_whole_space() {
        let q = normal_quasifan(&poly(&[&[1, 2]]));
        assert_eq!(q.cones().len(), 1);
        assert_eq!(q.lineality().len(), 2);
        assert!(q.cone_contains(&q.cones()[0], &as_point(&big_vec(&[-5, 3]))));
    }

    #[test]
    fn flat_triangle_has_lineality() {
        let q = normal_quasifan(&poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(q.lineality(), &[big_vec(&[0, 0, 1])]);
        for c in q.maximal_cones() {
            assert_eq!(q.cone_dim(c), 3);
            assert!(q.cone_contains(c, &as_point(&big_vec(&[0, 0, 0]))));
        }
        let (_, eqs) = q.hrep(q.cones().last().unwrap());
        assert_eq!(eqs.len(), 2);
    }
}
