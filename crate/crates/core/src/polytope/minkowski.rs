use num_traits::Zero;

use super::{Face, Polytope};
use crate::error::{Error, Result};
use crate::lattice::rational::{to_rat_vec, Rat};

/// Minkowski sum together with the decomposition of each of its faces.
#[derive(Clone, Debug)]
pub struct MinkowskiDecomposition {
    pub sum: Polytope,
    pub summands: Vec<Polytope>,
    /// `parts[k][i]` is the vertex set (indices into `summands[i]`) of the
    /// summand face belonging to `sum.faces()[k]`.
    pub parts: Vec<Vec<Vec<usize>>>,
}

impl MinkowskiDecomposition {
    /// Summand faces of the face of the sum with the given vertex set.
    pub fn decompose(&self, face_vertices: &[usize]) -> Result<&[Vec<usize>]> {
        let f = self.sum.face_with_vertices(face_vertices)?;
        let k = self.sum.faces().iter().position(|g| g == f).expect("face of sum");
        Ok(&self.parts[k])
    }
}

/// A linear form whose minimizing face is exactly `face`.
pub(crate) fn face_functional(p: &Polytope, face: &Face) -> Vec<Rat> {
    let mut w = vec![Rat::zero(); p.ambient_dim()];
    for &k in &face.facets {
        for (x, a) in w.iter_mut().zip(to_rat_vec(&p.facets()[k].normal)) {
            *x += a;
        }
    }
    w
}

pub fn minkowski_sum(summands: &[Polytope]) -> Result<MinkowskiDecomposition> {
    let first = summands.first().ok_or(Error::EmptyInput("summand list"))?;
    let n = first.ambient_dim();
    if let Some(b) = summands.iter().find(|b| b.ambient_dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.ambient_dim(),
        });
    }
    let mut points: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]];
    for b in summands {
        let mut next = Vec::with_capacity(points.len() * b.vertices().len());
        for p in &points {
            for v in b.vertices() {
                next.push(p.iter().zip(v).map(|(x, y)| x + y).collect());
            }
        }
        next.sort();
        next.dedup();
        points = next;
    }
    let sum = Polytope::convex_hull(&points)?;
    let parts = sum
        .faces()
        .iter()
        .map(|f| {
            let w = face_functional(&sum, f);
            summands.iter().map(|b| b.argmin(&w)).collect()
        })
        .collect();
    Ok(MinkowskiDecomposition {
        sum,
        summands: summands.to_vec(),
        parts,
    })
}
