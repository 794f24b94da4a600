//! Laurent polynomials and systems, homogenization with respect to a fan,
//! and the minimal ambient subfan of a complete intersection.

mod homogenize;
mod sigma_x;

pub use homogenize::{face_restriction, homogenize, HomogenizedSystem};
pub use sigma_x::{compute_sigma_x, interior_point, SigmaXMode, SigmaXResult};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::rational::{dot_int_rat, Rat};
use crate::polytope::{minkowski_sum, MinkowskiDecomposition, Polytope};

/// A coefficient is either an explicit rational number or a marker for a
/// sufficiently general value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Generic,
    Value(Rat),
}

impl Coefficient {
    pub fn one() -> Self {
        Coefficient::Value(Rat::one())
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Generic => write!(f, "generic"),
            Coefficient::Value(v) => write!(f, "{v}"),
        }
    }
}

/// Laurent polynomial with at least one term and no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    dim: usize,
    terms: BTreeMap<Vec<BigInt>, Coefficient>,
}

impl LaurentPolynomial {
    /// Zero coefficients are dropped; repeated exponents are rejected.
    pub fn new(dim: usize, terms: Vec<(Vec<BigInt>, Coefficient)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            if matches!(&c, Coefficient::Value(v) if v.is_zero()) {
                continue;
            }
            if map.insert(e.clone(), c).is_some() {
                return Err(Error::InvalidArgument(format!("exponent {e:?} listed twice")));
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyInput("polynomial terms"));
        }
        Ok(LaurentPolynomial { dim, terms: map })
    }

    /// Polynomial with all coefficients equal to one.
    pub fn from_exponents(dim: usize, exponents: &[&[i64]]) -> Result<Self> {
        Self::new(
            dim,
            exponents
                .iter()
                .map(|e| (crate::lattice::big_vec(e), Coefficient::one()))
                .collect(),
        )
    }

    /// Polynomial with generic coefficients on the given exponents.
    pub fn generic(dim: usize, exponents: &[Vec<BigInt>]) -> Result<Self> {
        Self::new(dim, exponents.iter().map(|e| (e.clone(), Coefficient::Generic)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Vec<BigInt>, Coefficient> {
        &self.terms
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Vec<BigInt>> {
        self.terms.keys()
    }

    pub fn is_generic(&self) -> bool {
        self.terms.values().all(|c| *c == Coefficient::Generic)
    }

    pub fn newton_polytope(&self) -> Polytope {
        let pts: Vec<Vec<BigInt>> = self.terms.keys().cloned().collect();
        Polytope::from_int_points(&pts).expect("at least one term")
    }

    /// Terms whose exponents lie in the face of the Newton polytope with the
    /// given vertex indices.
    pub fn face_polynomial(&self, face_vertices: &[usize]) -> Result<LaurentPolynomial> {
        let b = self.newton_polytope();
        let face = b.face_with_vertices(face_vertices)?;
        let fp = b.face_polytope(face);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| fp.contains_int(e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        LaurentPolynomial::new(self.dim, terms)
    }

    /// Terms minimizing `<w, nu>`.
    pub fn initial_form(&self, w: &[Rat]) -> LaurentPolynomial {
        let vals: Vec<(Rat, &Vec<BigInt>)> = self.terms.keys().map(|e| (dot_int_rat(e, w), e)).collect();
        let m = vals.iter().map(|(v, _)| v.clone()).min().expect("nonempty");
        let terms = vals
            .into_iter()
            .filter(|(v, _)| *v == m)
            .map(|(_, e)| (e.clone(), self.terms[e].clone()))
            .collect();
        LaurentPolynomial::new(self.dim, terms).expect("nonempty")
    }

    /// Product of two polynomials with explicit coefficients; generic
    /// coefficients stay generic.
    pub fn mul(&self, other: &LaurentPolynomial) -> Result<LaurentPolynomial> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut acc: BTreeMap<Vec<BigInt>, Coefficient> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<BigInt> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = match (c1, c2) {
                    (Coefficient::Value(a), Coefficient::Value(b)) => Coefficient::Value(a * b),
                    _ => Coefficient::Generic,
                };
                let merged = match (acc.remove(&e), c) {
                    (None, c) => c,
                    (Some(Coefficient::Value(a)), Coefficient::Value(b)) => Coefficient::Value(a + b),
                    _ => Coefficient::Generic,
                };
                acc.insert(e, merged);
            }
        }
        LaurentPolynomial::new(self.dim, acc.into_iter().collect())
    }

    /// Renders the polynomial with variables `{prefix}1, {prefix}2, ...`,
    /// terms in decreasing lexicographic order of exponents. Generic
    /// coefficients are omitted.
    pub fn display_with(&self, prefix: &str) -> String {
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| {
                    if x.is_one() {
                        format!("{prefix}{}", i + 1)
                    } else {
                        format!("{prefix}{}^{x}", i + 1)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let coeff = match c {
                Coefficient::Value(v) if !v.is_one() => Some(v.to_string()),
                _ => None,
            };
            parts.push(match (coeff, mono.is_empty()) {
                (Some(c), true) => c,
                (Some(c), false) => format!("{c}*{mono}"),
                (None, true) => "1".to_string(),
                (None, false) => mono,
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("S"))
    }
}

/// System `f_1, ..., f_s` of Laurent polynomials in the same variables.
#[derive(Clone, Debug)]
pub struct LaurentSystem {
    dim: usize,
    polys: Vec<LaurentPolynomial>,
}

impl LaurentSystem {
    pub fn new(polys: Vec<LaurentPolynomial>) -> Result<Self> {
        let dim = polys.first().ok_or(Error::EmptyInput("system"))?.dim;
        if let Some(p) = polys.iter().find(|p| p.dim != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim,
            });
        }
        Ok(LaurentSystem { dim, polys })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[LaurentPolynomial] {
        &self.polys
    }

    pub fn is_generic(&self) -> bool {
        self.polys.iter().all(LaurentPolynomial::is_generic)
    }

    pub fn newton_polytopes(&self) -> Vec<Polytope> {
        self.polys.iter().map(LaurentPolynomial::newton_polytope).collect()
    }

    /// Minkowski sum of the Newton polytopes with its face decomposition.
    pub fn newton_polytope(&self) -> MinkowskiDecomposition {
        minkowski_sum(&self.newton_polytopes()).expect("nonempty system of equal dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::big_vec;

    pub fn surface_f() -> LaurentPolynomial {
        LaurentPolynomial::from_exponents(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]).unwrap()
    }

    #[test]
    fn newton_polytope_of_line() {
        let b = surface_f().newton_polytope();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.vertices().len(), 3);
        let m = LaurentPolynomial::from_exponents(2, &[&[3, -1]]).unwrap();
        assert_eq!(m.newton_polytope().dim(), 0);
    }

    #[test]
    fn face_polynomials() {
        let f = surface_f();
        // vertices in lex order: 0, e2, e1
        let edge = f.face_polynomial(&[1, 2]).unwrap();
        assert_eq!(edge.to_string(), "S1 + S2");
        assert_eq!(f.face_polynomial(&[0, 1, 2]).unwrap(), f);
        assert_eq!(f.face_polynomial(&[0]).unwrap().to_string(), "1");
    }

    #[test]
    fn zero_coefficients_dropped() {
        let p = LaurentPolynomial::new(
            1,
            vec![
                (big_vec(&[1]), Coefficient::Value(Rat::zero())),
                (big_vec(&[2]), Coefficient::Value(Rat::from_integer(3.into()))),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "3*S1^2");
        let e = LaurentPolynomial::new(1, vec![(big_vec(&[1]), Coefficient::Value(Rat::zero()))]);
        assert!(e.is_err());
    }

    #[test]
    fn product_newton_polytope_is_sum() {
        let f = surface_f();
        let g = LaurentPolynomial::from_exponents(3, &[&[0, 0, 1], &[-1, 0, 0]]).unwrap();
        let fg = f.mul(&g).unwrap();
        let sum = minkowski_sum(&[f.newton_polytope(), g.newton_polytope()]).unwrap().sum;
        assert_eq!(fg.newton_polytope(), sum);
    }
}
