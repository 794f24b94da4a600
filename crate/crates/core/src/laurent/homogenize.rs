use num_bigint::BigInt;
use num_traits::Zero;

use super::{LaurentPolynomial, LaurentSystem};
use crate::error::{Error, Result};
use crate::fan::{cox_data, is_refinement, CoxData, Fan};
use crate::lattice::rational::dot_int_rat;
use crate::lattice::GroupElement;
use crate::polytope::normal_quasifan;

/// The homogenized system `g_j = T^{a_j} p^* f_j` in the Cox ring.
#[derive(Clone, Debug)]
pub struct HomogenizedSystem {
    pub fan: Fan,
    pub cox: CoxData,
    pub polys: Vec<LaurentPolynomial>,
    pub shifts: Vec<Vec<BigInt>>,
    pub degrees: Vec<GroupElement>,
}

/// `a_i = -min_{u in B} <u, v_i>` for a lattice polytope `B`.
fn shift_vector(fan: &Fan, f: &LaurentPolynomial) -> Vec<BigInt> {
    let b = f.newton_polytope();
    fan.rays()
        .iter()
        .map(|v| {
            let m = b
                .vertices()
                .iter()
                .map(|u| dot_int_rat(v, u))
                .min()
                .expect("nonempty");
            -m.to_integer()
        })
        .collect()
}

/// Homogenizes each polynomial with respect to the fan, which must refine
/// the normal fan of the Newton polytope of the system.
pub fn homogenize(system: &LaurentSystem, fan: &Fan) -> Result<HomogenizedSystem> {
    if system.dim() != fan.dim() {
        return Err(Error::DimensionMismatch {
            expected: fan.dim(),
            found: system.dim(),
        });
    }
    let b = system.newton_polytope();
    if !is_refinement(fan, &normal_quasifan(&b.sum)) {
        return Err(Error::NotFFan);
    }
    let cox = cox_data(fan)?;
    let mut polys = Vec::new();
    let mut shifts = Vec::new();
    let mut degrees = Vec::new();
    for f in system.polys() {
        let a = shift_vector(fan, f);
        let terms = f
            .terms()
            .iter()
            .map(|(nu, c)| {
                let e: Vec<BigInt> = fan
                    .rays()
                    .iter()
                    .zip(&a)
                    .map(|(v, ai)| crate::lattice::rational::dot_int(v, nu) + ai)
                    .collect();
                (e, c.clone())
            })
            .collect();
        polys.push(LaurentPolynomial::new(fan.num_rays(), terms)?);
        degrees.push(cox.degree(&a)?);
        shifts.push(a);
    }
    Ok(HomogenizedSystem {
        fan: fan.clone(),
        cox,
        polys,
        shifts,
        degrees,
    })
}

/// `g_j^sigma`: the variables of the rays of `cone` set to zero. `None`
/// stands for the zero polynomial.
pub fn face_restriction(g: &HomogenizedSystem, cone: &[usize]) -> Vec<Option<LaurentPolynomial>> {
    g.polys
        .iter()
        .map(|p| {
            let terms: Vec<_> = p
                .terms()
                .iter()
                .filter(|(e, _)| cone.iter().all(|&i| e[i].is_zero()))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect();
            LaurentPolynomial::new(p.dim(), terms).ok()
        })
        .collect()
}

impl HomogenizedSystem {
    pub fn display_polys(&self) -> Vec<String> {
        self.polys.iter().map(|p| p.display_with("T")).collect()
    }
}
