//! Integer lattices, normal forms and finitely generated abelian groups.

mod group;
mod matrix;
mod normal_form;
pub mod rational;

pub use group::{cokernel_presentation, divisors, AbelianGroup, DegreeMap, GroupElement};
pub use matrix::IntMat;
pub use normal_form::{
    hermite_normal_form, integer_kernel, lattice_basis, smith_normal_form, solve_integer,
    SmithForm,
};
pub use rational::Rat;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Divides a nonzero integer vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Nonnegative gcd of all entries; zero for the empty or zero vector.
pub fn gcd_all<'a>(v: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    v.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn lcm_all<'a>(v: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    v.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_all(v).is_one()
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

/// l1 norm.
pub fn abs_sum(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).sum()
}
