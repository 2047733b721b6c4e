//! The analytic ingredients of the exact formulas: lambda(n), half-integer
//! Bessel functions in closed form, K_0 through its integral representation,
//! and samplers for the explicit analytic inequalities.

pub mod bessel;
pub mod k0;
pub mod lemmas;

use crate::ball::{constants, Enclosure};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::Signed;

/// lambda(n) = (pi/6) sqrt(24n - 1).
#[derive(Debug, Clone)]
pub struct LambdaValue {
    pub n: BigInt,
    pub value: Enclosure,
}

pub fn lambda(n: &BigInt, prec: u32) -> Result<Enclosure> {
    if !n.is_positive() {
        return Err(Error::Domain(format!("lambda needs n >= 1, got {n}")));
    }
    let wp = prec + 8;
    let s = Enclosure::from_bigint(&(n * 24 - 1)).sqrt(wp)?;
    Ok(constants::pi(wp).mul(&s, wp).div_bigint(&BigInt::from(6), wp))
}

pub fn lambda_value(n: &BigInt, prec: u32) -> Result<LambdaValue> {
    Ok(LambdaValue { n: n.clone(), value: lambda(n, prec)? })
}

/// f64 estimate of lambda(n), for sizing precision budgets.
pub fn lambda_f64(n: u64) -> f64 {
    std::f64::consts::PI / 6.0 * ((24.0 * n as f64) - 1.0).sqrt()
}
