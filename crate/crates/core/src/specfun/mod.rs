//! Special functions for integer and half-integer order Bessel families.
//!
//! Cylindrical functions `J_n`, `Y_n`, `H_n^{(1)}` and their derivatives,
//! spherical functions `j_n`, `y_n`, `h_n^{(1)}`, and Legendre polynomials.
//! Everything is real-argument, double precision, and pure.
//!
//! Validated envelope: `|n| <= ORDER_CAP` and `0 <= x <= ARGUMENT_CAP`.

mod cylindrical;
mod legendre;
mod spherical;

pub use cylindrical::{
    bessel_j, bessel_j_prime, bessel_j_seq, bessel_y, bessel_y_prime, bessel_y_seq, hankel1,
    hankel1_prime, CylinderTable,
};
pub use legendre::{legendre_p, legendre_p_and_derivative};
pub use spherical::{
    spherical_h1, spherical_h1_prime, spherical_j, spherical_j_prime, spherical_j_seq,
    spherical_y, spherical_y_prime, spherical_y_seq, SphericalTable,
};

use crate::error::{Error, Result};

/// Largest supported order.
pub const ORDER_CAP: u32 = 512;

/// Largest supported argument.
pub const ARGUMENT_CAP: f64 = 1.0e5;

pub(crate) fn check_order(n: i64) -> Result<()> {
    if n.unsigned_abs() > ORDER_CAP as u64 {
        return Err(Error::OrderCapExceeded {
            order: n,
            cap: ORDER_CAP,
        });
    }
    Ok(())
}

pub(crate) fn check_argument(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFiniteArgument(x));
    }
    if !(0.0..=ARGUMENT_CAP).contains(&x) {
        return Err(Error::ArgumentOutOfRange {
            x,
            min: 0.0,
            max: ARGUMENT_CAP,
        });
    }
    Ok(())
}

/// Starting index for Miller's backward recurrence.
///
/// Must sit well past both the highest requested order and the turning
/// point `n ~ x`, where the minimal solution starts to decay.
pub(crate) fn miller_start(n_max: usize, x: f64) -> usize {
    let top = n_max.max(x.ceil() as usize);
    let m = top + 24 + (60.0 * top as f64).sqrt().ceil() as usize;
    m + (m & 1)
}

// Rescaling threshold for the backward recurrence.
pub(crate) const BIG: f64 = 1e250;
