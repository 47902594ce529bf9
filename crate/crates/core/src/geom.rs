//! Small helpers on points stored as `&[f64]` of length `d`.

use crate::error::{Error, Result};

pub fn check_dim(v: &[f64], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.len(),
        });
    }
    if let Some(bad) = v.iter().find(|c| !c.is_finite()) {
        return Err(Error::NonFiniteArgument(*bad));
    }
    Ok(())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Polar angle of the first two components.
pub fn angle(a: &[f64]) -> f64 {
    a[1].atan2(a[0])
}
