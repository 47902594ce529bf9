use num_complex::Complex64;

use super::{check_argument, check_order, miller_start, BIG};
use crate::error::{Error, Result};

/// `j_0 ..= j_{n_max}` by backward recurrence, normalized against the
/// closed forms of `j_0` or `j_1`, whichever is larger in magnitude.
fn j_seq_raw(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let m = miller_start(n_max.max(1), x);
    let mut f = vec![0.0; m + 2];
    f[m] = 1e-300;
    for k in (1..=m).rev() {
        let prev = (2 * k + 1) as f64 / x * f[k] - f[k + 1];
        f[k - 1] = prev;
        if prev.abs() > BIG {
            for v in f[k - 1..].iter_mut() {
                *v /= BIG;
            }
        }
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    // closed-form j_1 cancels badly for small x, where j_0 ~ 1 anyway
    let j1 = s / (x * x) - c / x;
    let scale = if x < 1.0 || j0.abs() >= j1.abs() {
        j0 / f[0]
    } else {
        j1 / f[1]
    };
    f.truncate(n_max + 1);
    for v in f.iter_mut() {
        *v *= scale;
    }
    f
}

/// `y_0 ..= y_{n_max}` by forward recurrence.
fn y_seq_raw(n_max: usize, x: f64) -> Vec<f64> {
    let (s, c) = x.sin_cos();
    let mut y = Vec::with_capacity(n_max + 1);
    y.push(-c / x);
    if n_max >= 1 {
        y.push(-c / (x * x) - s / x);
    }
    for n in 1..n_max {
        let next = (2 * n + 1) as f64 / x * y[n] - y[n - 1];
        y.push(next);
    }
    y
}

// f_n' = f_{n-1} - (n+1)/x f_n, with f_0' = -f_1.
fn derivative(f: &[f64], n: usize, x: f64) -> f64 {
    if n == 0 {
        -f[1]
    } else {
        f[n - 1] - (n + 1) as f64 / x * f[n]
    }
}

pub fn spherical_j_seq(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order(n_max as i64)?;
    check_argument(x)?;
    Ok(j_seq_raw(n_max, x))
}

pub fn spherical_y_seq(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order(n_max as i64)?;
    check_argument(x)?;
    if x == 0.0 {
        return Err(Error::SingularArgument);
    }
    Ok(y_seq_raw(n_max, x))
}

/// Spherical Bessel function `j_n(x)`.
pub fn spherical_j(n: u32, x: f64) -> Result<f64> {
    Ok(spherical_j_seq(n as usize, x)?[n as usize])
}

/// Spherical Bessel function of the second kind `y_n(x)`.
pub fn spherical_y(n: u32, x: f64) -> Result<f64> {
    Ok(spherical_y_seq(n as usize, x)?[n as usize])
}

/// Spherical Hankel function `h_n^{(1)}(x) = j_n(x) + i y_n(x)`.
pub fn spherical_h1(n: u32, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(spherical_j(n, x)?, spherical_y(n, x)?))
}

pub fn spherical_j_prime(n: u32, x: f64) -> Result<f64> {
    check_order(n as i64)?;
    check_argument(x)?;
    let n = n as usize;
    if x == 0.0 {
        return Ok(if n == 1 { 1.0 / 3.0 } else { 0.0 });
    }
    Ok(derivative(&j_seq_raw(n + 1, x), n, x))
}

pub fn spherical_y_prime(n: u32, x: f64) -> Result<f64> {
    check_order(n as i64)?;
    check_argument(x)?;
    if x == 0.0 {
        return Err(Error::SingularArgument);
    }
    let n = n as usize;
    Ok(derivative(&y_seq_raw(n + 1, x), n, x))
}

pub fn spherical_h1_prime(n: u32, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(
        spherical_j_prime(n, x)?,
        spherical_y_prime(n, x)?,
    ))
}

/// Spherical Bessel functions of orders `0..=n_max` at one argument.
///
/// `x = 0` is accepted; the `y`/`h` accessors then return non-finite values.
#[derive(Debug, Clone)]
pub struct SphericalTable {
    x: f64,
    j: Vec<f64>,
    y: Vec<f64>,
}

impl SphericalTable {
    pub fn new(n_max: usize, x: f64) -> Result<Self> {
        check_order(n_max as i64)?;
        check_argument(x)?;
        let y = if x == 0.0 {
            vec![f64::NEG_INFINITY; n_max + 2]
        } else {
            y_seq_raw(n_max + 1, x)
        };
        Ok(Self {
            x,
            j: j_seq_raw(n_max + 1, x),
            y,
        })
    }

    pub fn j(&self, n: usize) -> f64 {
        self.j[n]
    }

    pub fn y(&self, n: usize) -> f64 {
        self.y[n]
    }

    pub fn h(&self, n: usize) -> Complex64 {
        Complex64::new(self.j[n], self.y[n])
    }

    pub fn j_prime(&self, n: usize) -> f64 {
        if self.x == 0.0 {
            return if n == 1 { 1.0 / 3.0 } else { 0.0 };
        }
        derivative(&self.j, n, self.x)
    }
}
