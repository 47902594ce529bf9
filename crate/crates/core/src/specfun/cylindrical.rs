use num_complex::Complex64;
use std::f64::consts::PI;

use super::{check_argument, check_order, miller_start, BIG};
use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Below this argument J_n comes from the ascending series.
const SERIES_LIMIT: f64 = 1.0;
// From this argument on, Y_0 and Y_1 come from Hankel's asymptotic expansion.
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// Ascending power series for `J_n(x)`, suitable for small `x`.
fn j_series(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let log_lead = n as f64 * half.ln() - ln_factorial(n);
    let mut term = log_lead.exp();
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Miller backward recurrence normalized by `J_0 + 2 sum J_{2k} = 1`.
///
/// Returns `J_0 ..= J_m` with `m` at least `n_max`; the entries beyond
/// `n_max` are kept because the Neumann series for `Y_0`, `Y_1` use them.
fn j_miller(n_max: usize, x: f64) -> Vec<f64> {
    debug_assert!(x > 0.0);
    let m = miller_start(n_max, x);
    let mut f = vec![0.0; m + 2];
    f[m] = 1e-300;
    let mut norm = if m % 2 == 0 { 2.0 * f[m] } else { 0.0 };
    let two_over_x = 2.0 / x;
    for k in (1..=m).rev() {
        let prev = k as f64 * two_over_x * f[k] - f[k + 1];
        f[k - 1] = prev;
        if k - 1 > 0 && (k - 1) % 2 == 0 {
            norm += 2.0 * prev;
        }
        if prev.abs() > BIG {
            for v in f[k - 1..].iter_mut() {
                *v /= BIG;
            }
            norm /= BIG;
        }
    }
    norm += f[0];
    f.truncate(m + 1);
    for v in f.iter_mut() {
        *v /= norm;
    }
    f
}

/// `J_0 ..= J_{n_max}` without order checks.
fn j_seq_raw(n_max: usize, x: f64) -> Vec<f64> {
    if x < SERIES_LIMIT {
        (0..=n_max).map(|n| j_series(n, x)).collect()
    } else {
        let mut f = j_miller(n_max, x);
        f.truncate(n_max + 1);
        f
    }
}

/// Hankel's asymptotic expansion for large `x`, returning `(J_nu, Y_nu)`.
fn hankel_asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    for k in 1..200usize {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() > term.abs() && k > 2 {
            break;
        }
        term = next;
        // t_1, t_3, ... feed Q with alternating signs, t_2, t_4, ... feed P.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let phase = (0.5 * nu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    let amp = (2.0 / (PI * x)).sqrt();
    (
        amp * (p * cos_chi - q * sin_chi),
        amp * (p * sin_chi + q * cos_chi),
    )
}

fn y01(x: f64) -> (f64, f64) {
    if x >= ASYMPTOTIC_LIMIT {
        return (hankel_asymptotic(0.0, x).1, hankel_asymptotic(1.0, x).1);
    }
    // Neumann series in terms of the J sequence.
    let j = j_miller(1, x);
    let m = j.len() - 1;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k < m {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = 2.0 / PI * (log_term * j[0] + 2.0 * s0);
    let y1 = -2.0 / PI * (j[0] / x - log_term * j[1] + s1);
    (y0, y1)
}

/// `Y_0 ..= Y_{n_max}` by forward recurrence, which is stable for `Y`.
fn y_seq_raw(n_max: usize, x: f64) -> Vec<f64> {
    let (y0, y1) = y01(x);
    let mut y = Vec::with_capacity(n_max + 1);
    y.push(y0);
    if n_max >= 1 {
        y.push(y1);
    }
    for n in 1..n_max {
        let next = 2.0 * n as f64 / x * y[n] - y[n - 1];
        y.push(next);
    }
    y
}

fn neg_sign(n: i32) -> f64 {
    if n < 0 && n % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

/// `J_0(x) ..= J_{n_max}(x)`.
pub fn bessel_j_seq(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order(n_max as i64)?;
    check_argument(x)?;
    Ok(j_seq_raw(n_max, x))
}

/// `Y_0(x) ..= Y_{n_max}(x)`. Entries overflow to `-inf` when `n >> x`.
pub fn bessel_y_seq(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_order(n_max as i64)?;
    check_argument(x)?;
    if x == 0.0 {
        return Err(Error::SingularArgument);
    }
    Ok(y_seq_raw(n_max, x))
}

/// Bessel function of the first kind `J_n(x)`, `J_{-n} = (-1)^n J_n`.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    check_order(n as i64)?;
    check_argument(x)?;
    let m = n.unsigned_abs() as usize;
    Ok(neg_sign(n) * j_seq_raw(m, x)[m])
}

/// Bessel function of the second kind `Y_n(x)`.
pub fn bessel_y(n: i32, x: f64) -> Result<f64> {
    check_order(n as i64)?;
    check_argument(x)?;
    if x == 0.0 {
        return Err(Error::SingularArgument);
    }
    let m = n.unsigned_abs() as usize;
    Ok(neg_sign(n) * y_seq_raw(m, x)[m])
}

/// Hankel function of the first kind `H_n^{(1)}(x) = J_n(x) + i Y_n(x)`.
pub fn hankel1(n: i32, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j(n, x)?, bessel_y(n, x)?))
}

/// `J_n'(x)`.
pub fn bessel_j_prime(n: i32, x: f64) -> Result<f64> {
    check_order(n as i64)?;
    check_argument(x)?;
    let m = n.unsigned_abs() as usize;
    let j = j_seq_raw(m + 1, x);
    Ok(neg_sign(n) * derivative(&j, m))
}

/// `Y_n'(x)`.
pub fn bessel_y_prime(n: i32, x: f64) -> Result<f64> {
    check_order(n as i64)?;
    check_argument(x)?;
    if x == 0.0 {
        return Err(Error::SingularArgument);
    }
    let m = n.unsigned_abs() as usize;
    let y = y_seq_raw(m + 1, x);
    Ok(neg_sign(n) * derivative(&y, m))
}

/// `H_n^{(1)'}(x)`.
pub fn hankel1_prime(n: i32, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j_prime(n, x)?, bessel_y_prime(n, x)?))
}

// F_n' = (F_{n-1} - F_{n+1}) / 2, with F_0' = -F_1.
fn derivative(f: &[f64], n: usize) -> f64 {
    if n == 0 {
        -f[1]
    } else {
        0.5 * (f[n - 1] - f[n + 1])
    }
}

/// Cylinder functions of orders `0..=n_max` (and one extra for derivatives)
/// tabulated at a single positive argument.
#[derive(Debug, Clone)]
pub struct CylinderTable {
    x: f64,
    n_max: usize,
    j: Vec<f64>,
    y: Vec<f64>,
}

impl CylinderTable {
    pub fn new(n_max: usize, x: f64) -> Result<Self> {
        check_order(n_max as i64)?;
        check_argument(x)?;
        if x == 0.0 {
            return Err(Error::SingularArgument);
        }
        Ok(Self {
            x,
            n_max,
            j: j_seq_raw(n_max + 1, x),
            y: y_seq_raw(n_max + 1, x),
        })
    }

    pub fn argument(&self) -> f64 {
        self.x
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn index(&self, n: i32) -> (usize, f64) {
        let m = n.unsigned_abs() as usize;
        assert!(m <= self.n_max, "order {n} outside table of size {}", self.n_max);
        (m, neg_sign(n))
    }

    pub fn j(&self, n: i32) -> f64 {
        let (m, s) = self.index(n);
        s * self.j[m]
    }

    pub fn y(&self, n: i32) -> f64 {
        let (m, s) = self.index(n);
        s * self.y[m]
    }

    pub fn h(&self, n: i32) -> Complex64 {
        Complex64::new(self.j(n), self.y(n))
    }

    pub fn j_prime(&self, n: i32) -> f64 {
        let (m, s) = self.index(n);
        s * derivative(&self.j, m)
    }

    pub fn y_prime(&self, n: i32) -> f64 {
        let (m, s) = self.index(n);
        s * derivative(&self.y, m)
    }

    pub fn h_prime(&self, n: i32) -> Complex64 {
        Complex64::new(self.j_prime(n), self.y_prime(n))
    }
}

/// Leading-order large-argument form of `H_n^{(1)}`.
#[cfg(test)]
fn hankel1_leading(n: i32, x: f64) -> Complex64 {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let phase = x - n as f64 * FRAC_PI_2 - FRAC_PI_4;
    Complex64::from_polar((2.0 / (PI * x)).sqrt(), phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: plain power series, good to ~1e-15 for x < 5.
    fn j0_power(x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..60 {
            term *= -(x * x / 4.0) / (k * k) as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn first_zero_of_j0() {
        // bisection on the power series
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if j0_power(lo) * j0_power(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 2.404825557695773).abs() < 1e-14);
        assert!(bessel_j(0, 2.404825557695773).unwrap().abs() < 1e-12);
        assert!(bessel_j(0, root).unwrap().abs() < 1e-12);
    }

    #[test]
    fn agrees_with_power_series() {
        for i in 1..100 {
            let x = 0.05 * i as f64;
            let got = bessel_j(0, x).unwrap();
            assert!((got - j0_power(x)).abs() < 2e-15, "x={x}");
        }
    }

    #[test]
    fn reference_values() {
        // A&S tables
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6, 0.088_256_964_215_677),
            (1, 1.0, 0.440_050_585_744_933_5, -0.781_212_821_300_288_7),
            (0, 10.0, -0.245_935_764_451_348_3, 0.055_671_167_283_599_4),
            (5, 10.0, -0.234_061_528_186_793_6, 0.135_403_047_689_362_4),
            (0, 30.0, -0.086_367_983_581_040_2, -0.117_295_731_686_664_09),
        ];
        for (n, x, j, y) in cases {
            let gj = bessel_j(n, x).unwrap();
            let gy = bessel_y(n, x).unwrap();
            assert!((gj - j).abs() < 1e-14, "J_{n}({x}) = {gj}, want {j}");
            assert!((gy - y).abs() < 1e-14, "Y_{n}({x}) = {gy}, want {y}");
        }
    }

    #[test]
    fn hankel_large_argument() {
        let x = 50.0;
        let h = hankel1(0, x).unwrap();
        // two-term Hankel expansion: H_0 ~ sqrt(2/(pi x)) e^{i(x - pi/4)} (1 - i/(8x))
        let lead = hankel1_leading(0, x) * Complex64::new(1.0, -1.0 / (8.0 * x));
        assert!((h - lead).norm() / lead.norm() < 1e-3);
        assert!((h - lead).norm() / lead.norm() < 1e-4);
    }

    #[test]
    fn wronskian_at_one() {
        let x = 1.0;
        let w = bessel_j(0, x).unwrap() * bessel_y_prime(0, x).unwrap()
            - bessel_j_prime(0, x).unwrap() * bessel_y(0, x).unwrap();
        assert!((w - 2.0 / (PI * x)).abs() < 1e-15);
    }

    #[test]
    fn hankel_prime_matches_finite_difference() {
        let x = 3.7;
        let h = 1e-5;
        let fd = (hankel1(1, x + h).unwrap() - hankel1(1, x - h).unwrap()) / (2.0 * h);
        let d = hankel1_prime(1, x).unwrap();
        assert!((fd - d).norm() < 1e-8);
    }

    #[test]
    fn negative_orders() {
        for n in 1..10 {
            let x = 2.5;
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(bessel_j(-n, x).unwrap(), s * bessel_j(n, x).unwrap());
            assert_eq!(bessel_y(-n, x).unwrap(), s * bessel_y(n, x).unwrap());
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(
            bessel_j(513, 1.0),
            Err(Error::OrderCapExceeded { .. })
        ));
        assert!(matches!(
            bessel_j(0, f64::NAN),
            Err(Error::NonFiniteArgument(_))
        ));
        assert_eq!(bessel_y(0, 0.0), Err(Error::SingularArgument));
        assert_eq!(hankel1(2, 0.0), Err(Error::SingularArgument));
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_j(0, 1.0e5 + 1.0).is_err());
    }

    #[test]
    fn table_matches_single_calls() {
        let t = CylinderTable::new(20, 7.3).unwrap();
        for n in -20..=20 {
            assert!((t.j(n) - bessel_j(n, 7.3).unwrap()).abs() <= 1e-15 * t.j(n).abs());
            assert!((t.y(n) - bessel_y(n, 7.3).unwrap()).abs() <= 1e-15 * t.y(n).abs());
            assert!((t.h_prime(n) - hankel1_prime(n, 7.3).unwrap()).norm() <= 1e-13 * t.h_prime(n).norm());
        }
    }
}
