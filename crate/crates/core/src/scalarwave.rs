//! Scalar plane waves scattered by a disk.
//!
//! The incident wave is `e^{i<k|x>}`; the scattered part is the outgoing
//! partial-wave series
//!
//! ```text
//! e^s(x, k) = sum_n c_n i^n H_n^{(1)}(k|x|) e^{in(theta_x - theta_k)}
//! ```
//!
//! which matches the Jacobi-Anger expansion of the incident wave term by
//! term. Only `d = 2` obstacles are built; free space works in `d = 2, 3`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::geom;
use crate::specfun::CylinderTable;

/// Points closer than this (relative to the radius) to the boundary count as boundary points.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Tolerance under which the default truncation rule applies as stated.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

/// Frequency, speed and dimension of a stationary scalar problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveContext {
    pub omega: f64,
    pub v: f64,
    pub dim: usize,
}

impl WaveContext {
    pub fn new(omega: f64, v: f64, dim: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wave speed must be positive, got {v}"
            )));
        }
        if !(2..=3).contains(&dim) {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self { omega, v, dim })
    }

    /// `k = omega / v`.
    pub fn wavenumber(&self) -> f64 {
        self.omega / self.v
    }

    /// Same medium and dimension at another frequency.
    pub fn at_omega(&self, omega: f64) -> Result<Self> {
        Self::new(omega, self.v, self.dim)
    }

    /// Wave vector of length `k` pointing along `direction`.
    pub fn wave_vector(&self, direction: &[f64]) -> Result<Vec<f64>> {
        geom::check_dim(direction, self.dim)?;
        let n = geom::norm(direction);
        if n == 0.0 {
            return Err(Error::InvalidParameter("zero direction vector".into()));
        }
        Ok(geom::scale(direction, self.wavenumber() / n))
    }

    fn check_on_shell(&self, kvec: &[f64]) -> Result<()> {
        geom::check_dim(kvec, self.dim)?;
        let k = self.wavenumber();
        let len = geom::norm(kvec);
        if ((len - k) / k).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "wave vector of length {len} is off shell (k = {k})"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

/// Obstacle centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScattererSpec {
    None,
    Disk { radius: f64, bc: BoundaryCondition },
}

impl ScattererSpec {
    pub fn disk(radius: f64, bc: BoundaryCondition) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Self::Disk { radius, bc })
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            Self::None => None,
            Self::Disk { radius, .. } => Some(*radius),
        }
    }

    /// Rejects points strictly inside the obstacle.
    pub fn check_exterior(&self, x: &[f64]) -> Result<()> {
        if let Some(a) = self.radius() {
            let r = geom::norm(x);
            if r < a * (1.0 - BOUNDARY_SLACK) {
                return Err(Error::InteriorPoint {
                    radius: r,
                    obstacle: a,
                });
            }
        }
        Ok(())
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Self::None => Ok(()),
            Self::Disk { radius, .. } => {
                if dim != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "disk obstacles are only available in dimension 2, got {dim}"
                    )));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "disk radius must be positive, got {radius}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Reflection coefficients `c_n`, `n = -n_max..=n_max`, with `c_{-n} = c_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialWaveCoefficients {
    coeffs: Vec<Complex64>,
    ka: f64,
}

impl PartialWaveCoefficients {
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ka(&self) -> f64 {
        self.ka
    }

    pub fn get(&self, n: i32) -> Complex64 {
        self.coeffs[n.unsigned_abs() as usize]
    }

    /// `c_0 ..= c_{n_max}`.
    pub fn non_negative(&self) -> &[Complex64] {
        &self.coeffs
    }
}

/// Plane wave `e^{i<k|x>}`.
pub fn incident(ctx: &WaveContext, x: &[f64], kvec: &[f64]) -> Result<Complex64> {
    geom::check_dim(x, ctx.dim)?;
    geom::check_dim(kvec, ctx.dim)?;
    Ok(Complex64::from_polar(1.0, geom::dot(kvec, x)))
}

/// Number of retained orders: `ceil(ka + 6 (ka)^{1/3} + 12)` at `tol = 1e-12`.
///
/// Smaller tolerances stretch the `6 (ka)^{1/3} + 12` margin by the ratio of
/// requested digits to 12.
pub fn truncation_order(ka: f64, tol: f64) -> Result<usize> {
    if !(ka.is_finite() && ka >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "ka must be non-negative, got {ka}"
        )));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let stretch = (tol.log10() / DEFAULT_TRUNCATION_TOL.log10()).max(1.0);
    let n = ka + (6.0 * ka.cbrt() + 12.0) * stretch;
    Ok(n.ceil() as usize)
}

/// Disk reflection coefficients for orders `0..=n_max`.
pub fn disk_coefficients(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    n_max: usize,
) -> Result<PartialWaveCoefficients> {
    let (radius, bc) = match *scat {
        ScattererSpec::Disk { radius, bc } => (radius, bc),
        ScattererSpec::None => {
            return Err(Error::InvalidParameter(
                "partial-wave coefficients need a disk obstacle".into(),
            ))
        }
    };
    if ctx.dim != 2 {
        return Err(Error::InvalidDimension(ctx.dim));
    }
    scat.validate(ctx.dim)?;
    let ka = ctx.wavenumber() * radius;
    let table = CylinderTable::new(n_max, ka)?;
    let coeffs = (0..=n_max as i32)
        .map(|n| match bc {
            BoundaryCondition::Dirichlet => -table.j(n) / table.h(n),
            BoundaryCondition::Neumann => -table.j_prime(n) / table.h_prime(n),
        })
        .collect();
    Ok(PartialWaveCoefficients { coeffs, ka })
}

/// A scattering configuration with its coefficients precomputed.
#[derive(Debug, Clone)]
pub struct Scattering {
    ctx: WaveContext,
    spec: ScattererSpec,
    coeffs: Option<PartialWaveCoefficients>,
}

impl Scattering {
    /// Uses the default truncation order for the obstacle.
    pub fn new(ctx: WaveContext, spec: ScattererSpec) -> Result<Self> {
        let n_max = match spec.radius() {
            Some(a) => truncation_order(ctx.wavenumber() * a, DEFAULT_TRUNCATION_TOL)?,
            None => 0,
        };
        Self::with_truncation(ctx, spec, n_max)
    }

    pub fn with_truncation(ctx: WaveContext, spec: ScattererSpec, n_max: usize) -> Result<Self> {
        spec.validate(ctx.dim)?;
        let coeffs = match spec {
            ScattererSpec::None => None,
            ScattererSpec::Disk { .. } => Some(disk_coefficients(&ctx, &spec, n_max)?),
        };
        Ok(Self { ctx, spec, coeffs })
    }

    pub fn context(&self) -> &WaveContext {
        &self.ctx
    }

    pub fn spec(&self) -> &ScattererSpec {
        &self.spec
    }

    pub fn coefficients(&self) -> Option<&PartialWaveCoefficients> {
        self.coeffs.as_ref()
    }

    /// Truncation order, `None` in free space.
    pub fn n_max(&self) -> Option<usize> {
        self.coeffs.as_ref().map(|c| c.n_max())
    }

    /// Radial data at `x`, reusable across incidence directions.
    pub fn at_point(&self, x: &[f64]) -> Result<PointField> {
        geom::check_dim(x, self.ctx.dim)?;
        self.spec.check_exterior(x)?;
        let k = self.ctx.wavenumber();
        let modes = match (&self.coeffs, self.spec) {
            (Some(c), ScattererSpec::Disk { radius, bc }) => {
                // c_n F(k|x|) as -(J_n(ka) / |H_n(ka)|) (F(k|x|) / (H_n(ka) / |H_n(ka)|)),
                // primed at ka for Neumann; stays finite where c_n alone underflows
                let ta = CylinderTable::new(c.n_max(), k * radius)?;
                let table = CylinderTable::new(c.n_max(), k * geom::norm(x))?;
                let mut i_pow = Complex64::new(1.0, 0.0);
                (0..=c.n_max() as i32)
                    .map(|n| {
                        let (num, den) = match bc {
                            BoundaryCondition::Dirichlet => (ta.j(n), ta.h(n)),
                            BoundaryCondition::Neumann => (ta.j_prime(n), ta.h_prime(n)),
                        };
                        let s = 1.0 / den.norm();
                        let unit = den * s;
                        let scale = -num * s * i_pow;
                        let m = (
                            scale * (table.h(n) / unit),
                            scale * (table.h_prime(n) * k / unit),
                        );
                        i_pow *= Complex64::i();
                        m
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(PointField {
            x: x.to_vec(),
            theta: if self.ctx.dim == 2 { geom::angle(x) } else { 0.0 },
            k,
            modes,
        })
    }

    pub fn scattered(&self, x: &[f64], kvec: &[f64]) -> Result<Complex64> {
        self.ctx.check_on_shell(kvec)?;
        let p = self.at_point(x)?;
        Ok(p.scattered(&geom::scale(kvec, 1.0 / p.k)))
    }

    pub fn total(&self, x: &[f64], kvec: &[f64]) -> Result<Complex64> {
        self.ctx.check_on_shell(kvec)?;
        let p = self.at_point(x)?;
        let inc = Complex64::from_polar(1.0, geom::dot(kvec, x));
        Ok(inc + p.scattered(&geom::scale(kvec, 1.0 / p.k)))
    }

    /// `d/dr` of the total field along `x / |x|`.
    pub fn total_radial_derivative(&self, x: &[f64], kvec: &[f64]) -> Result<Complex64> {
        self.ctx.check_on_shell(kvec)?;
        let p = self.at_point(x)?;
        Ok(p.total_radial_derivative(&geom::scale(kvec, 1.0 / p.k)))
    }

    /// Scattering amplitude `e^inf(xhat, k)` of the outgoing wave.
    pub fn far_field(&self, xhat: &[f64], kvec: &[f64]) -> Result<Complex64> {
        self.ctx.check_on_shell(kvec)?;
        geom::check_dim(xhat, self.ctx.dim)?;
        let c = self.coeffs.as_ref().ok_or_else(|| {
            Error::InvalidParameter("free space has no scattered far field".into())
        })?;
        let k = self.ctx.wavenumber();
        let delta = geom::angle(xhat) - geom::angle(kvec);
        let sum = mode_sum(c.non_negative(), delta);
        Ok(far_field_prefactor(k) * sum)
    }
}

fn far_field_prefactor(k: f64) -> Complex64 {
    Complex64::from_polar((2.0 / (PI * k)).sqrt(), -FRAC_PI_4)
}

// b_0 + 2 sum_{n >= 1} b_n cos(n delta), the pairing of orders n and -n.
fn mode_sum(b: &[Complex64], delta: f64) -> Complex64 {
    let mut sum = b[0];
    for (n, bn) in b.iter().enumerate().skip(1) {
        sum += bn * (2.0 * (n as f64 * delta).cos());
    }
    sum
}

/// Field data at one exterior point.
#[derive(Debug, Clone)]
pub struct PointField {
    x: Vec<f64>,
    theta: f64,
    k: f64,
    // (c_n i^n H_n(kr), c_n i^n k H_n'(kr)) for n >= 0
    modes: Vec<(Complex64, Complex64)>,
}

impl PointField {
    pub fn point(&self) -> &[f64] {
        &self.x
    }

    /// Incident wave for the unit incidence direction `khat`.
    pub fn incident(&self, khat: &[f64]) -> Complex64 {
        Complex64::from_polar(1.0, self.k * geom::dot(khat, &self.x))
    }

    pub fn scattered(&self, khat: &[f64]) -> Complex64 {
        if self.modes.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let delta = self.theta - geom::angle(khat);
        let mut sum = self.modes[0].0;
        for (n, m) in self.modes.iter().enumerate().skip(1) {
            sum += m.0 * (2.0 * (n as f64 * delta).cos());
        }
        sum
    }

    pub fn total(&self, khat: &[f64]) -> Complex64 {
        self.incident(khat) + self.scattered(khat)
    }

    pub fn total_radial_derivative(&self, khat: &[f64]) -> Complex64 {
        let r = geom::norm(&self.x);
        let cos = if r > 0.0 {
            geom::dot(khat, &self.x) / r
        } else {
            0.0
        };
        let mut d = Complex64::i() * self.k * cos * self.incident(khat);
        if !self.modes.is_empty() {
            let delta = self.theta - geom::angle(khat);
            d += self.modes[0].1;
            for (n, m) in self.modes.iter().enumerate().skip(1) {
                d += m.1 * (2.0 * (n as f64 * delta).cos());
            }
        }
        d
    }
}

/// `e^s(x, k)`; zero in free space.
pub fn scattered(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    x: &[f64],
    kvec: &[f64],
) -> Result<Complex64> {
    Scattering::new(*ctx, *scat)?.scattered(x, kvec)
}

/// `e(x, k) = e_0(x, k) + e^s(x, k)`.
pub fn total(ctx: &WaveContext, scat: &ScattererSpec, x: &[f64], kvec: &[f64]) -> Result<Complex64> {
    Scattering::new(*ctx, *scat)?.total(x, kvec)
}

pub fn far_field(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    xhat: &[f64],
    kvec: &[f64],
) -> Result<Complex64> {
    Scattering::new(*ctx, *scat)?.far_field(xhat, kvec)
}

/// Total cross-section two ways: from `sum |c_n|^2` and from the forward
/// amplitude (optical theorem). They agree whenever the coefficients are
/// unitary.
pub fn cross_sections(coeffs: &PartialWaveCoefficients, k: f64) -> (f64, f64) {
    let c = coeffs.non_negative();
    let from_amplitudes =
        4.0 / k * (c[0].norm_sqr() + 2.0 * c[1..].iter().map(|c| c.norm_sqr()).sum::<f64>());
    let forward = far_field_prefactor(k) * mode_sum(c, 0.0);
    let from_forward = -(8.0 * PI / k).sqrt() * (Complex64::from_polar(1.0, FRAC_PI_4) * forward).re;
    (from_amplitudes, from_forward)
}
