//! Outgoing resolvent kernels `G(omega + i0, x, y)` of `(omega^2 + v^2 Delta)^{-1}`.
//!
//! Free space:
//!
//! ```text
//! d = 2:  G = -(i / (4 v^2)) H_0^{(1)}(k |x - y|)
//! d = 3:  G = -e^{ik|x-y|} / (4 pi v^2 |x - y|)
//! ```
//!
//! Outside a disk the free kernel is completed by the image series
//! `-(i / (4 v^2)) sum_n c_n H_n(k|x|) H_n(k|y|) e^{in(theta_x - theta_y)}`
//! with the same reflection coefficients as plane-wave scattering.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom;
use crate::scalarwave::{
    truncation_order, BoundaryCondition, Scattering, ScattererSpec, WaveContext,
    DEFAULT_TRUNCATION_TOL,
};
use crate::specfun::{bessel_j, hankel1, CylinderTable, ORDER_CAP};

// Largest log10 |Y_n(ka)| allowed in the image series.
const LOG10_RANGE: f64 = 290.0;

/// Free-space kernel; `x` and `y` must differ.
pub fn green_free(ctx: &WaveContext, x: &[f64], y: &[f64]) -> Result<Complex64> {
    geom::check_dim(x, ctx.dim)?;
    geom::check_dim(y, ctx.dim)?;
    let r = geom::norm(&geom::sub(x, y));
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let k = ctx.wavenumber();
    let v2 = ctx.v * ctx.v;
    Ok(match ctx.dim {
        2 => -Complex64::i() / (4.0 * v2) * hankel1(0, k * r)?,
        _ => -Complex64::from_polar(1.0, k * r) / (4.0 * PI * v2 * r),
    })
}

/// `Im G` in free space, including the coincident limit.
pub fn im_green_free(ctx: &WaveContext, x: &[f64], y: &[f64]) -> Result<f64> {
    geom::check_dim(x, ctx.dim)?;
    geom::check_dim(y, ctx.dim)?;
    let r = geom::norm(&geom::sub(x, y));
    let k = ctx.wavenumber();
    let v2 = ctx.v * ctx.v;
    Ok(match ctx.dim {
        2 => -bessel_j(0, k * r)? / (4.0 * v2),
        _ if r == 0.0 => -k / (4.0 * PI * v2),
        _ => -(k * r).sin() / (4.0 * PI * v2 * r),
    })
}

/// Largest order whose `Y_n(z) ~ -(n-1)! (2/z)^n / pi` stays well inside double range.
fn representable_order(z: f64) -> usize {
    let mut log_fact = 0.0;
    for n in 1..=ORDER_CAP as usize {
        if n > 1 {
            log_fact += ((n - 1) as f64).log10();
        }
        if log_fact + n as f64 * (2.0 / z).log10() - PI.log10() > LOG10_RANGE {
            return n - 1;
        }
    }
    ORDER_CAP as usize
}

/// Truncation order of the image series for the pair `(x, y)`.
///
/// Past `n ~ k|x|` the terms fall off like `q^n / n` with `q = a^2 / (|x||y|)`, which
/// is slow for points near the disk; the ka-based rule is extended by that
/// geometric rate and capped where `Y_n(ka)` would leave double range.
/// `None` in free space.
pub fn image_truncation(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    x: &[f64],
    y: &[f64],
) -> Result<Option<usize>> {
    let Some(a) = scat.radius() else {
        return Ok(None);
    };
    geom::check_dim(x, ctx.dim)?;
    geom::check_dim(y, ctx.dim)?;
    let k = ctx.wavenumber();
    let base = truncation_order(k * a, DEFAULT_TRUNCATION_TOL)?;
    let q = a * a / (geom::norm(x) * geom::norm(y));
    let cap = representable_order(k * a).max(base);
    // smallest n with n q^n / (1 - q) below the tolerance; the factor n
    // covers the radial derivative of the series
    let mut geometric = cap;
    if q < 1.0 {
        let tail = |n: usize| n as f64 * q.powi(n as i32) / (1.0 - q);
        let start = (DEFAULT_TRUNCATION_TOL.ln() / q.ln()).ceil();
        if start < cap as f64 {
            geometric = (start as usize..=cap)
                .find(|&n| tail(n) < DEFAULT_TRUNCATION_TOL)
                .unwrap_or(cap);
        }
    }
    Ok(Some(base.max(geometric).min(cap)))
}

/// Kernel with the obstacle's boundary condition, precomputed for reuse.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    scattering: Scattering,
    // pick the image-series order per pair of points
    adaptive: bool,
}

impl GreenKernel {
    /// Image-series order chosen per pair by [`image_truncation`].
    pub fn new(ctx: WaveContext, scat: ScattererSpec) -> Result<Self> {
        Ok(Self {
            scattering: Scattering::new(ctx, scat)?,
            adaptive: true,
        })
    }

    /// Fixed image-series order `n_max` for every pair.
    pub fn with_truncation(ctx: WaveContext, scat: ScattererSpec, n_max: usize) -> Result<Self> {
        Ok(Self {
            scattering: Scattering::with_truncation(ctx, scat, n_max)?,
            adaptive: false,
        })
    }

    pub fn context(&self) -> &WaveContext {
        self.scattering.context()
    }

    /// Stored truncation order; adaptive kernels may extend it per pair.
    pub fn n_max(&self) -> Option<usize> {
        self.scattering.n_max()
    }

    /// Image-series order used for the pair, `None` in free space.
    fn image_order(&self, x: &[f64], y: &[f64]) -> Result<Option<usize>> {
        let Some(stored) = self.scattering.n_max() else {
            return Ok(None);
        };
        if !self.adaptive {
            return Ok(Some(stored));
        }
        let n = image_truncation(self.context(), self.scattering.spec(), x, y)?;
        Ok(n.map(|n| n.max(stored)))
    }

    /// `sum_n c_n F_n(k|x|) H_n(k|y|) e^{in(theta_x - theta_y)}` with `F = H`,
    /// or `F = k H'` for the radial derivative in `x`.
    ///
    /// Evaluated as `(J_n(ka) H_n(k|y|)) (F_n(k|x|) / H_n(ka))` (primed for
    /// Neumann) so that no factor under- or overflows at high order.
    fn image_sum(&self, n_max: usize, x: &[f64], y: &[f64], x_derivative: bool) -> Result<Complex64> {
        let ScattererSpec::Disk { radius, bc } = *self.scattering.spec() else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let k = self.context().wavenumber();
        let ta = CylinderTable::new(n_max, k * radius)?;
        let tx = CylinderTable::new(n_max, k * geom::norm(x))?;
        let ty = CylinderTable::new(n_max, k * geom::norm(y))?;
        let delta = geom::angle(x) - geom::angle(y);
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..=n_max as i32 {
            let (num, den) = match bc {
                BoundaryCondition::Dirichlet => (ta.j(n), ta.h(n)),
                BoundaryCondition::Neumann => (ta.j_prime(n), ta.h_prime(n)),
            };
            let fx = if x_derivative { tx.h_prime(n) * k } else { tx.h(n) };
            let s = 1.0 / den.norm();
            let term = -(ty.h(n) * num) * ((fx * s) / (den * s));
            sum += if n == 0 { term } else { term * (2.0 * (n as f64 * delta).cos()) };
        }
        Ok(sum)
    }

    fn check_points(&self, x: &[f64], y: &[f64]) -> Result<()> {
        let dim = self.context().dim;
        geom::check_dim(x, dim)?;
        geom::check_dim(y, dim)?;
        self.scattering.spec().check_exterior(x)?;
        self.scattering.spec().check_exterior(y)?;
        Ok(())
    }

    /// The image series, zero in free space.
    fn reflected(&self, x: &[f64], y: &[f64]) -> Result<Complex64> {
        let Some(n_max) = self.image_order(x, y)? else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let ctx = self.context();
        Ok(-Complex64::i() / (4.0 * ctx.v * ctx.v) * self.image_sum(n_max, x, y, false)?)
    }

    pub fn value(&self, x: &[f64], y: &[f64]) -> Result<Complex64> {
        self.check_points(x, y)?;
        Ok(green_free(self.context(), x, y)? + self.reflected(x, y)?)
    }

    /// `Im G(x, y)`, finite also for `x = y`.
    pub fn imag(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_points(x, y)?;
        Ok(im_green_free(self.context(), x, y)? + self.reflected(x, y)?.im)
    }

    /// `d/d|x|` of `G(x, y)` along `x / |x|`, for boundary checks (d = 2).
    pub fn radial_derivative_x(&self, x: &[f64], y: &[f64]) -> Result<Complex64> {
        self.check_points(x, y)?;
        let ctx = self.context();
        if ctx.dim != 2 {
            return Err(Error::InvalidDimension(ctx.dim));
        }
        let k = ctx.wavenumber();
        let v2 = ctx.v * ctx.v;
        let diff = geom::sub(x, y);
        let r = geom::norm(&diff);
        if r == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        let rx = geom::norm(x);
        // d/d|x| H_0(k|x - y|) = -k H_1(kr) (x - y).xhat / r
        let dr = geom::dot(&diff, x) / (rx * r);
        let mut d = -Complex64::i() / (4.0 * v2) * (-k * hankel1(1, k * r)? * dr);
        if let Some(n_max) = self.image_order(x, y)? {
            d += -Complex64::i() / (4.0 * v2) * self.image_sum(n_max, x, y, true)?;
        }
        Ok(d)
    }
}

/// Disk kernel in `d = 2`; both points exterior and distinct.
pub fn green_disk(ctx: &WaveContext, scat: &ScattererSpec, x: &[f64], y: &[f64]) -> Result<Complex64> {
    if !matches!(scat, ScattererSpec::Disk { .. }) {
        return Err(Error::InvalidParameter("green_disk needs a disk obstacle".into()));
    }
    if ctx.dim != 2 {
        return Err(Error::InvalidDimension(ctx.dim));
    }
    GreenKernel::new(*ctx, *scat)?.value(x, y)
}

/// `G(omega + i0, x, y)` for free space or a disk.
pub fn green(ctx: &WaveContext, scat: &ScattererSpec, x: &[f64], y: &[f64]) -> Result<Complex64> {
    GreenKernel::new(*ctx, *scat)?.value(x, y)
}

/// `Im G(omega + i0, x, y)`; defined for `x = y`.
pub fn im_green(ctx: &WaveContext, scat: &ScattererSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    GreenKernel::new(*ctx, *scat)?.imag(x, y)
}

/// Default truncation order used for the disk kernel at this frequency.
pub fn default_truncation(ctx: &WaveContext, scat: &ScattererSpec) -> Result<Option<usize>> {
    scat.radius()
        .map(|a| truncation_order(ctx.wavenumber() * a, crate::scalarwave::DEFAULT_TRUNCATION_TOL))
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_two_dimensional() {
        let ctx = WaveContext::new(5.0, 1.0, 2).unwrap();
        let im = green_free(&ctx, &[0.0, 0.0], &[0.6, 0.8]).unwrap().im;
        assert!((im + bessel_j(0, 5.0).unwrap() / 4.0).abs() < 1e-12);
        assert!((im - im_green_free(&ctx, &[0.0, 0.0], &[0.6, 0.8]).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn free_three_dimensional() {
        let ctx = WaveContext::new(PI, 2.0, 3).unwrap();
        // k r = pi with k = pi / 2, r = 2
        let g = green_free(&ctx, &[0.0, 0.0, 0.0], &[0.0, 2.0, 0.0]).unwrap();
        assert!(g.im.abs() < 1e-13);
        let lim = im_green_free(&ctx, &[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(lim, -(PI / 2.0) / (4.0 * PI * 4.0));
    }

    #[test]
    fn coincident_points() {
        let ctx = WaveContext::new(1.0, 1.0, 2).unwrap();
        assert_eq!(green_free(&ctx, &[1.0, 0.0], &[1.0, 0.0]), Err(Error::CoincidentPoints));
        assert_eq!(im_green_free(&ctx, &[1.0, 0.0], &[1.0, 0.0]).unwrap(), -0.25);
    }

    #[test]
    fn disk_rejects_interior_and_wrong_dimension() {
        let ctx = WaveContext::new(2.0, 1.0, 2).unwrap();
        let scat = ScattererSpec::disk(1.0, BoundaryCondition::Neumann).unwrap();
        assert!(matches!(
            green_disk(&ctx, &scat, &[0.2, 0.0], &[3.0, 0.0]),
            Err(Error::InteriorPoint { .. })
        ));
        let ctx3 = WaveContext::new(2.0, 1.0, 3).unwrap();
        assert!(green_disk(&ctx3, &scat, &[2.0, 0.0, 0.0], &[3.0, 0.0, 0.0]).is_err());
        assert!(green_disk(&ctx, &ScattererSpec::None, &[2.0, 0.0], &[3.0, 0.0]).is_err());
    }
}
