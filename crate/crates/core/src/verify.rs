//! Direction-averaged correlations, spectral projector kernels and the
//! residual reports that compare them with the Green's function.
//!
//! Scalar identity checked here:
//!
//! ```text
//! C_omega(x, y) = -gamma_d v^d omega^{2-d} Im G(omega + i0, x, y)
//! ```
//!
//! with `C_omega = (1/sigma_{d-1}) int_{|khat|=1} e(x, k) conj(e(y, k)) dsigma`.
//! The elastic version weighs the P and S spheres by `v_P^{-d}` and `v_S^{-d}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::elastic::{self, ElasticMedium};
use crate::error::{Error, Result};
use crate::geom;
use crate::greenfn::{image_truncation, GreenKernel};
use crate::scalarwave::{truncation_order, Scattering, ScattererSpec, WaveContext, DEFAULT_TRUNCATION_TOL};
use crate::sphquad::{circle_rule, gauss_legendre_interval, sphere_rule, SphereRule};

/// Gauss-Legendre nodes used for integrals over a frequency window.
pub const DEFAULT_WINDOW_NODES: usize = 64;

/// Relative step of the central difference in `omega_+`.
pub const FD_RELATIVE_STEP: f64 = 1e-4;

/// Lower window edge of the derivative check, as a fraction of `omega`.
pub const FD_WINDOW_LOWER: f64 = 0.9;

/// Normalization floor of relative residuals.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Volume of the unit sphere `S^{dm1}` in `R^{dm1 + 1}`.
pub fn sigma(dm1: usize) -> Result<f64> {
    match dm1 {
        0 => Ok(2.0),
        1 => Ok(2.0 * PI),
        2 => Ok(4.0 * PI),
        _ => Err(Error::InvalidDimension(dm1 + 1)),
    }
}

/// `gamma_d = 2^{d+1} pi^{d-1} / sigma_{d-1}`.
pub fn gamma(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    Ok(2f64.powi(d as i32 + 1) * PI.powi(d as i32 - 1) / sigma(d - 1)?)
}

/// Frequency window `[omega_-, omega_+]` inside `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWindow {
    pub minus: f64,
    pub plus: f64,
}

impl SpectralWindow {
    pub fn new(minus: f64, plus: f64) -> Result<Self> {
        if !(minus.is_finite() && plus.is_finite() && minus > 0.0 && plus >= minus) {
            return Err(Error::InvalidWindow { minus, plus });
        }
        Ok(Self { minus, plus })
    }

    pub fn is_empty(&self) -> bool {
        self.minus == self.plus
    }
}

/// Complex number serialized as `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(c: ComplexValue) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// One side of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Scalar(ComplexValue),
    /// Row-major square matrix.
    Tensor(Vec<Vec<ComplexValue>>),
}

impl Quantity {
    pub fn scalar(c: Complex64) -> Self {
        Self::Scalar(c.into())
    }

    pub fn tensor(m: &DMatrix<Complex64>) -> Self {
        Self::Tensor(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
                .collect(),
        )
    }

    fn entries(&self) -> Vec<Complex64> {
        match self {
            Self::Scalar(c) => vec![(*c).into()],
            Self::Tensor(rows) => rows.iter().flatten().map(|&c| c.into()).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `(abs, rel)` residual: largest entry of `|lhs - rhs|`, normalized by the
/// larger of the two largest entries.
pub fn residual(lhs: &Quantity, rhs: &Quantity) -> Result<(f64, f64)> {
    let (a, b) = (lhs.entries(), rhs.entries());
    if a.len() != b.len() || std::mem::discriminant(lhs) != std::mem::discriminant(rhs) {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let abs = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let scale = lhs.max_abs().max(rhs.max_abs()).max(RESIDUAL_FLOOR);
    Ok((abs, abs / scale))
}

/// Comparison of two evaluations of the same quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub label: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub params: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn new(label: impl Into<String>, lhs: Quantity, rhs: Quantity) -> Result<Self> {
        let (abs_residual, rel_residual) = residual(&lhs, &rhs)?;
        Ok(Self {
            label: label.into(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Residuals recomputed from the stored sides.
    pub fn recompute(&self) -> Result<(f64, f64)> {
        residual(&self.lhs, &self.rhs)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.rel_residual < tol
    }
}

/// Overrides of the automatic truncation and quadrature choices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    /// Partial-wave truncation order of the obstacle.
    pub n_max: Option<usize>,
    /// Node counts: `[n]` on the circle, `[n_polar, n_azimuth]` on the sphere.
    pub quad: Option<Vec<usize>>,
}

// Without an override the truncation follows the image series of the pair,
// so both sides of the identity use the same, pair-resolved order.
fn build_scattering(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    disc: &Discretization,
    x: &[f64],
    y: &[f64],
) -> Result<Scattering> {
    match disc.n_max.or(image_truncation(ctx, scat, x, y)?) {
        Some(n) => Scattering::with_truncation(*ctx, *scat, n),
        None => Scattering::new(*ctx, *scat),
    }
}

/// Angular bandwidth of `e(x, .) conj(e(y, .))` as a function of the direction.
///
/// In free space the product is `e^{ik.(x-y)}`; with an obstacle each factor
/// carries both its partial-wave series and the incident wave at `|x|`.
pub fn correlation_bandwidth(scattering: &Scattering, x: &[f64], y: &[f64]) -> Result<usize> {
    let k = scattering.context().wavenumber();
    match scattering.n_max() {
        None => truncation_order(k * geom::norm(&geom::sub(x, y)), DEFAULT_TRUNCATION_TOL),
        Some(n) => {
            let reach = geom::norm(x).max(geom::norm(y));
            Ok(n.max(truncation_order(k * reach, DEFAULT_TRUNCATION_TOL)?))
        }
    }
}

/// Rule with explicit node counts.
pub fn rule_from_sizes(dim: usize, sizes: &[usize]) -> Result<SphereRule> {
    match (dim, sizes) {
        (2, [n]) => circle_rule(*n),
        (3, [p, a]) => sphere_rule(*p, *a),
        (2 | 3, _) => Err(Error::InvalidParameter(format!(
            "dimension {dim} needs {} quadrature sizes, got {}",
            dim - 1,
            sizes.len()
        ))),
        (d, _) => Err(Error::InvalidDimension(d)),
    }
}

/// Direction rule resolving the correlation between `x` and `y`.
pub fn correlation_rule(scattering: &Scattering, x: &[f64], y: &[f64]) -> Result<SphereRule> {
    SphereRule::for_bandwidth(scattering.context().dim, correlation_bandwidth(scattering, x, y)?)
}

fn correlation_with(scattering: &Scattering, x: &[f64], y: &[f64], rule: &SphereRule) -> Result<Complex64> {
    let dim = scattering.context().dim;
    if rule.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rule.dim(),
        });
    }
    let px = scattering.at_point(x)?;
    let py = scattering.at_point(y)?;
    let sum: Complex64 = rule.integrate(|khat| px.total(khat) * py.total(khat).conj());
    Ok(sum / rule.total_weight())
}

/// `C_omega(x, y)` by quadrature of total fields over the direction sphere.
pub fn correlation_scalar(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    x: &[f64],
    y: &[f64],
    rule: &SphereRule,
) -> Result<Complex64> {
    correlation_with(&Scattering::new(*ctx, *scat)?, x, y, rule)
}

/// `C_omega(x, y)` with the automatic truncation and rule.
pub fn correlation_scalar_auto(ctx: &WaveContext, scat: &ScattererSpec, x: &[f64], y: &[f64]) -> Result<Complex64> {
    check_pair(ctx, scat, x, y)?;
    let s = build_scattering(ctx, scat, &Discretization::default(), x, y)?;
    let rule = correlation_rule(&s, x, y)?;
    correlation_with(&s, x, y, &rule)
}

/// `-gamma_d v^d omega^{2-d}`, the factor turning `Im G` into `C_omega`.
fn theorem1_factor(ctx: &WaveContext) -> Result<f64> {
    let d = ctx.dim as i32;
    Ok(-gamma(ctx.dim)? * ctx.v.powi(d) * ctx.omega.powi(2 - d))
}

/// Theorem-1 residual with the automatic truncation and quadrature.
pub fn theorem1_residual(ctx: &WaveContext, scat: &ScattererSpec, x: &[f64], y: &[f64]) -> Result<VerificationReport> {
    theorem1_residual_with(ctx, scat, x, y, &Discretization::default())
}

pub fn theorem1_residual_with(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    x: &[f64],
    y: &[f64],
    disc: &Discretization,
) -> Result<VerificationReport> {
    check_pair(ctx, scat, x, y)?;
    let scattering = build_scattering(ctx, scat, disc, x, y)?;
    let rule = match &disc.quad {
        Some(sizes) => rule_from_sizes(ctx.dim, sizes)?,
        None => correlation_rule(&scattering, x, y)?,
    };
    let lhs = correlation_with(&scattering, x, y, &rule)?;
    let kernel = match scattering.n_max() {
        Some(n) => GreenKernel::with_truncation(*ctx, *scat, n)?,
        None => GreenKernel::new(*ctx, *scat)?,
    };
    let rhs = theorem1_factor(ctx)? * kernel.imag(x, y)?;
    let report = VerificationReport::new("theorem1", Quantity::scalar(lhs), Quantity::scalar(rhs.into()))?;
    Ok(with_scalar_params(report, ctx, scat, x, y)
        .with_param("n_max", scattering.n_max().unwrap_or(0))
        .with_param("quad", format_sizes(rule.sizes())))
}

fn format_point(x: &[f64]) -> String {
    x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn format_sizes(s: &[usize]) -> String {
    s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn with_scalar_params(
    report: VerificationReport,
    ctx: &WaveContext,
    scat: &ScattererSpec,
    x: &[f64],
    y: &[f64],
) -> VerificationReport {
    let report = report
        .with_param("dim", ctx.dim)
        .with_param("omega", ctx.omega)
        .with_param("v", ctx.v)
        .with_param("x", format_point(x))
        .with_param("y", format_point(y));
    match scat {
        ScattererSpec::None => report.with_param("obstacle", "none"),
        ScattererSpec::Disk { radius, bc } => report
            .with_param("obstacle", "disk")
            .with_param("radius", radius)
            .with_param("bc", format!("{bc:?}").to_lowercase()),
    }
}

fn check_pair(ctx: &WaveContext, scat: &ScattererSpec, x: &[f64], y: &[f64]) -> Result<()> {
    geom::check_dim(x, ctx.dim)?;
    geom::check_dim(y, ctx.dim)?;
    scat.check_exterior(x)?;
    scat.check_exterior(y)
}

/// Spectral projector kernel through plane waves:
/// `(2 pi)^{-d} int_{k_-}^{k_+} k^{d-1} sigma_{d-1} C_{vk}(x, y) dk`.
pub fn projector_kernel_scatt(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    window: &SpectralWindow,
    x: &[f64],
    y: &[f64],
    radial_nodes: usize,
) -> Result<Complex64> {
    check_pair(ctx, scat, x, y)?;
    if window.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let d = ctx.dim;
    let (nodes, weights) = gauss_legendre_interval(radial_nodes, window.minus / ctx.v, window.plus / ctx.v);
    let mut sum = Complex64::new(0.0, 0.0);
    for (&k, &w) in nodes.iter().zip(&weights) {
        let c = correlation_scalar_auto(&ctx.at_omega(ctx.v * k)?, scat, x, y)?;
        sum += c * (w * k.powi(d as i32 - 1));
    }
    Ok(sum * sigma(d - 1)? / (2.0 * PI).powi(d as i32))
}

/// Spectral projector kernel through Stone's formula:
/// `-(2/pi) int omega Im G(omega + i0, x, y) d omega`.
pub fn projector_kernel_stone(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    window: &SpectralWindow,
    x: &[f64],
    y: &[f64],
    omega_nodes: usize,
) -> Result<Complex64> {
    check_pair(ctx, scat, x, y)?;
    if window.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (nodes, weights) = gauss_legendre_interval(omega_nodes, window.minus, window.plus);
    let mut sum = 0.0;
    for (&om, &w) in nodes.iter().zip(&weights) {
        sum += w * om * GreenKernel::new(ctx.at_omega(om)?, *scat)?.imag(x, y)?;
    }
    Ok(Complex64::from(-2.0 / PI * sum))
}

/// Both routes to the projector kernel; `lhs` is Stone, `rhs` plane waves.
pub fn projector_routes(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    window: &SpectralWindow,
    x: &[f64],
    y: &[f64],
    nodes: usize,
) -> Result<VerificationReport> {
    let stone = projector_kernel_stone(ctx, scat, window, x, y, nodes)?;
    let scatt = projector_kernel_scatt(ctx, scat, window, x, y, nodes)?;
    let report = VerificationReport::new("projector_routes", Quantity::scalar(stone), Quantity::scalar(scatt))?;
    Ok(with_scalar_params(report, ctx, scat, x, y)
        .with_param("omega_minus", window.minus)
        .with_param("omega_plus", window.plus)
        .with_param("nodes", nodes))
}

/// Finite-difference derivative of the projector kernel against both closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    /// FD versus `-(2 omega / pi) Im G`.
    pub stone: VerificationReport,
    /// FD versus `(2 pi)^{-d} omega^{d-1} sigma_{d-1} v^{-d} C_omega`.
    pub scattering: VerificationReport,
    /// Relative difference of the two closed forms.
    pub closed_forms_agreement: f64,
}

/// Central difference in `omega_+` at `omega_+ = ctx.omega` with the lower
/// edge fixed at `FD_WINDOW_LOWER * ctx.omega`.
pub fn derivative_identity_check(
    ctx: &WaveContext,
    scat: &ScattererSpec,
    x: &[f64],
    y: &[f64],
) -> Result<DerivativeCheck> {
    let omega = ctx.omega;
    let h = FD_RELATIVE_STEP * omega;
    let lower = FD_WINDOW_LOWER * omega;
    let up = projector_kernel_scatt(ctx, scat, &SpectralWindow::new(lower, omega + h)?, x, y, DEFAULT_WINDOW_NODES)?;
    let down = projector_kernel_scatt(ctx, scat, &SpectralWindow::new(lower, omega - h)?, x, y, DEFAULT_WINDOW_NODES)?;
    let fd = (up - down) / (2.0 * h);

    let d = ctx.dim as i32;
    let stone = Complex64::from(-2.0 * omega / PI * GreenKernel::new(*ctx, *scat)?.imag(x, y)?);
    let corr = correlation_scalar_auto(ctx, scat, x, y)?;
    let scatt = corr * (omega.powi(d - 1) * sigma(ctx.dim - 1)? / ((2.0 * PI).powi(d) * ctx.v.powi(d)));

    let tag = |r: VerificationReport| {
        with_scalar_params(r, ctx, scat, x, y)
            .with_param("fd_step", h)
            .with_param("omega_minus", lower)
    };
    let stone_report = tag(VerificationReport::new("derivative_stone", Quantity::scalar(fd), Quantity::scalar(stone))?);
    let scatt_report = tag(VerificationReport::new("derivative_scattering", Quantity::scalar(fd), Quantity::scalar(scatt))?);
    let (_, agreement) = residual(&Quantity::scalar(stone), &Quantity::scalar(scatt))?;
    Ok(DerivativeCheck {
        stone: stone_report,
        scattering: scatt_report,
        closed_forms_agreement: agreement,
    })
}

fn with_elastic_params(report: VerificationReport, omega: f64, m: &ElasticMedium, x: &[f64], y: &[f64]) -> VerificationReport {
    report
        .with_param("dim", x.len())
        .with_param("omega", omega)
        .with_param("rho", m.rho)
        .with_param("lambda", m.lambda)
        .with_param("mu", m.mu)
        .with_param("x", format_point(x))
        .with_param("y", format_point(y))
}

/// Elastic identity: `Im G` against `-gamma_d^{-1} omega^{d-2}` times the
/// weighted P and S sphere integrals, by quadrature.
pub fn theorem2_residual(omega: f64, medium: &ElasticMedium, x: &[f64], y: &[f64]) -> Result<VerificationReport> {
    let rule = elastic::default_rule(omega, medium, x, y)?;
    theorem2_residual_with(omega, medium, x, y, &rule)
}

pub fn theorem2_residual_with(
    omega: f64,
    medium: &ElasticMedium,
    x: &[f64],
    y: &[f64],
    rule: &SphereRule,
) -> Result<VerificationReport> {
    let d = x.len();
    let im = elastic::im_green_tensor_free(omega, medium, x, y)?;
    let corr = elastic::correlation_tensor_free(omega, medium, x, y, rule)?;
    let factor = -omega.powi(d as i32 - 2) / gamma(d)?;
    let rhs = corr.value * Complex64::from(factor);
    let report = VerificationReport::new(
        "theorem2",
        Quantity::tensor(&im.map(Complex64::from)),
        Quantity::tensor(&rhs),
    )?;
    Ok(with_elastic_params(report, omega, medium, x, y).with_param("quad", format_sizes(rule.sizes())))
}

/// Quadrature of the elastic correlation tensor against its closed form.
pub fn elastic_oracle_residual(omega: f64, medium: &ElasticMedium, x: &[f64], y: &[f64]) -> Result<VerificationReport> {
    let rule = elastic::default_rule(omega, medium, x, y)?;
    let quad = elastic::correlation_tensor_free(omega, medium, x, y, &rule)?;
    let closed = elastic::correlation_tensor_closed(omega, medium, x, y)?;
    let report = VerificationReport::new(
        "elastic_correlation_oracle",
        Quantity::tensor(&quad.value),
        Quantity::tensor(&closed.value),
    )?;
    Ok(with_elastic_params(report, omega, medium, x, y).with_param("quad", format_sizes(rule.sizes())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensional_constants() {
        assert_eq!(sigma(0).unwrap(), 2.0);
        assert_eq!(sigma(1).unwrap(), 2.0 * PI);
        assert_eq!(sigma(2).unwrap(), 4.0 * PI);
        assert_eq!(gamma(1).unwrap(), 2.0);
        assert!((gamma(2).unwrap() - 4.0).abs() < 1e-15);
        assert!((gamma(3).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!(sigma(3).is_err());
    }

    #[test]
    fn window_validation() {
        assert!(SpectralWindow::new(0.0, 1.0).is_err());
        assert!(SpectralWindow::new(2.0, 1.0).is_err());
        assert!(SpectralWindow::new(1.0, f64::NAN).is_err());
        assert!(SpectralWindow::new(1.0, 1.0).unwrap().is_empty());
    }

    #[test]
    fn residual_definitions() {
        let a = Quantity::scalar(Complex64::new(1.0, 0.0));
        let b = Quantity::scalar(Complex64::new(1.0, 1e-3));
        let (abs, rel) = residual(&a, &b).unwrap();
        assert!((abs - 1e-3).abs() < 1e-18);
        assert!((rel - 1e-3 / (1.0 + 1e-6f64).sqrt()).abs() < 1e-15);
        let zero = Quantity::scalar(Complex64::new(0.0, 0.0));
        assert_eq!(residual(&zero, &zero).unwrap(), (0.0, 0.0));
        let t = Quantity::tensor(&DMatrix::identity(2, 2));
        assert!(residual(&a, &t).is_err());
    }

    #[test]
    fn free_space_coincident_correlation_is_one() {
        for d in [2, 3] {
            let ctx = WaveContext::new(3.0, 1.5, d).unwrap();
            let x = vec![0.4; d];
            let c = correlation_scalar_auto(&ctx, &ScattererSpec::None, &x, &x).unwrap();
            assert!((c - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn rule_dimension_is_checked() {
        let ctx = WaveContext::new(1.0, 1.0, 2).unwrap();
        let rule = sphere_rule(4, 8).unwrap();
        assert!(matches!(
            correlation_scalar(&ctx, &ScattererSpec::None, &[0.0, 0.0], &[1.0, 0.0], &rule),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
