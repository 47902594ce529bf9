//! Free-space elastic waves for `H u = -a Delta u - b grad div u`.
//!
//! P-waves are polarized along `khat` and travel at `v_P = sqrt(a + b)`,
//! S-waves along the tangents `khat_j` at `v_S = sqrt(a)`. The Green tensor
//! is the outgoing kernel of `(omega^2 - H)^{-1}`, written with the scalar
//! kernels of speeds `v_P` and `v_S`:
//!
//! ```text
//! G = g_S Id - omega^{-2} grad grad (v_P^2 g_P - v_S^2 g_S)
//! ```
//!
//! All second derivatives of radial kernels are taken analytically through
//! the recurrences of the Bessel families, so `x = y` needs no special code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom;
use crate::scalarwave::{truncation_order, DEFAULT_TRUNCATION_TOL};
use crate::specfun::{CylinderTable, SphericalTable};
use crate::sphquad::SphereRule;

/// Homogeneous isotropic medium given by density and Lamé coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticMedium {
    pub rho: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl ElasticMedium {
    pub fn new(rho: f64, lambda: f64, mu: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidParameter(format!("density must be positive, got {rho}")));
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        if !(lambda.is_finite() && lambda + mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda + mu must be positive, got {}",
                lambda + mu
            )));
        }
        Ok(Self { rho, lambda, mu })
    }

    /// `mu / rho`
    pub fn a(&self) -> f64 {
        self.mu / self.rho
    }

    /// `(lambda + mu) / rho`
    pub fn b(&self) -> f64 {
        (self.lambda + self.mu) / self.rho
    }

    pub fn v_p(&self) -> f64 {
        (self.a() + self.b()).sqrt()
    }

    pub fn v_s(&self) -> f64 {
        self.a().sqrt()
    }
}

/// Orthonormal frame `(khat, khat_1, ..., khat_{d-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationBasis {
    pub khat: Vec<f64>,
    pub tangents: Vec<Vec<f64>>,
}

/// How the tangent vectors are chosen. Any choice gives the same `P_S`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TangentRule {
    /// Gram-Schmidt on the coordinate axis least aligned with `khat`.
    #[default]
    Axis,
    /// The axis frame rotated by a fixed angle about `khat`
    /// (in `d = 2` a rotation by an angle with negative cosine flips the tangent).
    Rotated(f64),
}

pub fn polarization_basis(kvec: &[f64]) -> Result<PolarizationBasis> {
    polarization_basis_with(kvec, TangentRule::Axis)
}

pub fn polarization_basis_with(kvec: &[f64], rule: TangentRule) -> Result<PolarizationBasis> {
    let d = kvec.len();
    if !(2..=3).contains(&d) {
        return Err(Error::InvalidDimension(d));
    }
    geom::check_dim(kvec, d)?;
    let n = geom::norm(kvec);
    if n == 0.0 {
        return Err(Error::InvalidParameter("zero wave vector has no polarization frame".into()));
    }
    let khat = geom::scale(kvec, 1.0 / n);
    // least aligned axis, ties to the lowest index
    let mut axis = 0;
    for i in 1..d {
        if khat[i].abs() < khat[axis].abs() {
            axis = i;
        }
    }
    let mut t1: Vec<f64> = (0..d).map(|i| if i == axis { 1.0 } else { 0.0 }).collect();
    let proj = khat[axis];
    for (t, kh) in t1.iter_mut().zip(&khat) {
        *t -= proj * kh;
    }
    let t1n = geom::norm(&t1);
    t1.iter_mut().for_each(|t| *t /= t1n);
    let mut tangents = if d == 2 {
        vec![t1]
    } else {
        let t2 = vec![
            khat[1] * t1[2] - khat[2] * t1[1],
            khat[2] * t1[0] - khat[0] * t1[2],
            khat[0] * t1[1] - khat[1] * t1[0],
        ];
        vec![t1, t2]
    };
    if let TangentRule::Rotated(angle) = rule {
        let (s, c) = angle.sin_cos();
        if d == 2 {
            if c < 0.0 {
                tangents[0].iter_mut().for_each(|t| *t = -*t);
            }
        } else {
            let (a, b) = (tangents[0].clone(), tangents[1].clone());
            tangents[0] = a.iter().zip(&b).map(|(a, b)| c * a + s * b).collect();
            tangents[1] = a.iter().zip(&b).map(|(a, b)| -s * a + c * b).collect();
        }
    }
    Ok(PolarizationBasis { khat, tangents })
}

/// P/S polarization projectors for one wave vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorPair {
    pub p: DMatrix<f64>,
    pub s: DMatrix<f64>,
}

fn outer(a: &[f64], b: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j])
}

/// `P_P = khat khat^T` and `P_S = sum_j khat_j khat_j^T`.
pub fn projectors(kvec: &[f64]) -> Result<ProjectorPair> {
    let basis = polarization_basis(kvec)?;
    let d = kvec.len();
    let p = outer(&basis.khat, &basis.khat);
    let s = basis
        .tangents
        .iter()
        .fold(DMatrix::zeros(d, d), |acc, t| acc + outer(t, t));
    Ok(ProjectorPair { p, s })
}

fn phase(x: &[f64], kvec: &[f64]) -> Result<Complex64> {
    geom::check_dim(x, kvec.len())?;
    Ok(Complex64::from_polar(1.0, geom::dot(kvec, x)))
}

/// `e^{ik.x} khat`.
pub fn plane_wave_p(x: &[f64], kvec: &[f64]) -> Result<DVector<Complex64>> {
    let basis = polarization_basis(kvec)?;
    let e = phase(x, kvec)?;
    Ok(DVector::from_iterator(basis.khat.len(), basis.khat.iter().map(|c| e * c)))
}

/// `e^{ik.x} khat_j`, `j = 1..=d-1`.
pub fn plane_wave_s(x: &[f64], kvec: &[f64], j: usize) -> Result<DVector<Complex64>> {
    let basis = polarization_basis(kvec)?;
    if j == 0 || j > basis.tangents.len() {
        return Err(Error::InvalidParameter(format!(
            "S polarization index must lie in 1..={}, got {j}",
            basis.tangents.len()
        )));
    }
    let e = phase(x, kvec)?;
    let t = &basis.tangents[j - 1];
    Ok(DVector::from_iterator(t.len(), t.iter().map(|c| e * c)))
}

/// Direction-averaged products of elastic plane waves at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    /// `(1/sigma) int |e_P(x)><e_P(y)| dsigma` over `v_P k = omega`.
    pub p_part: DMatrix<Complex64>,
    /// `(1/sigma) sum_j int |e_{S,j}(x)><e_{S,j}(y)| dsigma` over `v_S k = omega`.
    pub s_part: DMatrix<Complex64>,
    /// `v_P^{-d} p_part + v_S^{-d} s_part`.
    pub value: DMatrix<Complex64>,
    pub omega: f64,
    pub medium: ElasticMedium,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl CorrelationTensor {
    fn assemble(
        p_part: DMatrix<Complex64>,
        s_part: DMatrix<Complex64>,
        omega: f64,
        medium: &ElasticMedium,
        x: &[f64],
        y: &[f64],
    ) -> Self {
        let d = x.len() as i32;
        let value = &p_part * Complex64::from(medium.v_p().powi(-d))
            + &s_part * Complex64::from(medium.v_s().powi(-d));
        Self {
            p_part,
            s_part,
            value,
            omega,
            medium: *medium,
            x: x.to_vec(),
            y: y.to_vec(),
        }
    }
}

fn check_pair(omega: f64, x: &[f64], y: &[f64]) -> Result<usize> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
    }
    let d = x.len();
    if !(2..=3).contains(&d) {
        return Err(Error::InvalidDimension(d));
    }
    geom::check_dim(x, d)?;
    geom::check_dim(y, d)?;
    Ok(d)
}

fn bra_ket(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DMatrix<Complex64> {
    a * b.adjoint()
}

/// Quadrature of the weighted P- and S-sphere integrals with the axis tangent rule.
pub fn correlation_tensor_free(
    omega: f64,
    medium: &ElasticMedium,
    x: &[f64],
    y: &[f64],
    rule: &SphereRule,
) -> Result<CorrelationTensor> {
    correlation_tensor_free_with(omega, medium, x, y, rule, TangentRule::Axis)
}

pub fn correlation_tensor_free_with(
    omega: f64,
    medium: &ElasticMedium,
    x: &[f64],
    y: &[f64],
    rule: &SphereRule,
    tangents: TangentRule,
) -> Result<CorrelationTensor> {
    let d = check_pair(omega, x, y)?;
    if rule.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: rule.dim(),
        });
    }
    let sigma = rule.total_weight();
    let (kp, ks) = (omega / medium.v_p(), omega / medium.v_s());
    let p_part: DMatrix<Complex64> = rule.integrate(|khat| {
        let kvec = geom::scale(khat, kp);
        let ex = plane_wave_p(x, &kvec).expect("validated");
        let ey = plane_wave_p(y, &kvec).expect("validated");
        bra_ket(&ex, &ey)
    });
    let s_part: DMatrix<Complex64> = rule.integrate(|khat| {
        let kvec = geom::scale(khat, ks);
        let basis = polarization_basis_with(&kvec, tangents).expect("validated");
        let (px, py) = (phase(x, &kvec).expect("validated"), phase(y, &kvec).expect("validated"));
        basis
            .tangents
            .iter()
            .fold(DMatrix::zeros(d, d), |acc, t| {
                let ex = DVector::from_iterator(d, t.iter().map(|c| px * c));
                let ey = DVector::from_iterator(d, t.iter().map(|c| py * c));
                acc + bra_ket(&ex, &ey)
            })
    });
    let norm = Complex64::from(1.0 / sigma);
    Ok(CorrelationTensor::assemble(
        p_part * norm,
        s_part * norm,
        omega,
        medium,
        x,
        y,
    ))
}

// Radial tensor `along rhat rhat^T + across (Id - rhat rhat^T)`.
fn radial_tensor(rhat: Option<&[f64]>, d: usize, along: Complex64, across: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_fn(d, d, |i, j| {
        let rr = rhat.map_or(0.0, |r| r[i] * r[j]);
        let id = if i == j { 1.0 } else { 0.0 };
        along * rr + across * (id - rr)
    })
}

/// Values `(F_0(z), F_2(z))` of the Bessel family used in dimension `d`:
/// cylindrical for `d = 2`, spherical for `d = 3`. `outgoing` selects
/// Hankel functions instead of the regular ones.
fn family(d: usize, z: f64, outgoing: bool) -> Result<(Complex64, Complex64)> {
    if d == 2 {
        if outgoing {
            let t = CylinderTable::new(2, z)?;
            Ok((t.h(0), t.h(2)))
        } else {
            let j = crate::specfun::bessel_j_seq(2, z)?;
            Ok((j[0].into(), j[2].into()))
        }
    } else {
        let t = SphericalTable::new(2, z)?;
        if outgoing {
            Ok((t.h(0), t.h(2)))
        } else {
            Ok((t.j(0).into(), t.j(2).into()))
        }
    }
}

/// `-(1/k^2) grad grad F_0(k r)`, the P-type angular moment.
fn p_type(d: usize, f0: Complex64, f2: Complex64) -> (Complex64, Complex64) {
    if d == 2 {
        ((f0 - f2) * 0.5, (f0 + f2) * 0.5)
    } else {
        ((f0 - f2 * 2.0) / 3.0, (f0 + f2) / 3.0)
    }
}

/// `F_0 Id` minus the P-type moment.
fn s_type(d: usize, f0: Complex64, f2: Complex64) -> (Complex64, Complex64) {
    let (a, c) = p_type(d, f0, f2);
    (f0 - a, f0 - c)
}

fn separation(x: &[f64], y: &[f64]) -> (f64, Option<Vec<f64>>) {
    let diff = geom::sub(x, y);
    let r = geom::norm(&diff);
    if r == 0.0 {
        (0.0, None)
    } else {
        (r, Some(geom::scale(&diff, 1.0 / r)))
    }
}

/// Closed-form evaluation of the same sphere integrals.
pub fn correlation_tensor_closed(
    omega: f64,
    medium: &ElasticMedium,
    x: &[f64],
    y: &[f64],
) -> Result<CorrelationTensor> {
    let d = check_pair(omega, x, y)?;
    let (r, rhat) = separation(x, y);
    let (kp, ks) = (omega / medium.v_p(), omega / medium.v_s());
    let (f0, f2) = family(d, kp * r, false)?;
    let (al, ac) = p_type(d, f0, f2);
    let p_part = radial_tensor(rhat.as_deref(), d, al, ac);
    let (f0, f2) = family(d, ks * r, false)?;
    let (al, ac) = s_type(d, f0, f2);
    let s_part = radial_tensor(rhat.as_deref(), d, al, ac);
    Ok(CorrelationTensor::assemble(p_part, s_part, omega, medium, x, y))
}

// Scalar outgoing kernel prefactor: phi_k(r) = A F_0(kr) with
// phi = v^2 g for g the kernel of (omega^2 + v^2 Delta)^{-1}.
fn kernel_prefactor(d: usize, k: f64) -> Complex64 {
    if d == 2 {
        Complex64::new(0.0, -0.25)
    } else {
        Complex64::new(0.0, -k / (4.0 * PI))
    }
}

/// Outgoing Green tensor `(omega^2 - H)^{-1}(x, y)` for `x != y`.
pub fn green_tensor_free(
    omega: f64,
    medium: &ElasticMedium,
    x: &[f64],
    y: &[f64],
) -> Result<DMatrix<Complex64>> {
    let d = check_pair(omega, x, y)?;
    let (r, rhat) = separation(x, y);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let (vp, vs) = (medium.v_p(), medium.v_s());
    let (kp, ks) = (omega / vp, omega / vs);
    let (f0, f2) = family(d, ks * r, true)?;
    let (sa, sc) = s_type(d, f0, f2);
    let ws = kernel_prefactor(d, ks) / (vs * vs);
    let (f0, f2) = family(d, kp * r, true)?;
    let (pa, pc) = p_type(d, f0, f2);
    let wp = kernel_prefactor(d, kp) / (vp * vp);
    Ok(radial_tensor(rhat.as_deref(), d, ws * sa + wp * pa, ws * sc + wp * pc))
}

/// `Im G(omega + i0, x, y)` entrywise; finite at `x = y`.
pub fn im_green_tensor_free(
    omega: f64,
    medium: &ElasticMedium,
    x: &[f64],
    y: &[f64],
) -> Result<DMatrix<f64>> {
    let d = check_pair(omega, x, y)?;
    let (r, rhat) = separation(x, y);
    let (vp, vs) = (medium.v_p(), medium.v_s());
    let (kp, ks) = (omega / vp, omega / vs);
    // Im(A F) = Im(A) * (regular part) since A is purely imaginary
    let (f0, f2) = family(d, ks * r, false)?;
    let (sa, sc) = s_type(d, f0, f2);
    let ws = kernel_prefactor(d, ks).im / (vs * vs);
    let (f0, f2) = family(d, kp * r, false)?;
    let (pa, pc) = p_type(d, f0, f2);
    let wp = kernel_prefactor(d, kp).im / (vp * vp);
    Ok(radial_tensor(rhat.as_deref(), d, sa * ws + pa * wp, sc * ws + pc * wp).map(|c| c.re))
}

/// Default quadrature for the elastic correlation between `x` and `y`.
pub fn default_rule(omega: f64, medium: &ElasticMedium, x: &[f64], y: &[f64]) -> Result<SphereRule> {
    let d = check_pair(omega, x, y)?;
    let (r, _) = separation(x, y);
    let n = truncation_order(omega / medium.v_s() * r, DEFAULT_TRUNCATION_TOL)?;
    SphereRule::for_bandwidth(d, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn medium_speeds() {
        let m = ElasticMedium::new(7900.0, 115e9, 77e9).unwrap();
        assert!((m.v_p() - ((115e9 + 2.0 * 77e9) / 7900.0f64).sqrt()).abs() < 1e-9);
        assert!((m.v_s() - (77e9 / 7900.0f64).sqrt()).abs() < 1e-9);
        assert!(m.v_p() > m.v_s());
        assert!(ElasticMedium::new(1.0, -2.0, 1.0).is_err());
        assert!(ElasticMedium::new(1.0, 1.0, 0.0).is_err());
        assert!(ElasticMedium::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn basis_for_z_axis() {
        let b = polarization_basis(&[0.0, 0.0, 2.0]).unwrap();
        assert_eq!(b.khat, vec![0.0, 0.0, 1.0]);
        for t in &b.tangents {
            assert!(t[2].abs() < 1e-15);
            assert!((geom::norm(t) - 1.0).abs() < 1e-15);
        }
        assert!(geom::dot(&b.tangents[0], &b.tangents[1]).abs() < 1e-15);
        assert!(polarization_basis(&[0.0, 0.0]).is_err());
        assert!(polarization_basis(&[1.0]).is_err());
    }

    #[test]
    fn projectors_along_x() {
        let p = projectors(&[3.0, 0.0]).unwrap();
        assert_eq!(p.p, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert!((p.s.trace() - 1.0).abs() < 1e-15);
        let p3 = projectors(&[1.0, -2.0, 0.5]).unwrap();
        assert!((p3.s.trace() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn plane_waves() {
        let k = [0.0, 1.5, 2.0];
        let e = plane_wave_p(&[0.0, 0.0, 0.0], &k).unwrap();
        for (c, want) in e.iter().zip([0.0, 0.6, 0.8]) {
            assert!((c - Complex64::from(want)).norm() < 1e-15);
        }
        for j in 1..=2 {
            let s = plane_wave_s(&[0.4, 0.1, -0.3], &k, j).unwrap();
            let div: Complex64 = s.iter().zip(&k).map(|(c, k)| c * k).sum();
            assert!(div.norm() < 1e-14);
        }
        assert!(plane_wave_s(&[0.0; 3], &k, 0).is_err());
        assert!(plane_wave_s(&[0.0; 3], &k, 3).is_err());
    }

    #[test]
    fn coincident_green_tensor() {
        let m = ElasticMedium::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            green_tensor_free(1.0, &m, &[0.0, 1.0], &[0.0, 1.0]),
            Err(Error::CoincidentPoints)
        );
        let im = im_green_tensor_free(1.0, &m, &[0.0, 1.0], &[0.0, 1.0]).unwrap();
        assert!(im[(0, 1)].abs() < 1e-16);
        assert!((im[(0, 0)] - im[(1, 1)]).abs() < 1e-16);
    }

    #[test]
    fn rule_dimension_mismatch() {
        let m = ElasticMedium::new(1.0, 1.0, 1.0).unwrap();
        let rule = SphereRule::for_bandwidth(3, 4).unwrap();
        assert!(matches!(
            correlation_tensor_free(1.0, &m, &[0.0, 0.0], &[1.0, 0.0], &rule),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
