use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use scattercorr::elastic::*;
use scattercorr::greenfn::im_green_free;
use scattercorr::scalarwave::WaveContext;
use scattercorr::sphquad::{circle_rule, SphereRule};
use std::f64::consts::PI;

fn unit_medium() -> ElasticMedium {
    ElasticMedium::new(1.0, 1.0, 1.0).unwrap()
}

fn steel() -> ElasticMedium {
    ElasticMedium::new(7900.0, 115e9, 77e9).unwrap()
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn rel(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    max_entry(&(a - b)) / max_entry(a).max(max_entry(b)).max(1e-300)
}

fn direction(d: usize, seed: f64) -> Vec<f64> {
    let v: Vec<f64> = (0..d).map(|i| (seed * (i as f64 + 1.3)).sin() + 0.1 * i as f64).collect();
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    v.iter().map(|c| c / n).collect()
}

#[test]
fn orthonormal_frames_for_many_directions() {
    for d in [2, 3] {
        for i in 0..1000 {
            let k = direction(d, 0.37 * i as f64 + 0.1);
            let b = polarization_basis(&k).unwrap();
            let mut frame = vec![b.khat.clone()];
            frame.extend(b.tangents.iter().cloned());
            for (p, u) in frame.iter().enumerate() {
                for (q, w) in frame.iter().enumerate() {
                    let dot: f64 = u.iter().zip(w).map(|(a, b)| a * b).sum();
                    let want = if p == q { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn projector_algebra() {
    for d in [2, 3] {
        for i in 0..200 {
            let k: Vec<f64> = direction(d, 1.1 * i as f64 + 0.4).iter().map(|c| 2.5 * c).collect();
            let ProjectorPair { p, s } = projectors(&k).unwrap();
            let id = DMatrix::<f64>::identity(d, d);
            assert!((&p + &s - &id).abs().max() <= 1e-15);
            assert!((&p * &p - &p).abs().max() < 1e-15);
            assert!((&s * &s - &s).abs().max() < 1e-15);
            assert!((&p * &s).abs().max() < 1e-15);
            assert_eq!(p.rank(1e-12), 1);
            assert!((&p - p.transpose()).abs().max() == 0.0);
        }
    }
}

#[test]
fn coincident_moment_identity_in_three_dimensions() {
    let m = steel();
    let x = [0.2, -0.1, 0.3];
    let rule = SphereRule::for_bandwidth(3, 8).unwrap();
    let t = correlation_tensor_free(1e4, &m, &x, &x, &rule).unwrap();
    let c = m.v_p().powi(-3) / 3.0 + 2.0 * m.v_s().powi(-3) / 3.0;
    let want = DMatrix::from_diagonal_element(3, 3, Complex64::from(c));
    assert!(rel(&t.value, &want) < 1e-14);
    let closed = correlation_tensor_closed(1e4, &m, &x, &x).unwrap();
    assert!(rel(&closed.value, &want) < 1e-15);
}

#[test]
fn quadrature_matches_closed_form() {
    let cases: [(ElasticMedium, Vec<f64>, Vec<f64>); 2] = [
        (unit_medium(), vec![0.3, -0.2], vec![-1.1, 0.7]),
        (steel(), vec![0.3, -0.2, 0.5], vec![-1.1, 0.7, 0.1]),
    ];
    for (m, x, y) in &cases {
        for ks_r in [0.5, 3.0, 12.0, 20.0] {
            let r = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let omega = ks_r * m.v_s() / r;
            let rule = default_rule(omega, m, x, y).unwrap();
            let quad = correlation_tensor_free(omega, m, x, y, &rule).unwrap();
            let closed = correlation_tensor_closed(omega, m, x, y).unwrap();
            assert!(rel(&quad.p_part, &closed.p_part) < 1e-12, "P part at k_S r = {ks_r}");
            assert!(rel(&quad.s_part, &closed.s_part) < 1e-12, "S part at k_S r = {ks_r}");
            assert!(rel(&quad.value, &closed.value) < 1e-12);
        }
    }
}

#[test]
fn tangent_rule_does_not_matter() {
    let m = unit_medium();
    for (x, y) in [
        (vec![0.0, 0.0], vec![1.3, -2.0]),
        (vec![0.1, 0.0, -0.4], vec![1.3, -2.0, 0.7]),
    ] {
        let rule = default_rule(4.0, &m, &x, &y).unwrap();
        let a = correlation_tensor_free_with(4.0, &m, &x, &y, &rule, TangentRule::Axis).unwrap();
        let b = correlation_tensor_free_with(4.0, &m, &x, &y, &rule, TangentRule::Rotated(2.3)).unwrap();
        assert!(max_entry(&(&a.value - &b.value)) < 1e-12 * max_entry(&a.value));
    }
}

#[test]
fn hermitian_pair_and_positivity() {
    let m = unit_medium();
    let (x, y) = ([0.4, 1.0, -0.2], [-0.7, 0.1, 0.9]);
    let rule = default_rule(3.0, &m, &x, &y).unwrap();
    let xy = correlation_tensor_free(3.0, &m, &x, &y, &rule).unwrap();
    let yx = correlation_tensor_free(3.0, &m, &y, &x, &rule).unwrap();
    assert!(max_entry(&(&xy.value - yx.value.adjoint())) < 1e-12);
    let xx = correlation_tensor_free(3.0, &m, &x, &x, &rule).unwrap();
    assert!(max_entry(&(&xx.value - xx.value.adjoint())) < 1e-15);
    let eig = xx.value.map(|c| c.re).symmetric_eigenvalues();
    assert!(eig.iter().all(|&e| e >= -1e-15));
}

#[test]
fn closed_form_transposes_under_reflection() {
    let m = unit_medium();
    let (x, y) = ([0.4, 1.0], [-0.7, 0.1]);
    let a = correlation_tensor_closed(2.5, &m, &x, &y).unwrap();
    let b = correlation_tensor_closed(2.5, &m, &y, &x).unwrap();
    assert!(max_entry(&(&a.value - b.value.transpose())) < 1e-15);
}

#[test]
fn shear_trace_reduces_to_scalar_correlation() {
    let m = ElasticMedium::new(2.0, 3.0, 5.0).unwrap();
    for (x, y) in [
        (vec![0.0, 0.0], vec![1.3, -2.0]),
        (vec![0.1, 0.0, -0.4], vec![1.3, -2.0, 0.7]),
    ] {
        let d = x.len();
        let omega = 6.0;
        let rule = default_rule(omega, &m, &x, &y).unwrap();
        let t = correlation_tensor_free(omega, &m, &x, &y, &rule).unwrap();
        // scalar identity at speed v_S: C = -gamma v^d omega^{2-d} Im G
        let ctx = WaveContext::new(omega, m.v_s(), d).unwrap();
        let gamma = if d == 2 { 4.0 } else { 4.0 * PI };
        let scalar = -gamma * m.v_s().powi(d as i32) * omega.powi(2 - d as i32)
            * im_green_free(&ctx, &x, &y).unwrap();
        let trace = t.s_part.trace();
        assert!((trace - (d - 1) as f64 * scalar).norm() < 1e-9 * scalar.abs().max(1e-3));
    }
}

#[test]
fn green_tensor_imaginary_part_is_consistent() {
    let m = steel();
    let (x, y) = ([0.2, 0.0, 0.1], [0.5, 0.7, -0.3]);
    let g = green_tensor_free(2e4, &m, &x, &y).unwrap();
    let im = im_green_tensor_free(2e4, &m, &x, &y).unwrap();
    assert!((g.map(|c| c.im) - &im).abs().max() < 1e-12 * im.abs().max());
    assert!((&g - g.transpose()).iter().all(|c| c.norm() < 1e-25));
}

#[test]
fn coincident_imaginary_part_is_isotropic() {
    for (m, x) in [(unit_medium(), vec![0.3, 0.2]), (steel(), vec![0.3, 0.2, -1.0])] {
        let d = x.len();
        let im = im_green_tensor_free(5.0, &m, &x, &x).unwrap();
        let diag = im[(0, 0)];
        assert!(diag < 0.0);
        assert!((&im - DMatrix::from_diagonal_element(d, d, diag)).abs().max() == 0.0);
    }
}

// Far from the source the tensor decays like r^{-(d-1)/2}; fit the log-log slope.
#[test]
fn green_tensor_decay_rate() {
    for (m, d) in [(unit_medium(), 2usize), (unit_medium(), 3)] {
        let omega = 3.0;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        let n = 400;
        for i in 0..n {
            let r = 20.0 * 10f64.powf(i as f64 / (n - 1) as f64);
            let mut y = vec![0.0; d];
            y[0] = r * 0.6;
            y[1] = r * 0.8;
            let g = green_tensor_free(omega, &m, &vec![0.0; d], &y).unwrap();
            let norm = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let (lx, ly) = (r.ln(), norm.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        let nf = n as f64;
        let slope = (nf * sxy - sx * sy) / (nf * sxx - sx * sx);
        let want = -((d - 1) as f64) / 2.0;
        assert!((slope - want).abs() < 0.02, "d = {d}: slope {slope}, want {want}");
    }
}

#[test]
fn rule_mismatch_is_rejected() {
    let rule = circle_rule(16).unwrap();
    let m = unit_medium();
    assert!(correlation_tensor_free(1.0, &m, &[0.0; 3], &[1.0, 0.0, 0.0], &rule).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_quadrature_random_pairs(
        x in prop::array::uniform3(-2.0f64..2.0),
        y in prop::array::uniform3(-2.0f64..2.0),
        omega in 0.2f64..6.0,
    ) {
        let m = ElasticMedium::new(1.5, 2.0, 0.7).unwrap();
        let rule = default_rule(omega, &m, &x, &y).unwrap();
        let quad = correlation_tensor_free(omega, &m, &x, &y, &rule).unwrap();
        let closed = correlation_tensor_closed(omega, &m, &x, &y).unwrap();
        prop_assert!(rel(&quad.value, &closed.value) < 1e-11);
    }
}
