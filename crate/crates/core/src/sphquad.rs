//! Product quadrature on the unit circle and the unit sphere.
//!
//! The circle uses the trapezoid rule, the sphere a Gauss-Legendre rule in
//! `cos(polar)` times the trapezoid rule in azimuth. Both are exact for the
//! band-limited integrands produced by truncated partial-wave series.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::legendre_p_and_derivative;

/// Nodes and weights on the unit sphere `S^{d-1}`, `d` in {2, 3}.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    dim: usize,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    sizes: Vec<usize>,
}

/// Values that can be summed with real quadrature weights.
pub trait Weighted: Sized {
    fn scaled(self, w: f64) -> Self;
    fn add_scaled(&mut self, w: f64, other: &Self);
}

impl Weighted for f64 {
    fn scaled(self, w: f64) -> Self {
        self * w
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        *self += w * other;
    }
}

impl Weighted for Complex64 {
    fn scaled(self, w: f64) -> Self {
        self * w
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        *self += other * w;
    }
}

impl Weighted for DMatrix<Complex64> {
    fn scaled(mut self, w: f64) -> Self {
        self.iter_mut().for_each(|v| *v *= w);
        self
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        self.iter_mut()
            .zip(other.iter())
            .for_each(|(a, b)| *a += b * w);
    }
}

impl Weighted for DMatrix<f64> {
    fn scaled(self, w: f64) -> Self {
        self * w
    }
    fn add_scaled(&mut self, w: f64, other: &Self) {
        self.iter_mut()
            .zip(other.iter())
            .for_each(|(a, b)| *a += b * w);
    }
}

/// Equispaced rule on the unit circle with `n` nodes.
pub fn circle_rule(n: usize) -> Result<SphereRule> {
    if n == 0 {
        return Err(Error::EmptyRule);
    }
    let w = 2.0 * PI / n as f64;
    let nodes = (0..n)
        .map(|j| {
            let (s, c) = (w * j as f64).sin_cos();
            [c, s, 0.0]
        })
        .collect();
    Ok(SphereRule {
        dim: 2,
        nodes,
        weights: vec![w; n],
        sizes: vec![n],
    })
}

/// Gauss-Legendre in `cos(polar)` times equispaced azimuth.
pub fn sphere_rule(n_polar: usize, n_azimuth: usize) -> Result<SphereRule> {
    if n_polar == 0 || n_azimuth == 0 {
        return Err(Error::EmptyRule);
    }
    let (ts, ws) = gauss_legendre(n_polar);
    let dphi = 2.0 * PI / n_azimuth as f64;
    let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
    let mut weights = Vec::with_capacity(n_polar * n_azimuth);
    for (&t, &w) in ts.iter().zip(&ws) {
        let st = (1.0 - t * t).max(0.0).sqrt();
        for j in 0..n_azimuth {
            let (sp, cp) = (dphi * j as f64).sin_cos();
            nodes.push([st * cp, st * sp, t]);
            weights.push(w * dphi);
        }
    }
    Ok(SphereRule {
        dim: 3,
        nodes,
        weights,
        sizes: vec![n_polar, n_azimuth],
    })
}

/// Node count on the circle for integrands of angular bandwidth `2 n_max`.
pub fn default_circle_size(n_max: usize) -> usize {
    2 * n_max + 16
}

/// `(n_polar, n_azimuth)` on the sphere for a truncation order `n_max`.
pub fn default_sphere_sizes(n_max: usize) -> (usize, usize) {
    (n_max + 8, 2 * n_max + 16)
}

impl SphereRule {
    /// Default rule in dimension `dim` for a partial-wave bandwidth `n_max`.
    pub fn for_bandwidth(dim: usize, n_max: usize) -> Result<Self> {
        match dim {
            2 => circle_rule(default_circle_size(n_max)),
            3 => {
                let (p, a) = default_sphere_sizes(n_max);
                sphere_rule(p, a)
            }
            d => Err(Error::InvalidDimension(d)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Construction sizes: `[n]` on the circle, `[n_polar, n_azimuth]` on the sphere.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i][..self.dim]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.nodes.iter().map(move |n| &n[..self.dim])
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weighted sum of `f` over the nodes, in node order.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: Weighted,
        F: FnMut(&[f64]) -> T,
    {
        let mut acc: Option<T> = None;
        for (node, &w) in self.nodes().zip(&self.weights) {
            let v = f(node);
            match acc.as_mut() {
                None => acc = Some(v.scaled(w)),
                Some(a) => a.add_scaled(w, &v),
            }
        }
        acc.expect("rules are never empty")
    }

    /// Weighted sum of values already evaluated at the nodes, in node order.
    pub fn reduce<T: Weighted + Clone>(&self, values: &[T]) -> Result<T> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        let mut acc = values[0].clone().scaled(self.weights[0]);
        for (v, &w) in values.iter().zip(&self.weights).skip(1) {
            acc.add_scaled(w, v);
        }
        Ok(acc)
    }

    /// Same rule with every node mapped through the orthogonal matrix `rot`.
    pub fn rotated(&self, rot: &DMatrix<f64>) -> Result<Self> {
        if rot.nrows() != self.dim || rot.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rot.nrows(),
            });
        }
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let mut out = [0.0; 3];
                for (i, o) in out.iter_mut().enumerate().take(self.dim) {
                    *o = (0..self.dim).map(|j| rot[(i, j)] * n[j]).sum();
                }
                out
            })
            .collect();
        Ok(Self {
            nodes,
            ..self.clone()
        })
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_p_and_derivative(n, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_p_and_derivative(n, t);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        nodes[i] = -t;
        nodes[n - 1 - i] = t;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_interval(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    (
        t.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|w| w * half).collect(),
    )
}
