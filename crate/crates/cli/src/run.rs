use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use scattercorr::elastic::ElasticMedium;
use scattercorr::greenfn::GreenKernel;
use scattercorr::scalarwave::Scattering;
use scattercorr::verify::{
    correlation_scalar_auto, projector_routes, rule_from_sizes, theorem1_residual_with, theorem2_residual_with,
    ComplexValue, Discretization, SpectralWindow, VerificationReport,
};

use crate::args::*;

/// Reports of a verification command.
#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub command: String,
    pub tol: f64,
    pub pass: bool,
    pub reports: Vec<VerificationReport>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Row {
    pub x: Vec<f64>,
    pub value: Option<ComplexValue>,
    pub error: Option<String>,
}

/// Records of a table command.
#[derive(Debug, Serialize, Deserialize)]
pub struct TableOutput {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<Row>,
}

pub enum Output {
    Verify(VerifyOutput),
    Table(TableOutput),
}

impl Output {
    pub fn passed(&self) -> bool {
        match self {
            Output::Verify(v) => v.pass,
            Output::Table(_) => true,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match (self, format) {
            (Output::Verify(v), Format::Json) => serde_json::to_string_pretty(v)? + "\n",
            (Output::Table(t), Format::Json) => serde_json::to_string_pretty(t)? + "\n",
            (Output::Verify(v), Format::Csv) => {
                let mut s = String::from("label,index,abs_residual,rel_residual,pass\n");
                for (i, r) in v.reports.iter().enumerate() {
                    writeln!(s, "{},{i},{:e},{:e},{}", r.label, r.abs_residual, r.rel_residual, r.passes(v.tol))?;
                }
                s
            }
            (Output::Table(t), Format::Csv) => {
                let dim = t.rows.first().map_or(2, |r| r.x.len());
                let mut s: String = (1..=dim).map(|i| format!("x{i},")).collect();
                s.push_str("re,im,error\n");
                for r in &t.rows {
                    for c in &r.x {
                        write!(s, "{c},")?;
                    }
                    match (&r.value, &r.error) {
                        (Some(v), _) => writeln!(s, "{:e},{:e},", v.re, v.im)?,
                        (None, e) => writeln!(s, ",,{}", e.as_deref().unwrap_or("").replace(',', ";"))?,
                    }
                }
                s
            }
        })
    }
}

fn verify_output(command: &str, tol: f64, reports: Vec<VerificationReport>) -> Output {
    let pass = reports.iter().all(|r| r.passes(tol));
    Output::Verify(VerifyOutput {
        command: command.into(),
        tol,
        pass,
        reports,
    })
}

fn parse_pairs(pairs: &[String], dim: usize) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    pairs.iter().map(|p| parse_pair(p, dim)).collect()
}

pub fn verify_scalar(a: &VerifyScalarArgs) -> Result<Output> {
    let ctx = a.medium.context()?;
    let scat = a.medium.scatterer()?;
    let disc = Discretization {
        n_max: a.nmax,
        quad: a.quad.as_deref().map(parse_sizes).transpose()?,
    };
    let pairs = parse_pairs(&a.pairs, ctx.dim)?;
    let reports = pairs
        .par_iter()
        .map(|(x, y)| theorem1_residual_with(&ctx, &scat, x, y, &disc).map_err(Into::into))
        .collect::<Result<Vec<_>>>()?;
    Ok(verify_output("verify-scalar", a.tol, reports))
}

pub fn verify_elastic(a: &VerifyElasticArgs) -> Result<Output> {
    let medium = ElasticMedium::new(a.rho, a.lambda, a.mu)?;
    if !(2..=3).contains(&a.dim) {
        bail!("dimension must be 2 or 3, got {}", a.dim);
    }
    let sizes = a.quad.as_deref().map(parse_sizes).transpose()?;
    let pairs = parse_pairs(&a.pairs, a.dim)?;
    let reports = pairs
        .par_iter()
        .map(|(x, y)| {
            let rule = match &sizes {
                Some(s) => rule_from_sizes(a.dim, s)?,
                None => scattercorr::elastic::default_rule(a.omega, &medium, x, y)?,
            };
            Ok(vec![
                theorem2_residual_with(a.omega, &medium, x, y, &rule)?,
                scattercorr::verify::elastic_oracle_residual(a.omega, &medium, x, y)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(verify_output("verify-elastic", a.tol, reports.into_iter().flatten().collect()))
}

pub fn projector(a: &ProjectorArgs) -> Result<Output> {
    let ctx = a.medium.context()?;
    let scat = a.medium.scatterer()?;
    let window = match &a.window {
        Some(w) => {
            let v = parse_vector(w)?;
            let [lo, hi] = v[..] else {
                bail!("window {w:?} must be \"lo,hi\"");
            };
            SpectralWindow::new(lo, hi)?
        }
        None => SpectralWindow::new(0.8 * ctx.omega, 1.2 * ctx.omega)?,
    };
    let pairs = parse_pairs(&a.pairs, ctx.dim)?;
    let reports = pairs
        .par_iter()
        .map(|(x, y)| projector_routes(&ctx, &scat, &window, x, y, a.nodes).map_err(Into::into))
        .collect::<Result<Vec<_>>>()?;
    Ok(verify_output("projector", a.tol, reports))
}

fn table(command: &str, medium: &Medium, points: &[Vec<f64>], eval: impl Fn(&[f64]) -> scattercorr::Result<Complex64> + Sync) -> Output {
    let rows = points
        .par_iter()
        .map(|x| match eval(x) {
            Ok(v) => Row {
                x: x.clone(),
                value: Some(v.into()),
                error: None,
            },
            Err(e) => Row {
                x: x.clone(),
                value: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut params = BTreeMap::new();
    params.insert("dim".into(), medium.dim.to_string());
    params.insert("omega".into(), medium.omega.to_string());
    params.insert("v".into(), medium.v.to_string());
    params.insert("obstacle".into(), format!("{:?}", medium.obstacle).to_lowercase());
    if medium.obstacle == Obstacle::Disk {
        params.insert("radius".into(), medium.radius.to_string());
        params.insert("bc".into(), format!("{:?}", medium.bc).to_lowercase());
    }
    Output::Table(TableOutput {
        command: command.into(),
        params,
        rows,
    })
}

pub fn field(a: &FieldArgs) -> Result<Output> {
    let ctx = a.medium.context()?;
    let scattering = Scattering::new(ctx, a.medium.scatterer()?)?;
    let kvec = ctx.wave_vector(&parse_point(&a.direction, ctx.dim)?)?;
    let points = collect_points(&a.points, ctx.dim)?;
    let mut out = table("field", &a.medium, &points, |x| scattering.total(x, &kvec));
    if let Output::Table(t) = &mut out {
        t.params.insert("direction".into(), a.direction.clone());
    }
    Ok(out)
}

fn source_table(command: &str, a: &TableArgs, eval: impl Fn(&[f64], &[f64]) -> scattercorr::Result<Complex64> + Sync) -> Result<Output> {
    let ctx = a.medium.context()?;
    let source = parse_point(&a.source, ctx.dim)?;
    a.medium.scatterer()?.check_exterior(&source)?;
    let points = collect_points(&a.points, ctx.dim)?;
    let mut out = table(command, &a.medium, &points, |x| eval(x, &source));
    if let Output::Table(t) = &mut out {
        t.params.insert("source".into(), a.source.clone());
    }
    Ok(out)
}

pub fn green(a: &TableArgs) -> Result<Output> {
    let kernel = GreenKernel::new(a.medium.context()?, a.medium.scatterer()?)?;
    source_table("green", a, |x, y| kernel.value(x, y))
}

pub fn correlation(a: &TableArgs) -> Result<Output> {
    let ctx = a.medium.context()?;
    let scat = a.medium.scatterer()?;
    source_table("correlation", a, |x, y| correlation_scalar_auto(&ctx, &scat, x, y))
}

/// Recompute the residuals stored in a report file; true when all reproduce.
pub fn check(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).context("parsing report JSON")?;
    let reports: Vec<VerificationReport> = match value.get("reports") {
        Some(r) => serde_json::from_value(r.clone())?,
        None if value.is_array() => serde_json::from_value(value)?,
        None => vec![serde_json::from_value(value)?],
    };
    let mut all = true;
    for (i, r) in reports.iter().enumerate() {
        let (abs, rel) = r.recompute()?;
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-15 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        let ok = same(abs, r.abs_residual) && same(rel, r.rel_residual);
        all &= ok;
        println!(
            "{} report {i} ({}): stored rel {:e}, recomputed rel {:e}",
            if ok { "OK" } else { "MISMATCH" },
            r.label,
            r.rel_residual,
            rel
        );
    }
    Ok(all)
}
