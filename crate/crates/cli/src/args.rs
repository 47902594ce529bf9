use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scattercorr::scalarwave::{BoundaryCondition, ScattererSpec, WaveContext};

#[derive(Debug, Parser, Serialize)]
#[command(name = "scattercorr", version, about = "Scattered waves, Green's functions and correlation identities")]
pub struct Cli {
    /// Re-read a JSON report and recompute its residuals.
    #[arg(long, value_name = "REPORT")]
    pub check: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Compare the direction-averaged correlation with Im G for point pairs.
    VerifyScalar(VerifyScalarArgs),
    /// Elastic version of the identity in free space.
    VerifyElastic(VerifyElasticArgs),
    /// Total field of one incident plane wave at points.
    Field(FieldArgs),
    /// Outgoing Green's function against a fixed source.
    Green(TableArgs),
    /// Direction-averaged correlation against a fixed point.
    Correlation(TableArgs),
    /// Spectral projector kernel by Stone's formula and by plane waves.
    Projector(ProjectorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Obstacle {
    None,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, env = "SCATTERCORR_THREADS")]
    pub threads: Option<usize>,
    /// Echo the parsed configuration to standard error.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct Medium {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = Obstacle::None)]
    pub obstacle: Obstacle,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = Bc::Neumann)]
    pub bc: Bc,
    #[arg(long)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub v: f64,
}

impl Medium {
    pub fn context(&self) -> Result<WaveContext> {
        Ok(WaveContext::new(self.omega, self.v, self.dim)?)
    }

    pub fn scatterer(&self) -> Result<ScattererSpec> {
        Ok(match self.obstacle {
            Obstacle::None => ScattererSpec::None,
            Obstacle::Disk => {
                let bc = match self.bc {
                    Bc::Neumann => BoundaryCondition::Neumann,
                    Bc::Dirichlet => BoundaryCondition::Dirichlet,
                };
                ScattererSpec::disk(self.radius, bc)?
            }
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyScalarArgs {
    #[command(flatten)]
    pub medium: Medium,
    /// Point pair "x1,x2;y1,y2" (repeatable).
    #[arg(long = "pair", required = true, allow_hyphen_values = true)]
    pub pairs: Vec<String>,
    /// Pass threshold on the relative residual.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Partial-wave truncation order override.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Quadrature node counts override: "n" (circle) or "np,na" (sphere).
    #[arg(long)]
    pub quad: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyElasticArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    #[arg(long = "pair", required = true, allow_hyphen_values = true)]
    pub pairs: Vec<String>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long)]
    pub quad: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct Points {
    /// Evaluation point "x1,x2[,x3]" (repeatable).
    #[arg(long = "point", allow_hyphen_values = true)]
    pub points: Vec<String>,
    /// Cartesian grid "min,max,n" per axis, axes separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct FieldArgs {
    #[command(flatten)]
    pub medium: Medium,
    /// Incidence direction (normalized).
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub direction: String,
    #[command(flatten)]
    pub points: Points,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[command(flatten)]
    pub medium: Medium,
    /// Second argument of the kernel.
    #[arg(long, allow_hyphen_values = true)]
    pub source: String,
    #[command(flatten)]
    pub points: Points,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct ProjectorArgs {
    #[command(flatten)]
    pub medium: Medium,
    /// Frequency window "lo,hi"; default [0.8, 1.2] * omega.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long = "pair", required = true, allow_hyphen_values = true)]
    pub pairs: Vec<String>,
    /// Gauss-Legendre nodes over the window.
    #[arg(long, default_value_t = scattercorr::verify::DEFAULT_WINDOW_NODES)]
    pub nodes: usize,
    /// Pass threshold on the route difference.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

pub fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid number {c:?} in {s:?}"))
        })
        .collect()
}

pub fn parse_point(s: &str, dim: usize) -> Result<Vec<f64>> {
    let p = parse_vector(s)?;
    if p.len() != dim {
        bail!("point {s:?} has {} coordinates, expected {dim}", p.len());
    }
    Ok(p)
}

pub fn parse_pair(s: &str, dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let Some((x, y)) = s.split_once(';') else {
        bail!("pair {s:?} must look like \"x1,x2;y1,y2\"");
    };
    Ok((parse_point(x, dim)?, parse_point(y, dim)?))
}

pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|c| c.trim().parse::<usize>().with_context(|| format!("invalid node count {c:?}")))
        .collect()
}

/// Explicit points followed by the grid nodes, last axis varying fastest.
pub fn collect_points(p: &Points, dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = p.points.iter().map(|s| parse_point(s, dim)).collect::<Result<_>>()?;
    if let Some(grid) = &p.grid {
        let axes: Vec<Vec<f64>> = grid
            .split(';')
            .map(|axis| {
                let v = parse_vector(axis)?;
                let [lo, hi, n] = v[..] else {
                    bail!("grid axis {axis:?} must be \"min,max,n\"");
                };
                if n < 1.0 || n.fract() != 0.0 {
                    bail!("grid axis {axis:?} needs a positive integer count");
                }
                let n = n as usize;
                Ok((0..n)
                    .map(|i| if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
                    .collect())
            })
            .collect::<Result<_>>()?;
        if axes.len() != dim {
            bail!("grid has {} axes, expected {dim}", axes.len());
        }
        let mut nodes: Vec<Vec<f64>> = vec![vec![]];
        for axis in &axes {
            nodes = nodes
                .into_iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        out.extend(nodes);
    }
    if out.is_empty() {
        bail!("no evaluation points; use --point or --grid");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_points() {
        assert_eq!(parse_pair("3,0;0,4", 2).unwrap(), (vec![3.0, 0.0], vec![0.0, 4.0]));
        assert!(parse_pair("3,0,1;0,4", 2).is_err());
        assert!(parse_pair("3,0", 2).is_err());
        assert!(parse_point("a,1", 2).is_err());
    }

    #[test]
    fn grid_order() {
        let p = Points {
            points: vec!["9,9".into()],
            grid: Some("0,1,2;5,7,3".into()),
        };
        let pts = collect_points(&p, 2).unwrap();
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[1], vec![0.0, 5.0]);
        assert_eq!(pts[2], vec![0.0, 6.0]);
        assert_eq!(pts[6], vec![1.0, 7.0]);
        assert!(collect_points(&Points { points: vec![], grid: None }, 2).is_err());
        assert!(collect_points(&Points { points: vec![], grid: Some("0,1,2.5;0,1,2".into()) }, 2).is_err());
    }
}
