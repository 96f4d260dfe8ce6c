//! Command-line front end. Exit codes: 0 success/match, 1 determinate
//! mismatch or failed verification, 2 usage/input error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{PotlabError, Result};
use crate::geometry::{
    rotation_derivative_residual, sphere_residual, surface_mesh, DomainSpec, Vec3,
};
use crate::moments::{exterior_potential_gap, moment_gap};
use crate::potentials::{
    helmholtz_volume_direct_many, multipole_coefficients, newtonian_direct_many,
    newtonian_multipole_eval, Wavenumber, SEPARATION_MARGIN,
};
use crate::specfun::UnitVector;
use crate::transparency::{transparency_roots, verify_transparency};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Evaluate potential sweeps over a sample grid
    Potential,
    /// Compare harmonic moments of two domains
    Moments,
    /// Enumerate and verify transparent ball radii
    Transparency,
    /// Sphere residual and rotation-derivative checks
    Geometry,
}

#[derive(Debug, Parser)]
#[command(name = "potlab", version, about = "Exterior potentials, harmonic moments and transparent balls")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: CommandKind,

    /// Domain description JSON file
    #[arg(long, global = true)]
    pub domain: Option<PathBuf>,

    /// Second domain (for moment comparison)
    #[arg(long, global = true)]
    pub domain2: Option<PathBuf>,

    /// Helmholtz wavenumber
    #[arg(long, global = true)]
    pub k: Option<f64>,

    /// Multipole truncation degree
    #[arg(global = true, long = "L", default_value_t = 8)]
    pub l: u32,

    /// Volume quadrature order
    #[arg(long, global = true, default_value_t = 12)]
    pub order: u32,

    /// Surface mesh resolution
    #[arg(global = true, long = "mesh-res", default_value_t = 64)]
    pub mesh_res: u32,

    /// Sample sphere radii, comma separated (default 3R,5R,10R)
    #[arg(long, global = true, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,

    /// Sample points per sphere
    #[arg(long, global = true, default_value_t = 20)]
    pub points: u32,

    /// Pass/fail tolerance
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,

    /// Number of transparency roots
    #[arg(long, global = true, default_value_t = 3)]
    pub n: u32,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// RNG seed for the sample grid
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn load_domain(path: &Option<PathBuf>, flag: &str) -> Result<DomainSpec> {
    let path = path.as_ref().ok_or_else(|| {
        PotlabError::Argument(format!("missing required --{flag} FILE"))
    })?;
    let text = fs::read_to_string(path)?;
    DomainSpec::from_json(&text)
}

/// Deterministic sample grid: `points` pseudo-random directions per radius.
fn sample_grid(radii: &[f64], points: u32, seed: u64) -> Vec<Vec3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(radii.len() * points as usize);
    for &r in radii {
        for _ in 0..points {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            let s = (1.0 - z * z).sqrt();
            out.push([r * s * phi.cos(), r * s * phi.sin(), r * z]);
        }
    }
    out
}

fn default_radii(cfg: &RunConfig, d: &DomainSpec) -> Vec<f64> {
    cfg.radii.clone().unwrap_or_else(|| {
        let r = d.enclosing_radius();
        vec![3.0 * r, 5.0 * r, 10.0 * r]
    })
}

struct PotentialRow {
    x: Vec3,
    re: f64,
    im: f64,
    method: &'static str,
    order: u32,
}

fn cmd_potential(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let d = load_domain(&cfg.domain, "domain")?;
    let radii = default_radii(cfg, &d);
    let samples = sample_grid(&radii, cfg.points, cfg.seed);
    let r_src = d.enclosing_radius();
    let margin = SEPARATION_MARGIN * d.diameter();

    let (ok_points, flagged): (Vec<Vec3>, Vec<Vec3>) = samples
        .into_iter()
        .partition(|x| d.exterior_distance(*x) >= margin);

    let mut rows = Vec::new();
    if let Some(k) = cfg.k {
        let kw = Wavenumber::new(k)?;
        let vals = helmholtz_volume_direct_many(&d, kw, &ok_points, cfg.order)?;
        for (x, v) in ok_points.iter().zip(&vals) {
            rows.push(PotentialRow {
                x: *x,
                re: v.re,
                im: v.im,
                method: "helmholtz_direct",
                order: cfg.order,
            });
        }
    } else {
        let direct = newtonian_direct_many(&d, &ok_points, cfg.order)?;
        let mc = multipole_coefficients(&d, cfg.l, cfg.order)?;
        for (x, u) in ok_points.iter().zip(&direct) {
            rows.push(PotentialRow {
                x: *x,
                re: *u,
                im: 0.0,
                method: "direct",
                order: cfg.order,
            });
            if crate::geometry::norm(*x) > r_src {
                let m = newtonian_multipole_eval(&mc, *x, r_src)?;
                rows.push(PotentialRow {
                    x: *x,
                    re: m,
                    im: 0.0,
                    method: "multipole",
                    order: cfg.order,
                });
                rows.push(PotentialRow {
                    x: *x,
                    re: u - m,
                    im: 0.0,
                    method: "difference",
                    order: cfg.order,
                });
            }
        }
    }
    for x in &flagged {
        rows.push(PotentialRow {
            x: *x,
            re: f64::NAN,
            im: f64::NAN,
            method: "near_singularity",
            order: cfg.order,
        });
    }

    match cfg.format {
        OutputFormat::Csv => {
            writeln!(out, "x,y,z,re,im,method,order")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{}",
                    r.x[0], r.x[1], r.x[2], r.re, r.im, r.method, r.order
                )?;
            }
        }
        OutputFormat::Json => {
            let arr: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "x": r.x[0], "y": r.x[1], "z": r.x[2],
                        "re": if r.re.is_nan() { serde_json::Value::Null } else { json!(r.re) },
                        "im": if r.im.is_nan() { serde_json::Value::Null } else { json!(r.im) },
                        "method": r.method,
                        "order": r.order,
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &arr)?;
            writeln!(out)?;
        }
    }
    Ok(0)
}

fn cmd_moments(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let d1 = load_domain(&cfg.domain, "domain")?;
    let d2 = load_domain(&cfg.domain2, "domain2")?;
    let verdict = moment_gap(&d1, &d2, cfg.l, cfg.order)?;
    serde_json::to_writer_pretty(&mut *out, &verdict)?;
    writeln!(out)?;
    Ok(if verdict.matched { 0 } else { 1 })
}

fn cmd_transparency(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let k = Wavenumber::new(cfg.k.ok_or_else(|| {
        PotlabError::Argument("transparency requires --k".into())
    })?)?;
    let roots = transparency_roots(cfg.n)?;
    let mut records = Vec::new();
    let mut all_pass = true;
    for root in &roots {
        let a = root.x / k.k();
        // exterior samples clear of the separation margin
        let radii = [1.5 * a, 2.5 * a, 5.0 * a];
        let samples = sample_grid(&radii, cfg.points.div_ceil(3), cfg.seed);
        let residual = verify_transparency(a, k, &samples, cfg.order)?;
        if residual > cfg.tol {
            all_pass = false;
        }
        records.push(json!({
            "n": root.n,
            "x": root.x,
            "a": a,
            "residual": root.residual,
            "potential_residual": residual,
        }));
    }
    serde_json::to_writer_pretty(&mut *out, &records)?;
    writeln!(out)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_geometry(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let d = load_domain(&cfg.domain, "domain")?;
    let mesh = surface_mesh(&d, cfg.mesh_res)?;
    let residual = sphere_residual(&mesh)?;
    let is_ball = matches!(d, DomainSpec::Ball { .. });
    let verdict = if residual <= cfg.tol.max(1e-10) {
        "sphere"
    } else if is_ball {
        "not a sphere (about the origin)"
    } else {
        "not a sphere"
    };

    let ez = UnitVector::new(0.0, 0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x = [
        rng.gen_range(-1.0..1.0f64),
        rng.gen_range(-1.0..1.0f64),
        rng.gen_range(-1.0..1.0f64),
    ];
    let r3 = rotation_derivative_residual(ez, x, 1e-3)?;
    let r4 = rotation_derivative_residual(ez, x, 1e-4)?;

    let report = json!({
        "sphere_residual": residual,
        "verdict": verdict,
        "rotation_derivative": {
            "step_1e3": r3,
            "step_1e4": r4,
            "convergence_ratio": if r4 > 0.0 { r3 / r4 } else { f64::NAN },
        },
        "mesh_res": cfg.mesh_res,
    });
    serde_json::to_writer_pretty(&mut *out, &report)?;
    writeln!(out)?;
    Ok(if verdict == "sphere" { 0 } else { 1 })
}

/// Dispatch a parsed config, writing results to `out`. Returns the process
/// exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    match cfg.command {
        CommandKind::Potential => cmd_potential(cfg, out),
        CommandKind::Moments => cmd_moments(cfg, out),
        CommandKind::Transparency => cmd_transparency(cfg, out),
        CommandKind::Geometry => cmd_geometry(cfg, out),
    }
}

/// Helper used by tests and by main: exterior potential gap over the default
/// sample grid for two domains.
pub fn potential_gap_on_grid(
    d1: &DomainSpec,
    d2: &DomainSpec,
    radii: &[f64],
    points: u32,
    seed: u64,
    order: u32,
) -> Result<f64> {
    let samples = sample_grid(radii, points, seed);
    exterior_potential_gap(d1, d2, &samples, order)
}
