//! Transparent balls for the Helmholtz kernel: the radial integral
//! F(a, k) = int_0^a r^2 j_0(kr) dr, the roots of tan x = x that make it
//! vanish, and independent quadrature verification of the vanishing
//! exterior potential.

use serde::Serialize;

use crate::error::{PotlabError, Result};
use crate::geometry::{DomainSpec, Vec3};
use crate::par;
use crate::potentials::{helmholtz_volume_direct_many, Wavenumber};

/// A certified positive solution x_n of tan x = x.
#[derive(Debug, Clone, Serialize)]
pub struct TransparencyRoot {
    pub n: u32,
    pub x: f64,
    pub bracket: (f64, f64),
    /// |G(x)| with G(x) = sin x - x cos x; G is smooth through the poles
    /// of tan, so it is the function we bracket and refine on.
    pub residual: f64,
}

/// G(x) = sin x - x cos x. Zero exactly where tan x = x (away from x = 0).
pub fn root_function(x: f64) -> f64 {
    x.sin() - x * x.cos()
}

/// F(a, k) = int_0^a r^2 j_0(kr) dr = (sin(ka) - ka cos(ka)) / k^3.
pub fn radial_integral(a: f64, k: Wavenumber) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(PotlabError::Argument(format!(
            "radius must be positive and finite, got {a}"
        )));
    }
    let ka = k.k() * a;
    if ka < 0.5 {
        // series branch: (sin x - x cos x)/k^3 cancels catastrophically for
        // small x; F = a^3 sum_n (-1)^n (ka)^{2n} / ((2n+3) (2n+1)!)
        let x2 = ka * ka;
        let mut term = 1.0;
        let mut sum = 1.0 / 3.0;
        for n in 1..30 {
            let nf = n as f64;
            term *= -x2 / ((2.0 * nf) * (2.0 * nf + 1.0));
            let contrib = term / (2.0 * nf + 3.0);
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        return Ok(a.powi(3) * sum);
    }
    Ok((ka.sin() - ka * ka.cos()) / k.k().powi(3))
}

// Brent's method on a sign-changing bracket.
fn brent<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa * fb > 0.0 {
        return Err(PotlabError::Argument(format!(
            "no sign change on bracket ({a}, {b})"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Ok(b)
}

const BRACKET_SHRINK: f64 = 1e-9;

/// The first `n_max` positive roots of tan x = x, one per interval
/// (n pi, n pi + pi/2), certified by sign change of G.
pub fn transparency_roots(n_max: u32) -> Result<Vec<TransparencyRoot>> {
    if n_max == 0 || n_max > 10_000 {
        return Err(PotlabError::Argument(format!(
            "n_max must be in 1..=10000, got {n_max}"
        )));
    }
    let ns: Vec<u32> = (1..=n_max).collect();
    let roots = par::map_collect(&ns, |&n| {
        let lo = n as f64 * std::f64::consts::PI + BRACKET_SHRINK;
        let hi = (n as f64 + 0.5) * std::f64::consts::PI - BRACKET_SHRINK;
        let x = brent(root_function, lo, hi, 1e-15).expect("G changes sign on (n pi, n pi + pi/2)");
        TransparencyRoot {
            n,
            x,
            bracket: (lo, hi),
            residual: root_function(x).abs(),
        }
    });
    Ok(roots)
}

/// Radii a_n = x_n / k of balls whose Helmholtz volume potential vanishes
/// identically outside the ball.
pub fn transparency_radii(k: Wavenumber, n_max: u32) -> Result<Vec<f64>> {
    Ok(transparency_roots(n_max)?
        .into_iter()
        .map(|r| r.x / k.k())
        .collect())
}

/// Radii a_n = n pi / k at which the single-layer potential of the sphere
/// vanishes identically outside (sin(ka) = 0).
pub fn surface_transparency_radii(k: Wavenumber, n_max: u32) -> Result<Vec<f64>> {
    if n_max == 0 || n_max > 10_000 {
        return Err(PotlabError::Argument(format!(
            "n_max must be in 1..=10000, got {n_max}"
        )));
    }
    Ok((1..=n_max)
        .map(|n| n as f64 * std::f64::consts::PI / k.k())
        .collect())
}

/// Independent check that the ball B_a is transparent at wavenumber k:
/// max modulus of the raw-quadrature Helmholtz potential over the samples.
/// Never touches the closed form.
pub fn verify_transparency(
    a: f64,
    k: Wavenumber,
    samples: &[Vec3],
    order: u32,
) -> Result<f64> {
    let d = DomainSpec::ball([0.0; 3], a)?;
    let values = helmholtz_volume_direct_many(&d, k, samples, order)?;
    Ok(values.iter().map(|v| v.norm()).fold(0.0, f64::max))
}
