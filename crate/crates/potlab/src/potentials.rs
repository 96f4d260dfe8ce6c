//! Newtonian and Helmholtz volume/surface potentials: direct quadrature
//! evaluation in the exterior region, truncated multipole expansions, and
//! the closed forms for balls and spheres.

use num_complex::Complex64;

use crate::error::{PotlabError, Result};
use crate::geometry::{
    norm, sub, volume_quadrature, DomainSpec, QuadratureRule, SurfaceMesh, Vec3,
};
use crate::par;
use crate::specfun::{legendre_normalized, UnitVector};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Relative separation margin for direct quadrature: the evaluation point
/// must be at least this fraction of the domain diameter away from it.
pub const SEPARATION_MARGIN: f64 = 0.1;

/// Fixed positive wavenumber of the Helmholtz kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber(f64);

impl Wavenumber {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(PotlabError::Argument(format!(
                "wavenumber must be positive and finite, got {k}"
            )));
        }
        Ok(Self(k))
    }

    pub fn k(&self) -> f64 {
        self.0
    }
}

/// Truncated array of harmonic moments c_{lm} = int_D |y|^l conj(Y_lm) dy.
#[derive(Debug, Clone)]
pub struct MultipoleCoefficients {
    max_degree: u32,
    coeffs: Vec<Complex64>, // index l^2 + l + m
}

impl MultipoleCoefficients {
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn get(&self, ell: u32, m: i32) -> Complex64 {
        debug_assert!(ell <= self.max_degree && m.unsigned_abs() <= ell);
        self.coeffs[Self::flat_index(ell, m)]
    }

    fn flat_index(ell: u32, m: i32) -> usize {
        let l = ell as i64;
        (l * l + l + m as i64) as usize
    }
}

fn check_separation(d: &DomainSpec, x: Vec3) -> Result<()> {
    let dist = d.exterior_distance(x);
    let diam = d.diameter();
    if dist < SEPARATION_MARGIN * diam {
        return Err(PotlabError::NearSingularity(format!(
            "evaluation point within {:.3} of the domain (need >= {:.3}); \
             use a closed form for near or interior points",
            dist,
            SEPARATION_MARGIN * diam
        )));
    }
    Ok(())
}

fn kernel_sum<F: Fn(f64) -> Complex64>(rule: &QuadratureRule, x: Vec3, kernel: F) -> Complex64 {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(y, w)| *w * kernel(norm(sub(x, *y))))
        .sum()
}

/// Newtonian potential u(x) = int_D dy / (4 pi |x - y|) by volume quadrature.
/// Exterior evaluation only, with a separation margin of 0.1 diam(D).
pub fn newtonian_direct(d: &DomainSpec, x: Vec3, order: u32) -> Result<f64> {
    check_separation(d, x)?;
    let rule = volume_quadrature(d, order)?;
    Ok(newtonian_direct_with_rule(&rule, x))
}

/// Same kernel sum against a prebuilt rule (no separation check).
pub fn newtonian_direct_with_rule(rule: &QuadratureRule, x: Vec3) -> f64 {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(y, w)| w / (FOUR_PI * norm(sub(x, *y))))
        .sum()
}

/// Batch Newtonian evaluation over many points, sharing one quadrature rule.
/// Parallel over points with the `parallel` feature.
pub fn newtonian_direct_many(d: &DomainSpec, points: &[Vec3], order: u32) -> Result<Vec<f64>> {
    for x in points {
        check_separation(d, *x)?;
    }
    let rule = volume_quadrature(d, order)?;
    Ok(par::map_collect(points, |x| {
        newtonian_direct_with_rule(&rule, *x)
    }))
}

/// Harmonic moments of the domain against solid harmonics, by volume
/// quadrature. Parallel over quadrature nodes.
pub fn multipole_coefficients(
    d: &DomainSpec,
    max_degree: u32,
    order: u32,
) -> Result<MultipoleCoefficients> {
    if max_degree > 20 {
        return Err(PotlabError::Argument(format!(
            "multipole degree capped at 20, got {max_degree}"
        )));
    }
    let rule = volume_quadrature(d, order)?;
    let n_coeff = ((max_degree + 1) * (max_degree + 1)) as usize;

    let indices: Vec<usize> = (0..rule.nodes.len()).collect();
    let chunks: Vec<&[usize]> = indices.chunks(4096).collect();
    let partials = par::map_collect(&chunks, |chunk| {
        let mut acc = vec![Complex64::new(0.0, 0.0); n_coeff];
        for &i in chunk.iter() {
            let y = rule.nodes[i];
            let w = rule.weights[i];
            let r = norm(y);
            if r < 1e-300 {
                acc[0] += w * legendre_normalized(0, 1.0)[0];
                continue;
            }
            let dir = UnitVector::from_vector(y).expect("nonzero");
            let (theta, phi) = dir.angles();
            let p = legendre_normalized(max_degree, theta.cos());
            let tri = |l: u32, m: u32| (l as usize * (l as usize + 1)) / 2 + m as usize;
            let mut r_pow = 1.0;
            for l in 0..=max_degree {
                for m in 0..=l as i32 {
                    let plm = p[tri(l, m as u32)];
                    let e = Complex64::from_polar(1.0, m as f64 * phi);
                    let ylm = plm * e;
                    // conj(Y_lm) integrand
                    acc[MultipoleCoefficients::flat_index(l, m)] += w * r_pow * ylm.conj();
                    if m > 0 {
                        // Y_{l,-m} = (-1)^m conj(Y_lm)
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        acc[MultipoleCoefficients::flat_index(l, -m)] += w * r_pow * sign * ylm;
                    }
                }
                r_pow *= r;
            }
        }
        acc
    });

    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_coeff];
    for part in partials {
        for (c, p) in coeffs.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok(MultipoleCoefficients { max_degree, coeffs })
}

/// Far-field multipole evaluation
/// u(x) = sum_{lm} c_lm Y_lm(x0) / ((2l+1) |x|^{l+1}),
/// valid for |x| > R_src >= sup_{y in D} |y|. The 1/(2l+1) weight is the
/// one that makes the expansion reproduce the shell theorem exactly with
/// orthonormal harmonics.
pub fn newtonian_multipole_eval(
    mc: &MultipoleCoefficients,
    x: Vec3,
    r_src: f64,
) -> Result<f64> {
    let r = norm(x);
    if r <= r_src {
        return Err(PotlabError::ConvergenceRegion(format!(
            "|x| = {r} must exceed the source radius {r_src}"
        )));
    }
    let dir = UnitVector::from_vector(x)?;
    let (theta, phi) = dir.angles();
    let p = legendre_normalized(mc.max_degree, theta.cos());
    let tri = |l: u32, m: u32| (l as usize * (l as usize + 1)) / 2 + m as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut inv_r_pow = 1.0 / r;
    for l in 0..=mc.max_degree {
        let mut degree_sum = Complex64::new(0.0, 0.0);
        for m in -(l as i32)..=(l as i32) {
            let mabs = m.unsigned_abs();
            let plm = p[tri(l, mabs)];
            let e = Complex64::from_polar(1.0, mabs as f64 * phi);
            let ylm = if m >= 0 {
                plm * e
            } else {
                let sign = if mabs % 2 == 0 { 1.0 } else { -1.0 };
                sign * plm * e.conj()
            };
            degree_sum += mc.get(l, m) * ylm;
        }
        sum += degree_sum * inv_r_pow / (2.0 * l as f64 + 1.0);
        inv_r_pow /= r;
    }
    Ok(sum.re)
}

/// Helmholtz volume potential int_D e^{ik|x-y|} / (4 pi |x-y|) dy by
/// quadrature, exterior points only.
pub fn helmholtz_volume_direct(
    d: &DomainSpec,
    k: Wavenumber,
    x: Vec3,
    order: u32,
) -> Result<Complex64> {
    check_separation(d, x)?;
    let rule = volume_quadrature(d, order)?;
    Ok(helmholtz_volume_with_rule(&rule, k, x))
}

pub fn helmholtz_volume_with_rule(rule: &QuadratureRule, k: Wavenumber, x: Vec3) -> Complex64 {
    let kk = k.k();
    kernel_sum(rule, x, |r| {
        Complex64::from_polar(1.0 / (FOUR_PI * r), kk * r)
    })
}

/// Batch Helmholtz evaluation, parallel over points.
pub fn helmholtz_volume_direct_many(
    d: &DomainSpec,
    k: Wavenumber,
    points: &[Vec3],
    order: u32,
) -> Result<Vec<Complex64>> {
    for x in points {
        check_separation(d, *x)?;
    }
    let rule = volume_quadrature(d, order)?;
    Ok(par::map_collect(points, |x| {
        helmholtz_volume_with_rule(&rule, k, *x)
    }))
}

/// Closed form for the Helmholtz volume potential of the ball B_a:
/// U(x) = F(a, k) e^{ik|x|} / |x| with F = (sin(ka) - ka cos(ka)) / k^3.
/// Only the l = 0 term of the separated kernel expansion survives.
pub fn helmholtz_ball_closed_form(a: f64, k: Wavenumber, x: Vec3) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(PotlabError::Argument(format!(
            "ball radius must be positive, got {a}"
        )));
    }
    let r = norm(x);
    if r <= a {
        return Err(PotlabError::Domain(format!(
            "closed form valid only for |x| > a, got |x| = {r}, a = {a}"
        )));
    }
    let f = crate::transparency::radial_integral(a, k)?;
    Ok(f * Complex64::from_polar(1.0 / r, k.k() * r))
}

/// Single-layer Helmholtz potential int_S g(x, t) dt on a mesh, exterior
/// points only.
pub fn helmholtz_surface_direct(mesh: &SurfaceMesh, k: Wavenumber, x: Vec3) -> Result<Complex64> {
    let diam = mesh.diameter();
    let dist = mesh
        .vertices
        .iter()
        .map(|v| norm(sub(x, *v)))
        .fold(f64::INFINITY, f64::min);
    if dist < SEPARATION_MARGIN * diam {
        return Err(PotlabError::NearSingularity(format!(
            "evaluation point within {dist:.3} of the surface (need >= {:.3})",
            SEPARATION_MARGIN * diam
        )));
    }
    let kk = k.k();
    let mut sum = Complex64::new(0.0, 0.0);
    for (v, a) in mesh.vertices.iter().zip(&mesh.node_areas) {
        let r = norm(sub(x, *v));
        sum += *a * Complex64::from_polar(1.0 / (FOUR_PI * r), kk * r);
    }
    Ok(sum)
}

/// Closed form for the single-layer potential of the sphere of radius a:
/// V(x) = a sin(ka) e^{ik|x|} / (k |x|); vanishes identically for ka = n pi.
pub fn sphere_surface_closed_form(a: f64, k: Wavenumber, x: Vec3) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(PotlabError::Argument(format!(
            "sphere radius must be positive, got {a}"
        )));
    }
    let r = norm(x);
    if r <= a {
        return Err(PotlabError::Domain(format!(
            "closed form valid only for |x| > a, got |x| = {r}, a = {a}"
        )));
    }
    let kk = k.k();
    Ok(a * (kk * a).sin() / kk * Complex64::from_polar(1.0 / r, kk * r))
}
