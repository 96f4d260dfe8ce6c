//! Domain representations (balls and star-shaped domains), volume and
//! surface quadrature, Rodrigues rotations, and the origin-relative sphere
//! residual max |[s, N]| / |s|.

use serde::{Deserialize, Serialize};

use crate::error::{PotlabError, Result};
use crate::specfun::{
    legendre_normalized, legendre_normalized_dtheta, real_spherical_harmonic, SphericalIndex,
    UnitVector,
};

pub type Vec3 = [f64; 3];

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // initial guess (Abramowitz & Stegun 22.16.6)
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta) times
/// a uniform trapezoid rule in phi. Exact for spherical polynomials of
/// degree <= order.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub dirs: Vec<UnitVector>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(order: u32) -> Self {
        let n_theta = (order as usize / 2) + 1;
        let n_phi = order as usize + 1;
        Self::product(n_theta, n_phi)
    }

    /// Explicit node counts: `n_theta` Gauss nodes in cos(theta), `n_phi`
    /// equispaced azimuths.
    pub fn product(n_theta: usize, n_phi: usize) -> Self {
        let (ct, wt) = gauss_legendre(n_theta);
        let wphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut dirs = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for i in 0..n_theta {
            let theta = ct[i].clamp(-1.0, 1.0).acos();
            for j in 0..n_phi {
                let phi = wphi * j as f64;
                dirs.push(UnitVector::from_angles(theta, phi));
                weights.push(wt[i] * wphi);
            }
        }
        Self { dirs, weights }
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }
}

/// A single real-harmonic coefficient of a star-shaped radial function.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct RadialCoeff {
    pub l: u32,
    pub m: i32,
    pub c: f64,
}

/// Declarative domain description. Serializes as
/// `{"type":"ball","center":[x,y,z],"radius":r}` or
/// `{"type":"star","center":[...],"coeffs":[{"l":..,"m":..,"c":..},...]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DomainSpec {
    Ball { center: Vec3, radius: f64 },
    Star { center: Vec3, coeffs: Vec<RadialCoeff> },
}

const STAR_POSITIVITY_SAMPLES: u32 = 140; // product rule => >= 10^4 directions

impl DomainSpec {
    pub fn ball(center: Vec3, radius: f64) -> Result<Self> {
        let d = DomainSpec::Ball { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn star(center: Vec3, coeffs: Vec<RadialCoeff>) -> Result<Self> {
        let d = DomainSpec::Star { center, coeffs };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: DomainSpec = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Ball { radius, .. } => {
                if !(*radius > 0.0) || !radius.is_finite() {
                    return Err(PotlabError::Argument(format!(
                        "ball radius must be positive and finite, got {radius}"
                    )));
                }
            }
            DomainSpec::Star { coeffs, .. } => {
                for rc in coeffs {
                    SphericalIndex::new(rc.l, rc.m)?;
                }
                // positivity of rho on a dense direction sample
                let rule = SphereRule::product(
                    STAR_POSITIVITY_SAMPLES as usize,
                    STAR_POSITIVITY_SAMPLES as usize,
                );
                for dir in &rule.dirs {
                    let rho = self.radius_in_direction(*dir);
                    if !(rho > 0.0) {
                        return Err(PotlabError::Argument(format!(
                            "star-shaped radial function is not positive: rho({:?}) = {rho}",
                            dir.as_array()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn center(&self) -> Vec3 {
        match self {
            DomainSpec::Ball { center, .. } | DomainSpec::Star { center, .. } => *center,
        }
    }

    /// rho(omega): distance from the center to the boundary along `dir`.
    pub fn radius_in_direction(&self, dir: UnitVector) -> f64 {
        match self {
            DomainSpec::Ball { radius, .. } => *radius,
            DomainSpec::Star { coeffs, .. } => coeffs
                .iter()
                .map(|rc| {
                    rc.c * real_spherical_harmonic(
                        SphericalIndex::new(rc.l, rc.m).expect("validated"),
                        dir,
                    )
                })
                .sum(),
        }
    }

    /// rho and its angular derivatives (d rho / d theta, d rho / d phi).
    fn radial_with_derivs(&self, theta: f64, phi: f64) -> (f64, f64, f64) {
        match self {
            DomainSpec::Ball { radius, .. } => (*radius, 0.0, 0.0),
            DomainSpec::Star { coeffs, .. } => {
                let lmax = coeffs.iter().map(|rc| rc.l).max().unwrap_or(0);
                let p = legendre_normalized(lmax, theta.cos());
                let dp = legendre_normalized_dtheta(lmax, theta.cos());
                let tri = |l: u32, m: u32| (l as usize * (l as usize + 1)) / 2 + m as usize;
                let mut rho = 0.0;
                let mut drho_dt = 0.0;
                let mut drho_dp = 0.0;
                for rc in coeffs {
                    let mabs = rc.m.unsigned_abs();
                    let mf = mabs as f64;
                    let (ang, dang) = match rc.m.cmp(&0) {
                        std::cmp::Ordering::Equal => (1.0, 0.0),
                        std::cmp::Ordering::Greater => (
                            std::f64::consts::SQRT_2 * (mf * phi).cos(),
                            -std::f64::consts::SQRT_2 * mf * (mf * phi).sin(),
                        ),
                        std::cmp::Ordering::Less => (
                            std::f64::consts::SQRT_2 * (mf * phi).sin(),
                            std::f64::consts::SQRT_2 * mf * (mf * phi).cos(),
                        ),
                    };
                    rho += rc.c * p[tri(rc.l, mabs)] * ang;
                    drho_dt += rc.c * dp[tri(rc.l, mabs)] * ang;
                    drho_dp += rc.c * p[tri(rc.l, mabs)] * dang;
                }
                (rho, drho_dt, drho_dp)
            }
        }
    }

    /// Largest rho over a dense direction sample (exact for balls).
    pub fn max_radius(&self) -> f64 {
        match self {
            DomainSpec::Ball { radius, .. } => *radius,
            DomainSpec::Star { .. } => {
                let rule = SphereRule::product(96, 192);
                rule.dirs
                    .iter()
                    .map(|d| self.radius_in_direction(*d))
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Radius of the smallest origin-centered ball containing the domain
    /// (upper bound for star domains, exact for balls).
    pub fn enclosing_radius(&self) -> f64 {
        norm(self.center()) + self.max_radius()
    }

    /// Upper bound on the domain diameter.
    pub fn diameter(&self) -> f64 {
        2.0 * self.max_radius()
    }

    /// Lower bound on the distance from x to the domain.
    pub fn exterior_distance(&self, x: Vec3) -> f64 {
        norm(sub(x, self.center())) - self.max_radius()
    }
}

/// Volume of the domain; for star-shaped domains (1/3) * int rho^3 dOmega.
pub fn domain_volume(d: &DomainSpec) -> f64 {
    match d {
        DomainSpec::Ball { radius, .. } => 4.0 * std::f64::consts::PI / 3.0 * radius.powi(3),
        DomainSpec::Star { coeffs, .. } => {
            let lmax = coeffs.iter().map(|rc| rc.l).max().unwrap_or(0);
            let rule = SphereRule::new((3 * lmax + 2).max(16));
            let mut v = 0.0;
            for (dir, w) in rule.dirs.iter().zip(&rule.weights) {
                v += w * d.radius_in_direction(*dir).powi(3);
            }
            v / 3.0
        }
    }
}

/// Volume quadrature nodes and positive weights for a domain.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Vec3>,
    pub weights: Vec<f64>,
    pub order: u32,
}

impl QuadratureRule {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: Fn(Vec3) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}

/// Radial Gauss-Legendre (order nodes on [0, rho(omega)]) composed with a
/// spherical product rule. Spectrally accurate for smooth radial functions.
pub fn volume_quadrature(d: &DomainSpec, order: u32) -> Result<QuadratureRule> {
    if order < 2 {
        return Err(PotlabError::Argument(format!(
            "quadrature order must be >= 2, got {order}"
        )));
    }
    let n_r = order as usize;
    let (gx, gw) = gauss_legendre(n_r);
    let sphere = SphereRule::product(order as usize + 2, 2 * (order as usize + 2));
    let c = d.center();
    let mut nodes = Vec::with_capacity(n_r * sphere.len());
    let mut weights = Vec::with_capacity(n_r * sphere.len());
    for (dir, wd) in sphere.dirs.iter().zip(&sphere.weights) {
        let rho = d.radius_in_direction(*dir);
        for (xr, wr) in gx.iter().zip(&gw) {
            // map [-1,1] -> [0, rho]
            let r = 0.5 * rho * (xr + 1.0);
            let jac = 0.5 * rho;
            nodes.push(add(c, scale(dir.as_array(), r)));
            weights.push(wd * wr * jac * r * r);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        order,
    })
}

/// Triangulated boundary with analytic outward normals and lumped node areas
/// taken from the underlying surface product rule (so surface integrals over
/// the node set are spectrally accurate for smooth integrands).
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    pub node_normals: Vec<Vec3>,
    pub node_areas: Vec<f64>,
}

impl SurfaceMesh {
    pub fn total_area(&self) -> f64 {
        self.node_areas.iter().sum()
    }

    /// Surface integral of a scalar function of (position, normal).
    pub fn integrate<F: Fn(Vec3, Vec3) -> f64>(&self, f: F) -> f64 {
        self.vertices
            .iter()
            .zip(&self.node_normals)
            .zip(&self.node_areas)
            .map(|((s, n), a)| a * f(*s, *n))
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        // bounding-box based upper estimate
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for i in 0..3 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        norm(sub(hi, lo))
    }
}

/// Build the boundary mesh of a domain. `resolution` is the number of
/// latitude rings (Gauss nodes); 2*resolution azimuths per ring. Normals are
/// computed from the analytic radial parameterization, not from facets.
pub fn surface_mesh(d: &DomainSpec, resolution: u32) -> Result<SurfaceMesh> {
    if resolution < 8 {
        return Err(PotlabError::Argument(format!(
            "mesh resolution must be >= 8, got {resolution}"
        )));
    }
    let n_theta = resolution as usize;
    let n_phi = 2 * resolution as usize;
    let (ct, wt) = gauss_legendre(n_theta);
    let wphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let c = d.center();

    let n_ring_nodes = n_theta * n_phi;
    let mut vertices = Vec::with_capacity(n_ring_nodes + 2);
    let mut node_normals = Vec::with_capacity(n_ring_nodes + 2);
    let mut node_areas = Vec::with_capacity(n_ring_nodes + 2);

    // two pole vertices close the mesh; they carry zero lumped area
    for &pole_z in &[1.0, -1.0] {
        let theta = if pole_z > 0.0 { 0.0 } else { std::f64::consts::PI };
        let (rho, _, _) = d.radial_with_derivs(theta, 0.0);
        let dir = [0.0, 0.0, pole_z];
        vertices.push(add(c, scale(dir, rho)));
        node_normals.push(dir);
        node_areas.push(0.0);
    }

    // rings ordered from north (cos theta near 1) to south
    for i in (0..n_theta).rev() {
        let theta = ct[i].clamp(-1.0, 1.0).acos();
        let (st, cth) = (theta.sin(), theta.cos());
        for j in 0..n_phi {
            let phi = wphi * j as f64;
            let (rho, drt, drp) = d.radial_with_derivs(theta, phi);
            let (sp, cp) = (phi.sin(), phi.cos());
            let rhat = [st * cp, st * sp, cth];
            let that = [cth * cp, cth * sp, -st];
            let phat = [-sp, cp, 0.0];
            vertices.push(add(c, scale(rhat, rho)));
            // outward normal: gradient of r - rho(theta, phi)
            let mut nvec = scale(rhat, rho);
            nvec = sub(nvec, scale(that, drt));
            nvec = sub(nvec, scale(phat, drp / st));
            let nn = norm(nvec);
            node_normals.push(scale(nvec, 1.0 / nn));
            // dS = rho * sqrt(rho^2 + rho_t^2 + rho_p^2/sin^2) dOmega
            let ds = rho * (rho * rho + drt * drt + (drp / st) * (drp / st)).sqrt();
            node_areas.push(wt[i] * wphi * ds);
        }
    }

    let ring = |i: usize, j: usize| 2 + i * n_phi + (j % n_phi);
    let mut triangles = Vec::with_capacity(2 * n_ring_nodes);
    for j in 0..n_phi {
        triangles.push([0, ring(0, j), ring(0, j + 1)]);
        triangles.push([1, ring(n_theta - 1, j + 1), ring(n_theta - 1, j)]);
    }
    for i in 0..n_theta - 1 {
        for j in 0..n_phi {
            triangles.push([ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)]);
            triangles.push([ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)]);
        }
    }

    Ok(SurfaceMesh {
        vertices,
        triangles,
        node_normals,
        node_areas,
    })
}

/// Rodrigues rotation of x about a unit axis by `angle` radians.
pub fn rotation_apply(axis: UnitVector, angle: f64, x: Vec3) -> Vec3 {
    let a = axis.as_array();
    let (s, c) = angle.sin_cos();
    let kxv = cross(a, x);
    let kdv = dot(a, x);
    [
        x[0] * c + kxv[0] * s + a[0] * kdv * (1.0 - c),
        x[1] * c + kxv[1] * s + a[1] * kdv * (1.0 - c),
        x[2] * c + kxv[2] * s + a[2] * kdv * (1.0 - c),
    ]
}

/// Central-difference check of d/dphi R(phi)x |_{phi=0} = [axis, x].
/// Returns the norm of the difference; O(step^2) * |x|.
pub fn rotation_derivative_residual(axis: UnitVector, x: Vec3, step: f64) -> Result<f64> {
    if !(step > 0.0 && step <= 1e-3) {
        return Err(PotlabError::Argument(format!(
            "step must be in (0, 1e-3], got {step}"
        )));
    }
    let plus = rotation_apply(axis, step, x);
    let minus = rotation_apply(axis, -step, x);
    let fd = scale(sub(plus, minus), 1.0 / (2.0 * step));
    Ok(norm(sub(fd, cross(axis.as_array(), x))))
}

/// max over mesh nodes of |[s, N(s)]| / |s|, s relative to the coordinate
/// origin. Zero exactly for origin-centered spheres.
pub fn sphere_residual(mesh: &SurfaceMesh) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (s, n) in mesh.vertices.iter().zip(&mesh.node_normals) {
        let r = norm(*s);
        if r < 1e-14 {
            return Err(PotlabError::DegenerateInput(
                "mesh node at the coordinate origin".into(),
            ));
        }
        worst = worst.max(norm(cross(*s, *n)) / r);
    }
    Ok(worst)
}
