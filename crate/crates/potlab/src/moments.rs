//! Computable pieces of the uniqueness argument: harmonic-moment comparison
//! between two domains, the divergence-theorem identity linking the volume
//! and surface functionals, the surface cross-product functional, and the
//! exterior Newtonian potential gap.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{
    cross, domain_volume, dot, norm, surface_mesh, volume_quadrature, DomainSpec, SurfaceMesh,
    Vec3,
};
use crate::potentials::{multipole_coefficients, newtonian_direct_many};
use crate::specfun::{spherical_harmonic, SphericalIndex, UnitVector};

/// Explicit harmonic polynomials of degree <= 4 with analytic gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogHarmonic {
    /// 1
    One,
    /// x1
    X,
    /// x2
    Y,
    /// x3
    Z,
    /// x1 x2
    Xy,
    /// x1 x3
    Xz,
    /// x2 x3
    Yz,
    /// x1^2 - x2^2
    X2mY2,
    /// 2 x3^2 - x1^2 - x2^2
    Zonal2,
    /// x1 x2 x3
    Xyz,
    /// x3 (x1^2 - x2^2)
    ZX2mY2,
    /// x3 (2 x3^2 - 3 x1^2 - 3 x2^2)
    Zonal3,
    /// x1^4 - 6 x1^2 x2^2 + x2^4  (Re (x1 + i x2)^4)
    Sectoral4,
}

impl CatalogHarmonic {
    pub const ALL: [CatalogHarmonic; 13] = [
        CatalogHarmonic::One,
        CatalogHarmonic::X,
        CatalogHarmonic::Y,
        CatalogHarmonic::Z,
        CatalogHarmonic::Xy,
        CatalogHarmonic::Xz,
        CatalogHarmonic::Yz,
        CatalogHarmonic::X2mY2,
        CatalogHarmonic::Zonal2,
        CatalogHarmonic::Xyz,
        CatalogHarmonic::ZX2mY2,
        CatalogHarmonic::Zonal3,
        CatalogHarmonic::Sectoral4,
    ];

    pub fn value(&self, p: Vec3) -> f64 {
        let [x, y, z] = p;
        match self {
            CatalogHarmonic::One => 1.0,
            CatalogHarmonic::X => x,
            CatalogHarmonic::Y => y,
            CatalogHarmonic::Z => z,
            CatalogHarmonic::Xy => x * y,
            CatalogHarmonic::Xz => x * z,
            CatalogHarmonic::Yz => y * z,
            CatalogHarmonic::X2mY2 => x * x - y * y,
            CatalogHarmonic::Zonal2 => 2.0 * z * z - x * x - y * y,
            CatalogHarmonic::Xyz => x * y * z,
            CatalogHarmonic::ZX2mY2 => z * (x * x - y * y),
            CatalogHarmonic::Zonal3 => z * (2.0 * z * z - 3.0 * x * x - 3.0 * y * y),
            CatalogHarmonic::Sectoral4 => {
                x.powi(4) - 6.0 * x * x * y * y + y.powi(4)
            }
        }
    }

    pub fn gradient(&self, p: Vec3) -> Vec3 {
        let [x, y, z] = p;
        match self {
            CatalogHarmonic::One => [0.0, 0.0, 0.0],
            CatalogHarmonic::X => [1.0, 0.0, 0.0],
            CatalogHarmonic::Y => [0.0, 1.0, 0.0],
            CatalogHarmonic::Z => [0.0, 0.0, 1.0],
            CatalogHarmonic::Xy => [y, x, 0.0],
            CatalogHarmonic::Xz => [z, 0.0, x],
            CatalogHarmonic::Yz => [0.0, z, y],
            CatalogHarmonic::X2mY2 => [2.0 * x, -2.0 * y, 0.0],
            CatalogHarmonic::Zonal2 => [-2.0 * x, -2.0 * y, 4.0 * z],
            CatalogHarmonic::Xyz => [y * z, x * z, x * y],
            CatalogHarmonic::ZX2mY2 => [2.0 * x * z, -2.0 * y * z, x * x - y * y],
            CatalogHarmonic::Zonal3 => [
                -6.0 * x * z,
                -6.0 * y * z,
                6.0 * z * z - 3.0 * x * x - 3.0 * y * y,
            ],
            CatalogHarmonic::Sectoral4 => [
                4.0 * x.powi(3) - 12.0 * x * y * y,
                -12.0 * x * x * y + 4.0 * y.powi(3),
                0.0,
            ],
        }
    }
}

/// A harmonic test function: either a solid harmonic r^l Y_lm (real or
/// imaginary part) or a polynomial from the fixed catalog.
#[derive(Debug, Clone)]
pub enum HarmonicTestFunction {
    SolidHarmonic {
        idx: SphericalIndex,
        real_part: bool,
    },
    Polynomial(CatalogHarmonic),
}

impl HarmonicTestFunction {
    pub fn value(&self, p: Vec3) -> f64 {
        match self {
            HarmonicTestFunction::Polynomial(c) => c.value(p),
            HarmonicTestFunction::SolidHarmonic { idx, real_part } => {
                let r = norm(p);
                if r < 1e-300 {
                    return if idx.ell() == 0 && *real_part {
                        spherical_harmonic(*idx, UnitVector::new(0.0, 0.0, 1.0).unwrap()).re
                    } else {
                        0.0
                    };
                }
                let dir = UnitVector::from_vector(p).expect("nonzero");
                let y = spherical_harmonic(*idx, dir);
                let v = if *real_part { y.re } else { y.im };
                r.powi(idx.ell() as i32) * v
            }
        }
    }

    pub fn gradient(&self, p: Vec3) -> Vec3 {
        match self {
            HarmonicTestFunction::Polynomial(c) => c.gradient(p),
            // solid harmonics: central differences on the (polynomial,
            // hence smooth) function
            HarmonicTestFunction::SolidHarmonic { .. } => {
                let h = 1e-6 * norm(p).max(1.0);
                let mut g = [0.0; 3];
                for i in 0..3 {
                    let mut pp = p;
                    let mut pm = p;
                    pp[i] += h;
                    pm[i] -= h;
                    g[i] = (self.value(pp) - self.value(pm)) / (2.0 * h);
                }
                g
            }
        }
    }

    /// Second-order central-difference Laplacian, for harmonicity checks.
    pub fn laplacian_fd(&self, p: Vec3, step: f64) -> f64 {
        let mut acc = -6.0 * self.value(p);
        for i in 0..3 {
            let mut pp = p;
            let mut pm = p;
            pp[i] += step;
            pm[i] -= step;
            acc += self.value(pp) + self.value(pm);
        }
        acc / (step * step)
    }
}

/// Outcome of a harmonic-moment comparison.
#[derive(Debug, Clone, Serialize)]
pub struct MomentVerdict {
    pub matched: bool,
    pub first_mismatch: Option<MomentMismatch>,
    pub max_discrepancy: f64,
    #[serde(rename = "tolerance")]
    pub tolerance_used: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentMismatch {
    pub l: u32,
    pub m: i32,
}

/// Base absolute tolerance for moment comparison at quadrature order >= 12,
/// scaled per degree by max(1, |D| R^l).
pub const MOMENT_BASE_TOL: f64 = 1e-10;

/// Compare the harmonic moments c_lm of two domains for all l <= max_degree.
/// The first mismatch is reported in lexicographic (l, m ascending) order.
pub fn moment_gap(
    d1: &DomainSpec,
    d2: &DomainSpec,
    max_degree: u32,
    order: u32,
) -> Result<MomentVerdict> {
    let mc1 = multipole_coefficients(d1, max_degree, order)?;
    let mc2 = multipole_coefficients(d2, max_degree, order)?;

    let vol = domain_volume(d1).max(domain_volume(d2));
    let r_src = d1.enclosing_radius().max(d2.enclosing_radius());

    let mut matched = true;
    let mut first_mismatch = None;
    let mut worst_normalized = 0.0_f64;
    let mut max_discrepancy = 0.0_f64;
    let mut tolerance_used = MOMENT_BASE_TOL;

    for l in 0..=max_degree {
        let scale = (vol * r_src.powi(l as i32)).max(1.0);
        let tol_l = MOMENT_BASE_TOL * scale;
        for m in -(l as i32)..=(l as i32) {
            let diff = (mc1.get(l, m) - mc2.get(l, m)).norm();
            let normalized = diff / scale;
            if normalized > MOMENT_BASE_TOL {
                matched = false;
                if first_mismatch.is_none() {
                    first_mismatch = Some(MomentMismatch { l, m });
                }
            }
            if normalized > worst_normalized {
                worst_normalized = normalized;
                max_discrepancy = diff;
                tolerance_used = tol_l;
            }
        }
    }
    Ok(MomentVerdict {
        matched,
        first_mismatch,
        max_discrepancy,
        tolerance_used,
    })
}

/// |int_D grad h . [alpha, x] dx  -  int_S h (N . [alpha, s]) ds|.
/// Both sides computed independently; converges to zero with order and
/// mesh resolution by the divergence theorem.
pub fn divergence_identity_residual(
    d: &DomainSpec,
    h: &HarmonicTestFunction,
    alpha: UnitVector,
    order: u32,
    mesh_res: u32,
) -> Result<f64> {
    let a = alpha.as_array();
    let rule = volume_quadrature(d, order)?;
    let volume_side = rule.integrate(|x| dot(h.gradient(x), cross(a, x)));
    let mesh = surface_mesh(d, mesh_res)?;
    let surface_side = mesh.integrate(|s, n| h.value(s) * dot(n, cross(a, s)));
    Ok((volume_side - surface_side).abs())
}

/// J(S, h) = int_S h(s) [N(s), s] ds, by mesh quadrature.
pub fn surface_cross_functional(mesh: &SurfaceMesh, h: &HarmonicTestFunction) -> Vec3 {
    let mut acc = [0.0; 3];
    for ((s, n), a) in mesh
        .vertices
        .iter()
        .zip(&mesh.node_normals)
        .zip(&mesh.node_areas)
    {
        let c = cross(*n, *s);
        let hv = h.value(*s);
        for i in 0..3 {
            acc[i] += a * hv * c[i];
        }
    }
    acc
}

/// max over the samples of |u1(x) - u2(x)| with u_j the Newtonian potentials.
pub fn exterior_potential_gap(
    d1: &DomainSpec,
    d2: &DomainSpec,
    sample_points: &[Vec3],
    order: u32,
) -> Result<f64> {
    let u1 = newtonian_direct_many(d1, sample_points, order)?;
    let u2 = newtonian_direct_many(d2, sample_points, order)?;
    Ok(u1
        .iter()
        .zip(&u2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn catalog_is_harmonic() {
        let pts = [
            [0.3, -0.7, 0.2],
            [1.1, 0.4, -0.9],
            [-0.5, 0.5, 0.5],
            [2.0, -1.0, 0.3],
        ];
        for h in CatalogHarmonic::ALL {
            let f = HarmonicTestFunction::Polynomial(h);
            for p in pts {
                assert!(
                    f.laplacian_fd(p, 1e-4).abs() <= 1e-6,
                    "{h:?} at {p:?}: {}",
                    f.laplacian_fd(p, 1e-4)
                );
            }
        }
    }

    #[test]
    fn solid_harmonics_are_harmonic() {
        let pts = [[0.3, -0.2, 0.3], [0.2, 0.35, -0.25], [-0.35, 0.25, 0.15]];
        for l in 0..=8u32 {
            for m in -(l as i32)..=(l as i32) {
                for real_part in [true, false] {
                    let f = HarmonicTestFunction::SolidHarmonic {
                        idx: SphericalIndex::new(l, m).unwrap(),
                        real_part,
                    };
                    for p in pts {
                        assert!(
                            f.laplacian_fd(p, 1e-3).abs() <= 1e-5,
                            "l={l} m={m} re={real_part} at {p:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn catalog_gradient_consistency() {
        let p = [0.4, -0.8, 1.2];
        for h in CatalogHarmonic::ALL {
            let f = HarmonicTestFunction::Polynomial(h);
            let g = f.gradient(p);
            for i in 0..3 {
                let step = 1e-6;
                let mut pp = p;
                let mut pm = p;
                pp[i] += step;
                pm[i] -= step;
                let fd = (f.value(pp) - f.value(pm)) / (2.0 * step);
                assert!((g[i] - fd).abs() < 1e-7, "{h:?} component {i}");
            }
        }
    }

    #[test]
    fn identical_domains_match() {
        let d = DomainSpec::ball([0.0; 3], 1.0).unwrap();
        let v = moment_gap(&d, &d, 8, 12).unwrap();
        assert!(v.matched);
        assert!(v.max_discrepancy <= 1e-12);
        assert!(v.first_mismatch.is_none());
        assert!(v.max_discrepancy <= v.tolerance_used);
    }

    #[test]
    fn shifted_ball_dipole_mismatch() {
        let d1 = DomainSpec::ball([0.0; 3], 1.0).unwrap();
        let d2 = DomainSpec::ball([0.0, 0.0, 0.5], 1.0).unwrap();
        let v = moment_gap(&d1, &d2, 4, 14).unwrap();
        assert!(!v.matched);
        let mm = v.first_mismatch.unwrap();
        assert_eq!((mm.l, mm.m), (1, 0));
        let expect = (3.0 / (4.0 * PI)).sqrt() * (4.0 * PI / 3.0) * 0.5;
        assert!(
            (v.max_discrepancy - expect).abs() < 1e-8,
            "got {}, expect {expect}",
            v.max_discrepancy
        );
    }

    #[test]
    fn radius_mismatch_is_monopole() {
        let d1 = DomainSpec::ball([0.0; 3], 1.0).unwrap();
        let d2 = DomainSpec::ball([0.0; 3], 1.1).unwrap();
        let v = moment_gap(&d1, &d2, 2, 12).unwrap();
        assert!(!v.matched);
        let mm = v.first_mismatch.unwrap();
        assert_eq!((mm.l, mm.m), (0, 0));
    }

    #[test]
    fn divergence_identity_on_ball() {
        let d = DomainSpec::ball([0.0; 3], 1.0).unwrap();
        let ez = UnitVector::new(0.0, 0.0, 1.0).unwrap();
        // N parallel to s on the origin-centered sphere: both sides vanish
        let rule = volume_quadrature(&d, 10).unwrap();
        let h = HarmonicTestFunction::Polynomial(CatalogHarmonic::Xy);
        let vol_side = rule.integrate(|x| dot(h.gradient(x), cross(ez.as_array(), x)));
        assert!(vol_side.abs() <= 1e-10);
        let mesh = surface_mesh(&d, 32).unwrap();
        let surf_side = mesh.integrate(|s, n| h.value(s) * dot(n, cross(ez.as_array(), s)));
        assert!(surf_side.abs() <= 1e-10);
    }

    #[test]
    fn divergence_identity_constant_h() {
        let d = DomainSpec::ball([0.3, -0.2, 0.5], 1.2).unwrap();
        let ex = UnitVector::new(1.0, 0.0, 0.0).unwrap();
        let h = HarmonicTestFunction::Polynomial(CatalogHarmonic::One);
        let r = divergence_identity_residual(&d, &h, ex, 10, 32).unwrap();
        assert!(r <= 1e-10, "got {r}");
    }

    #[test]
    fn cross_functional_vanishes_on_origin_sphere() {
        let d = DomainSpec::ball([0.0; 3], 1.0).unwrap();
        let mesh = surface_mesh(&d, 32).unwrap();
        for h in [
            HarmonicTestFunction::Polynomial(CatalogHarmonic::Z),
            HarmonicTestFunction::Polynomial(CatalogHarmonic::Xy),
        ] {
            let j = surface_cross_functional(&mesh, &h);
            assert!(norm(j) <= 1e-10, "{j:?}");
        }
    }

    #[test]
    fn cross_functional_constant_h_closed_mesh() {
        // int_S [N, s] ds = 0 for any closed surface
        let d = DomainSpec::star(
            [0.0; 3],
            vec![
                crate::geometry::RadialCoeff {
                    l: 0,
                    m: 0,
                    c: (4.0 * PI).sqrt(),
                },
                crate::geometry::RadialCoeff { l: 2, m: 0, c: 0.2 },
                crate::geometry::RadialCoeff { l: 3, m: 1, c: 0.1 },
            ],
        )
        .unwrap();
        let mesh = surface_mesh(&d, 48).unwrap();
        let h = HarmonicTestFunction::Polynomial(CatalogHarmonic::One);
        let j = surface_cross_functional(&mesh, &h);
        assert!(norm(j) <= 1e-8, "{j:?}");
    }

    #[test]
    fn translated_sphere_cross_functional_nonzero_and_stable() {
        // On a sphere of center c, [N, s] = [N, c], so
        // J(S, h) = [int_S h N ds, c] = [|D| grad-average of h, c].
        let d = DomainSpec::ball([0.0, 0.0, 0.5], 1.0).unwrap();
        let h = HarmonicTestFunction::Polynomial(CatalogHarmonic::X);
        let j64 = surface_cross_functional(&surface_mesh(&d, 64).unwrap(), &h);
        let j128 = surface_cross_functional(&surface_mesh(&d, 128).unwrap(), &h);
        // [V e_x, 0.5 e_z] = -0.5 V e_y
        let expect = [0.0, -0.5 * 4.0 * PI / 3.0, 0.0];
        assert!(norm(crate::geometry::sub(j64, expect)) < 1e-8);
        assert!(norm(crate::geometry::sub(j64, j128)) < 1e-10 * norm(j64).max(1.0));
        // h = x3 integrates to a gradient parallel to c: exactly zero
        let hz = HarmonicTestFunction::Polynomial(CatalogHarmonic::Z);
        let jz = surface_cross_functional(&surface_mesh(&d, 64).unwrap(), &hz);
        assert!(norm(jz) < 1e-10);
    }

    #[test]
    fn potential_gap_cases() {
        let d = DomainSpec::ball([0.0; 3], 1.0).unwrap();
        let samples = [[5.0, 0.0, 0.0], [0.0, 5.0, 0.0], [0.0, 0.0, -5.0]];
        assert!(exterior_potential_gap(&d, &d, &samples, 10).unwrap() <= 1e-12);

        let d2 = DomainSpec::ball([0.0, 0.0, 1.0], 1.0).unwrap();
        let gap = exterior_potential_gap(&d, &d2, &samples, 12).unwrap();
        // shell theorem closed forms for both balls
        let expect = samples
            .iter()
            .map(|x| {
                let r1 = norm(*x);
                let r2 = norm(crate::geometry::sub(*x, [0.0, 0.0, 1.0]));
                ((1.0 / r1 - 1.0 / r2) / 3.0).abs()
            })
            .fold(0.0, f64::max);
        assert!((gap - expect).abs() < 1e-10, "gap {gap} expect {expect}");
    }
}
