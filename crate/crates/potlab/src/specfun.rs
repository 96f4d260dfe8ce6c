//! Spherical special functions: fully normalized associated Legendre
//! functions, complex and real spherical harmonics (Condon-Shortley phase,
//! orthonormal on S^2), spherical Bessel j_l / y_l and the spherical Hankel
//! function of the first kind.

use num_complex::Complex64;

use crate::error::{PotlabError, Result};

/// Highest supported harmonic degree. Double precision degrades beyond this.
pub const MAX_DEGREE: u32 = 64;

/// Degree/order pair (l, m) with |m| <= l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SphericalIndex {
    ell: u32,
    m: i32,
}

impl SphericalIndex {
    pub fn new(ell: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > ell {
            return Err(PotlabError::Domain(format!(
                "spherical index requires |m| <= l, got l={ell}, m={m}"
            )));
        }
        Ok(Self { ell, m })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn m(&self) -> i32 {
        self.m
    }
}

/// A direction on the unit sphere, |v| = 1 within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(PotlabError::Domain(format!(
                "not a unit vector: |v|^2 = {n2}"
            )));
        }
        Ok(Self { x, y, z })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(PotlabError::DegenerateInput(
                "cannot normalize zero or non-finite vector".into(),
            ));
        }
        Ok(Self {
            x: v[0] / n,
            y: v[1] / n,
            z: v[2] / n,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Polar angle theta in [0, pi] and azimuth phi in (-pi, pi].
    pub fn angles(&self) -> (f64, f64) {
        let theta = self.z.clamp(-1.0, 1.0).acos();
        let phi = self.y.atan2(self.x);
        (theta, phi)
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = (theta.sin(), theta.cos());
        Self {
            x: st * phi.cos(),
            y: st * phi.sin(),
            z: ct,
        }
    }
}

fn tri_index(ell: u32, m: u32) -> usize {
    (ell as usize * (ell as usize + 1)) / 2 + m as usize
}

/// Fully normalized associated Legendre functions Pbar_l^m(cos theta) for
/// 0 <= m <= l <= lmax, Condon-Shortley phase included, such that
/// Y_lm = Pbar_l^m(cos theta) e^{i m phi} is orthonormal on S^2.
/// Returned flat triangular array indexed by l(l+1)/2 + m.
pub fn legendre_normalized(lmax: u32, cos_theta: f64) -> Vec<f64> {
    let x = cos_theta.clamp(-1.0, 1.0);
    let sin_theta = (1.0 - x * x).max(0.0).sqrt();
    let n = tri_index(lmax, lmax) + 1;
    let mut p = vec![0.0; n];
    p[0] = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    // diagonal: Pbar_m^m = -sqrt((2m+1)/(2m)) sin(theta) Pbar_{m-1}^{m-1}
    for m in 1..=lmax {
        let mm = m as f64;
        p[tri_index(m, m)] =
            -((2.0 * mm + 1.0) / (2.0 * mm)).sqrt() * sin_theta * p[tri_index(m - 1, m - 1)];
    }
    // first off-diagonal: Pbar_{m+1}^m = sqrt(2m+3) x Pbar_m^m
    for m in 0..lmax {
        let mm = m as f64;
        p[tri_index(m + 1, m)] = (2.0 * mm + 3.0).sqrt() * x * p[tri_index(m, m)];
    }
    // upward in l
    for m in 0..=lmax {
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = ((2.0 * lf + 1.0) / (2.0 * lf - 3.0)
                * ((lf - 1.0) * (lf - 1.0) - mf * mf)
                / (lf * lf - mf * mf))
                .sqrt();
            p[tri_index(l, m)] = a * x * p[tri_index(l - 1, m)] - b * p[tri_index(l - 2, m)];
        }
    }
    p
}

/// d/dtheta of the normalized associated Legendre functions at the same
/// argument. Valid away from the poles (sin theta != 0).
pub fn legendre_normalized_dtheta(lmax: u32, cos_theta: f64) -> Vec<f64> {
    let x = cos_theta.clamp(-1.0, 1.0);
    let sin_theta = (1.0 - x * x).max(0.0).sqrt();
    let p = legendre_normalized(lmax, cos_theta);
    let n = p.len();
    let mut dp = vec![0.0; n];
    if sin_theta == 0.0 {
        return dp;
    }
    for l in 0..=lmax {
        for m in 0..=l {
            let lf = l as f64;
            let mf = m as f64;
            let below = if l > 0 && m <= l - 1 {
                let c = ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf * lf - mf * mf)).sqrt();
                c * p[tri_index(l - 1, m)]
            } else {
                0.0
            };
            dp[tri_index(l, m)] = (lf * x * p[tri_index(l, m)] - below) / sin_theta;
        }
    }
    dp
}

/// Complex spherical harmonic Y_lm(dir), orthonormal in L^2(S^2),
/// Condon-Shortley phase convention.
pub fn spherical_harmonic(idx: SphericalIndex, dir: UnitVector) -> Complex64 {
    let (theta, phi) = dir.angles();
    let mabs = idx.m.unsigned_abs();
    let p = legendre_normalized(idx.ell, theta.cos());
    let plm = p[tri_index(idx.ell, mabs)];
    let mf = mabs as f64;
    let e = Complex64::new((mf * phi).cos(), (mf * phi).sin());
    if idx.m >= 0 {
        plm * e
    } else {
        // Y_{l,-m} = (-1)^m conj(Y_{l,m})
        let sign = if mabs % 2 == 0 { 1.0 } else { -1.0 };
        sign * plm * e.conj()
    }
}

/// Real spherical harmonic basis, orthonormal on S^2:
/// m = 0: Y_l0; m > 0: sqrt(2) Re Y_lm; m < 0: sqrt(2) Im Y_l|m|.
pub fn real_spherical_harmonic(idx: SphericalIndex, dir: UnitVector) -> f64 {
    let (theta, phi) = dir.angles();
    let mabs = idx.m.unsigned_abs();
    let p = legendre_normalized(idx.ell, theta.cos());
    let plm = p[tri_index(idx.ell, mabs)];
    let mf = mabs as f64;
    match idx.m.cmp(&0) {
        std::cmp::Ordering::Equal => plm,
        std::cmp::Ordering::Greater => std::f64::consts::SQRT_2 * plm * (mf * phi).cos(),
        std::cmp::Ordering::Less => std::f64::consts::SQRT_2 * plm * (mf * phi).sin(),
    }
}

fn check_bessel_args(ell: u32, x: f64) -> Result<()> {
    if ell > MAX_DEGREE {
        return Err(PotlabError::Domain(format!(
            "degree {ell} exceeds supported maximum {MAX_DEGREE}"
        )));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(PotlabError::Domain(format!(
            "spherical Bessel argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(())
}

fn ln_double_factorial_odd(l: u32) -> f64 {
    // ln((2l+1)!!)
    (0..=l).map(|j| (2.0 * j as f64 + 1.0).ln()).sum()
}

// Ascending series j_l(x) = x^l sum_k (-x^2/2)^k / (k! (2l+2k+1)!!),
// leading factor evaluated in log space to dodge overflow of x^l.
fn bessel_j_series(ell: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if ell == 0 { 1.0 } else { 0.0 };
    }
    let t0 = (ell as f64 * x.ln() - ln_double_factorial_odd(ell)).exp();
    let mut term = 1.0;
    let mut sum = 1.0;
    let lf = ell as f64;
    for k in 1..200 {
        let kf = k as f64;
        term *= -x * x / 2.0 / (kf * (2.0 * lf + 2.0 * kf + 1.0));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    t0 * sum
}

// Miller's downward recurrence, normalized against j0 (or j1 near a zero
// of j0).
fn bessel_j_downward(ell: u32, x: f64) -> f64 {
    let start = ell as usize + 30 + (1.5 * x) as usize;
    let mut fp1 = 0.0_f64;
    let mut f = 1e-300_f64;
    let mut jl = 0.0;
    let mut j1v = 0.0;
    let mut j0v = 0.0;
    for n in (0..=start).rev() {
        let fm1 = (2.0 * n as f64 + 3.0) / x * f - fp1;
        fp1 = f;
        f = fm1;
        // renormalize to avoid overflow
        if f.abs() > 1e250 {
            let s = 1e-250;
            f *= s;
            fp1 *= s;
            jl *= s;
            j1v *= s;
            j0v *= s;
        }
        if n == ell as usize {
            jl = f;
        }
        if n == 1 {
            j1v = f;
        }
        if n == 0 {
            j0v = f;
        }
    }
    let j0_true = x.sin() / x;
    let j1_true = x.sin() / (x * x) - x.cos() / x;
    if j0_true.abs() > j1_true.abs() {
        jl * j0_true / j0v
    } else {
        jl * j1_true / j1v
    }
}

/// Spherical Bessel function of the first kind j_l(x), x >= 0, l <= 64.
pub fn spherical_bessel_j(ell: u32, x: f64) -> Result<f64> {
    check_bessel_args(ell, x)?;
    if x == 0.0 {
        return Ok(if ell == 0 { 1.0 } else { 0.0 });
    }
    Ok(match ell {
        0 => x.sin() / x,
        1 => x.sin() / (x * x) - x.cos() / x,
        _ => {
            if x < 0.5_f64.max(ell as f64 / 2.0) {
                bessel_j_series(ell, x)
            } else {
                bessel_j_downward(ell, x)
            }
        }
    })
}

/// Spherical Bessel function of the second kind y_l(x), x > 0.
/// Upward recurrence is stable for y.
pub fn spherical_bessel_y(ell: u32, x: f64) -> Result<f64> {
    check_bessel_args(ell, x)?;
    if x == 0.0 {
        return Err(PotlabError::Domain(
            "y_l is singular at the origin".into(),
        ));
    }
    let y0 = -x.cos() / x;
    if ell == 0 {
        return Ok(y0);
    }
    let y1 = -x.cos() / (x * x) - x.sin() / x;
    if ell == 1 {
        return Ok(y1);
    }
    let mut ym1 = y0;
    let mut y = y1;
    for n in 1..ell {
        let yp1 = (2.0 * n as f64 + 1.0) / x * y - ym1;
        ym1 = y;
        y = yp1;
    }
    Ok(y)
}

/// Spherical Hankel function of the first kind, h_l(x) = j_l(x) + i y_l(x).
pub fn spherical_hankel1(ell: u32, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(PotlabError::Domain(format!(
            "h_l is singular at the origin; need x > 0, got {x}"
        )));
    }
    Ok(Complex64::new(
        spherical_bessel_j(ell, x)?,
        spherical_bessel_y(ell, x)?,
    ))
}

/// Derivative j_l'(x), from j_l' = j_{l-1} - (l+1)/x j_l (and j_0' = -j_1).
pub fn spherical_bessel_j_deriv(ell: u32, x: f64) -> Result<f64> {
    check_bessel_args(ell, x)?;
    if ell == 0 {
        return Ok(-spherical_bessel_j(1, x)?);
    }
    if x == 0.0 {
        return Ok(if ell == 1 { 1.0 / 3.0 } else { 0.0 });
    }
    Ok(spherical_bessel_j(ell - 1, x)? - (ell as f64 + 1.0) / x * spherical_bessel_j(ell, x)?)
}

/// Derivative y_l'(x).
pub fn spherical_bessel_y_deriv(ell: u32, x: f64) -> Result<f64> {
    if ell == 0 {
        let y1 = spherical_bessel_y(1, x)?;
        return Ok(-y1);
    }
    Ok(spherical_bessel_y(ell - 1, x)? - (ell as f64 + 1.0) / x * spherical_bessel_y(ell, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn j0_limit_and_zero() {
        assert_eq!(spherical_bessel_j(0, 0.0).unwrap(), 1.0);
        assert!(spherical_bessel_j(0, PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn j1_vanishes_at_first_tan_root() {
        // first positive root of tan x = x, computed by bisection on
        // sin x - x cos x over (pi, 3pi/2)
        let (mut lo, mut hi) = (PI, 1.5 * PI);
        let g = |x: f64| x.sin() - x * x.cos();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x1 = 0.5 * (lo + hi);
        assert!((x1 - 4.4934094579).abs() < 1e-9);
        assert!(spherical_bessel_j(1, x1).unwrap().abs() < 1e-14);
    }

    #[test]
    fn bessel_rejects_bad_args() {
        assert!(spherical_bessel_j(0, -1.0).is_err());
        assert!(spherical_bessel_j(65, 1.0).is_err());
        assert!(spherical_hankel1(0, 0.0).is_err());
        assert!(spherical_hankel1(0, -2.0).is_err());
    }

    #[test]
    fn hankel0_closed_form() {
        // h_0(x) = -i e^{ix}/x
        for &x in &[1.0, 2.0, PI, 10.0] {
            let h = spherical_hankel1(0, x).unwrap();
            let expect = Complex64::new(0.0, -1.0) * Complex64::new(0.0, x).exp() / x;
            assert!((h - expect).norm() < 1e-14, "x={x}: {h} vs {expect}");
        }
        let h = spherical_hankel1(0, 1.0).unwrap();
        assert!((h.re - 1.0_f64.sin()).abs() < 1e-15);
        assert!((h.im + 1.0_f64.cos()).abs() < 1e-15);
        let hpi = spherical_hankel1(0, PI).unwrap();
        assert!(hpi.re.abs() < 1e-15);
        assert!((hpi.im - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn bessel_recurrence() {
        // (2l+1) j_l(x)/x = j_{l-1}(x) + j_{l+1}(x)
        for l in 1..=20u32 {
            for &x in &[0.1, 0.5, 1.0, 3.0, 7.5, 15.0, 30.0, 50.0] {
                let lhs = (2.0 * l as f64 + 1.0) * spherical_bessel_j(l, x).unwrap() / x;
                let rhs =
                    spherical_bessel_j(l - 1, x).unwrap() + spherical_bessel_j(l + 1, x).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-10,
                    "l={l}, x={x}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn wronskian() {
        // j_l y_l' - j_l' y_l = 1/x^2
        for l in 0..=20u32 {
            for &x in &[0.5, 1.0, 2.0, 5.0, 12.0, 25.0, 50.0] {
                let w = spherical_bessel_j(l, x).unwrap()
                    * spherical_bessel_y_deriv(l, x).unwrap()
                    - spherical_bessel_j_deriv(l, x).unwrap()
                        * spherical_bessel_y(l, x).unwrap();
                let expect = 1.0 / (x * x);
                assert!(
                    ((w - expect) / expect).abs() < 1e-10,
                    "l={l}, x={x}: {w} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn y00_is_constant() {
        let idx = SphericalIndex::new(0, 0).unwrap();
        let v = spherical_harmonic(idx, UnitVector::from_angles(1.1, 2.3));
        assert!((v.re - 0.28209479177387814).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn y10_at_north_pole() {
        let idx = SphericalIndex::new(1, 0).unwrap();
        let north = UnitVector::new(0.0, 0.0, 1.0).unwrap();
        let v = spherical_harmonic(idx, north);
        let expect = (3.0 / (4.0 * PI)).sqrt();
        assert!((v.re - expect).abs() < 1e-14);
        let idx11 = SphericalIndex::new(1, 1).unwrap();
        assert!(spherical_harmonic(idx11, north).norm() < 1e-14);
    }

    #[test]
    fn index_and_unit_vector_validation() {
        assert!(SphericalIndex::new(2, 3).is_err());
        assert!(SphericalIndex::new(2, -2).is_ok());
        assert!(UnitVector::new(1.0, 1.0, 0.0).is_err());
        assert!(UnitVector::from_vector([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        let dir = UnitVector::from_angles(0.7, -1.9);
        for l in 0..=6u32 {
            for m in 1..=l as i32 {
                let yp = spherical_harmonic(SphericalIndex::new(l, m).unwrap(), dir);
                let ym = spherical_harmonic(SphericalIndex::new(l, -m).unwrap(), dir);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((ym - sign * yp.conj()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn legendre_dtheta_matches_finite_difference() {
        let lmax = 10;
        let theta = 1.234_f64;
        let h = 1e-6;
        let dp = legendre_normalized_dtheta(lmax, theta.cos());
        let pp = legendre_normalized(lmax, (theta + h).cos());
        let pm = legendre_normalized(lmax, (theta - h).cos());
        for i in 0..dp.len() {
            let fd = (pp[i] - pm[i]) / (2.0 * h);
            assert!((dp[i] - fd).abs() < 1e-8, "i={i}: {} vs {}", dp[i], fd);
        }
    }
}
