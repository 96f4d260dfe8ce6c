//! Shared test oracles, independent of the library's evaluation paths.

#![allow(dead_code)]

use rand::Rng;

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (left, flm) = simpson(f, a, fa, m, fm);
        let (right, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth >= 50 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, flm, tol / 2.0, depth + 1)
                + recurse(f, m, fm, b, fb, right, frm, tol / 2.0, depth + 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, fm, tol, 0)
}

/// Uniform random point in the ball of given radius about a center.
pub fn random_point_in_ball<R: Rng>(rng: &mut R, center: [f64; 3], radius: f64) -> [f64; 3] {
    loop {
        let p = [
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        ];
        if p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= radius * radius {
            return [center[0] + p[0], center[1] + p[1], center[2] + p[2]];
        }
    }
}

#[test]
fn adaptive_simpson_sanity() {
    let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-13);
    assert!((v - 2.0).abs() < 1e-12);
    let v2 = adaptive_simpson(&|x: f64| x * x, 0.0, 3.0, 1e-13);
    assert!((v2 - 9.0).abs() < 1e-12);
}
