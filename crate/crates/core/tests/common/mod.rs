#![allow(dead_code, clippy::too_many_arguments)]

/// Adaptive Simpson quadrature, independent of the library's Gauss rules.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Limit of `g(h)` as `h → 0` by Neville extrapolation from `h = k·step`, `k = 1..=count`.
pub fn limit<G: Fn(f64) -> f64>(g: G, step: f64, count: usize) -> f64 {
    let hs: Vec<f64> = (1..=count).map(|k| k as f64 * step).collect();
    let mut p: Vec<f64> = hs.iter().map(|&h| g(h)).collect();
    for level in 1..count {
        for i in 0..count - level {
            p[i] = (hs[i + level] * p[i] - hs[i] * p[i + 1]) / (hs[i + level] - hs[i]);
        }
    }
    p[0]
}

pub fn xi_closed(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    (c * c + 2.0 * t * s * c + t * t - std::f64::consts::PI.powi(2) / 4.0) / (c * c)
}

pub fn eta_closed(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    let pi = std::f64::consts::PI;
    ((4.0 / pi) * t + (4.0 / pi) * c * s - 2.0 * s) / (c * c)
}

/// Central second difference.
pub fn second_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

pub fn first_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
