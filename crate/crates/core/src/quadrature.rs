//! Composite Gauss-Legendre quadrature.

const GL8: [(f64, f64); 4] = [
    (0.18343464249564978, 0.36268378337836177),
    (0.525532409916329, 0.31370664587788705),
    (0.7966664774136267, 0.22238103445337434),
    (0.9602898564975362, 0.10122853629037669),
];

/// 8-point Gauss-Legendre rule on `[a, b]`. Exact for degree 15.
pub fn gauss8<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for &(x, w) in &GL8 {
        acc += w * (f(mid - half * x) + f(mid + half * x));
    }
    acc * half
}

/// Composite 8-point rule over `panels` equal panels.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let step = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * step;
            let hi = if k + 1 == panels { b } else { lo + step };
            gauss8(&mut f, lo, hi)
        })
        .sum()
}
