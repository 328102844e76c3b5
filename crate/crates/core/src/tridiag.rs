//! Symmetric tridiagonal eigensolver: Sturm-count bisection for eigenvalues,
//! inverse iteration for eigenvectors.
//!
//! Periodic problems produce a tridiagonal matrix with one extra corner entry
//! coupling the first and last unknowns. The inertia of such a matrix is
//! the inertia of its leading tridiagonal block plus the sign of the Schur
//! complement of the last row, so bisection carries over unchanged.

use alloc::vec::Vec;

use crate::error::Error;

const MAX_BISECTION_STEPS: usize = 256;
const MAX_INVERSE_STEPS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    corner: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit Euclidean norm.
    pub vector: Vec<f64>,
}

impl SymTridiagonal {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self, Error> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument("off-diagonal must be one shorter than the diagonal"));
        }
        Ok(Self { diag, off, corner: None })
    }

    /// Tridiagonal plus the `(0, n-1)` corner entry.
    pub fn cyclic(diag: Vec<f64>, off: Vec<f64>, corner: f64) -> Result<Self, Error> {
        if diag.len() < 3 {
            return Err(Error::InvalidArgument("cyclic matrix needs at least 3 rows"));
        }
        let mut m = Self::new(diag, off)?;
        m.corner = Some(corner);
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn corner(&self) -> Option<f64> {
        self.corner
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for i in 0..n - 1 {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        if let Some(c) = self.corner {
            y[0] += c * x[n - 1];
            y[n - 1] += c * x[0];
        }
        y
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i > 0 {
                rad += self.off[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.off[i].abs();
            }
            if let Some(c) = self.corner {
                if i == 0 || i == n - 1 {
                    rad += c.abs();
                }
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }

    /// Spectral scale `max(|lo|, |hi|)` of the Gershgorin interval.
    pub fn scale(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    fn pivmin(&self) -> f64 {
        f64::EPSILON * self.scale()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let fix = |q: f64| if q.abs() < pivmin { -pivmin } else { q };
        let n = self.len();
        let lead = if self.corner.is_some() { n - 1 } else { n };
        let mut count = 0;
        let mut q = fix(self.diag[0] - x);
        if q < 0.0 {
            count += 1;
        }
        let mut pivots = Vec::new();
        if self.corner.is_some() {
            pivots.reserve(lead);
            pivots.push(q);
        }
        for i in 1..lead {
            q = fix(self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q);
            if q < 0.0 {
                count += 1;
            }
            if self.corner.is_some() {
                pivots.push(q);
            }
        }
        if let Some(c) = self.corner {
            // Schur complement of the last row against the leading block.
            let mut border = alloc::vec![0.0; lead];
            border[0] += c;
            border[lead - 1] += self.off[lead - 1];
            let mut y = border[0];
            let mut quad = y * y / pivots[0];
            for i in 1..lead {
                y = border[i] - self.off[i - 1] / pivots[i - 1] * y;
                quad += y * y / pivots[i];
            }
            if fix(self.diag[n - 1] - x - quad) < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = self.pivmin() * 4.0;
        lo -= pad;
        hi += pad;
        for _ in 0..MAX_BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + self.pivmin() {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(A - σ I) x = b`.
    pub fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        match self.corner {
            None => solve_tridiagonal(&self.diag, &self.off, sigma, rhs, self.pivmin()),
            Some(c) => {
                let m = n - 1;
                let lead_diag = &self.diag[..m];
                let lead_off = &self.off[..m - 1];
                let mut border = alloc::vec![0.0; m];
                border[0] += c;
                border[m - 1] += self.off[m - 1];
                let z1 = solve_tridiagonal(lead_diag, lead_off, sigma, &rhs[..m], self.pivmin());
                let z2 = solve_tridiagonal(lead_diag, lead_off, sigma, &border, self.pivmin());
                let dot = |u: &[f64]| -> f64 { border.iter().zip(u).map(|(a, b)| a * b).sum() };
                let mut schur = self.diag[n - 1] - sigma - dot(&z2);
                if schur.abs() < self.pivmin() {
                    schur = self.pivmin();
                }
                let last = (rhs[n - 1] - dot(&z1)) / schur;
                let mut x: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| a - b * last).collect();
                x.push(last);
                x
            }
        }
    }

    /// The `count` smallest eigenpairs, ascending.
    pub fn smallest(&self, count: usize) -> Result<Vec<EigenPair>, Error> {
        let n = self.len();
        if count == 0 || count > n {
            return Err(Error::InvalidArgument("eigenpair count must be in 1..=n"));
        }
        let tol = 64.0 * n as f64 * f64::EPSILON * self.scale();
        let mut pairs: Vec<EigenPair> = Vec::with_capacity(count);
        for k in 0..count {
            let shift = self.eigenvalue(k);
            let mut x: Vec<f64> = (0..n)
                .map(|i| 1.0 + 0.5 * libm::sin(1.618_033_988_75 * i as f64 + 0.7 * k as f64))
                .collect();
            let mut value = shift;
            let mut residual = f64::INFINITY;
            for step in 0..MAX_INVERSE_STEPS {
                let previous = residual;
                x = self.solve_shifted(shift, &x);
                for prev in &pairs {
                    let d = dot(&x, &prev.vector);
                    x.iter_mut().zip(&prev.vector).for_each(|(a, b)| *a -= d * b);
                }
                normalize(&mut x);
                let ax = self.apply(&x);
                // Rayleigh quotient: second-order accurate in the vector, and
                // immune to the few ulps the bisection loses inside clusters.
                value = dot(&ax, &x);
                residual = libm::sqrt(ax.iter().zip(&x).map(|(a, b)| (a - value * b) * (a - value * b)).sum());
                // The tolerance scales with the largest entry, which near
                // poles is far above the eigenvalues of interest; keep
                // iterating until the residual stops improving.
                if residual <= tol && step >= 2 && residual > 0.5 * previous {
                    break;
                }
            }
            if !residual.is_finite() || residual > tol {
                return Err(Error::NoConvergence { index: k, residual });
            }
            pairs.push(EigenPair { value, vector: x });
        }
        Ok(pairs)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = libm::sqrt(dot(x, x));
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Gaussian elimination with partial pivoting on `(T - σ I) x = b`.
fn solve_tridiagonal(diag: &[f64], off: &[f64], sigma: f64, rhs: &[f64], pivmin: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        let d = diag[0] - sigma;
        return alloc::vec![rhs[0] / if d.abs() < pivmin { pivmin } else { d }];
    }
    // Row i of U holds (u0, u1, u2) at columns (i, i+1, i+2).
    let mut u0: Vec<f64> = diag.iter().map(|d| d - sigma).collect();
    let mut u1: Vec<f64> = off.to_vec();
    u1.push(0.0);
    let mut u2 = alloc::vec![0.0; n];
    let mut sub: Vec<f64> = off.to_vec();
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        if sub[i].abs() > u0[i].abs() {
            // Swap rows i and i+1.
            let (a0, a1, a2) = (u0[i], u1[i], u2[i]);
            u0[i] = sub[i];
            u1[i] = u0[i + 1];
            u2[i] = u1[i + 1];
            b.swap(i, i + 1);
            let m = a0 / u0[i];
            u0[i + 1] = a1 - m * u1[i];
            u1[i + 1] = a2 - m * u2[i];
            b[i + 1] -= m * b[i];
        } else {
            if u0[i].abs() < pivmin {
                u0[i] = pivmin;
            }
            let m = sub[i] / u0[i];
            u0[i + 1] -= m * u1[i];
            u1[i + 1] -= m * u2[i];
            b[i + 1] -= m * b[i];
        }
        sub[i] = 0.0;
    }
    if u0[n - 1].abs() < pivmin {
        u0[n - 1] = pivmin;
    }
    let mut x = alloc::vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= u2[i] * x[i + 2];
        }
        x[i] = acc / u0[i];
    }
    x
}
