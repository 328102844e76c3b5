//! Truncated Taylor series ("jets") in one variable.
//!
//! A [`Jet`] stores `c[k] = f^(k)(x0) / k!` for `k < JET_LEN`. Arithmetic on
//! jets is forward-mode automatic differentiation to all retained orders, which
//! gives exact derivatives of the closed-form profiles and lets removable
//! singularities (`w''/w` at a pole, the 0/0 endpoints of the barrier test
//! functions) be evaluated by dividing out the vanishing leading terms.

use core::ops::{Add, Div, Mul, Neg, Sub};

/// Number of retained Taylor coefficients.
pub const JET_LEN: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; JET_LEN],
}

impl Jet {
    pub const fn constant(value: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = value;
        Self { c }
    }

    /// The identity function `x` expanded about `x0`.
    pub const fn variable(x0: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = x0;
        c[1] = 1.0;
        Self { c }
    }

    pub const fn from_coeffs(c: [f64; JET_LEN]) -> Self {
        Self { c }
    }

    pub fn coeffs(&self) -> &[f64; JET_LEN] {
        &self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative_at(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    /// Jet of the derivative function. The top coefficient is lost.
    pub fn derivative(&self) -> Self {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Self { c }
    }

    /// Divides by `(x - x0)`, discarding the constant coefficient.
    ///
    /// Only meaningful when the constant coefficient vanishes analytically.
    pub fn shift_down(&self) -> Self {
        let mut c = [0.0; JET_LEN];
        c[..JET_LEN - 1].copy_from_slice(&self.c[1..]);
        Self { c }
    }

    /// Evaluates the truncated polynomial at offset `s = x - x0`.
    pub fn eval(&self, s: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &ck| acc * s + ck)
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|x| *x *= k);
        Self { c }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Jet::constant(1.0);
        for _ in 0..n {
            out = out * *self;
        }
        out
    }

    pub fn exp(&self) -> Self {
        let u = &self.c;
        let mut e = [0.0; JET_LEN];
        e[0] = libm::exp(u[0]);
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * u[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self { c: e }
    }

    /// Returns `(sin u, cos u)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let u = &self.c;
        let mut s = [0.0; JET_LEN];
        let mut c = [0.0; JET_LEN];
        s[0] = libm::sin(u[0]);
        c[0] = libm::cos(u[0]);
        for k in 1..JET_LEN {
            let mut acc_s = 0.0;
            let mut acc_c = 0.0;
            for j in 1..=k {
                acc_s += j as f64 * u[j] * c[k - j];
                acc_c -= j as f64 * u[j] * s[k - j];
            }
            s[k] = acc_s / k as f64;
            c[k] = acc_c / k as f64;
        }
        (Self { c: s }, Self { c })
    }

    pub fn sqrt(&self) -> Self {
        let u = &self.c;
        let mut r = [0.0; JET_LEN];
        r[0] = libm::sqrt(u[0]);
        for k in 1..JET_LEN {
            let mut acc = u[k];
            for j in 1..k {
                acc -= r[j] * r[k - j];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Self { c: r }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self.c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        self.c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.c[..JET_LEN - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let b = &rhs.c;
        let mut q = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= b[j] * q[k - j];
            }
            q[k] = acc / b[0];
        }
        Jet { c: q }
    }
}
