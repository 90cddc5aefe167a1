//! Truncated Taylor arithmetic used to differentiate `D_eff(κ(s))` analytically.
//!
//! A [`Jet`] holds the coefficients `c_k` of `f(s₀ + h) = Σ c_k h^k` for `k ≤ 3`.

use std::ops::{Add, Div, Mul, Neg, Sub};

pub const ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; ORDER]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0])
    }

    /// Builds a jet from a value and its first three derivatives.
    pub fn from_derivatives(d: [f64; 4]) -> Self {
        Jet([d[0], d[1], d[2] / 2.0, d[3] / 6.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `k`-th derivative, `k ≤ 3`.
    pub fn derivative(&self, k: usize) -> f64 {
        const FACT: [f64; ORDER] = [1.0, 1.0, 2.0, 6.0];
        self.0[k] * FACT[k]
    }

    pub fn derivatives(&self) -> [f64; 4] {
        [
            self.derivative(0),
            self.derivative(1),
            self.derivative(2),
            self.derivative(3),
        ]
    }

    pub fn scale(self, k: f64) -> Self {
        Jet(self.0.map(|c| c * k))
    }

    pub fn sqrt(self) -> Self {
        let a = self.0;
        let mut b = [0.0; ORDER];
        b[0] = a[0].sqrt();
        for k in 1..ORDER {
            let mut acc = a[k];
            for j in 1..k {
                acc -= b[j] * b[k - j];
            }
            b[k] = acc / (2.0 * b[0]);
        }
        Jet(b)
    }

    pub fn ln(self) -> Self {
        let a = self.0;
        let mut c = [0.0; ORDER];
        c[0] = a[0].ln();
        for k in 1..ORDER {
            let mut acc = 0.0;
            for j in 1..k {
                acc += j as f64 * c[j] * a[k - j];
            }
            c[k] = (a[k] - acc / k as f64) / a[0];
        }
        Jet(c)
    }

    pub fn atanh(self) -> Self {
        let one = Jet::constant(1.0);
        ((one + self).ln() - (one - self).ln()).scale(0.5)
    }

    pub fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.0;
        for (ci, ri) in c.iter_mut().zip(rhs.0) {
            *ci += ri;
        }
        Jet(c)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|c| -c))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let (a, b) = (self.0, rhs.0);
        let mut c = [0.0; ORDER];
        for k in 0..ORDER {
            for j in 0..=k {
                c[k] += a[j] * b[k - j];
            }
        }
        Jet(c)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let (a, b) = (self.0, rhs.0);
        let mut c = [0.0; ORDER];
        for k in 0..ORDER {
            let mut acc = a[k];
            for j in 1..=k {
                acc -= b[j] * c[k - j];
            }
            c[k] = acc / b[0];
        }
        Jet(c)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self + Jet::constant(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}
