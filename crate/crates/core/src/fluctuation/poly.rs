use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

/// Polynomial in the transverse coordinates `(v, w)`, stored as exact monomial coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), f64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn constant(c: f64) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    /// `c · vⁱ wʲ`.
    pub fn monomial(c: f64, i: u32, j: u32) -> Self {
        let mut p = Poly2::zero();
        p.add_term(c, i, j);
        p
    }

    pub fn v() -> Self {
        Poly2::monomial(1.0, 1, 0)
    }

    pub fn w() -> Self {
        Poly2::monomial(1.0, 0, 1)
    }

    fn add_term(&mut self, c: f64, i: u32, j: u32) {
        if c == 0.0 {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert(0.0);
        *e += c;
        if *e == 0.0 {
            self.terms.remove(&(i, j));
        }
    }

    /// Coefficient of `vⁱ wʲ`.
    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, *c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut p = Poly2::zero();
        for ((i, j), c) in self.terms() {
            p.add_term(k * c, i, j);
        }
        p
    }

    pub fn eval(&self, v: f64, w: f64) -> f64 {
        self.terms()
            .map(|((i, j), c)| c * v.powi(i as i32) * w.powi(j as i32))
            .sum()
    }

    pub fn dv(&self) -> Self {
        let mut p = Poly2::zero();
        for ((i, j), c) in self.terms() {
            if i > 0 {
                p.add_term(c * i as f64, i - 1, j);
            }
        }
        p
    }

    pub fn dw(&self) -> Self {
        let mut p = Poly2::zero();
        for ((i, j), c) in self.terms() {
            if j > 0 {
                p.add_term(c * j as f64, i, j - 1);
            }
        }
        p
    }

    /// Flat transverse Laplacian `∂²_v + ∂²_w`.
    pub fn laplacian(&self) -> Self {
        &self.dv().dv() + &self.dw().dw()
    }

    /// `v ∂_v + w ∂_w`, i.e. `r ∂_r`.
    pub fn euler(&self) -> Self {
        &(&Poly2::v() * &self.dv()) + &(&Poly2::w() * &self.dw())
    }

    /// Canonical remainder modulo `v² + w² − ρ²`: every `w²` is replaced by `ρ² − v²`,
    /// leaving terms of degree at most one in `w`. Zero iff the polynomial vanishes on the
    /// circle of radius `ρ`.
    pub fn restrict_to_circle(&self, rho: f64) -> Self {
        let rho2 = rho * rho;
        let mut out = Poly2::zero();
        let mut stack: Vec<(f64, u32, u32)> = self.terms().map(|((i, j), c)| (c, i, j)).collect();
        while let Some((c, i, j)) = stack.pop() {
            if j < 2 {
                out.add_term(c, i, j);
            } else {
                stack.push((c * rho2, i, j - 2));
                stack.push((-c, i + 2, j - 2));
            }
        }
        out
    }

    /// Exact integral over the disk of radius `rho`.
    pub fn integrate_disk(&self, rho: f64) -> f64 {
        self.terms()
            .map(|((i, j), c)| c * disk_monomial(i, j, rho))
            .sum()
    }
}

fn double_factorial(n: i64) -> f64 {
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// `∫ vⁱ wʲ dσ` over the disk of radius `rho`.
pub fn disk_monomial(i: u32, j: u32, rho: f64) -> f64 {
    if i % 2 == 1 || j % 2 == 1 {
        return 0.0;
    }
    let angular = 2.0 * std::f64::consts::PI * double_factorial(i as i64 - 1)
        * double_factorial(j as i64 - 1)
        / double_factorial((i + j) as i64);
    let n = (i + j + 2) as i32;
    angular * rho.powi(n) / n as f64
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut p = self.clone();
        for ((i, j), c) in rhs.terms() {
            p.add_term(c, i, j);
        }
        p
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut p = Poly2::zero();
        for ((i, j), a) in self.terms() {
            for ((k, l), b) in rhs.terms() {
                p.add_term(a * b, i + k, j + l);
            }
        }
        p
    }
}
