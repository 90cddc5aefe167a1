//! Gauss–Legendre rules and tensor rules over the tube cross sections.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Tensor Gauss–Legendre rule in `(r, θ)` over the disk of radius `radius`.
///
/// Returns `(v, w, weight)` triples whose weights include the Jacobian `r`, so
/// `Σ weight · f(v, w) ≈ ∫ f dσ`.
pub fn disk_rule(radius: f64, order: usize) -> Vec<(f64, f64, f64)> {
    let gl = GaussLegendre::new(order);
    let mut out = Vec::with_capacity(order * order);
    for (r, wr) in gl.mapped(0.0, radius) {
        for (th, wt) in gl.mapped(0.0, 2.0 * PI) {
            out.push((r * th.cos(), r * th.sin(), wr * wt * r));
        }
    }
    out
}

/// Integral of `f(v, w)` over the disk of radius `radius`.
pub fn integrate_disk(radius: f64, order: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    disk_rule(radius, order)
        .into_iter()
        .map(|(v, w, wt)| wt * f(v, w))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(5);
        // Degree 9 is the limit for 5 points.
        let got = gl.integrate(0.0, 2.0, |x| x.powi(9));
        assert!((got - 2f64.powi(10) / 10.0).abs() < 1e-11);
        let w_sum: f64 = gl.weights.iter().sum();
        assert!((w_sum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_nodes_are_sorted_and_symmetric() {
        let gl = GaussLegendre::new(128);
        for w in gl.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..64 {
            assert!((gl.nodes[i] + gl.nodes[127 - i]).abs() < 1e-15);
        }
        let got = gl.integrate(0.0, PI, f64::sin);
        assert!((got - 2.0).abs() < 1e-14);
    }

    #[test]
    fn disk_area_and_second_moment() {
        let a = integrate_disk(0.3, 16, |_, _| 1.0);
        assert!((a - PI * 0.09).abs() < 1e-14);
        let m = integrate_disk(0.3, 16, |v, _| v * v);
        assert!((m - PI * 0.3f64.powi(4) / 4.0).abs() < 1e-15);
    }
}
