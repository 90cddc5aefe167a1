use crate::linalg::{solve_cyclic_tridiagonal, solve_tridiagonal};
use crate::Vec3;

/// End condition for an open cubic spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplineEnd {
    Natural,
    /// Prescribed first derivatives at both ends.
    Clamped(Vec3, Vec3),
}

/// Vector-valued cubic spline on a uniform parameter grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    step: f64,
    values: Vec<Vec3>,
    second: Vec<Vec3>,
    periodic: bool,
}

impl CubicSpline {
    /// Open spline through `values[k]` at parameter `k·step`.
    pub fn open(values: Vec<Vec3>, step: f64, end: SplineEnd) -> Self {
        let n = values.len();
        assert!(n >= 3, "spline needs at least three nodes");
        let mut a = vec![1.0; n];
        let mut b = vec![4.0; n];
        let mut c = vec![1.0; n];
        let scale = 6.0 / (step * step);
        let mut second = vec![Vec3::zeros(); n];
        for comp in 0..3 {
            let y: Vec<f64> = values.iter().map(|p| p[comp]).collect();
            let mut d = vec![0.0; n];
            for i in 1..n - 1 {
                d[i] = scale * (y[i + 1] - 2.0 * y[i] + y[i - 1]);
            }
            match end {
                SplineEnd::Natural => {
                    b[0] = 1.0;
                    c[0] = 0.0;
                    b[n - 1] = 1.0;
                    a[n - 1] = 0.0;
                    d[0] = 0.0;
                    d[n - 1] = 0.0;
                }
                SplineEnd::Clamped(t0, t1) => {
                    b[0] = 2.0;
                    c[0] = 1.0;
                    a[n - 1] = 1.0;
                    b[n - 1] = 2.0;
                    d[0] = 6.0 / step * ((y[1] - y[0]) / step - t0[comp]);
                    d[n - 1] = 6.0 / step * (t1[comp] - (y[n - 1] - y[n - 2]) / step);
                }
            }
            let m = solve_tridiagonal(&a, &b, &c, &d);
            for (sk, mk) in second.iter_mut().zip(m) {
                sk[comp] = mk;
            }
        }
        CubicSpline {
            step,
            values,
            second,
            periodic: false,
        }
    }

    /// Periodic spline: `values[k]` at `k·step`, period `values.len()·step`.
    pub fn periodic(values: Vec<Vec3>, step: f64) -> Self {
        let n = values.len();
        assert!(n >= 3, "periodic spline needs at least three nodes");
        let a = vec![1.0; n];
        let b = vec![4.0; n];
        let c = vec![1.0; n];
        let scale = 6.0 / (step * step);
        let mut second = vec![Vec3::zeros(); n];
        for comp in 0..3 {
            let d: Vec<f64> = (0..n)
                .map(|i| {
                    let prev = values[(i + n - 1) % n][comp];
                    let next = values[(i + 1) % n][comp];
                    scale * (next - 2.0 * values[i][comp] + prev)
                })
                .collect();
            let m = solve_cyclic_tridiagonal(&a, &b, &c, &d);
            for (sk, mk) in second.iter_mut().zip(m) {
                sk[comp] = mk;
            }
        }
        CubicSpline {
            step,
            values,
            second,
            periodic: true,
        }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Parameter span: period for periodic splines, last knot otherwise.
    pub fn span(&self) -> f64 {
        if self.periodic {
            self.values.len() as f64 * self.step
        } else {
            (self.values.len() - 1) as f64 * self.step
        }
    }

    /// Value and first three derivatives at parameter `u`.
    pub fn eval(&self, u: f64) -> [Vec3; 4] {
        let n = self.values.len();
        let h = self.step;
        let (j, t) = if self.periodic {
            let uu = u.rem_euclid(self.span());
            let j = ((uu / h).floor() as usize).min(n - 1);
            (j, uu - j as f64 * h)
        } else {
            let j = ((u / h).floor().max(0.0) as usize).min(n - 2);
            (j, u - j as f64 * h)
        };
        let jn = if self.periodic { (j + 1) % n } else { j + 1 };
        let (y0, y1) = (self.values[j], self.values[jn]);
        let (m0, m1) = (self.second[j], self.second[jn]);
        let b = (y1 - y0) / h - (m0 * 2.0 + m1) * (h / 6.0);
        let c = m0 * 0.5;
        let d = (m1 - m0) / (6.0 * h);
        let p = y0 + (b + (c + d * t) * t) * t;
        let d1 = b + (c * 2.0 + d * (3.0 * t)) * t;
        let d2 = c * 2.0 + d * (6.0 * t);
        let d3 = d * 6.0;
        [p, d1, d2, d3]
    }
}
