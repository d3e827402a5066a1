//! Fourier coefficients, partial sums and the Dirichlet kernel.
//!
//! Partial sums are available through two independent routes: summation of
//! the coefficient series ([`partial_sum`]) and integration of `φ_x` against
//! the Dirichlet kernel ([`partial_sum_deviation_via_kernel`]).

use std::f64::consts::PI;

use crate::characteristics::{phi_breakpoints, phi_x};
use crate::corpus::TestFunction;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

/// Below this `|t|` the Dirichlet kernel switches to its two-term expansion.
pub const KERNEL_THRESHOLD: f64 = 1e-4;

/// Truncated trigonometric series `a0/2 + Σ_{j=1..N} (a_j cos jx + b_j sin jx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl FourierSeries {
    /// `a[j-1]` and `b[j-1]` hold the order-`j` coefficients.
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                a: a.len(),
                b: b.len(),
            });
        }
        Ok(Self { a0, a, b })
    }

    pub fn zeros(degree: usize) -> Self {
        Self {
            a0: 0.0,
            a: vec![0.0; degree],
            b: vec![0.0; degree],
        }
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Cosine coefficient of order `k` (`k = 0` gives `a0`).
    pub fn a(&self, k: usize) -> f64 {
        if k == 0 {
            self.a0
        } else {
            self.a[k - 1]
        }
    }

    /// Sine coefficient of order `k` (`b_0 = 0`).
    pub fn b(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.b[k - 1]
        }
    }

    pub fn cosine_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn sine_coeffs(&self) -> &[f64] {
        &self.b
    }

    pub(crate) fn set(&mut self, k: usize, a: f64, b: f64) {
        if k == 0 {
            self.a0 = a;
        } else {
            self.a[k - 1] = a;
            self.b[k - 1] = b;
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            a0: c * self.a0,
            a: self.a.iter().map(|v| c * v).collect(),
            b: self.b.iter().map(|v| c * v).collect(),
        }
    }

    /// `alpha * self + beta * other`; the degrees must agree.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeExceeded {
                order: other.degree(),
                degree: self.degree(),
            });
        }
        let zip = |x: &[f64], y: &[f64]| -> Vec<f64> {
            x.iter().zip(y).map(|(u, v)| alpha * u + beta * v).collect()
        };
        Ok(Self {
            a0: alpha * self.a0 + beta * other.a0,
            a: zip(&self.a, &other.a),
            b: zip(&self.b, &other.b),
        })
    }

    /// `a0²/2 + Σ (a_k² + b_k²)`, which tends to `(1/π)∫ f²`.
    pub fn energy(&self) -> f64 {
        0.5 * self.a0 * self.a0
            + self
                .a
                .iter()
                .zip(&self.b)
                .map(|(a, b)| a * a + b * b)
                .sum::<f64>()
    }
}

/// Coefficients by discrete orthogonality on `samples` equispaced points of
/// `[-π, π)`. Exact for trigonometric polynomials of degree at most
/// `samples - degree - 1`.
pub fn compute_coefficients(f: &TestFunction, degree: usize, samples: usize) -> Result<FourierSeries> {
    if samples < 2 * degree + 2 {
        return Err(Error::Aliasing { degree, samples });
    }
    let m = samples as f64;
    let xs: Vec<f64> = (0..samples)
        .map(|j| -PI + 2.0 * PI * j as f64 / m)
        .collect();
    let values: Vec<f64> = xs.iter().map(|&x| f.eval_wrapped(x)).collect();
    let mut series = FourierSeries::zeros(degree);
    for k in 0..=degree {
        let kf = k as f64;
        let (mut ca, mut cb) = (0.0, 0.0);
        for (&x, &v) in xs.iter().zip(&values) {
            let (s, c) = (kf * x).sin_cos();
            ca += v * c;
            cb += v * s;
        }
        series.set(k, 2.0 * ca / m, 2.0 * cb / m);
    }
    Ok(series)
}

/// Coefficients `(1/π)∫ f cos kx`, `(1/π)∫ f sin kx` by composite
/// Gauss–Legendre split at the singular points of `f`.
pub fn coefficients_by_quadrature(f: &TestFunction, degree: usize, quad: &QuadratureSpec) -> FourierSeries {
    let breaks: Vec<f64> = f.singular_points().iter().map(|s| s.location).collect();
    let nodes = quad.nodes(-PI, PI, &breaks);
    let mut series = FourierSeries::zeros(degree);
    let weighted: Vec<(f64, f64)> = nodes
        .iter()
        .map(|&(x, w)| (x, w * f.eval_wrapped(x)))
        .collect();
    for k in 0..=degree {
        let kf = k as f64;
        let (mut ca, mut cb) = (0.0, 0.0);
        for &(x, wv) in &weighted {
            let (s, c) = (kf * x).sin_cos();
            ca += wv * c;
            cb += wv * s;
        }
        series.set(k, ca / PI, cb / PI);
    }
    series
}

/// `S_k f(x)` by complex Horner evaluation of `Σ (a_j - i b_j) e^{ijx}`.
pub fn partial_sum(series: &FourierSeries, k: usize, x: f64) -> Result<f64> {
    if k > series.degree() {
        return Err(Error::DegreeExceeded {
            order: k,
            degree: series.degree(),
        });
    }
    let (zs, zc) = x.sin_cos();
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for j in (1..=k).rev() {
        // acc = acc * z + (a_j - i b_j)
        let nre = re * zc - im * zs + series.a(j);
        let nim = re * zs + im * zc - series.b(j);
        re = nre;
        im = nim;
    }
    // Re(acc * z)
    Ok(0.5 * series.a0() + (re * zc - im * zs))
}

/// `S_k f(x)` by direct summation with one `sin_cos` per term.
pub fn partial_sum_direct(series: &FourierSeries, k: usize, x: f64) -> Result<f64> {
    if k > series.degree() {
        return Err(Error::DegreeExceeded {
            order: k,
            degree: series.degree(),
        });
    }
    let mut sum = 0.5 * series.a0();
    for j in 1..=k {
        let (s, c) = (j as f64 * x).sin_cos();
        sum += series.a(j) * c + series.b(j) * s;
    }
    Ok(sum)
}

/// All partial sums `S_0 f(x), …, S_kmax f(x)` in one pass.
pub fn partial_sums_upto(series: &FourierSeries, x: f64, kmax: usize) -> Result<Vec<f64>> {
    if kmax > series.degree() {
        return Err(Error::DegreeExceeded {
            order: kmax,
            degree: series.degree(),
        });
    }
    let mut out = Vec::with_capacity(kmax + 1);
    let mut sum = 0.5 * series.a0();
    out.push(sum);
    for j in 1..=kmax {
        let (s, c) = (j as f64 * x).sin_cos();
        sum += series.a(j) * c + series.b(j) * s;
        out.push(sum);
    }
    Ok(out)
}

/// `D_k(t) = sin((k + 1/2) t) / (2 sin(t/2))`, continued by its expansion
/// `(k+1/2)(1 - ((k+1/2)² - 1/4) t²/6)` near `t = 0`.
pub fn dirichlet_kernel(k: usize, t: f64) -> f64 {
    let a = k as f64 + 0.5;
    if t.abs() < KERNEL_THRESHOLD {
        a * (1.0 - (a * a - 0.25) * t * t / 6.0)
    } else {
        (a * t).sin() / (2.0 * (0.5 * t).sin())
    }
}

/// `(1/π)∫_0^π φ_x(t) D_k(t) dt`, which equals `S_k f(x) - f(x)`.
pub fn partial_sum_deviation_via_kernel(f: &TestFunction, k: usize, x: f64, quad: &QuadratureSpec) -> f64 {
    kernel_deviations(f, x, k, quad)[k]
}

/// [`partial_sum_deviation_via_kernel`] for every order `0..=kmax`, sharing
/// the samples of `φ_x` across orders.
pub fn kernel_deviations(f: &TestFunction, x: f64, kmax: usize, quad: &QuadratureSpec) -> Vec<f64> {
    let breaks = phi_breakpoints(f, x, 0.0, PI);
    let samples: Vec<(f64, f64)> = quad
        .nodes(0.0, PI, &breaks)
        .into_iter()
        .map(|(t, w)| (t, w * phi_x(f, x, t)))
        .filter(|&(_, wv)| wv != 0.0)
        .collect();
    (0..=kmax)
        .map(|k| {
            samples
                .iter()
                .map(|&(t, wv)| wv * dirichlet_kernel(k, t))
                .sum::<f64>()
                / PI
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::by_name;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cos3_coefficients_are_exact() {
        let f = by_name("cos3").unwrap();
        let s = compute_coefficients(f, 8, 64).unwrap();
        for k in 0..=8 {
            let expect = if k == 3 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(s.a(k), expect, epsilon = 1e-12);
            assert_abs_diff_eq!(s.b(k), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_coefficients() {
        let f = by_name("const").unwrap();
        let s = compute_coefficients(f, 4, 32).unwrap();
        assert_abs_diff_eq!(s.a0(), 2.0, epsilon = 1e-14);
        for k in 1..=4 {
            assert_abs_diff_eq!(s.a(k), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(s.b(k), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn square_wave_trapezoid_matches_closed_form() {
        let f = by_name("squarewave").unwrap();
        let s = compute_coefficients(f, 9, 4096).unwrap();
        assert_abs_diff_eq!(s.b(1), 4.0 / PI, epsilon = 1e-6);
        assert_abs_diff_eq!(s.b(3), 4.0 / (3.0 * PI), epsilon = 1e-6);
    }

    #[test]
    fn aliasing_is_rejected() {
        let f = by_name("cos").unwrap();
        assert_eq!(
            compute_coefficients(f, 8, 17),
            Err(Error::Aliasing {
                degree: 8,
                samples: 17
            })
        );
        assert!(compute_coefficients(f, 8, 18).is_ok());
    }

    #[test]
    fn partial_sum_examples() {
        let cos3 = compute_coefficients(by_name("cos3").unwrap(), 8, 64).unwrap();
        assert_abs_diff_eq!(partial_sum(&cos3, 5, 1.0).unwrap(), 3.0f64.cos(), epsilon = 1e-12);
        assert_eq!(partial_sum(&cos3, 0, 0.7).unwrap(), 0.5 * cos3.a0());
        assert!(matches!(
            partial_sum(&cos3, 9, 0.0),
            Err(Error::DegreeExceeded { order: 9, degree: 8 })
        ));

        // direct summation oracle over the odd harmonics
        let sq = by_name("squarewave").unwrap().analytic_coefficients(9).unwrap();
        let x = PI / 2.0;
        let oracle: f64 = (1..=9)
            .step_by(2)
            .map(|j| 4.0 / (PI * j as f64) * (j as f64 * x).sin())
            .sum();
        assert_abs_diff_eq!(partial_sum(&sq, 9, x).unwrap(), oracle, epsilon = 1e-14);
    }

    #[test]
    fn horner_and_direct_agree() {
        let s = by_name("sawtooth").unwrap().analytic_coefficients(512).unwrap();
        for &x in &[-3.1, -1.0, 0.0, 1e-3, 0.5, 2.9] {
            for k in [0, 1, 7, 64, 511, 512] {
                let h = partial_sum(&s, k, x).unwrap();
                let d = partial_sum_direct(&s, k, x).unwrap();
                assert_abs_diff_eq!(h, d, epsilon = 1e-12);
            }
        }
        let all = partial_sums_upto(&s, 0.3, 64).unwrap();
        assert_abs_diff_eq!(all[64], partial_sum(&s, 64, 0.3).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn kernel_examples() {
        for k in [0, 3, 100] {
            assert_abs_diff_eq!(dirichlet_kernel(k, 0.0), k as f64 + 0.5, epsilon = 0.0);
            // continuity across the threshold
            let below = dirichlet_kernel(k, 0.99 * KERNEL_THRESHOLD);
            let above = dirichlet_kernel(k, 1.01 * KERNEL_THRESHOLD);
            assert_abs_diff_eq!(below, above, epsilon = 1e-6 * (k as f64 + 1.0));
        }
        for &t in &[-3.0, -0.5, 0.2, 1.0, PI] {
            assert_abs_diff_eq!(dirichlet_kernel(0, t), 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(dirichlet_kernel(1, PI), -0.5, epsilon = 1e-15);
        // D_k = 1/2 + Σ cos jt
        let t = 0.37;
        let direct = 0.5 + (1..=6).map(|j| (j as f64 * t).cos()).sum::<f64>();
        assert_abs_diff_eq!(dirichlet_kernel(6, t), direct, epsilon = 1e-13);
    }

    #[test]
    fn kernel_route_examples() {
        let quad = QuadratureSpec::default();
        let c = by_name("const").unwrap();
        assert_eq!(partial_sum_deviation_via_kernel(c, 7, 0.4, &quad), 0.0);

        let cos3 = by_name("cos3").unwrap();
        assert_abs_diff_eq!(partial_sum_deviation_via_kernel(cos3, 5, 1.0, &quad), 0.0, epsilon = 1e-9);

        let sq = by_name("squarewave").unwrap();
        let series = sq.analytic_coefficients(9).unwrap();
        let x = PI / 2.0;
        let coeff_route = partial_sum(&series, 9, x).unwrap() - sq.eval_wrapped(x);
        let kernel_route = partial_sum_deviation_via_kernel(sq, 9, x, &quad);
        assert_abs_diff_eq!(coeff_route, kernel_route, epsilon = 1e-6);
    }

    #[test]
    fn linear_combination() {
        let f = by_name("sawtooth").unwrap().analytic_coefficients(32).unwrap();
        let g = by_name("cusp050").unwrap().analytic_coefficients(32).unwrap();
        let h = f.combine(2.0, &g, -0.5).unwrap();
        let x = 0.9;
        let lhs = partial_sum(&h, 20, x).unwrap();
        let rhs = 2.0 * partial_sum(&f, 20, x).unwrap() - 0.5 * partial_sum(&g, 20, x).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }
}
