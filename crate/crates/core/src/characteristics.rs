//! Pointwise and norm characteristics of the symmetric difference
//! `φ_x(t) = f(x+t) + f(x-t) - 2f(x)`.
//!
//! All `t`-integrals are taken with the composite rule of
//! [`QuadratureSpec`], split at the points where `φ_x` inherits a
//! singularity of `f`. Integral characteristics need a finite exponent `p`;
//! `p = ∞` is accepted only by the sup-type quantities (norms, `ω_C`).

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::corpus::{wrap, TestFunction};
use crate::error::{ensure, Error, Result};
use crate::quadrature::{QuadratureSpec, DEFAULT_POINTS_PER_CELL};

/// Snap tolerance when counting the cells `⌊π/δ⌋`.
pub const FLOOR_GUARD: f64 = 1e-12;

/// Largest `j` of the default grid `γ 2^{-j}` used for `G°`.
pub const SUP_GRID_LEVELS: u32 = 12;

/// Values within this many ulps of the summands' scale are rounding noise.
pub const PHI_NOISE_ULPS: f64 = 8.0;

/// `f(x+t) + f(x-t) - 2f(x)`, with values below the rounding error of the
/// sum flushed to zero.
pub fn phi_x(f: &TestFunction, x: f64, t: f64) -> f64 {
    let (a, b, c) = (f.eval_wrapped(x + t), f.eval_wrapped(x - t), f.eval_wrapped(x));
    let v = a + b - 2.0 * c;
    let scale = a.abs() + b.abs() + 2.0 * c.abs();
    if v.abs() <= PHI_NOISE_ULPS * f64::EPSILON * scale {
        0.0
    } else {
        v
    }
}

/// Points of `[a, b]` where `t ↦ φ_x(t)` may fail to be smooth.
pub fn phi_breakpoints(f: &TestFunction, x: f64, a: f64, b: f64) -> Vec<f64> {
    let tol = 1e-12;
    let mut out = Vec::new();
    for sp in f.singular_points() {
        let d = sp.location - x;
        for base in [d, -d] {
            let lo = ((a - tol - base) / (2.0 * PI)).ceil() as i64;
            let hi = ((b + tol - base) / (2.0 * PI)).floor() as i64;
            for n in lo..=hi {
                let t = base + 2.0 * PI * n as f64;
                out.push(t.clamp(a, b));
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|p, q| (*p - *q).abs() <= tol);
    out
}

/// Points of `[-π, π]` where `x ↦ f(x + o)` is singular, for each offset `o`.
pub fn x_breakpoints(f: &TestFunction, offsets: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for sp in f.singular_points() {
        for &o in offsets {
            let v = wrap(sp.location - o);
            out.push(v);
            if v == -PI {
                out.push(PI);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|p, q| (*p - *q).abs() <= 1e-12);
    out
}

/// `∫_a^b |φ_x(t)|^p dt`.
pub fn phi_power_integral(f: &TestFunction, x: f64, a: f64, b: f64, p: f64, quad: &QuadratureSpec) -> f64 {
    let breaks = phi_breakpoints(f, x, a, b);
    quad.integrate(|t| pow_abs(phi_x(f, x, t), p), a, b, &breaks)
}

fn pow_abs(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v.abs()
    } else if p == 2.0 {
        v * v
    } else {
        v.abs().powf(p)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    ensure(delta > 0.0 && delta <= PI * (1.0 + 1e-15), "delta", delta, "0 < delta <= pi")
}

fn check_p(p: f64) -> Result<()> {
    ensure(p >= 1.0 && p.is_finite(), "p", p, "finite p >= 1")
}

fn check_ps(p: f64, s: f64) -> Result<()> {
    check_p(p)?;
    ensure(s > p, "s", s, "s > p")
}

/// `w_x f(δ)_p = {(1/δ)∫_0^δ |φ_x|^p}^{1/p}`.
pub fn w_char(f: &TestFunction, x: f64, delta: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_delta(delta)?;
    check_p(p)?;
    Ok((phi_power_integral(f, x, 0.0, delta, p, quad) / delta).powf(1.0 / p))
}

/// Number of cells `⌊π/δ⌋` with the snap-to-integer guard.
pub fn cell_count(delta: f64) -> usize {
    ((PI / delta + FLOOR_GUARD).floor() as usize).max(1)
}

/// Combines the per-cell means `A_k` into `{Σ A_k^{s/p}}^{1/s}`.
///
/// The first term is factored out so that the result is never below
/// `A_1^{1/p} = w`, even after rounding.
fn block_sum(means: &[f64], p: f64, s: f64) -> f64 {
    let first = means[0];
    let r = s / p;
    if first > 0.0 {
        let w = first.powf(1.0 / p);
        let tail: f64 = means[1..].iter().map(|&a| (a / first).powf(r)).sum();
        w * (1.0 + tail).powf(1.0 / s)
    } else {
        means.iter().map(|&a| a.powf(r)).sum::<f64>().powf(1.0 / s)
    }
}

/// `G_x f(δ)_{p,s} = {Σ_{k=1}^{⌊π/δ⌋} ((1/(kδ))∫_{(k-1)δ}^{kδ} |φ_x|^p)^{s/p}}^{1/s}`.
pub fn gabisonia(f: &TestFunction, x: f64, delta: f64, p: f64, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_delta(delta)?;
    check_ps(p, s)?;
    let n = cell_count(delta);
    let breaks = phi_breakpoints(f, x, 0.0, n as f64 * delta);
    let means: Vec<f64> = (1..=n)
        .map(|k| {
            let a = (k - 1) as f64 * delta;
            let b = k as f64 * delta;
            quad.integrate(|t| pow_abs(phi_x(f, x, t), p), a, b, &breaks) / b
        })
        .collect();
    Ok(block_sum(&means, p, s))
}

/// Batched `w` and `G` on the dyadic grid `δ_j = π 2^{-j}`, `j ≤ levels`.
///
/// The integrals over the finest cells are computed once; every coarser cell
/// is an exact sum of finer ones, so the profile is consistent across `j`.
#[derive(Debug, Clone)]
pub struct GabisoniaProfile {
    p: f64,
    levels: u32,
    fine: Vec<f64>,
}

impl GabisoniaProfile {
    pub fn new(f: &TestFunction, x: f64, p: f64, levels: u32, quad: &QuadratureSpec) -> Result<Self> {
        check_p(p)?;
        let n = 1usize << levels;
        let h = PI / n as f64;
        let breaks = phi_breakpoints(f, x, 0.0, PI);
        let fine = (0..n)
            .map(|i| {
                let a = i as f64 * h;
                let b = if i + 1 == n { PI } else { (i + 1) as f64 * h };
                quad.integrate(|t| pow_abs(phi_x(f, x, t), p), a, b, &breaks)
            })
            .collect();
        Ok(Self { p, levels, fine })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn delta(&self, j: u32) -> f64 {
        PI * 0.5f64.powi(j as i32)
    }

    fn means(&self, j: u32) -> Result<Vec<f64>> {
        if j > self.levels {
            return Err(Error::InvalidParameter {
                name: "j",
                value: j as f64,
                constraint: "j <= profile levels",
            });
        }
        let width = 1usize << (self.levels - j);
        let delta = self.delta(j);
        Ok(self
            .fine
            .chunks(width)
            .enumerate()
            .map(|(k, c)| c.iter().sum::<f64>() / ((k + 1) as f64 * delta))
            .collect())
    }

    pub fn w(&self, j: u32) -> Result<f64> {
        Ok(self.means(j)?[0].powf(1.0 / self.p))
    }

    pub fn gabisonia(&self, j: u32, s: f64) -> Result<f64> {
        ensure(s > self.p, "s", s, "s > p")?;
        Ok(block_sum(&self.means(j)?, self.p, s))
    }

    /// `G°` over the dyadic grid `{δ_i : j ≤ i ≤ levels}`.
    pub fn gabisonia_sup(&self, j: u32, s: f64) -> Result<f64> {
        let mut best = 0.0f64;
        for i in j..=self.levels {
            best = best.max(self.gabisonia(i, s)?);
        }
        Ok(best)
    }
}

/// Default `G°` grid `γ 2^{-j}`, `j = 0..=12`.
pub fn default_sup_grid(gamma: f64) -> Vec<f64> {
    (0..=SUP_GRID_LEVELS).map(|j| gamma * 0.5f64.powi(j as i32)).collect()
}

/// `G°_x f(γ)_{p,s}` as the maximum of `G` over a finite `δ` grid; a lower
/// bound for the supremum over `(0, γ]`.
pub fn gabisonia_sup(
    f: &TestFunction,
    x: f64,
    gamma: f64,
    p: f64,
    s: f64,
    grid: Option<&[f64]>,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_delta(gamma)?;
    check_ps(p, s)?;
    let default;
    let grid = match grid {
        Some(g) => g,
        None => {
            default = default_sup_grid(gamma);
            &default
        }
    };
    if grid.is_empty() {
        return Err(Error::EmptyGrid("delta grid"));
    }
    let mut best = 0.0f64;
    for &d in grid {
        ensure(d > 0.0 && d <= gamma, "delta", d, "grid entries in (0, gamma]")?;
        best = best.max(gabisonia(f, x, d, p, s, quad)?);
    }
    Ok(best)
}

/// `(1/δ)∫_γ^{γ+δ} φ_x(t) dt` (signed).
pub fn big_phi(f: &TestFunction, x: f64, delta: f64, gamma: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_window(delta, gamma)?;
    let breaks = phi_breakpoints(f, x, gamma, gamma + delta);
    Ok(quad.integrate(|t| phi_x(f, x, t), gamma, gamma + delta, &breaks) / delta)
}

/// `{(1/δ)∫_γ^{γ+δ} |φ_x|^p}^{1/p}`.
pub fn big_w(f: &TestFunction, x: f64, delta: f64, gamma: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_window(delta, gamma)?;
    check_p(p)?;
    Ok((phi_power_integral(f, x, gamma, gamma + delta, p, quad) / delta).powf(1.0 / p))
}

/// `{(1/γ)∫_γ^{γ+δ} |φ_x|^p}^{1/p}`; note the `1/γ` normalisation.
pub fn psi(f: &TestFunction, x: f64, delta: f64, gamma: f64, p: f64, quad: &QuadratureSpec) -> Result<f64> {
    ensure(delta > 0.0, "delta", delta, "delta > 0")?;
    ensure(gamma >= delta, "gamma", gamma, "delta <= gamma")?;
    ensure(gamma + delta <= PI * (1.0 + 1e-15), "gamma", gamma, "gamma + delta <= pi")?;
    check_p(p)?;
    Ok((phi_power_integral(f, x, gamma, gamma + delta, p, quad) / gamma).powf(1.0 / p))
}

fn check_window(delta: f64, gamma: f64) -> Result<()> {
    ensure(delta > 0.0, "delta", delta, "delta > 0")?;
    ensure(gamma >= 0.0, "gamma", gamma, "gamma >= 0")?;
    ensure(gamma + delta <= PI * (1.0 + 1e-15), "gamma", gamma, "gamma + delta <= pi")
}

/// `{(1/δ)∫_0^δ |φ_x(t+γ) - φ_x(t)|^p dt}^{1/p}`.
pub fn shifted_difference_mean(
    f: &TestFunction,
    x: f64,
    delta: f64,
    gamma: f64,
    p: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    ensure(delta > 0.0, "delta", delta, "delta > 0")?;
    ensure(gamma >= 0.0, "gamma", gamma, "gamma >= 0")?;
    check_p(p)?;
    let mut breaks = phi_breakpoints(f, x, 0.0, delta);
    breaks.extend(phi_breakpoints(f, x, gamma, gamma + delta).into_iter().map(|t| t - gamma));
    let g = |t: f64| pow_abs(phi_x(f, x, t + gamma) - phi_x(f, x, t), p);
    Ok((quad.integrate(g, 0.0, delta, &breaks) / delta).powf(1.0 / p))
}

/// `{λ^β ∫_λ^π t^{-(β+1)} |φ_x(t)|^p dt}^{1/β}`.
pub fn weighted_tail(
    f: &TestFunction,
    x: f64,
    lambda: f64,
    beta: f64,
    p: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_delta(lambda)?;
    ensure(beta > 0.0, "beta", beta, "beta > 0")?;
    check_p(p)?;
    let breaks = phi_breakpoints(f, x, lambda, PI);
    let g = |t: f64| t.powf(-(beta + 1.0)) * pow_abs(phi_x(f, x, t), p);
    let mut total = 0.0;
    let mut a = lambda;
    while a < PI {
        let b = (2.0 * a).min(PI);
        total += quad.integrate(g, a, b, &breaks);
        a = b;
    }
    Ok((lambda.powf(beta) * total).powf(1.0 / beta))
}

/// Exponent of an `L^p` norm; `Infinity` selects the sup norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormExponent {
    Finite(f64),
    Infinity,
}

impl NormExponent {
    pub fn value(&self) -> f64 {
        match self {
            NormExponent::Finite(p) => *p,
            NormExponent::Infinity => f64::INFINITY,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Some(NormExponent::Infinity),
            v => v.parse::<f64>().ok().map(|p| {
                if p.is_infinite() {
                    NormExponent::Infinity
                } else {
                    NormExponent::Finite(p)
                }
            }),
        }
    }
}

impl fmt::Display for NormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExponent::Finite(p) => write!(f, "{p}"),
            NormExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Discretisation of `Q = [-π, π]` for norms: `cells` uniform cells with
/// Gauss–Legendre nodes for integrals; for sup norms the maximum is taken
/// over those nodes, the `cells + 1` cell edges and `extra_points`.
#[derive(Debug, Clone, PartialEq)]
pub struct XGrid {
    pub cells: usize,
    pub points_per_cell: usize,
    pub extra_points: Vec<f64>,
}

impl Default for XGrid {
    fn default() -> Self {
        Self {
            cells: 256,
            points_per_cell: DEFAULT_POINTS_PER_CELL,
            extra_points: Vec::new(),
        }
    }
}

impl XGrid {
    pub fn refined(&self, level: u32) -> Self {
        Self {
            cells: self.cells << level,
            ..self.clone()
        }
    }

    pub fn with_points(mut self, points: &[f64]) -> Self {
        self.extra_points.extend_from_slice(points);
        self
    }

    /// Quadrature nodes and weights over `[-π, π]`, split and graded at `breaks`.
    pub fn nodes(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        self.quadrature().nodes(-PI, PI, breaks)
    }

    fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec::new(self.cells, self.points_per_cell).expect("valid x grid")
    }

    fn sup_points(&self, breaks: &[f64]) -> Vec<f64> {
        let mut pts: Vec<f64> = self.quadrature().nodes(-PI, PI, breaks).into_iter().map(|(x, _)| x).collect();
        pts.extend((0..=self.cells).map(|i| -PI + 2.0 * PI * i as f64 / self.cells as f64));
        pts.extend(self.extra_points.iter().map(|&x| wrap(x)));
        pts.extend(breaks.iter().copied());
        pts
    }
}

/// `‖g‖_{L^p(Q)}` by composite quadrature, or `max |g|` over the grid for `p = ∞`.
pub fn lp_norm<G>(g: G, p: NormExponent, grid: &XGrid, breaks: &[f64]) -> f64
where
    G: Fn(f64) -> f64 + Sync,
{
    match p {
        NormExponent::Infinity => {
            let pts = grid.sup_points(breaks);
            pts.par_iter().map(|&x| g(x).abs()).reduce(|| 0.0, f64::max)
        }
        NormExponent::Finite(p) => {
            let nodes = grid.quadrature().nodes(-PI, PI, breaks);
            let terms: Vec<f64> = nodes.par_iter().map(|&(x, w)| w * pow_abs(g(x), p)).collect();
            terms.iter().sum::<f64>().powf(1.0 / p)
        }
    }
}

/// `{Σ w_i |v_i|^p}^{1/p}` for values sampled at [`XGrid::nodes`].
pub fn discrete_norm(nodes: &[(f64, f64)], values: &[f64], p: f64) -> f64 {
    nodes
        .iter()
        .zip(values)
        .map(|(&(_, w), &v)| w * pow_abs(v, p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `h = δ i / n` for `i = 1..=n`.
pub fn default_h_grid(delta: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| delta * i as f64 / n as f64).collect()
}

/// `ω_X f(δ) = max_{h ∈ h_grid} ‖φ_·(h)‖_X`, a lower bound for the sup over `(0, δ]`.
pub fn modulus_of_continuity(
    f: &TestFunction,
    delta: f64,
    p: NormExponent,
    grid: &XGrid,
    h_grid: &[f64],
) -> Result<f64> {
    ensure(delta > 0.0, "delta", delta, "delta > 0")?;
    if let NormExponent::Finite(v) = p {
        check_p(v)?;
    }
    if h_grid.is_empty() {
        return Err(Error::EmptyGrid("h grid"));
    }
    let mut best = 0.0f64;
    for &h in h_grid {
        ensure(h > 0.0 && h <= delta * (1.0 + 1e-12), "h", h, "h grid inside (0, delta]")?;
        best = best.max(phi_norm(f, h, p, grid));
    }
    Ok(best)
}

/// `‖φ_·(h)‖_X` for one shift.
pub fn phi_norm(f: &TestFunction, h: f64, p: NormExponent, grid: &XGrid) -> f64 {
    let breaks = x_breakpoints(f, &[0.0, h, -h]);
    lp_norm(|x| phi_x(f, x, h), p, grid, &breaks)
}

/// Which characteristic a [`CharacteristicValue`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharKind {
    W,
    Gabisonia,
    GabisoniaSup,
    OmegaNorm,
    BigPhi,
    BigW,
    Psi,
}

impl CharKind {
    pub fn label(&self) -> &'static str {
        match self {
            CharKind::W => "w",
            CharKind::Gabisonia => "G",
            CharKind::GabisoniaSup => "G_sup",
            CharKind::OmegaNorm => "omega",
            CharKind::BigPhi => "Phi",
            CharKind::BigW => "W",
            CharKind::Psi => "Psi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharParams {
    pub x: f64,
    pub delta: f64,
    pub gamma: Option<f64>,
    pub p: f64,
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicValue {
    pub kind: CharKind,
    pub params: CharParams,
    pub value: f64,
}

/// Every characteristic of `f` at `x` on the dyadic grid `π 2^{-j}`,
/// `j = 1..=levels`, for one `(p, s)`.
pub fn characteristic_table(
    f: &TestFunction,
    x: f64,
    p: f64,
    s: f64,
    levels: u32,
    quad: &QuadratureSpec,
) -> Result<Vec<CharacteristicValue>> {
    check_ps(p, s)?;
    let profile = GabisoniaProfile::new(f, x, p, levels, quad)?;
    let grid = XGrid::default();
    let mut out = Vec::new();
    for j in 1..=levels {
        let delta = profile.delta(j);
        let base = CharParams {
            x,
            delta,
            gamma: None,
            p,
            s: None,
        };
        let with_s = CharParams { s: Some(s), ..base };
        let with_gamma = CharParams {
            gamma: Some(delta),
            ..base
        };
        out.push(CharacteristicValue {
            kind: CharKind::W,
            params: base,
            value: w_char(f, x, delta, p, quad)?,
        });
        out.push(CharacteristicValue {
            kind: CharKind::Gabisonia,
            params: with_s,
            value: gabisonia(f, x, delta, p, s, quad)?,
        });
        out.push(CharacteristicValue {
            kind: CharKind::GabisoniaSup,
            params: CharParams {
                gamma: Some(delta),
                ..with_s
            },
            value: profile.gabisonia_sup(j, s)?,
        });
        out.push(CharacteristicValue {
            kind: CharKind::BigPhi,
            params: with_gamma,
            value: big_phi(f, x, delta, delta, quad)?,
        });
        out.push(CharacteristicValue {
            kind: CharKind::BigW,
            params: with_gamma,
            value: big_w(f, x, delta, delta, p, quad)?,
        });
        out.push(CharacteristicValue {
            kind: CharKind::Psi,
            params: with_gamma,
            value: psi(f, x, delta, delta, p, quad)?,
        });
        if j <= 8 {
            out.push(CharacteristicValue {
                kind: CharKind::OmegaNorm,
                params: base,
                value: modulus_of_continuity(f, delta, NormExponent::Finite(p), &grid, &default_h_grid(delta, 16))?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{builtin_corpus, by_name, dyadic_grid};
    use approx::assert_abs_diff_eq;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn phi_examples() {
        let c = by_name("const").unwrap();
        assert_eq!(phi_x(c, 0.3, 1.1), 0.0);
        let cos = by_name("cos").unwrap();
        for &t in &[0.1, 1.0, 2.5] {
            assert_abs_diff_eq!(phi_x(cos, 0.0, t), 2.0 * (t.cos() - 1.0), epsilon = 1e-15);
        }
        let saw = by_name("sawtooth").unwrap();
        for &t in &[0.1, 1.0, 3.0] {
            assert_abs_diff_eq!(phi_x(saw, 0.0, t), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn breakpoints_fold_into_range() {
        let sq = by_name("squarewave").unwrap();
        let b = phi_breakpoints(sq, 1.0, 0.0, PI);
        // singularities at 0 and ±π seen from x = 1: t = 1 and t = π - 1
        assert_eq!(b.len(), 2);
        assert_abs_diff_eq!(b[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b[1], PI - 1.0, epsilon = 1e-15);
    }

    #[test]
    fn w_examples() {
        let q = quad();
        assert_eq!(w_char(by_name("const").unwrap(), 0.4, 1.0, 1.0, &q).unwrap(), 0.0);
        let cos = by_name("cos").unwrap();
        let d = PI / 2.0;
        assert_abs_diff_eq!(w_char(cos, 0.0, d, 1.0, &q).unwrap(), 2.0 - 4.0 / PI, epsilon = 1e-13);
        // p = 2: (1/δ)∫(2-2cos t)² = 4(1 - 2 sin δ/δ + (δ/2 + sin 2δ/4)/δ)
        let exact = (4.0 * (1.0 - 2.0 * d.sin() / d + (d / 2.0 + (2.0 * d).sin() / 4.0) / d)).sqrt();
        assert_abs_diff_eq!(w_char(cos, 0.0, d, 2.0, &q).unwrap(), exact, epsilon = 1e-13);
        assert!(w_char(cos, 0.0, 0.0, 1.0, &q).is_err());
        assert!(w_char(cos, 0.0, 3.5, 1.0, &q).is_err());
    }

    #[test]
    fn gabisonia_examples() {
        let q = quad();
        let cos = by_name("cos").unwrap();
        for f in builtin_corpus() {
            let g = gabisonia(f, 0.7, PI, 1.0, 2.0, &q).unwrap();
            let w = w_char(f, 0.7, PI, 1.0, &q).unwrap();
            assert_eq!(g, w, "{}", f.name());
        }
        assert_eq!(gabisonia(by_name("const").unwrap(), 1.0, 0.3, 1.0, 2.0, &q).unwrap(), 0.0);

        // two cells: A_1 = 2 - 4/π, A_2 = (1/(2δ))∫_δ^{2δ} (2 - 2cos t)
        let d = PI / 2.0;
        let a1 = 2.0 - 4.0 / PI;
        let a2 = (2.0 * d - 2.0 * ((2.0 * d).sin() - d.sin())) / (2.0 * d);
        let exact = (a1 * a1 + a2 * a2).sqrt();
        assert_abs_diff_eq!(gabisonia(cos, 0.0, d, 1.0, 2.0, &q).unwrap(), exact, epsilon = 1e-13);

        assert!(gabisonia(cos, 0.0, d, 2.0, 2.0, &q).is_err());
    }

    #[test]
    fn floor_guard_counts_exact_divisions() {
        for k in 1..200usize {
            assert_eq!(cell_count(PI / k as f64), k);
        }
        assert_eq!(cell_count(PI / 2.5), 2);
    }

    #[test]
    fn profile_matches_direct_route() {
        let q = quad();
        // p = 2 has no kinks from |φ|, so both routes agree to rounding;
        // with p = 1 the kinks of |φ| are met in different cells.
        for &(p, s, tol) in &[(2.0, 3.0, 1e-11), (1.0, 2.0, 1e-6)] {
            for name in ["cos", "squarewave", "cusp025"] {
                let f = by_name(name).unwrap();
                for &x in &[0.0, 1.0, -PI] {
                    let prof = GabisoniaProfile::new(f, x, p, 8, &q).unwrap();
                    for j in 0..=8u32 {
                        let d = prof.delta(j);
                        let direct = gabisonia(f, x, d, p, s, &q).unwrap();
                        let got = prof.gabisonia(j, s).unwrap();
                        assert!((got - direct).abs() <= tol * direct.max(1.0), "{name} x={x} j={j}: {got} vs {direct}");
                        let w = w_char(f, x, d, p, &q).unwrap();
                        assert!((prof.w(j).unwrap() - w).abs() <= tol * w.max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn gabisonia_sup_examples() {
        let q = quad();
        assert_eq!(
            gabisonia_sup(by_name("const").unwrap(), 0.0, 1.0, 1.0, 2.0, None, &q).unwrap(),
            0.0
        );
        let cos = by_name("cos").unwrap();
        let g = PI / 2.0;
        assert_eq!(
            gabisonia_sup(cos, 0.0, g, 1.0, 2.0, Some(&[g]), &q).unwrap(),
            gabisonia(cos, 0.0, g, 1.0, 2.0, &q).unwrap()
        );
        let exhaustive = default_sup_grid(g)
            .iter()
            .map(|&d| gabisonia(cos, 0.0, d, 1.0, 2.0, &q).unwrap())
            .fold(0.0, f64::max);
        assert_eq!(gabisonia_sup(cos, 0.0, g, 1.0, 2.0, None, &q).unwrap(), exhaustive);
        assert_eq!(
            gabisonia_sup(cos, 0.0, g, 1.0, 2.0, Some(&[]), &q),
            Err(Error::EmptyGrid("delta grid"))
        );
    }

    #[test]
    fn modulus_examples() {
        let grid = XGrid::default();
        let c = by_name("const").unwrap();
        let h = default_h_grid(1.0, 8);
        assert_eq!(modulus_of_continuity(c, 1.0, NormExponent::Infinity, &grid, &h).unwrap(), 0.0);
        let cos = by_name("cos").unwrap();
        let d = PI / 2.0;
        let w = modulus_of_continuity(cos, d, NormExponent::Infinity, &grid, &default_h_grid(d, 32)).unwrap();
        assert_abs_diff_eq!(w, 2.0 * (1.0 - d.cos()), epsilon = 1e-12);

        // cos 3x, p = 2: ‖φ_·(h)‖_2 = 2|cos 3h - 1| √π, by brute-force double quadrature
        let cos3 = by_name("cos3").unwrap();
        let d = 0.8;
        let hs = default_h_grid(d, 8);
        let brute = hs
            .iter()
            .map(|&h| {
                let n = 20_000;
                let sum: f64 = (0..n)
                    .map(|i| {
                        let x = -PI + 2.0 * PI * (i as f64 + 0.5) / n as f64;
                        phi_x(cos3, x, h).powi(2)
                    })
                    .sum();
                (sum * 2.0 * PI / n as f64).sqrt()
            })
            .fold(0.0, f64::max);
        let got = modulus_of_continuity(cos3, d, NormExponent::Finite(2.0), &grid, &hs).unwrap();
        assert_abs_diff_eq!(got, brute, epsilon = 1e-9);
        let analytic = hs.iter().map(|&h| 2.0 * (1.0 - (3.0 * h).cos()) * PI.sqrt()).fold(0.0, f64::max);
        assert_abs_diff_eq!(got, analytic, epsilon = 1e-12);
    }

    #[test]
    fn phi_w_psi_examples() {
        let q = quad();
        let c = by_name("const").unwrap();
        assert_eq!(big_phi(c, 0.2, 0.5, 0.5, &q).unwrap(), 0.0);
        assert_eq!(big_w(c, 0.2, 0.5, 0.5, 1.0, &q).unwrap(), 0.0);
        assert_eq!(psi(c, 0.2, 0.5, 0.5, 1.0, &q).unwrap(), 0.0);

        let cos = by_name("cos").unwrap();
        let (d, g) = (PI / 4.0, PI / 4.0);
        let anti = |t: f64| 2.0 * t.sin() - 2.0 * t;
        let exact = (anti(g + d) - anti(g)) / d;
        let phi = big_phi(cos, 0.0, d, g, &q).unwrap();
        assert_abs_diff_eq!(phi, exact, epsilon = 1e-13);
        assert!(phi < 0.0);
        assert_abs_diff_eq!(big_w(cos, 0.0, d, g, 1.0, &q).unwrap(), -exact, epsilon = 1e-13);

        // psi (δ = π/4, γ = π/2): (1/γ)∫_γ^{γ+δ} (2 - 2cos t)
        let (d, g) = (PI / 4.0, PI / 2.0);
        let exact = (2.0 * d - 2.0 * ((g + d).sin() - g.sin())) / g;
        assert_abs_diff_eq!(psi(cos, 0.0, d, g, 1.0, &q).unwrap(), exact, epsilon = 1e-13);
        assert_eq!(
            psi(cos, 0.0, 0.4, 0.4, 2.0, &q).unwrap(),
            big_w(cos, 0.0, 0.4, 0.4, 2.0, &q).unwrap()
        );
        assert!(psi(cos, 0.0, 0.5, 0.4, 1.0, &q).is_err());
        assert!(psi(cos, 0.0, 1.2, 2.0, 1.0, &q).is_err());
        assert!(big_phi(cos, 0.0, 2.0, 1.2, &q).is_err());
    }

    #[test]
    fn lp_norm_examples() {
        let grid = XGrid::default();
        assert_abs_diff_eq!(lp_norm(|_| 1.0, NormExponent::Finite(2.0), &grid, &[]), (2.0 * PI).sqrt(), epsilon = 1e-13);
        assert_eq!(lp_norm(|_| 1.0, NormExponent::Infinity, &grid, &[]), 1.0);
        assert_abs_diff_eq!(lp_norm(f64::cos, NormExponent::Finite(2.0), &grid, &[]), PI.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn w_is_dominated_by_g_on_dyadic_grid() {
        let q = quad();
        for f in builtin_corpus() {
            for &x in &[0.0, 1.0, -PI] {
                for &delta in &dyadic_grid(9) {
                    for &(p, s) in &[(1.0, 1.5), (1.0, 3.0), (2.0, 2.5)] {
                        let w = w_char(f, x, delta, p, &q).unwrap();
                        let g = gabisonia(f, x, delta, p, s, &q).unwrap();
                        assert!(w <= g, "{} x={x} delta={delta}", f.name());
                    }
                }
            }
        }
    }

    #[test]
    fn weighted_tail_against_refined_quadrature() {
        let cos = by_name("cos").unwrap();
        let (lambda, beta) = (0.1, 1.0);
        let got = weighted_tail(cos, 0.0, lambda, beta, 1.0, &quad()).unwrap();
        // λ ∫_λ^π t^{-2} (2 - 2cos t) dt by a fine midpoint rule in log t
        let n = 400_000;
        let (la, lb) = (lambda.ln(), PI.ln());
        let h = (lb - la) / n as f64;
        let sum: f64 = (0..n)
            .map(|i| {
                let t = (la + (i as f64 + 0.5) * h).exp();
                t * t.powi(-2) * (2.0 - 2.0 * t.cos())
            })
            .sum();
        assert_abs_diff_eq!(got, lambda * sum * h, epsilon = 1e-9);
    }
}
