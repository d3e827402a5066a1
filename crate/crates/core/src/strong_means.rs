//! Strong means of partial-sum deviations, weight schemes and the growth
//! classes they are paired with.

use std::fmt;

use crate::corpus::TestFunction;
use crate::error::{ensure, Error, Result};
use crate::fourier::{partial_sums_upto, FourierSeries};

/// Default bound on the block power-mean ratio in [`lambda_class_check`].
pub const LAMBDA_CLASS_BOUND: f64 = 10.0;

/// Growth-slope threshold above which `log φ(u)/u` counts as unbounded.
pub const GROWTH_SLOPE_THRESHOLD: f64 = 0.1;

/// Strictly increasing orders `k_0 < … < k_r` with `k_r ≥ r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSequence {
    indices: Vec<usize>,
    label: String,
}

impl IndexSequence {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let label = indices.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        Self::labelled(indices, label)
    }

    fn labelled(indices: Vec<usize>, label: String) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidIndices("empty sequence".into()));
        }
        if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndices(format!(
                "requires strictly increasing orders, got {} then {}",
                w[0], w[1]
            )));
        }
        let r = indices.len() - 1;
        let kr = indices[r];
        if kr < r {
            return Err(Error::InvalidIndices(format!("requires k_r >= r, got k_r = {kr} < r = {r}")));
        }
        Ok(Self { indices, label })
    }

    /// `k_ν = ν`, `ν = 0..=r`.
    pub fn arithmetic(r: usize) -> Self {
        Self::labelled((0..=r).collect(), format!("arith:{r}")).expect("arithmetic orders are valid")
    }

    /// `k_ν = 2^ν`, `ν = 0..=r`.
    pub fn lacunary(r: usize) -> Result<Self> {
        ensure(r < 63, "r", r as f64, "lacunary r < 63")?;
        Self::labelled((0..=r).map(|v| 1usize << v).collect(), format!("lacunary:{r}"))
    }

    /// `k_ν = k_0 + ν`, `ν = 0..=r`.
    pub fn shifted(k0: usize, r: usize) -> Self {
        Self::labelled((k0..=k0 + r).collect(), format!("shifted:{k0},{r}")).expect("shifted orders are valid")
    }

    /// Parses `arith:r`, `lacunary:r`, `shifted:k0,r` or an explicit
    /// comma-separated list.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let int = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidIndices(format!("`{s}` is not a nonnegative integer")))
        };
        if let Some(rest) = spec.strip_prefix("arith:") {
            Ok(Self::arithmetic(int(rest)?))
        } else if let Some(rest) = spec.strip_prefix("lacunary:") {
            Self::lacunary(int(rest)?)
        } else if let Some(rest) = spec.strip_prefix("shifted:") {
            let (a, b) = rest
                .split_once(',')
                .ok_or_else(|| Error::InvalidIndices(format!("`{spec}`: expected shifted:k0,r")))?;
            Ok(Self::shifted(int(a)?, int(b)?))
        } else {
            let list = spec.split(',').map(int).collect::<Result<Vec<_>>>()?;
            Self::new(list)
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn r(&self) -> usize {
        self.indices.len() - 1
    }

    pub fn k0(&self) -> usize {
        self.indices[0]
    }

    pub fn kr(&self) -> usize {
        self.indices[self.r()]
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// `|S_k f(x) - f(x)|` for `k = 0..=kmax`.
pub fn deviations(f: &TestFunction, series: &FourierSeries, x: f64, kmax: usize) -> Result<Vec<f64>> {
    let fx = f.eval_wrapped(x);
    Ok(partial_sums_upto(series, x, kmax)?.into_iter().map(|s| (s - fx).abs()).collect())
}

/// `{(1/(r+1)) Σ_ν d_{k_ν}^q}^{1/q}` from precomputed deviations.
pub fn strong_mean_from_deviations(dev: &[f64], idx: &IndexSequence, q: f64) -> f64 {
    let n = idx.indices().len() as f64;
    let sum: f64 = idx.indices().iter().map(|&k| dev[k].powf(q)).sum();
    (sum / n).powf(1.0 / q)
}

/// `H^q_{k_0,k_r} f(x) = {(1/(r+1)) Σ_ν |S_{k_ν} f(x) - f(x)|^q}^{1/q}`.
pub fn strong_mean_hq(
    f: &TestFunction,
    series: &FourierSeries,
    x: f64,
    idx: &IndexSequence,
    q: f64,
) -> Result<f64> {
    ensure(q > 0.0, "q", q, "q > 0")?;
    let dev = deviations(f, series, x, idx.kr())?;
    Ok(strong_mean_from_deviations(&dev, idx, q))
}

/// Growth functions `φ` used in `H^{λφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthFunction {
    /// `u^q`
    Power(f64),
    /// `exp(u²) - 1`
    ExpSquare,
}

impl GrowthFunction {
    pub fn identity() -> Self {
        GrowthFunction::Power(1.0)
    }

    pub fn eval(&self, u: f64) -> f64 {
        match *self {
            GrowthFunction::Power(1.0) => u,
            GrowthFunction::Power(q) => u.powf(q),
            GrowthFunction::ExpSquare => (u * u).exp_m1(),
        }
    }

    /// `ln φ(u)`, finite even where `φ(u)` overflows.
    pub fn ln_eval(&self, u: f64) -> f64 {
        match *self {
            GrowthFunction::Power(q) => q * u.ln(),
            GrowthFunction::ExpSquare => u * u + (-(-(u * u)).exp()).ln_1p(),
        }
    }

    /// Empirical `K` with `φ(2u) ≤ K φ(u)` over the default `(0, 1)` grid.
    pub fn doubling_constant(&self) -> f64 {
        doubling_on(self, &default_u_grid())
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "id" | "identity" => Some(Self::identity()),
            "expsq" => Some(GrowthFunction::ExpSquare),
            v => v
                .strip_prefix("pow:")
                .and_then(|q| q.parse::<f64>().ok())
                .filter(|q| *q > 0.0)
                .map(GrowthFunction::Power),
        }
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthFunction::Power(q) if *q == 1.0 => write!(f, "id"),
            GrowthFunction::Power(q) => write!(f, "pow:{q}"),
            GrowthFunction::ExpSquare => write!(f, "expsq"),
        }
    }
}

/// Geometric points in `(0, 1)` followed by a linear tail up to `u = 50`.
pub fn default_u_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (1..=40).rev().map(|j| 0.5f64.powf(j as f64 / 2.0)).collect();
    g.extend((2..=100).map(|i| 0.5 * i as f64));
    g
}

fn doubling_on(phi: &GrowthFunction, grid: &[f64]) -> f64 {
    grid.iter()
        .filter(|&&u| u > 0.0 && u < 1.0)
        .filter_map(|&u| {
            let v = phi.eval(u);
            (v > 0.0).then(|| phi.eval(2.0 * u) / v)
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiClassReport {
    pub member: bool,
    pub doubling_constant: f64,
    pub growth_slope: f64,
    pub reason: Option<String>,
}

/// Checks `φ(0) = 0`, monotonicity, doubling on `(0, 1)` and boundedness of
/// `log φ(u)/u` on the tail `u ≥ 1` (least-squares slope below
/// [`GROWTH_SLOPE_THRESHOLD`]).
pub fn phi_class_check(phi: &GrowthFunction, u_grid: &[f64]) -> PhiClassReport {
    let mut grid: Vec<f64> = u_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let doubling_constant = doubling_on(phi, &grid);

    let tail: Vec<(f64, f64)> = grid
        .iter()
        .filter(|&&u| u >= 1.0)
        .map(|&u| (u, phi.ln_eval(u) / u))
        .collect();
    let growth_slope = if tail.len() >= 2 {
        least_squares_slope(&tail)
    } else {
        f64::NAN
    };

    let reason = if phi.eval(0.0) != 0.0 {
        Some("phi(0) != 0".to_string())
    } else if grid.windows(2).any(|w| phi.eval(w[1]) < phi.eval(w[0])) {
        Some("phi decreases on the grid".to_string())
    } else if !doubling_constant.is_finite() || doubling_constant == 0.0 {
        Some("phi(2u)/phi(u) unbounded on (0,1)".to_string())
    } else if !growth_slope.is_finite() {
        Some("grid has no tail points u >= 1".to_string())
    } else if growth_slope > GROWTH_SLOPE_THRESHOLD {
        Some(format!("log phi(u)/u grows with slope {growth_slope:.3}"))
    } else {
        None
    };
    PhiClassReport {
        member: reason.is_none(),
        doubling_constant,
        growth_slope,
        reason,
    }
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Block boundaries `N_0 = 0 < N_1 < …`, with `N_{-1} = -1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    bounds: Vec<usize>,
}

impl Blocks {
    pub fn new(bounds: Vec<usize>) -> Result<Self> {
        if bounds.first() != Some(&0) {
            return Err(Error::InvalidIndices("blocks must start with N_0 = 0".into()));
        }
        if bounds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndices("blocks must be strictly increasing".into()));
        }
        Ok(Self { bounds })
    }

    /// `N_0 = 0`, `N_m = 2^m` for `1 ≤ m ≤ m_max`.
    pub fn dyadic(m_max: usize) -> Self {
        let bounds = std::iter::once(0).chain((1..=m_max).map(|m| 1usize << m)).collect();
        Self { bounds }
    }

    pub fn max_index(&self) -> usize {
        self.bounds.len() - 1
    }

    /// `N_m` for `m ≥ -1`.
    pub fn n(&self, m: i64) -> Result<i64> {
        if m == -1 {
            return Ok(-1);
        }
        usize::try_from(m)
            .ok()
            .and_then(|m| self.bounds.get(m))
            .map(|&v| v as i64)
            .ok_or(Error::InvalidParameter {
                name: "m",
                value: m as f64,
                constraint: "block index within the defined blocks",
            })
    }

    /// Orders `ν ∈ [N_{m-2}+1, N_m]` of the `m`-th block, `m ≥ 1`.
    pub fn block(&self, m: usize) -> Result<(usize, usize)> {
        ensure(m >= 1, "m", m as f64, "m >= 1")?;
        let lo = self.n(m as i64 - 2)? + 1;
        let hi = self.n(m as i64)?;
        Ok((lo as usize, hi as usize))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum SchemeKind {
    /// `1/(N_m+1)` on the `m`-th block.
    Theorem3 { m: usize },
    /// `1/(⌊u⌋+1)` for `ν ≤ u`.
    Cesaro,
    /// Fixed weights, independent of `u`.
    Explicit(Vec<f64>),
}

/// Weight functions `λ_ν(u)` with finite support, attached to blocks `N_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaScheme {
    kind: SchemeKind,
    blocks: Blocks,
}

/// `λ_ν(m) = 1/(N_m+1)` for `ν = N_{m-2}+1, …, N_m`, zero otherwise.
pub fn theorem3_scheme(m: usize, blocks: Blocks) -> Result<LambdaScheme> {
    blocks.block(m)?;
    Ok(LambdaScheme {
        kind: SchemeKind::Theorem3 { m },
        blocks,
    })
}

impl LambdaScheme {
    /// Cesàro weights `1/(u+1)` on `0 ≤ ν ≤ u`.
    pub fn cesaro(blocks: Blocks) -> Self {
        Self {
            kind: SchemeKind::Cesaro,
            blocks,
        }
    }

    pub fn explicit(weights: Vec<f64>, blocks: Blocks) -> Result<Self> {
        if let Some(&w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: w,
                constraint: "lambda >= 0",
            });
        }
        Ok(Self {
            kind: SchemeKind::Explicit(weights),
            blocks,
        })
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SchemeKind::Theorem3 { m } => format!("theorem3:{m}"),
            SchemeKind::Cesaro => "cesaro".into(),
            SchemeKind::Explicit(w) => format!("explicit:{}", w.len()),
        }
    }

    pub fn lambda(&self, nu: usize, u: f64) -> f64 {
        match &self.kind {
            SchemeKind::Theorem3 { m } => {
                let (lo, hi) = self.blocks.block(*m).expect("validated at construction");
                if (lo..=hi).contains(&nu) {
                    1.0 / (hi as f64 + 1.0)
                } else {
                    0.0
                }
            }
            SchemeKind::Cesaro => {
                let n = u.max(0.0).floor();
                if (nu as f64) <= n {
                    1.0 / (n + 1.0)
                } else {
                    0.0
                }
            }
            SchemeKind::Explicit(w) => w.get(nu).copied().unwrap_or(0.0),
        }
    }

    /// Largest `ν` with `λ_ν(u) > 0`.
    pub fn support_bound(&self, u: f64) -> usize {
        match &self.kind {
            SchemeKind::Theorem3 { m } => self.blocks.block(*m).expect("validated at construction").1,
            SchemeKind::Cesaro => u.max(0.0).floor() as usize,
            SchemeKind::Explicit(w) => w.iter().rposition(|&v| v > 0.0).unwrap_or(0),
        }
    }

    /// `Σ_ν λ_ν(u)`.
    pub fn total_mass(&self, u: f64) -> f64 {
        (0..=self.support_bound(u)).map(|nu| self.lambda(nu, u)).sum()
    }
}

/// Value of `H^{λφ}_u` with its truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HLambdaPhi {
    pub value: f64,
    /// Largest order included in the sum.
    pub truncation: usize,
    /// Bound on the omitted tail; zero for finitely supported schemes.
    pub tail_bound: f64,
}

/// `H^{λφ}_u f(x) = Σ_ν λ_ν(u) φ(|S_ν f(x) - f(x)|)` from precomputed deviations.
pub fn h_lambda_phi_from_deviations(
    dev: &[f64],
    scheme: &LambdaScheme,
    phi: &GrowthFunction,
    u: f64,
) -> Result<HLambdaPhi> {
    let top = scheme.support_bound(u);
    if top >= dev.len() {
        return Err(Error::Truncation(format!(
            "{} at u = {u} needs order {top}, only {} deviations available",
            scheme.name(),
            dev.len().saturating_sub(1)
        )));
    }
    let value = (0..=top)
        .map(|nu| {
            let l = scheme.lambda(nu, u);
            if l > 0.0 {
                l * phi.eval(dev[nu])
            } else {
                0.0
            }
        })
        .sum();
    Ok(HLambdaPhi {
        value,
        truncation: top,
        tail_bound: 0.0,
    })
}

pub fn h_lambda_phi(
    f: &TestFunction,
    series: &FourierSeries,
    x: f64,
    scheme: &LambdaScheme,
    phi: &GrowthFunction,
    u: f64,
) -> Result<HLambdaPhi> {
    let top = scheme.support_bound(u);
    if top > series.degree() {
        return Err(Error::Truncation(format!(
            "{} at u = {u} needs order {top} beyond series degree {}",
            scheme.name(),
            series.degree()
        )));
    }
    let dev = deviations(f, series, x, top)?;
    h_lambda_phi_from_deviations(&dev, scheme, phi, u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaClassReport {
    pub member: bool,
    pub worst_ratio: f64,
    pub ratios: Vec<(usize, f64)>,
    pub reason: Option<String>,
}

/// Power-mean test of `Λ_τ(N_m)`:
/// `R_m = ((1/N_m) Σ_block λ^τ)^{1/τ} / ((1/N_m) Σ_block λ)` over `m_range`,
/// member iff every block is nonzero and `sup R_m ≤ bound`.
pub fn lambda_class_check(
    scheme: &LambdaScheme,
    tau: f64,
    u: f64,
    m_range: std::ops::RangeInclusive<usize>,
    bound: f64,
) -> Result<LambdaClassReport> {
    ensure(tau > 1.0, "tau", tau, "tau > 1")?;
    let mut ratios = Vec::new();
    let mut reason = None;
    for m in m_range {
        let (lo, hi) = scheme.blocks().block(m)?;
        let nm = hi as f64;
        let (mut pow, mut lin) = (0.0, 0.0);
        for nu in lo..=hi {
            let l = scheme.lambda(nu, u);
            pow += l.powf(tau);
            lin += l;
        }
        if lin == 0.0 {
            reason.get_or_insert_with(|| format!("block m = {m} has all-zero weights"));
            continue;
        }
        ratios.push((m, (pow / nm).powf(1.0 / tau) / (lin / nm)));
    }
    let worst_ratio = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    if reason.is_none() && worst_ratio > bound {
        reason = Some(format!("worst ratio {worst_ratio:.4} exceeds bound {bound}"));
    }
    Ok(LambdaClassReport {
        member: reason.is_none(),
        worst_ratio,
        ratios,
        reason,
    })
}
