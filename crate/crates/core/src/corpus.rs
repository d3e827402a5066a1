//! Built-in 2π-periodic test functions with known local regularity.
//!
//! Each function carries its closed-form Fourier coefficients, the list of
//! points where it fails to be smooth, and calibrated pointwise majorants
//! `w_x(δ) = C δ^β` at the standard evaluation points.

use std::f64::consts::PI;
use std::sync::OnceLock;

use statrs::function::gamma::gamma;

use crate::characteristics::GabisoniaProfile;
use crate::error::{Error, Result};
use crate::fourier::FourierSeries;
use crate::quadrature::QuadratureSpec;

/// Points at which the corpus carries majorants and which the default sweeps visit.
pub const STANDARD_POINTS: [f64; 8] = [
    -PI,
    -2.0,
    -PI / 3.0,
    0.0,
    PI / 4.0,
    1.0,
    PI / 2.0,
    2.5,
];

/// Largest `j` of the standard dyadic grid `δ_j = π 2^{-j}`.
pub const DYADIC_LEVELS: u32 = 14;

/// `s` for which the corpus majorants are calibrated at load.
pub const DEFAULT_MAJORANT_S: f64 = 2.0;

/// Safety factor applied to the empirical sup when calibrating a majorant.
pub const MAJORANT_MARGIN: f64 = 1.05;

/// `π 2^{-j}` for `j = 0..=levels`.
pub fn dyadic_grid(levels: u32) -> Vec<f64> {
    (0..=levels).map(|j| PI * 0.5f64.powi(j as i32)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Constant,
    Cosine { freq: u32 },
    SquareWave,
    Sawtooth,
    /// `|sin(x/2)|^alpha`
    Cusp { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularKind {
    Jump { left: f64, right: f64 },
    Cusp { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub location: f64,
    pub kind: SingularKind,
}

/// Local classification of an evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointClass {
    TrigPolynomialEverywhere,
    SmoothPoint,
    HolderCusp(f64),
    JumpPoint { left: f64, right: f64 },
    Unclassified,
}

impl PointClass {
    /// Points at which the strong means are expected to tend to zero.
    pub fn is_gabisonia_point(&self) -> bool {
        matches!(
            self,
            PointClass::TrigPolynomialEverywhere | PointClass::SmoothPoint | PointClass::HolderCusp(_)
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            PointClass::TrigPolynomialEverywhere => "trig-polynomial",
            PointClass::SmoothPoint => "smooth",
            PointClass::HolderCusp(_) => "holder-cusp",
            PointClass::JumpPoint { .. } => "jump",
            PointClass::Unclassified => "unclassified",
        }
    }
}

/// A modulus-of-continuity type majorant `constant * δ^exponent` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorant {
    pub x: f64,
    pub s: f64,
    pub exponent: f64,
    pub constant: f64,
}

impl Majorant {
    pub fn eval(&self, delta: f64) -> f64 {
        if delta <= 0.0 {
            0.0
        } else {
            self.constant * delta.powf(self.exponent)
        }
    }

    /// `w(0) = 0`, nondecreasing and subadditive on the pairs of `grid`.
    pub fn is_modulus_type(&self, grid: &[f64]) -> bool {
        if self.eval(0.0) != 0.0 {
            return false;
        }
        let mut sorted = grid.to_vec();
        sorted.sort_by(f64::total_cmp);
        let monotone = sorted.windows(2).all(|w| self.eval(w[0]) <= self.eval(w[1]));
        let subadditive = sorted.iter().all(|&a| {
            sorted
                .iter()
                .all(|&b| self.eval(a + b) <= self.eval(a) + self.eval(b) * (1.0 + 1e-14) + 1e-300)
        });
        monotone && subadditive
    }
}

#[derive(Debug, Clone)]
pub struct TestFunction {
    name: String,
    shape: Shape,
    amplitude: f64,
    singular_points: Vec<SingularPoint>,
    smoothness_alpha: Option<f64>,
    majorants: Vec<Majorant>,
}

/// Reduces `x` into `[-π, π)`; values already in range are returned unchanged.
pub fn wrap(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r >= PI {
        r - 2.0 * PI
    } else {
        r
    }
}

impl TestFunction {
    pub fn new(name: &str, shape: Shape) -> Self {
        let singular_points = match shape {
            Shape::Constant | Shape::Cosine { .. } => vec![],
            Shape::SquareWave => vec![
                SingularPoint {
                    location: -PI,
                    kind: SingularKind::Jump { left: 1.0, right: -1.0 },
                },
                SingularPoint {
                    location: 0.0,
                    kind: SingularKind::Jump { left: -1.0, right: 1.0 },
                },
            ],
            Shape::Sawtooth => vec![SingularPoint {
                location: -PI,
                kind: SingularKind::Jump { left: PI, right: -PI },
            }],
            Shape::Cusp { alpha } => vec![SingularPoint {
                location: 0.0,
                kind: SingularKind::Cusp { alpha },
            }],
        };
        let smoothness_alpha = match shape {
            Shape::Cusp { alpha } => Some(alpha),
            Shape::SquareWave | Shape::Sawtooth => None,
            Shape::Constant | Shape::Cosine { .. } => Some(1.0),
        };
        Self {
            name: name.to_string(),
            shape,
            amplitude: 1.0,
            singular_points,
            smoothness_alpha,
            majorants: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.singular_points
    }

    pub fn smoothness_alpha(&self) -> Option<f64> {
        self.smoothness_alpha
    }

    pub fn majorants(&self) -> &[Majorant] {
        &self.majorants
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self.shape, Shape::SquareWave | Shape::Sawtooth)
    }

    pub fn is_trig_polynomial(&self) -> bool {
        matches!(self.shape, Shape::Constant | Shape::Cosine { .. })
    }

    /// `c * f`, with majorants rescaled by `|c|`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut g = self.clone();
        g.name = format!("{}*{}", c, self.name);
        g.amplitude *= c;
        for s in &mut g.singular_points {
            if let SingularKind::Jump { left, right } = &mut s.kind {
                *left *= c;
                *right *= c;
            }
        }
        for m in &mut g.majorants {
            m.constant *= c.abs();
        }
        g
    }

    /// `f(x)` after reduction into `[-π, π)`. At interior jumps the formula
    /// yields the midpoint of the one-sided limits.
    pub fn eval_wrapped(&self, x: f64) -> f64 {
        let r = wrap(x);
        let v = match self.shape {
            Shape::Constant => 1.0,
            Shape::Cosine { freq } => (freq as f64 * r).cos(),
            Shape::SquareWave => {
                if r > 0.0 {
                    1.0
                } else if r < 0.0 && r > -PI {
                    -1.0
                } else {
                    0.0
                }
            }
            Shape::Sawtooth => r,
            Shape::Cusp { alpha } => (0.5 * r).sin().abs().powf(alpha),
        };
        self.amplitude * v
    }

    /// Closed-form coefficients up to `degree`.
    pub fn analytic_coefficients(&self, degree: usize) -> Option<FourierSeries> {
        let mut s = FourierSeries::zeros(degree);
        match self.shape {
            Shape::Constant => s.set(0, 2.0, 0.0),
            Shape::Cosine { freq } => {
                let k = freq as usize;
                if k <= degree {
                    s.set(k, 1.0, 0.0);
                }
            }
            Shape::SquareWave => {
                for k in (1..=degree).step_by(2) {
                    s.set(k, 0.0, 4.0 / (PI * k as f64));
                }
            }
            Shape::Sawtooth => {
                for k in 1..=degree {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    s.set(k, 0.0, 2.0 * sign / k as f64);
                }
            }
            Shape::Cusp { alpha } => {
                // a_k = (4/π) ∫_0^{π/2} sin^α(u) cos(2ku) du, with the ratio
                // c_{k+1}/c_k = (k - α/2)/(k + 1 + α/2) of consecutive integrals.
                let half = 0.5 * alpha;
                let mut c = PI.sqrt() * gamma(0.5 * (alpha + 1.0)) / (2.0 * gamma(half + 1.0));
                for k in 0..=degree {
                    s.set(k, 4.0 / PI * c, 0.0);
                    let kf = k as f64;
                    c *= (kf - half) / (kf + 1.0 + half);
                }
            }
        }
        Some(s.scaled(self.amplitude))
    }

    pub fn classify(&self, x: f64) -> PointClass {
        if self.is_trig_polynomial() {
            return PointClass::TrigPolynomialEverywhere;
        }
        let r = wrap(x);
        for sp in &self.singular_points {
            let d = (r - sp.location).abs();
            if d <= 1e-12 || (2.0 * PI - d).abs() <= 1e-12 {
                return match sp.kind {
                    SingularKind::Jump { left, right } => PointClass::JumpPoint { left, right },
                    SingularKind::Cusp { alpha } => PointClass::HolderCusp(alpha),
                };
            }
        }
        PointClass::SmoothPoint
    }

    /// Exponent of the majorant at `x`: `min(α, 1 - 1/s)` at Hölder points,
    /// `1 - 1/s` at smooth points, none at jumps.
    pub fn majorant_exponent(&self, x: f64, s: f64) -> Option<f64> {
        let tail = 1.0 - 1.0 / s;
        match self.classify(x) {
            PointClass::TrigPolynomialEverywhere | PointClass::SmoothPoint => Some(tail),
            PointClass::HolderCusp(alpha) => Some(alpha.min(tail)),
            PointClass::JumpPoint { .. } | PointClass::Unclassified => None,
        }
    }

    /// Calibrates `C δ^β` so that it dominates `G_x f(δ)_{1,s}` on the
    /// standard dyadic grid, with `C` equal to [`MAJORANT_MARGIN`] times the
    /// largest observed ratio.
    pub fn calibrate_majorant(&self, x: f64, s: f64, quad: &QuadratureSpec) -> Result<Option<Majorant>> {
        let Some(exponent) = self.majorant_exponent(x, s) else {
            return Ok(None);
        };
        let profile = GabisoniaProfile::new(self, x, 1.0, DYADIC_LEVELS, quad)?;
        let mut sup = 0.0f64;
        for (j, delta) in dyadic_grid(DYADIC_LEVELS).into_iter().enumerate() {
            let g = profile.gabisonia(j as u32, s)?;
            sup = sup.max(g / delta.powf(exponent));
        }
        Ok(Some(Majorant {
            x,
            s,
            exponent,
            constant: MAJORANT_MARGIN * sup,
        }))
    }

    /// The stored majorant at `x` for exponent `s`, if any.
    pub fn majorant_at(&self, x: f64, s: f64) -> Option<&Majorant> {
        self.majorants
            .iter()
            .find(|m| (m.x - x).abs() <= 1e-12 && (m.s - s).abs() <= 1e-12)
    }

    fn with_majorants(mut self, points: &[f64], s: f64, quad: &QuadratureSpec) -> Self {
        for &x in points {
            if let Ok(Some(m)) = self.calibrate_majorant(x, s, quad) {
                self.majorants.push(m);
            }
        }
        self
    }
}

fn build_corpus() -> Vec<TestFunction> {
    let quad = QuadratureSpec::default();
    let shapes = [
        ("const", Shape::Constant),
        ("cos3", Shape::Cosine { freq: 3 }),
        ("cos", Shape::Cosine { freq: 1 }),
        ("squarewave", Shape::SquareWave),
        ("sawtooth", Shape::Sawtooth),
        ("cusp025", Shape::Cusp { alpha: 0.25 }),
        ("cusp050", Shape::Cusp { alpha: 0.5 }),
        ("cusp075", Shape::Cusp { alpha: 0.75 }),
    ];
    std::thread::scope(|scope| {
        let handles: Vec<_> = shapes
            .iter()
            .map(|&(name, shape)| {
                scope.spawn(move || {
                    TestFunction::new(name, shape).with_majorants(&STANDARD_POINTS, DEFAULT_MAJORANT_S, &quad)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect()
    })
}

/// The built-in corpus, built once per process.
pub fn builtin_corpus() -> &'static [TestFunction] {
    static CORPUS: OnceLock<Vec<TestFunction>> = OnceLock::new();
    CORPUS.get_or_init(build_corpus)
}

pub fn by_name(name: &str) -> Result<&'static TestFunction> {
    builtin_corpus()
        .iter()
        .find(|f| f.name() == name)
        .ok_or_else(|| Error::UnknownFunction(name.to_string()))
}

pub fn names() -> Vec<&'static str> {
    builtin_corpus().iter().map(|f| f.name()).collect()
}
