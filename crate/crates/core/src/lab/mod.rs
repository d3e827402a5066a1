//! Empirical verification of the inequalities: literal checks where the
//! constant is explicit, sup-ratio and refinement stability where it is not.

mod checks;
mod corollary;
mod sweep;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use corollary::{verify_corollary, CorollaryReport, CorollaryRow, CorollaryStatus, COROLLARY_DECAY_FACTOR};
pub use sweep::{parse_f64, SweepKind, SweepSpec};

/// A degenerate configuration passes only if its lhs is below this.
pub const DEGENERATE_LHS: f64 = 1e-10;

/// Below this the rhs is treated as zero (rounding noise of an identically
/// vanishing bound).
pub const DEGENERATE_RHS: f64 = 1e-12;

/// Largest admissible relative change of the sup ratio between the two
/// highest refinement levels.
pub const DRIFT_LIMIT: f64 = 0.2;

/// Minimum number of nondegenerate configurations for [`estimate_constant`].
pub const MIN_CONFIGURATIONS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InequalityId {
    E1,
    E2,
    E3,
    E4,
    L1,
    L2,
    L3,
    L4a,
    L4b,
    L5,
    L6,
    L7,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    /// Power-mean monotonicity `H^{q'} ≤ H^q`.
    PM,
}

impl InequalityId {
    pub const ALL: [InequalityId; 19] = [
        InequalityId::E1,
        InequalityId::E2,
        InequalityId::E3,
        InequalityId::E4,
        InequalityId::L1,
        InequalityId::L2,
        InequalityId::L3,
        InequalityId::L4a,
        InequalityId::L4b,
        InequalityId::L5,
        InequalityId::L6,
        InequalityId::L7,
        InequalityId::T1,
        InequalityId::T2,
        InequalityId::T3,
        InequalityId::T4,
        InequalityId::T5,
        InequalityId::T6,
        InequalityId::PM,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            InequalityId::E1 => "E1",
            InequalityId::E2 => "E2",
            InequalityId::E3 => "E3",
            InequalityId::E4 => "E4",
            InequalityId::L1 => "L1",
            InequalityId::L2 => "L2",
            InequalityId::L3 => "L3",
            InequalityId::L4a => "L4a",
            InequalityId::L4b => "L4b",
            InequalityId::L5 => "L5",
            InequalityId::L6 => "L6",
            InequalityId::L7 => "L7",
            InequalityId::T1 => "T1",
            InequalityId::T2 => "T2",
            InequalityId::T3 => "T3",
            InequalityId::T4 => "T4",
            InequalityId::T5 => "T5",
            InequalityId::T6 => "T6",
            InequalityId::PM => "PM",
        }
    }

    /// Ids checked with an explicit constant.
    pub fn is_literal(&self) -> bool {
        matches!(
            self,
            InequalityId::E1
                | InequalityId::E2
                | InequalityId::E4
                | InequalityId::L2
                | InequalityId::L3
                | InequalityId::L4a
                | InequalityId::L5
                | InequalityId::PM
        )
    }

    pub fn is_elementary(&self) -> bool {
        matches!(self, InequalityId::E1 | InequalityId::E2 | InequalityId::E3 | InequalityId::E4)
    }

    pub fn is_lemma(&self) -> bool {
        matches!(
            self,
            InequalityId::L1
                | InequalityId::L2
                | InequalityId::L3
                | InequalityId::L4a
                | InequalityId::L4b
                | InequalityId::L5
                | InequalityId::L6
                | InequalityId::L7
        )
    }

    pub fn is_theorem(&self) -> bool {
        matches!(
            self,
            InequalityId::T1 | InequalityId::T2 | InequalityId::T3 | InequalityId::T4 | InequalityId::T5 | InequalityId::T6
        )
    }

    /// Additive slack of a literal check.
    pub fn slack(&self) -> f64 {
        match self {
            InequalityId::E1 => 0.0,
            InequalityId::E2 | InequalityId::L2 | InequalityId::L3 => 1e-9,
            InequalityId::E4 | InequalityId::L5 => 1e-6,
            InequalityId::L4a => 1e-10,
            InequalityId::PM => 1e-12,
            _ => 0.0,
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.label().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::Report(format!("unknown inequality id `{t}`")))
    }
}

/// Expands `L4` into both halves; any other id maps to itself.
pub fn expand_id(s: &str) -> Result<Vec<InequalityId>> {
    if s.trim().eq_ignore_ascii_case("L4") {
        Ok(vec![InequalityId::L4a, InequalityId::L4b])
    } else {
        Ok(vec![s.parse()?])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    LiteralPass,
    BoundedRatio,
    Fail,
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        !matches!(self, Verdict::Fail)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::LiteralPass => "LiteralPass",
            Verdict::BoundedRatio => "BoundedRatio",
            Verdict::Fail => "Fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Num(f64),
    Text(String),
}

impl ParamValue {
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ParamValue::Num(a), ParamValue::Num(b)) => a.total_cmp(b),
            (ParamValue::Text(a), ParamValue::Text(b)) => a.cmp(b),
            (ParamValue::Num(_), ParamValue::Text(_)) => Ordering::Less,
            (ParamValue::Text(_), ParamValue::Num(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Num(v) => write!(f, "{v:.16e}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Num(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

/// One point of a sweep: a function, a point `x` (NaN for norm checks) and
/// named parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub function: String,
    pub x: f64,
    pub params: Vec<(&'static str, ParamValue)>,
}

impl Configuration {
    pub fn new(function: &str, x: f64) -> Self {
        Self {
            function: function.to_string(),
            x,
            params: Vec::new(),
        }
    }

    pub fn with(mut self, name: &'static str, value: impl Into<ParamValue>) -> Self {
        self.params.push((name, value.into()));
        self
    }

    pub fn param(&self, name: &str) -> Option<&ParamValue> {
        self.params.iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    pub fn cmp_key(&self, other: &Self) -> Ordering {
        self.function
            .cmp(&other.function)
            .then(self.x.total_cmp(&other.x))
            .then_with(|| {
                for ((na, va), (nb, vb)) in self.params.iter().zip(&other.params) {
                    let o = na.cmp(nb).then_with(|| va.cmp_key(vb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                self.params.len().cmp(&other.params.len())
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Pass,
    DegeneratePass,
    Bounded,
    /// Outside the theorem's hypotheses; reported, not judged.
    NonTheorem,
    Fail,
}

impl RowStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RowStatus::Pass => "pass",
            RowStatus::DegeneratePass => "degenerate-pass",
            RowStatus::Bounded => "bounded",
            RowStatus::NonTheorem => "non-theorem",
            RowStatus::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub config: Configuration,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs/rhs`, `None` for degenerate rows.
    pub ratio: Option<f64>,
    /// Ratio at each refinement level, lowest first.
    pub level_ratios: Vec<Option<f64>>,
    pub extras: Vec<(&'static str, f64)>,
    /// Explicit constant, for literal checks.
    pub constant: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub function: String,
    pub x: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub inequality_id: InequalityId,
    pub rows: Vec<ReportRow>,
    pub skipped: Vec<Skipped>,
    /// Explicit constant of a literal check, when shared by all rows.
    pub constant: Option<f64>,
    pub sup_ratio: f64,
    pub sup_by_level: Vec<f64>,
    pub refinement_drift: f64,
    pub verdict: Verdict,
}

impl RatioReport {
    pub fn nondegenerate(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.ratio.is_some() && r.status != RowStatus::NonTheorem)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status == RowStatus::Fail)
    }
}

/// The empirical constant of a report: its sup ratio.
pub fn estimate_constant(report: &RatioReport) -> Result<f64> {
    let n = report.nondegenerate().count();
    if n < MIN_CONFIGURATIONS {
        return Err(Error::Report(format!(
            "{}: {n} nondegenerate configurations, at least {MIN_CONFIGURATIONS} needed",
            report.inequality_id
        )));
    }
    Ok(report.sup_ratio)
}

/// A measured configuration at one refinement level.
#[derive(Debug, Clone)]
pub(crate) struct Measured {
    pub config: Configuration,
    pub lhs: f64,
    pub rhs: f64,
    pub extras: Vec<(&'static str, f64)>,
    pub constant: Option<f64>,
    /// Largest lhs accepted when the rhs is degenerate.
    pub lhs_floor: f64,
    pub non_theorem: bool,
}

impl Measured {
    pub fn new(config: Configuration, lhs: f64, rhs: f64) -> Self {
        Self {
            config,
            lhs,
            rhs,
            extras: Vec::new(),
            constant: None,
            lhs_floor: DEGENERATE_LHS,
            non_theorem: false,
        }
    }

    pub fn extra(mut self, name: &'static str, v: f64) -> Self {
        self.extras.push((name, v));
        self
    }
}

/// A batch of configurations sharing expensive intermediate results,
/// evaluated at a given refinement level.
pub(crate) type Group = Box<dyn Fn(u32) -> Result<Vec<Measured>> + Send + Sync>;

pub(crate) struct Plan {
    pub groups: Vec<Group>,
    pub skipped: Vec<Skipped>,
}

fn ratio_of(lhs: f64, rhs: f64) -> Option<f64> {
    (rhs > DEGENERATE_RHS).then(|| lhs / rhs)
}

fn assemble(id: InequalityId, sweep: &SweepSpec, plan: Plan) -> Result<RatioReport> {
    let levels: Vec<u32> = if id.is_literal() {
        vec![0]
    } else {
        (0..sweep.refinement_levels).collect()
    };
    let per_level: Vec<Vec<Measured>> = levels
        .iter()
        .map(|&level| {
            let batches: Vec<Vec<Measured>> = plan.groups.par_iter().map(|g| g(level)).collect::<Result<_>>()?;
            Ok(batches.into_iter().flatten().collect())
        })
        .collect::<Result<_>>()?;

    let top = per_level.last().expect("at least one level");
    let n = top.len();
    if per_level.iter().any(|l| l.len() != n) {
        return Err(Error::Report(format!("{id}: configuration count differs across levels")));
    }

    let mut rows: Vec<ReportRow> = (0..n)
        .map(|i| {
            let m = &top[i];
            let ratio = ratio_of(m.lhs, m.rhs);
            let level_ratios = per_level.iter().map(|l| ratio_of(l[i].lhs, l[i].rhs)).collect();
            let status = if m.non_theorem {
                RowStatus::NonTheorem
            } else if ratio.is_none() {
                if m.lhs <= m.lhs_floor {
                    RowStatus::DegeneratePass
                } else {
                    RowStatus::Fail
                }
            } else if let Some(c) = m.constant {
                if m.lhs <= sweep.constant_scale * c * m.rhs + id.slack() {
                    RowStatus::Pass
                } else {
                    RowStatus::Fail
                }
            } else if ratio.is_some_and(f64::is_finite) {
                RowStatus::Bounded
            } else {
                RowStatus::Fail
            };
            ReportRow {
                config: m.config.clone(),
                lhs: m.lhs,
                rhs: m.rhs,
                ratio,
                level_ratios,
                extras: m.extras.clone(),
                constant: m.constant,
                status,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.config.cmp_key(&b.config));

    let sup_by_level: Vec<f64> = (0..levels.len())
        .map(|l| {
            rows.iter()
                .filter(|r| r.status != RowStatus::NonTheorem)
                .filter_map(|r| r.level_ratios[l])
                .fold(0.0, f64::max)
        })
        .collect();
    let sup_ratio = *sup_by_level.last().expect("at least one level");
    let refinement_drift = if sup_by_level.len() >= 2 {
        let a = sup_by_level[sup_by_level.len() - 2];
        let b = sup_ratio;
        if a == b {
            0.0
        } else {
            (b - a).abs() / a.abs().max(b.abs())
        }
    } else {
        0.0
    };
    let constant = rows.first().and_then(|r| r.constant).filter(|c| rows.iter().all(|r| r.constant == Some(*c)));
    let any_fail = rows.iter().any(|r| r.status == RowStatus::Fail);
    let verdict = if any_fail {
        Verdict::Fail
    } else if id.is_literal() {
        Verdict::LiteralPass
    } else if sup_ratio.is_finite() && refinement_drift < DRIFT_LIMIT {
        Verdict::BoundedRatio
    } else {
        Verdict::Fail
    };
    Ok(RatioReport {
        inequality_id: id,
        rows,
        skipped: plan.skipped,
        constant,
        sup_ratio,
        sup_by_level,
        refinement_drift,
        verdict,
    })
}

/// Runs any inequality check on a sweep.
pub fn verify(id: InequalityId, sweep: &SweepSpec) -> Result<RatioReport> {
    sweep.validate(id)?;
    let plan = checks::plan(id, sweep)?;
    assemble(id, sweep, plan)
}

fn require(ok: bool, id: InequalityId, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Report(format!("{id} is not {what}")))
    }
}

/// E1–E4.
pub fn verify_elementary(id: InequalityId, sweep: &SweepSpec) -> Result<RatioReport> {
    require(id.is_elementary(), id, "an elementary inequality")?;
    verify(id, sweep)
}

/// L1–L7.
pub fn verify_lemma(id: InequalityId, sweep: &SweepSpec) -> Result<RatioReport> {
    require(id.is_lemma(), id, "a lemma")?;
    verify(id, sweep)
}

/// T1–T6.
pub fn verify_theorem(id: InequalityId, sweep: &SweepSpec) -> Result<RatioReport> {
    require(id.is_theorem(), id, "a theorem")?;
    verify(id, sweep)
}

/// Least-squares slope of `ln y` against `ln x` over points with `y > 0`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    (pts.len() >= 2).then(|| crate::strong_means::least_squares_slope(&pts))
}
