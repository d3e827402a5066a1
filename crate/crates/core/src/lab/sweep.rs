use std::f64::consts::PI;

use super::InequalityId;
use crate::characteristics::NormExponent;
use crate::corpus::{self, STANDARD_POINTS};
use crate::error::{Error, Result};
use crate::strong_means::{default_u_grid, phi_class_check, GrowthFunction, IndexSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Default,
    Small,
}

/// Parameter grids of a verification run. Every id reads only the fields it
/// needs; [`SweepSpec::validate`] rejects grids outside the hypotheses of the
/// inequality before anything is computed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub functions: Vec<String>,
    pub points: Vec<f64>,
    pub families: Vec<IndexSequence>,
    pub q: Vec<f64>,
    /// Extra exponents `q' ≤ q`; `q' = q` is always included.
    pub q_prime: Vec<f64>,
    /// `(p, s)` pairs.
    pub ps: Vec<(f64, f64)>,
    pub p_tilde: Vec<f64>,
    pub norm_p: Vec<NormExponent>,
    pub tau: Vec<f64>,
    pub beta: Vec<f64>,
    /// `δ = π 2^{-j}` for each `j`.
    pub delta_levels: Vec<u32>,
    /// `γ = c δ` for each factor `c`.
    pub gamma_factors: Vec<f64>,
    pub m_values: Vec<usize>,
    pub phis: Vec<GrowthFunction>,
    pub cesaro_u: Vec<f64>,
    pub refinement_levels: u32,
    /// Base cell count of the `x` grid of norms.
    pub x_cells: usize,
    /// Multiplies every explicit constant; anything but 1 is a test fixture.
    pub constant_scale: f64,
    /// Keeps `q < 2` configurations of the first two theorems, flagged as
    /// outside the theorem instead of rejected.
    pub allow_non_theorem: bool,
}

const STANDARD_FAMILIES: [&str; 10] = [
    "arith:8",
    "arith:16",
    "arith:32",
    "arith:64",
    "lacunary:10",
    "shifted:0,32",
    "shifted:4,32",
    "shifted:16,32",
    "shifted:0,64",
    "shifted:16,64",
];

fn families(specs: &[&str]) -> Vec<IndexSequence> {
    specs.iter().map(|s| IndexSequence::parse(s).expect("built-in family")).collect()
}

impl SweepSpec {
    fn base() -> Self {
        Self {
            functions: corpus::names().into_iter().map(String::from).collect(),
            points: STANDARD_POINTS.to_vec(),
            families: families(&STANDARD_FAMILIES),
            q: vec![2.0, 3.0],
            q_prime: vec![1.0],
            ps: vec![(1.0, 2.0), (2.0, 3.0)],
            p_tilde: vec![3.0],
            norm_p: vec![NormExponent::Finite(2.0)],
            tau: vec![2.0],
            beta: vec![0.5, 1.0, 2.0],
            delta_levels: (1..=8).collect(),
            gamma_factors: vec![1.0],
            m_values: (1..=8).collect(),
            phis: vec![GrowthFunction::identity(), GrowthFunction::Power(2.0)],
            cesaro_u: vec![4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0],
            refinement_levels: 2,
            x_cells: 256,
            constant_scale: 1.0,
            allow_non_theorem: false,
        }
    }

    /// The standard sweep for `id`: full corpus, the eight standard points
    /// and the id's dyadic `δ` range.
    pub fn default_for(id: InequalityId) -> Self {
        use InequalityId::*;
        let mut s = Self::base();
        match id {
            E1 => {
                s.ps = vec![(1.0, 1.5), (1.0, 2.0), (2.0, 3.0)];
                s.delta_levels = (0..=10).collect();
            }
            E2 => {
                s.ps = vec![(1.0, 2.0), (2.0, 3.0)];
                s.norm_p = vec![NormExponent::Infinity];
            }
            E3 | E4 => s.delta_levels = (1..=6).collect(),
            L1 => s.ps = vec![(1.0, 1.5), (2.0, 3.0)],
            L2 => {
                s.ps = vec![(1.0, 1.5), (1.0, 2.0), (2.0, 3.0)];
                s.delta_levels = (1..=10).collect();
            }
            L3 | L4a | L4b => s.gamma_factors = vec![1.0, 0.5, 0.25],
            L5 => {
                s.norm_p = vec![NormExponent::Finite(1.0), NormExponent::Finite(2.0)];
                s.gamma_factors = vec![1.0, 0.5];
                s.delta_levels = (1..=5).collect();
            }
            L6 => {
                s.gamma_factors = vec![1.0, 2.0];
                s.delta_levels = (2..=8).collect();
            }
            L7 => {
                s.norm_p = vec![NormExponent::Finite(1.0), NormExponent::Finite(2.0)];
                s.gamma_factors = vec![1.0, 2.0];
                s.delta_levels = (2..=6).collect();
            }
            T2 | T4 | T6 => s.x_cells = 1024,
            PM => s.q = vec![0.5, 1.0, 2.0, 3.0, 6.0],
            T1 | T3 | T5 => {}
        }
        s
    }

    /// A reduced sweep for quick runs.
    pub fn small_for(id: InequalityId) -> Self {
        let mut s = Self::default_for(id);
        s.functions = ["const", "cos", "squarewave", "cusp050"].map(String::from).to_vec();
        s.points = vec![0.0, 1.0, PI / 2.0];
        s.families = families(&["arith:16", "lacunary:6", "shifted:4,16"]);
        let keep = s.delta_levels.len().min(4);
        s.delta_levels.truncate(keep);
        s.m_values.retain(|&m| m <= 6);
        s.cesaro_u.retain(|&u| u <= 32.0);
        s.x_cells = s.x_cells.min(256);
        s
    }

    pub fn for_kind(id: InequalityId, kind: SweepKind) -> Self {
        match kind {
            SweepKind::Default => Self::default_for(id),
            SweepKind::Small => Self::small_for(id),
        }
    }

    pub fn deltas(&self) -> Vec<f64> {
        self.delta_levels.iter().map(|&j| PI * 0.5f64.powi(j as i32)).collect()
    }

    /// `q' ≤ q` values paired with `q`, `q` itself last.
    pub fn q_primes(&self, q: f64) -> Vec<f64> {
        let mut v: Vec<f64> = self.q_prime.iter().copied().filter(|&a| a > 0.0 && a < q).collect();
        v.push(q);
        v
    }

    /// Rejects grids outside the hypotheses of `id`.
    // Negated comparisons so that NaN fails every check.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self, id: InequalityId) -> Result<()> {
        use InequalityId::*;
        let fail = |detail: String| {
            Err(Error::Hypothesis {
                id: id.label().to_string(),
                detail,
            })
        };
        if self.refinement_levels < 2 {
            return fail(format!("refinement_levels = {}: requires refinement_levels >= 2", self.refinement_levels));
        }
        for f in &self.functions {
            corpus::by_name(f)?;
        }
        if self.functions.is_empty() {
            return fail("functions: requires at least one function".into());
        }
        if !(self.constant_scale > 0.0) {
            return fail(format!("test_constant_scale = {}: requires a positive scale", self.constant_scale));
        }
        if self.x_cells < 8 {
            return fail(format!("x_cells = {}: requires x_cells >= 8", self.x_cells));
        }
        let uses_ps = matches!(id, E1 | E2 | E3 | E4 | L1 | L2 | L3 | L4a | L4b | L6);
        if uses_ps {
            if self.ps.is_empty() {
                return fail("ps: requires at least one (p, s) pair".into());
            }
            for &(p, s) in &self.ps {
                if !(p >= 1.0) {
                    return fail(format!("p = {p}: requires p >= 1"));
                }
                if !(s > p) {
                    return fail(format!("p = {p}, s = {s}: requires s > p"));
                }
            }
        }
        let uses_delta = matches!(id, E1 | E2 | E3 | E4 | L1 | L2 | L3 | L4a | L4b | L5 | L6 | L7);
        if uses_delta && self.delta_levels.is_empty() {
            return fail("delta_levels: requires at least one level".into());
        }
        match id {
            E3 | E4 => {
                for &pt in &self.p_tilde {
                    for &(p, s) in &self.ps {
                        if !(pt >= s) {
                            return fail(format!("p_tilde = {pt}, s = {s}, p = {p}: requires p_tilde >= s > p >= 1"));
                        }
                    }
                }
                if self.p_tilde.is_empty() {
                    return fail("p_tilde: requires at least one value".into());
                }
                if id == E3 && self.delta_levels.contains(&0) {
                    return fail("delta_levels contains 0: requires delta < pi (the bound vanishes at delta = pi)".into());
                }
            }
            L1 => {
                for &b in &self.beta {
                    if !(b > 0.0) {
                        return fail(format!("beta = {b}: requires beta > 0"));
                    }
                    for &(p, s) in &self.ps {
                        if !(s * (1.0 - b) < p) {
                            return fail(format!("beta = {b}, p = {p}, s = {s}: requires s(1 - beta) < p"));
                        }
                    }
                }
            }
            L2 => {
                if self.delta_levels.contains(&0) {
                    return fail("delta_levels contains 0: requires 2 lambda <= pi".into());
                }
            }
            L3 | L4a | L4b => {
                for &g in &self.gamma_factors {
                    if !(g > 0.0 && g <= 1.0) {
                        return fail(format!("gamma factor {g}: requires 0 < gamma <= delta"));
                    }
                }
                if self.delta_levels.contains(&0) {
                    return fail("delta_levels contains 0: requires 2 delta <= pi".into());
                }
            }
            L5 | L6 | L7 => {
                for &g in &self.gamma_factors {
                    if id != L5 && !(g >= 1.0) {
                        return fail(format!("gamma factor {g}: requires delta <= gamma"));
                    }
                    if !(g > 0.0) {
                        return fail(format!("gamma factor {g}: requires gamma > 0"));
                    }
                    for d in self.deltas() {
                        if d * (1.0 + g) > PI * (1.0 + 1e-12) {
                            return fail(format!("delta = {d}, gamma = {}: requires gamma + delta <= pi", g * d));
                        }
                    }
                }
            }
            _ => {}
        }
        if matches!(id, E2 | L5 | L7 | T2 | T4 | T6) {
            for p in &self.norm_p {
                if !(p.value() >= 1.0) {
                    return fail(format!("norm_p = {p}: requires p >= 1"));
                }
            }
        }
        if matches!(id, T1 | T2) {
            for &q in &self.q {
                if !(q > 1.0) {
                    return fail(format!("q = {q}: requires q > 1 so that 1/s + 1/q = 1 has s > 1"));
                }
                if q < 2.0 && !self.allow_non_theorem {
                    return fail(format!("q = {q}: requires q >= 2 (set allow_non_theorem to report it separately)"));
                }
            }
            for &qp in &self.q_prime {
                if !(qp > 0.0) {
                    return fail(format!("q_prime = {qp}: requires q' > 0"));
                }
            }
            if self.families.is_empty() {
                return fail("families: requires at least one index family".into());
            }
        }
        if id == PM {
            if self.q.iter().any(|&q| !(q > 0.0)) {
                return fail("q: requires q > 0".into());
            }
            if self.families.is_empty() {
                return fail("families: requires at least one index family".into());
            }
        }
        if matches!(id, T3 | T4 | T5 | T6) {
            if self.m_values.iter().any(|&m| m == 0 || m > 12) {
                return fail("m_values: requires 1 <= m <= 12".into());
            }
            let grid = default_u_grid();
            for phi in &self.phis {
                let r = phi_class_check(phi, &grid);
                if !r.member {
                    return fail(format!(
                        "phi = {phi}: requires phi in class Phi ({})",
                        r.reason.unwrap_or_default()
                    ));
                }
            }
        }
        if matches!(id, T5 | T6) {
            for &t in &self.tau {
                if !(t > 1.0) {
                    return fail(format!("tau = {t}: requires tau > 1"));
                }
            }
            for &u in &self.cesaro_u {
                if !(0.0..=4096.0).contains(&u) {
                    return fail(format!("cesaro_u = {u}: requires 0 <= u <= 4096"));
                }
            }
        }
        Ok(())
    }

    /// Sets one field from its `key = value` text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |constraint: &str| Error::Report(format!("key `{key}`: `{value}` {constraint}"));
        let floats = |v: &str| -> Result<Vec<f64>> {
            v.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| parse_f64(t).ok_or_else(|| bad("is not a list of numbers")))
                .collect()
        };
        let ints = |v: &str| -> Result<Vec<u64>> {
            v.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad("is not a list of nonnegative integers")))
                .collect()
        };
        match key {
            "functions" => self.functions = value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            "points" => self.points = floats(value)?,
            "families" => {
                self.families = value
                    .split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(IndexSequence::parse)
                    .collect::<Result<_>>()?
            }
            "q" => self.q = floats(value)?,
            "q_prime" => self.q_prime = floats(value)?,
            "ps" => {
                self.ps = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        let (p, s) = t.split_once(':').ok_or_else(|| bad("expects pairs p:s"))?;
                        Ok((parse_f64(p).ok_or_else(|| bad("expects pairs p:s"))?, parse_f64(s).ok_or_else(|| bad("expects pairs p:s"))?))
                    })
                    .collect::<Result<_>>()?
            }
            "p_tilde" => self.p_tilde = floats(value)?,
            "norm_p" => {
                self.norm_p = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| NormExponent::parse(t).ok_or_else(|| bad("is not a list of exponents")))
                    .collect::<Result<_>>()?
            }
            "tau" => self.tau = floats(value)?,
            "beta" => self.beta = floats(value)?,
            "delta_levels" => self.delta_levels = ints(value)?.into_iter().map(|j| j.min(40) as u32).collect(),
            "gamma_factors" => self.gamma_factors = floats(value)?,
            "m_values" => self.m_values = ints(value)?.into_iter().map(|m| m as usize).collect(),
            "phis" => {
                self.phis = value
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| GrowthFunction::parse(t).ok_or_else(|| bad("is not a list of id, pow:q, expsq")))
                    .collect::<Result<_>>()?
            }
            "cesaro_u" => self.cesaro_u = floats(value)?,
            "refinement_levels" => {
                self.refinement_levels = value.trim().parse().map_err(|_| bad("is not a nonnegative integer"))?
            }
            "x_cells" => self.x_cells = value.trim().parse().map_err(|_| bad("is not a positive integer"))?,
            "test_constant_scale" => self.constant_scale = parse_f64(value).ok_or_else(|| bad("is not a number"))?,
            "allow_non_theorem" => {
                self.allow_non_theorem = value.trim().parse().map_err(|_| bad("is not true or false"))?
            }
            _ => return Err(Error::Report(format!("unknown sweep key `{key}`"))),
        }
        Ok(())
    }

    /// Every sweep key with its current value, in the form accepted by [`SweepSpec::set`].
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let join_f = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        let join_d = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        vec![
            ("functions", self.functions.join(",")),
            ("points", join_f(&self.points)),
            ("families", self.families.iter().map(|f| f.label().to_string()).collect::<Vec<_>>().join(";")),
            ("q", join_f(&self.q)),
            ("q_prime", join_f(&self.q_prime)),
            ("ps", self.ps.iter().map(|(p, s)| format!("{p:?}:{s:?}")).collect::<Vec<_>>().join(",")),
            ("p_tilde", join_f(&self.p_tilde)),
            ("norm_p", self.norm_p.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")),
            ("tau", join_f(&self.tau)),
            ("beta", join_f(&self.beta)),
            ("delta_levels", join_d(&self.delta_levels)),
            ("gamma_factors", join_f(&self.gamma_factors)),
            ("m_values", self.m_values.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")),
            ("phis", self.phis.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")),
            ("cesaro_u", join_f(&self.cesaro_u)),
            ("refinement_levels", self.refinement_levels.to_string()),
            ("x_cells", self.x_cells.to_string()),
            ("test_constant_scale", format!("{:?}", self.constant_scale)),
            ("allow_non_theorem", self.allow_non_theorem.to_string()),
        ]
    }

    pub const KEYS: [&'static str; 19] = [
        "functions",
        "points",
        "families",
        "q",
        "q_prime",
        "ps",
        "p_tilde",
        "norm_p",
        "tau",
        "beta",
        "delta_levels",
        "gamma_factors",
        "m_values",
        "phis",
        "cesaro_u",
        "refinement_levels",
        "x_cells",
        "test_constant_scale",
        "allow_non_theorem",
    ];
}

/// Parses a number, also accepting `pi`, `-pi`, `pi/k` and `k*pi`.
pub fn parse_f64(s: &str) -> Option<f64> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (neg, t) = match t.strip_prefix('-') {
        Some(r) => (true, r.trim()),
        None => (false, t),
    };
    let v = if t == "pi" {
        PI
    } else if let Some(d) = t.strip_prefix("pi/") {
        PI / d.trim().parse::<f64>().ok()?
    } else {
        t.strip_suffix("*pi")?.trim().parse::<f64>().ok()? * PI
    };
    Some(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_satisfy_their_hypotheses() {
        for id in InequalityId::ALL {
            SweepSpec::default_for(id).validate(id).unwrap();
            SweepSpec::small_for(id).validate(id).unwrap();
        }
    }

    #[test]
    fn violations_are_named() {
        let mut s = SweepSpec::default_for(InequalityId::L2);
        s.ps = vec![(2.0, 2.0)];
        let e = s.validate(InequalityId::L2).unwrap_err().to_string();
        assert!(e.contains("requires s > p"), "{e}");

        let mut s = SweepSpec::default_for(InequalityId::T1);
        s.q = vec![1.5];
        assert!(s.validate(InequalityId::T1).unwrap_err().to_string().contains("requires q >= 2"));
        s.allow_non_theorem = true;
        s.validate(InequalityId::T1).unwrap();

        let mut s = SweepSpec::default_for(InequalityId::L3);
        s.gamma_factors = vec![2.0];
        assert!(s.validate(InequalityId::L3).unwrap_err().to_string().contains("gamma <= delta"));

        let mut s = SweepSpec::default_for(InequalityId::L6);
        s.gamma_factors = vec![0.5];
        assert!(s.validate(InequalityId::L6).unwrap_err().to_string().contains("delta <= gamma"));
        s.gamma_factors = vec![4.0];
        assert!(s.validate(InequalityId::L6).unwrap_err().to_string().contains("gamma + delta <= pi"));

        let mut s = SweepSpec::default_for(InequalityId::L1);
        s.beta = vec![0.25];
        assert!(s.validate(InequalityId::L1).unwrap_err().to_string().contains("s(1 - beta) < p"));

        let mut s = SweepSpec::default_for(InequalityId::E3);
        s.p_tilde = vec![1.5];
        assert!(s.validate(InequalityId::E3).unwrap_err().to_string().contains("p_tilde >= s"));

        let mut s = SweepSpec::default_for(InequalityId::T5);
        s.tau = vec![1.0];
        assert!(s.validate(InequalityId::T5).unwrap_err().to_string().contains("tau > 1"));
        s.tau = vec![2.0];
        s.phis = vec![GrowthFunction::ExpSquare];
        assert!(s.validate(InequalityId::T5).unwrap_err().to_string().contains("class Phi"));
    }

    #[test]
    fn entries_round_trip() {
        for id in InequalityId::ALL {
            let s = SweepSpec::default_for(id);
            let mut t = SweepSpec::small_for(id);
            for (k, v) in s.entries() {
                t.set(k, &v).unwrap();
            }
            assert_eq!(s, t, "{id}");
        }
        assert_eq!(SweepSpec::KEYS.to_vec(), SweepSpec::default_for(InequalityId::E1).entries().iter().map(|e| e.0).collect::<Vec<_>>());
        assert!(SweepSpec::default_for(InequalityId::E1).set("bogus", "1").is_err());
    }

    #[test]
    fn pi_expressions() {
        assert_eq!(parse_f64("pi/2"), Some(PI / 2.0));
        assert_eq!(parse_f64("-pi"), Some(-PI));
        assert_eq!(parse_f64("0.25*pi"), Some(0.25 * PI));
        assert_eq!(parse_f64("x"), None);
    }
}
