//! Sweep plans: one group of configurations per function (and point), so that
//! profiles, moduli and partial sums are shared between rows.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{Configuration, Group, InequalityId, Measured, Plan, Skipped, SweepSpec};
use crate::characteristics::{
    big_phi, big_w, cell_count, discrete_norm, phi_norm, psi, shifted_difference_mean, w_char, weighted_tail,
    x_breakpoints, GabisoniaProfile, NormExponent, XGrid,
};
use crate::corpus::{by_name, Majorant, TestFunction};
use crate::error::{Error, Result};
use crate::strong_means::{
    deviations, h_lambda_phi_from_deviations, lambda_class_check, strong_mean_from_deviations, theorem3_scheme,
    Blocks, GrowthFunction, LambdaScheme, LAMBDA_CLASS_BOUND,
};
use crate::quadrature::QuadratureSpec;

/// Outer block index at which the sums of the fifth and sixth theorems stop.
pub const MAX_OUTER_BLOCK: usize = 20;

/// Block bounds below this end the outer sum early.
pub const BLOCK_BOUND_FLOOR: f64 = 1e-12;

/// Shifts per `δ` in the `h` grid of a modulus of continuity.
const OMEGA_STEPS: usize = 32;

fn quad(level: u32) -> QuadratureSpec {
    QuadratureSpec::default().refined(level)
}

fn xgrid(sweep: &SweepSpec, level: u32) -> XGrid {
    XGrid {
        cells: sweep.x_cells,
        ..XGrid::default()
    }
    .refined(level)
}

fn functions(sweep: &SweepSpec) -> Result<Vec<&'static TestFunction>> {
    sweep.functions.iter().map(|n| by_name(n)).collect()
}

fn distinct_p(sweep: &SweepSpec) -> Vec<f64> {
    let mut ps: Vec<f64> = sweep.ps.iter().map(|&(p, _)| p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    ps
}

fn max_level(sweep: &SweepSpec) -> u32 {
    sweep.delta_levels.iter().copied().max().unwrap_or(0)
}

fn delta_of(j: u32) -> f64 {
    PI * 0.5f64.powi(j as i32)
}

/// `ω_X f` on a fixed union of `h` grids, reused for many `δ`.
struct OmegaTable {
    hs: Vec<f64>,
    norms: Vec<f64>,
}

impl OmegaTable {
    fn new(f: &TestFunction, p: NormExponent, grid: &XGrid, deltas: &[f64]) -> Self {
        let mut hs: Vec<f64> = deltas
            .iter()
            .flat_map(|&d| (1..=OMEGA_STEPS).map(move |i| d * i as f64 / OMEGA_STEPS as f64))
            .collect();
        hs.sort_by(f64::total_cmp);
        hs.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
        let norms = hs.par_iter().map(|&h| phi_norm(f, h, p, grid)).collect();
        Self { hs, norms }
    }

    fn omega(&self, delta: f64) -> f64 {
        self.hs
            .iter()
            .zip(&self.norms)
            .filter(|(h, _)| **h <= delta * (1.0 + 1e-12))
            .map(|(_, n)| *n)
            .fold(0.0, f64::max)
    }
}

fn majorant(f: &TestFunction, x: f64, s: f64, level: u32) -> Result<Majorant> {
    f.calibrate_majorant(x, s, &quad(level))?
        .ok_or_else(|| Error::Report(format!("{} has no majorant at {x}", f.name())))
}

fn skip_jumps(f: &TestFunction, x: f64, skipped: &mut Vec<Skipped>) -> bool {
    if f.majorant_exponent(x, 2.0).is_none() {
        skipped.push(Skipped {
            function: f.name().to_string(),
            x,
            reason: format!("no modulus-type majorant at a {} point", f.classify(x).label()),
        });
        true
    } else {
        false
    }
}

fn lit(m: Measured, c: f64) -> Measured {
    Measured { constant: Some(c), ..m }
}

pub(crate) fn plan(id: InequalityId, sweep: &SweepSpec) -> Result<Plan> {
    use InequalityId::*;
    let fs = functions(sweep)?;
    let mut groups: Vec<Group> = Vec::new();
    let mut skipped = Vec::new();
    let sw = sweep.clone();

    match id {
        E1 | L1 | L2 | L6 => {
            for &f in &fs {
                for &x in &sweep.points {
                    let sw = sw.clone();
                    groups.push(Box::new(move |level| profile_rows(id, f, x, &sw, level)));
                }
            }
        }
        E2 => {
            for &f in &fs {
                if !f.is_continuous() {
                    skipped.push(Skipped {
                        function: f.name().to_string(),
                        x: f64::NAN,
                        reason: "f not in C".into(),
                    });
                    continue;
                }
                let sw = sw.clone();
                groups.push(Box::new(move |level| e2_rows(f, &sw, level)));
            }
        }
        E3 | E4 => {
            for &f in &fs {
                for p in distinct_p(sweep) {
                    let sw = sw.clone();
                    groups.push(Box::new(move |level| norm_char_rows(id, f, p, &sw, level)));
                }
            }
        }
        L3 | L4a | L4b => {
            for &f in &fs {
                for &x in &sweep.points {
                    let sw = sw.clone();
                    groups.push(Box::new(move |level| window_rows(id, f, x, &sw, level)));
                }
            }
        }
        L5 | L7 => {
            for &f in &fs {
                for &p in &sweep.norm_p {
                    let sw = sw.clone();
                    groups.push(Box::new(move |level| window_norm_rows(id, f, p, &sw, level)));
                }
            }
        }
        T1 => {
            for &f in &fs {
                for &x in &sweep.points {
                    if skip_jumps(f, x, &mut skipped) {
                        continue;
                    }
                    for &q in &sweep.q {
                        let sw = sw.clone();
                        groups.push(Box::new(move |level| t1_rows(f, x, q, &sw, level)));
                    }
                }
            }
        }
        T3 | T5 => {
            let schemes = if id == T5 { t5_schemes(sweep)? } else { Vec::new() };
            for &f in &fs {
                for &x in &sweep.points {
                    if skip_jumps(f, x, &mut skipped) {
                        continue;
                    }
                    let sw = sw.clone();
                    let schemes = schemes.clone();
                    groups.push(Box::new(move |level| block_rows(id, f, x, &schemes, &sw, level)));
                }
            }
        }
        T2 | T4 | T6 => {
            let schemes = if id == T6 { t5_schemes(sweep)? } else { Vec::new() };
            for &f in &fs {
                for &p in &sweep.norm_p {
                    let sw = sw.clone();
                    let schemes = schemes.clone();
                    groups.push(Box::new(move |level| series_norm_rows(id, f, p, &schemes, &sw, level)));
                }
            }
        }
        PM => {
            for &f in &fs {
                for &x in &sweep.points {
                    let sw = sw.clone();
                    groups.push(Box::new(move |_| pm_rows(f, x, &sw)));
                }
            }
        }
    }
    Ok(Plan { groups, skipped })
}

/// E1, L1, L2, L6: pointwise checks sharing one profile per `p`.
fn profile_rows(id: InequalityId, f: &TestFunction, x: f64, sw: &SweepSpec, level: u32) -> Result<Vec<Measured>> {
    use InequalityId::*;
    let q = quad(level);
    let jmax = max_level(sw);
    let mut out = Vec::new();
    for p in distinct_p(sw) {
        let prof = GabisoniaProfile::new(f, x, p, jmax, &q)?;
        for &(pp, s) in sw.ps.iter().filter(|(pp, _)| *pp == p) {
            for &j in &sw.delta_levels {
                let d = delta_of(j);
                let base = Configuration::new(f.name(), x).with("p", pp).with("s", s).with("delta", d);
                let g = prof.gabisonia(j, s)?;
                match id {
                    E1 => out.push(lit(Measured::new(base, prof.w(j)?, g), 1.0)),
                    L2 => {
                        let c = 2f64.powf(1.0 / p - 1.0 / s);
                        out.push(lit(Measured::new(base, prof.gabisonia(j - 1, s)?, g), c));
                    }
                    L1 => {
                        for &beta in &sw.beta {
                            let lhs = weighted_tail(f, x, d, beta, p, &q)?;
                            // lhs is of degree p/β in f, so the floor is taken at that degree.
                            let mut m = Measured::new(base.clone().with("beta", beta), lhs, g);
                            m.lhs_floor = super::DEGENERATE_LHS.powf(p / beta);
                            out.push(m);
                        }
                    }
                    L6 => {
                        for &c in &sw.gamma_factors {
                            let lhs = psi(f, x, d, c * d, p, &q)?;
                            out.push(Measured::new(base.clone().with("gamma", c * d), lhs, g));
                        }
                    }
                    _ => unreachable!("not a profile check"),
                }
            }
        }
    }
    Ok(out)
}

/// E2: `w_x f(δ)_p ≤ ω_C f(δ)`.
fn e2_rows(f: &TestFunction, sw: &SweepSpec, level: u32) -> Result<Vec<Measured>> {
    let q = quad(level);
    let grid = xgrid(sw, level).with_points(&sw.points);
    let deltas = sw.deltas();
    let table = OmegaTable::new(f, NormExponent::Infinity, &grid, &deltas);
    let mut out = Vec::new();
    for &x in &sw.points {
        for p in distinct_p(sw) {
            for &d in &deltas {
                let c = Configuration::new(f.name(), x).with("p", p).with("delta", d);
                out.push(lit(Measured::new(c, w_char(f, x, d, p, &q)?, table.omega(d)), 1.0));
            }
        }
    }
    Ok(out)
}

/// E3 and E4: `X^p̃` norms of `G_·(δ)` and `w_·(δ)` against `ω_{X^p̃}`.
fn norm_char_rows(id: InequalityId, f: &TestFunction, p: f64, sw: &SweepSpec, level: u32) -> Result<Vec<Measured>> {
    let q = quad(level);
    let grid = xgrid(sw, level);
    let jmax = max_level(sw);
    let ss: Vec<f64> = sw.ps.iter().filter(|(pp, _)| *pp == p).map(|&(_, s)| s).collect();
    let mut out = Vec::new();
    if id == InequalityId::E3 {
        let nodes = grid.nodes(&x_breakpoints(f, &[0.0]));
        let profiles: Vec<GabisoniaProfile> = nodes
            .par_iter()
            .map(|&(x, _)| GabisoniaProfile::new(f, x, p, jmax, &q))
            .collect::<Result<_>>()?;
        for &pt in &sw.p_tilde {
            for &s in &ss {
                let args: Vec<f64> = sw
                    .delta_levels
                    .iter()
                    .map(|&j| {
                        let n = cell_count(delta_of(j)) as f64;
                        n.ln().abs() / n.powf(1.0 / p - 1.0 / s)
                    })
                    .collect();
                let table = OmegaTable::new(f, NormExponent::Finite(pt), &grid, &args);
                for (&j, &a) in sw.delta_levels.iter().zip(&args) {
                    let g: Vec<f64> = profiles.iter().map(|pr| pr.gabisonia(j, s)).collect::<Result<_>>()?;
                    let c = Configuration::new(f.name(), f64::NAN)
                        .with("p", p)
                        .with("s", s)
                        .with("p_tilde", pt)
                        .with("delta", delta_of(j));
                    out.push(Measured::new(c, discrete_norm(&nodes, &g, pt), table.omega(a)).extra("omega_arg", a));
                }
            }
        }
    } else {
        let deltas = sw.deltas();
        let tables: Vec<OmegaTable> = sw
            .p_tilde
            .iter()
            .map(|&pt| OmegaTable::new(f, NormExponent::Finite(pt), &grid, &deltas))
            .collect();
        for &d in &deltas {
            let nodes = grid.nodes(&x_breakpoints(f, &[0.0, d, -d]));
            let w: Vec<f64> = nodes.par_iter().map(|&(x, _)| w_char(f, x, d, p, &q)).collect::<Result<_>>()?;
            for (&pt, table) in sw.p_tilde.iter().zip(&tables) {
                for &s in &ss {
                    let c = Configuration::new(f.name(), f64::NAN)
                        .with("p", p)
                        .with("s", s)
                        .with("p_tilde", pt)
                        .with("delta", d);
                    out.push(lit(Measured::new(c, discrete_norm(&nodes, &w, pt), table.omega(d)), 1.0));
                }
            }
        }
    }
    Ok(out)
}

/// L3, L4a, L4b: windows `[γ, γ+δ]` with `γ ≤ δ`.
fn window_rows(id: InequalityId, f: &TestFunction, x: f64, sw: &SweepSpec, level: u32) -> Result<Vec<Measured>> {
    use InequalityId::*;
    let q = quad(level);
    let mut out = Vec::new();
    for p in distinct_p(sw) {
        for &j in &sw.delta_levels {
            let d = delta_of(j);
            let w2 = w_char(f, x, 2.0 * d, p, &q)?;
            for &c in &sw.gamma_factors {
                let g = c * d;
                let conf = Configuration::new(f.name(), x).with("p", p).with("delta", d).with("gamma", g);
                let m = match id {
                    L3 => lit(
                        Measured::new(conf, shifted_difference_mean(f, x, d, g, p, &q)?, w2),
                        2f64.powf(1.0 / p) + 4f64.powf(1.0 / p),
                    ),
                    L4a => lit(Measured::new(conf, big_phi(f, x, d, g, &q)?.abs(), big_w(f, x, d, g, p, &q)?), 1.0),
                    L4b => Measured::new(conf, big_w(f, x, d, g, p, &q)?, w2),
                    _ => unreachable!("not a window check"),
                };
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// L5 and L7: `L^p` norms of `W_·(δ,γ)_p` and `Ψ_·(δ,γ)_1`.
fn window_norm_rows(id: InequalityId, f: &TestFunction, p: NormExponent, sw: &SweepSpec, level: u32) -> Result<Vec<Measured>> {
    let q = quad(level);
    let grid = xgrid(sw, level);
    let pv = p.value();
    let deltas = sw.deltas();
    let omega_args: Vec<f64> = if id == InequalityId::L5 {
        deltas
            .iter()
            .flat_map(|&d| sw.gamma_factors.iter().map(move |&c| d * (1.0 + c)))
            .collect()
    } else {
        deltas.clone()
    };
    let table = OmegaTable::new(f, p, &grid, &omega_args);
    let mut out = Vec::new();
    for &d in &deltas {
        for &c in &sw.gamma_factors {
            let g = c * d;
            let nodes = grid.nodes(&x_breakpoints(f, &[0.0, g, -g, g + d, -(g + d)]));
            let vals: Vec<f64> = nodes
                .par_iter()
                .map(|&(x, _)| {
                    if id == InequalityId::L5 {
                        big_w(f, x, d, g, pv, &q)
                    } else {
                        psi(f, x, d, g, 1.0, &q)
                    }
                })
                .collect::<Result<_>>()?;
            let conf = Configuration::new(f.name(), f64::NAN).with("p", pv).with("delta", d).with("gamma", g);
            let lhs = discrete_norm(&nodes, &vals, pv);
            out.push(if id == InequalityId::L5 {
                lit(Measured::new(conf, lhs, table.omega(d + g)), 2.0)
            } else {
                Measured::new(conf, lhs, table.omega(d))
            });
        }
    }
    Ok(out)
}

fn log_factor(idx: &crate::strong_means::IndexSequence) -> f64 {
    1.0 + ((idx.kr() as f64 + 1.0) / (idx.r() as f64 + 0.5)).ln()
}

fn max_order(sw: &SweepSpec) -> usize {
    sw.families.iter().map(|i| i.kr()).max().unwrap_or(0)
}

/// T1: pointwise strong means against the majorant.
fn t1_rows(f: &TestFunction, x: f64, q: f64, sw: &SweepSpec, level: u32) -> Result<Vec<Measured>> {
    let s = q / (q - 1.0);
    let maj = majorant(f, x, s, level)?;
    let kmax = max_order(sw);
    let series = f.analytic_coefficients(kmax).expect("closed-form coefficients");
    let dev = deviations(f, &series, x, kmax)?;
    let mut out = Vec::new();
    for idx in &sw.families {
        let rhs = maj.eval(PI / (idx.k0() as f64 + 1.0)) * log_factor(idx);
        for qp in sw.q_primes(q) {
            let conf = Configuration::new(f.name(), x)
                .with("family", idx.label())
                .with("q", q)
                .with("q_prime", qp)
                .with("s", s);
            let mut m = Measured::new(conf, strong_mean_from_deviations(&dev, idx, qp), rhs);
            m.non_theorem = q < 2.0;
            out.push(m);
        }
    }
    Ok(out)
}

/// A named weight scheme at a fixed parameter `u`.
#[derive(Clone)]
pub(crate) struct SchemeAt {
    label: String,
    scheme: LambdaScheme,
    u: f64,
}

fn t5_schemes(sweep: &SweepSpec) -> Result<Vec<SchemeAt>> {
    let blocks = Blocks::dyadic(MAX_OUTER_BLOCK);
    let mut out = Vec::new();
    for &u in &sweep.cesaro_u {
        out.push(SchemeAt {
            label: format!("cesaro:{u}"),
            scheme: LambdaScheme::cesaro(blocks.clone()),
            u,
        });
    }
    for &m in &sweep.m_values {
        out.push(SchemeAt {
            label: format!("theorem3:{m}"),
            scheme: theorem3_scheme(m, blocks.clone())?,
            u: m as f64,
        });
    }
    for sc in &out {
        let (first, last) = supported_blocks(&sc.scheme, sc.u);
        for &tau in &sweep.tau {
            let r = lambda_class_check(&sc.scheme, tau, sc.u, first..=last, LAMBDA_CLASS_BOUND)?;
            if !r.member {
                return Err(Error::Hypothesis {
                    id: "T5/T6".into(),
                    detail: format!(
                        "scheme {} with tau = {tau}: requires membership in Lambda_tau ({})",
                        sc.label,
                        r.reason.unwrap_or_default()
                    ),
                });
            }
        }
    }
    Ok(out)
}

/// First and last blocks carrying nonzero weight.
fn supported_blocks(scheme: &LambdaScheme, u: f64) -> (usize, usize) {
    let top = scheme.support_bound(u);
    let b = scheme.blocks();
    let nonzero: Vec<usize> = (1..=b.max_index())
        .filter(|&m| {
            let (lo, hi) = b.block(m).expect("block in range");
            (lo..=hi.min(top)).any(|nu| scheme.lambda(nu, u) > 0.0)
        })
        .collect();
    (nonzero[0], *nonzero.last().expect("scheme has support"))
}

/// `π/(N_{m-2} + shift)`, clamped to `π` for the first blocks.
fn block_delta(blocks: &Blocks, m: usize, shift: f64) -> f64 {
    let n = blocks.n(m as i64 - 2).expect("block in range") as f64;
    (PI / (n + shift)).min(PI)
}

/// `Σ_{m ≥ 1} Σ_{block m} λ_ν(u) φ(bound(m))`, stopped at [`MAX_OUTER_BLOCK`]
/// or once the block bound drops below [`BLOCK_BOUND_FLOOR`]. Returns the sum
/// and the last block included.
fn outer_sum(sc: &SchemeAt, phi: &GrowthFunction, bound: impl Fn(f64) -> f64) -> (f64, usize) {
    let b = sc.scheme.blocks();
    let top = sc.scheme.support_bound(sc.u);
    let mut total = 0.0;
    let mut last = 0;
    for m in 1..=MAX_OUTER_BLOCK.min(b.max_index()) {
        let v = phi.eval(bound(block_delta(b, m, 1.0)));
        if v < BLOCK_BOUND_FLOOR {
            break;
        }
        last = m;
        let (lo, hi) = b.block(m).expect("block in range");
        if lo > top {
            continue;
        }
        let mass: f64 = (lo..=hi.min(top)).map(|nu| sc.scheme.lambda(nu, sc.u)).sum();
        total += mass * v;
    }
    (total, last)
}

fn scheme_order(schemes: &[SchemeAt], sw: &SweepSpec) -> usize {
    let t3 = sw.m_values.iter().map(|&m| 1usize << m).max().unwrap_or(0);
    schemes.iter().map(|s| s.scheme.support_bound(s.u)).max().unwrap_or(0).max(t3)
}

/// T3 and T5: pointwise block means against the majorant.
fn block_rows(
    id: InequalityId,
    f: &TestFunction,
    x: f64,
    schemes: &[SchemeAt],
    sw: &SweepSpec,
    level: u32,
) -> Result<Vec<Measured>> {
    let maj = majorant(f, x, 2.0, level)?;
    let kmax = scheme_order(schemes, sw);
    let series = f.analytic_coefficients(kmax).expect("closed-form coefficients");
    let dev = deviations(f, &series, x, kmax)?;
    let blocks = Blocks::dyadic(MAX_OUTER_BLOCK);
    let mut out = Vec::new();
    for phi in &sw.phis {
        if id == InequalityId::T3 {
            for &m in &sw.m_values {
                let sch = theorem3_scheme(m, blocks.clone())?;
                let h = h_lambda_phi_from_deviations(&dev, &sch, phi, m as f64)?;
                let rhs = phi.eval(maj.eval(block_delta(&blocks, m, 1.0)));
                let rhs2 = phi.eval(maj.eval(block_delta(&blocks, m, 2.0)));
                let conf = Configuration::new(f.name(), x).with("phi", phi.to_string()).with("m", m as f64);
                out.push(Measured::new(conf, h.value, rhs).extra("rhs_plus2", rhs2));
            }
        } else {
            for sc in schemes {
                let h = h_lambda_phi_from_deviations(&dev, &sc.scheme, phi, sc.u)?;
                let (rhs, last) = outer_sum(sc, phi, |d| maj.eval(d));
                let conf = Configuration::new(f.name(), x)
                    .with("phi", phi.to_string())
                    .with("scheme", sc.label.as_str());
                out.push(Measured::new(conf, h.value, rhs).extra("outer_blocks", last as f64));
            }
        }
    }
    Ok(out)
}

/// T2, T4, T6: `X^p` norms of the pointwise means against `ω_{X^p}`.
fn series_norm_rows(
    id: InequalityId,
    f: &TestFunction,
    p: NormExponent,
    schemes: &[SchemeAt],
    sw: &SweepSpec,
    level: u32,
) -> Result<Vec<Measured>> {
    use InequalityId::*;
    let grid = xgrid(sw, level);
    let pv = p.value();
    let blocks = Blocks::dyadic(MAX_OUTER_BLOCK);
    let kmax = match id {
        T2 => max_order(sw),
        _ => scheme_order(schemes, sw),
    };
    let series = f.analytic_coefficients(kmax).expect("closed-form coefficients");
    let nodes = grid.nodes(&x_breakpoints(f, &[0.0]));
    let devs: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&(x, _)| deviations(f, &series, x, kmax))
        .collect::<Result<_>>()?;

    let omega_args: Vec<f64> = match id {
        T2 => sw.families.iter().map(|i| PI / (i.k0() as f64 + 1.0)).collect(),
        _ => (1..=MAX_OUTER_BLOCK).map(|m| block_delta(&blocks, m, 1.0)).collect(),
    };
    let table = OmegaTable::new(f, p, &grid, &omega_args);
    let norm_of = |vals: Vec<f64>| {
        if pv.is_infinite() {
            vals.iter().fold(0.0f64, |a, v| a.max(v.abs()))
        } else {
            discrete_norm(&nodes, &vals, pv)
        }
    };

    let mut out = Vec::new();
    match id {
        T2 => {
            for idx in &sw.families {
                let rhs = table.omega(PI / (idx.k0() as f64 + 1.0)) * log_factor(idx);
                for &q in &sw.q {
                    for qp in sw.q_primes(q) {
                        let vals = devs.iter().map(|d| strong_mean_from_deviations(d, idx, qp)).collect();
                        let conf = Configuration::new(f.name(), f64::NAN)
                            .with("norm_p", pv)
                            .with("family", idx.label())
                            .with("q", q)
                            .with("q_prime", qp);
                        let mut m = Measured::new(conf, norm_of(vals), rhs);
                        m.non_theorem = q < 2.0;
                        out.push(m);
                    }
                }
            }
        }
        T4 => {
            for phi in &sw.phis {
                for &m in &sw.m_values {
                    let sch = theorem3_scheme(m, blocks.clone())?;
                    let vals = devs
                        .iter()
                        .map(|d| h_lambda_phi_from_deviations(d, &sch, phi, m as f64).map(|h| h.value))
                        .collect::<Result<_>>()?;
                    let rhs = phi.eval(table.omega(block_delta(&blocks, m, 1.0)));
                    let conf = Configuration::new(f.name(), f64::NAN)
                        .with("norm_p", pv)
                        .with("phi", phi.to_string())
                        .with("m", m as f64);
                    out.push(Measured::new(conf, norm_of(vals), rhs));
                }
            }
        }
        T6 => {
            for phi in &sw.phis {
                for sc in schemes {
                    let vals = devs
                        .iter()
                        .map(|d| h_lambda_phi_from_deviations(d, &sc.scheme, phi, sc.u).map(|h| h.value))
                        .collect::<Result<_>>()?;
                    let (rhs, last) = outer_sum(sc, phi, |d| table.omega(d));
                    let conf = Configuration::new(f.name(), f64::NAN)
                        .with("norm_p", pv)
                        .with("phi", phi.to_string())
                        .with("scheme", sc.label.as_str());
                    out.push(Measured::new(conf, norm_of(vals), rhs).extra("outer_blocks", last as f64));
                }
            }
        }
        _ => unreachable!("not a norm theorem"),
    }
    Ok(out)
}

/// Power-mean monotonicity over consecutive exponents of the `q` grid.
fn pm_rows(f: &TestFunction, x: f64, sw: &SweepSpec) -> Result<Vec<Measured>> {
    let kmax = max_order(sw);
    let series = f.analytic_coefficients(kmax).expect("closed-form coefficients");
    let dev = deviations(f, &series, x, kmax)?;
    let mut qs = sw.q.clone();
    qs.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for idx in &sw.families {
        for w in qs.windows(2) {
            let conf = Configuration::new(f.name(), x)
                .with("family", idx.label())
                .with("q_prime", w[0])
                .with("q", w[1]);
            let lhs = strong_mean_from_deviations(&dev, idx, w[0]);
            let rhs = strong_mean_from_deviations(&dev, idx, w[1]);
            out.push(lit(Measured::new(conf, lhs, rhs), 1.0));
        }
    }
    Ok(out)
}
