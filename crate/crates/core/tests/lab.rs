use std::f64::consts::PI;

use strongsum::lab::{
    estimate_constant, verify, verify_corollary, verify_lemma, verify_theorem, CorollaryStatus, InequalityId,
    RowStatus, SweepSpec, Verdict,
};
use strongsum::strong_means::IndexSequence;
use strongsum::Error;

fn one(id: InequalityId, f: &str, x: f64) -> SweepSpec {
    let mut s = SweepSpec::small_for(id);
    s.functions = vec![f.to_string()];
    s.points = vec![x];
    s
}

#[test]
fn e1_on_a_constant_is_all_degenerate() {
    let r = verify(InequalityId::E1, &one(InequalityId::E1, "const", 0.3)).unwrap();
    assert!(!r.rows.is_empty());
    assert!(r.rows.iter().all(|row| row.status == RowStatus::DegeneratePass && row.lhs == 0.0));
    assert_eq!(r.verdict, Verdict::LiteralPass);
}

#[test]
fn e1_on_cos_is_a_literal_pass() {
    let r = verify(InequalityId::E1, &one(InequalityId::E1, "cos", 1.0)).unwrap();
    assert_eq!(r.verdict, Verdict::LiteralPass);
    assert!(r.rows.iter().all(|row| row.lhs <= row.rhs));
    assert_eq!(r.constant, Some(1.0));
}

#[test]
fn e2_skips_discontinuous_functions() {
    let mut s = SweepSpec::small_for(InequalityId::E2);
    s.functions = vec!["squarewave".into(), "cos".into()];
    let r = verify(InequalityId::E2, &s).unwrap();
    assert_eq!(r.skipped.len(), 1);
    assert_eq!(r.skipped[0].function, "squarewave");
    assert!(r.skipped[0].reason.contains("not in C"));
    assert!(r.rows.iter().all(|row| row.config.function == "cos"));
}

#[test]
fn l4a_ratio_never_exceeds_one() {
    let r = verify_lemma(InequalityId::L4a, &SweepSpec::small_for(InequalityId::L4a)).unwrap();
    assert_eq!(r.verdict, Verdict::LiteralPass);
    assert!(r.sup_ratio <= 1.0 + 1e-12);
}

#[test]
fn l6_with_double_gamma_on_a_cusp() {
    let mut s = one(InequalityId::L6, "cusp050", 0.0);
    s.gamma_factors = vec![2.0];
    let r = verify_lemma(InequalityId::L6, &s).unwrap();
    assert_eq!(r.verdict, Verdict::BoundedRatio);
    assert!(r.sup_ratio > 0.1 && r.sup_ratio < 10.0, "{}", r.sup_ratio);
}

#[test]
fn t1_on_a_trig_polynomial_is_degenerate() {
    let mut s = one(InequalityId::T1, "cos3", 0.5);
    s.families = vec![IndexSequence::shifted(3, 16), IndexSequence::shifted(8, 32)];
    let r = verify_theorem(InequalityId::T1, &s).unwrap();
    assert!(r.rows.iter().all(|row| row.lhs <= 1e-12));
    assert!(r
        .rows
        .iter()
        .all(|row| matches!(row.status, RowStatus::DegeneratePass | RowStatus::Bounded)));
}

#[test]
fn t1_on_the_cusp_with_lacunary_indices() {
    let mut s = one(InequalityId::T1, "cusp050", 0.0);
    s.families = vec![IndexSequence::lacunary(10).unwrap()];
    s.q = vec![2.0];
    s.q_prime = vec![];
    let r = verify_theorem(InequalityId::T1, &s).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.verdict, Verdict::BoundedRatio);
    assert!(r.refinement_drift < 0.2);
    approx::assert_relative_eq!(r.sup_ratio, T1_CUSP_LACUNARY, max_relative = 1e-6);
}

/// Frozen from the direct summation of partial-sum deviations.
const T1_CUSP_LACUNARY: f64 = 6.648_758_775_935_609e-3;

#[test]
fn t3_on_the_square_wave_at_a_regular_point() {
    let mut s = one(InequalityId::T3, "squarewave", PI / 2.0);
    s.m_values = (1..=8).collect();
    s.phis = vec![strongsum::strong_means::GrowthFunction::identity()];
    let r = verify_theorem(InequalityId::T3, &s).unwrap();
    assert_eq!(r.rows.len(), 8);
    assert!(r.sup_ratio.is_finite());
    assert!(r.rows.iter().all(|row| row.extras.iter().any(|(k, _)| *k == "rhs_plus2")));
}

#[test]
fn estimate_constant_needs_enough_rows() {
    let r = verify(InequalityId::L4b, &SweepSpec::small_for(InequalityId::L4b)).unwrap();
    assert_eq!(estimate_constant(&r).unwrap(), r.sup_ratio);
    let few = verify(InequalityId::L4b, &{
        let mut s = one(InequalityId::L4b, "cos", 1.0);
        s.delta_levels = vec![2];
        s.gamma_factors = vec![1.0];
        s.ps = vec![(1.0, 2.0)];
        s
    })
    .unwrap();
    assert!(matches!(estimate_constant(&few), Err(Error::Report(_))));
}

#[test]
fn halved_constant_forces_a_fail() {
    let mut s = SweepSpec::small_for(InequalityId::L4a);
    s.constant_scale = 0.5;
    let r = verify(InequalityId::L4a, &s).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert!(r.failures().count() > 0);
}

#[test]
fn hypotheses_are_checked_before_computing() {
    let mut s = SweepSpec::small_for(InequalityId::L2);
    s.ps = vec![(2.0, 2.0)];
    let e = verify(InequalityId::L2, &s).unwrap_err();
    assert!(e.to_string().contains("requires s > p"), "{e}");

    let mut s = SweepSpec::small_for(InequalityId::T1);
    s.q = vec![1.5];
    assert!(matches!(verify(InequalityId::T1, &s), Err(Error::Hypothesis { .. })));
    s.allow_non_theorem = true;
    let r = verify(InequalityId::T1, &s).unwrap();
    assert!(r.rows.iter().all(|row| row.status == RowStatus::NonTheorem));
}

#[test]
fn wrong_family_of_verifier_is_refused() {
    let s = SweepSpec::small_for(InequalityId::T1);
    assert!(verify_lemma(InequalityId::T1, &s).is_err());
}

#[test]
fn rows_come_out_sorted_and_reproducible() {
    let s = SweepSpec::small_for(InequalityId::T5);
    let a = verify(InequalityId::T5, &s).unwrap();
    let b = verify(InequalityId::T5, &s).unwrap();
    assert_eq!(a, b);
    assert!(a.rows.windows(2).all(|w| w[0].config.cmp_key(&w[1].config).is_le()));
}

#[test]
fn corollary_on_smooth_points_and_constants() {
    let mut s = SweepSpec::small_for(InequalityId::T3);
    s.functions = vec!["const".into(), "cos".into(), "squarewave".into()];
    s.points = vec![0.0, 1.0];
    let r = verify_corollary(&s).unwrap();
    let status = |f: &str, x: f64| r.rows.iter().find(|row| row.function == f && row.x == x).unwrap().status;
    assert_eq!(status("const", 0.0), CorollaryStatus::DegenerateConverged);
    assert_eq!(status("cos", 1.0), CorollaryStatus::DegenerateConverged);
    assert_eq!(status("squarewave", 1.0), CorollaryStatus::Converged);
    assert_eq!(status("squarewave", 0.0), CorollaryStatus::Diagnostic);
    assert!(r.converged);
}
