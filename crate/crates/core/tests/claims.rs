use std::collections::BTreeSet;

use ballcert_core::ball::ln_omega;
use ballcert_core::claims::{
    check_case, extrapolate_limit, registry, search_open27, table_for, LimitSequence, Overrides,
    Param, Verdict, Witness,
};
use ballcert_core::real::{euler_gamma, pi, PrecisionContext, Real};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn n_max(n: u64) -> Overrides {
    Overrides {
        n_max: Some(n),
        ..Overrides::default()
    }
}

fn margin(s: &Option<String>) -> f64 {
    s.as_deref().expect("margin").parse().unwrap()
}

#[test]
fn registry_covers_required_ids() {
    let ids: BTreeSet<_> = registry().iter().map(|c| c.id).collect();
    for id in [
        "EQ2_INC", "EQ3_LIMIT", "EQ4_LIMIT", "EQ6_AQ_SIGNS", "EQ7_AQ_RANGE", "THM1_F_INC_LOW",
        "THM1_F_INC_HIGH", "THM1_F_CONCAVE", "THM2_LOGCONVEX", "THM2_RATIO_DEC", "EQ9_SHARP",
        "EQ11_G_BAND", "THM3_G_INC", "EQ13_LIMITS", "CONJ_FA_SIGNS", "CONJ_CM_1_MINUS_G",
        "Q_LCM_SCAN", "EQ17_RATIO", "EQ18_BAND", "EQ18_VS_19", "EQ19_BAND", "EQ20_YAMING",
        "EQ21_BAND", "EQ22_BAND", "EQ23_TJM", "EQ24_BAND", "EQ24_VS_21", "EQ25_BAND", "EQ26_BAND",
        "EQ27_OPEN", "LEM1", "LEM2", "LEM3",
    ] {
        assert!(ids.contains(id), "{id} missing");
    }
}

#[test]
fn sharp_constants_boundary_at_two() {
    let r = check_case("EQ9_SHARP", &ctx(), &n_max(10_000)).unwrap();
    assert_eq!(r.verdict, Verdict::BoundaryEquality);
    let lower = &r.sides[0];
    assert_eq!(lower.verdict, Verdict::BoundaryEquality);
    assert_eq!(lower.equality_points, [Witness::Integer(2)]);
    assert_eq!(r.sides[1].verdict, Verdict::Verified);
}

#[test]
fn perturbed_constant_is_refuted_at_two() {
    let c = ctx();
    let a = Real::parse("0.375844504836891602140147428248", &c).unwrap() + Real::from_ratio(1, 1000, &c);
    let mut ov = n_max(10_000);
    ov.constants.insert("a".into(), a);
    let r = check_case("EQ9_SHARP", &c, &ov).unwrap();
    assert_eq!(r.verdict, Verdict::Counterexample);
    assert_eq!(r.witness, Some(Witness::Integer(2)));
}

#[test]
fn g_band_lower_margin_at_three() {
    let r = check_case("EQ11_G_BAND", &ctx(), &Overrides::default()).unwrap();
    let lower = r.sides.iter().find(|s| s.label == "G (lower)").unwrap();
    assert_eq!(lower.verdict, Verdict::Verified);
    // G(3) - 2/3 from an independent 30-digit evaluation
    assert!((margin(&lower.min_margin) - 0.0172812787820626).abs() < 1e-14);
    let floor = r.sides.iter().find(|s| !s.strict).unwrap();
    assert_eq!(floor.verdict, Verdict::BoundaryEquality);
    assert_eq!(floor.equality_points.len(), 1);
}

#[test]
fn volume_bound_reverses_at_five() {
    let c = ctx();
    assert_eq!(check_case("EQ18_VS_19", &c, &Overrides::default()).unwrap().verdict, Verdict::Verified);
    let r = check_case("EQ18_VS_19", &c, &n_max(10)).unwrap();
    assert_eq!(r.verdict, Verdict::Counterexample);
    assert_eq!(r.witness, Some(Witness::Integer(5)));
    // (2/√π)^5 - √e
    let oracle = (Real::from_i64(2, &c) / pi(&c).sqrt().unwrap()).powi(5) - Real::from_ratio(1, 2, &c).exp();
    assert!((oracle.to_f64() - (1.8294 - 1.6487)).abs() < 1e-3);
}

#[test]
fn remark_bands_verified_to_one_thousand() {
    let c = ctx();
    for id in ["EQ19_BAND", "EQ21_BAND", "EQ22_BAND", "EQ24_BAND", "EQ25_BAND", "EQ26_BAND"] {
        let v = check_case(id, &c, &n_max(1000)).unwrap().verdict;
        assert!(v.is_pass(), "{id}: {v}");
    }
    let r = check_case("EQ18_BAND", &c, &n_max(1000)).unwrap();
    assert_eq!(r.verdict, Verdict::BoundaryEquality);
    assert_eq!(r.witness, Some(Witness::Integer(1)));
}

#[test]
fn limits_within_tolerance() {
    let c = ctx();
    let cases = [
        (LimitSequence::Eq4, Real::from_ratio(-1, 2, &c).exp()),
        (LimitSequence::Eq3, Real::from_ratio(1, 2, &c)),
        (LimitSequence::Eq13Upper, Real::one(&c)),
    ];
    for (seq, limit) in cases {
        let r = extrapolate_limit(seq, &c).unwrap();
        assert!((&r.extrapolant - &limit).abs() < Real::from_ratio(1, 100, &c), "{seq:?}");
    }
}

#[test]
fn aq_range_lower_constant() {
    let c = ctx();
    // 1 - γ, independent of the claim's own constant
    let one_minus_gamma = 1 - euler_gamma(&c);
    assert!((one_minus_gamma.to_f64() - 0.42278433509846713).abs() < 1e-15);
    assert_eq!(check_case("EQ7_AQ_RANGE", &c, &Overrides::default()).unwrap().verdict, Verdict::Verified);
}

/// Per-n threshold of each parameter, others at the instance `(2, 1, 3 | 4, 1, 3)`.
fn threshold(p: Param, n: u64, c: &PrecisionContext) -> Real {
    let nr = Real::from_u64(n, c);
    let r = ln_omega(&(&nr + 1)).unwrap() / (&nr + 1) - ln_omega(&nr).unwrap() / &nr;
    let ln1m = |k: &Real| (-k.recip().unwrap()).ln_1p().unwrap();
    let gap = |e: i64| 1 - (r.clone() * e).exp();
    match p {
        Param::Alpha => ln1m(&(&nr + 3)) / &r,
        Param::Beta => ln1m(&(&nr + 3)) / &r,
        Param::Lambda => (&nr + 3) * gap(2),
        Param::Mu => (&nr + 3) * gap(4),
        Param::A => gap(2).recip().unwrap() - &nr,
        Param::B => gap(4).recip().unwrap() - &nr,
    }
}

#[test]
fn open_problem_frontiers_match_closed_form() {
    let c = ctx();
    let n = 300;
    let rep = search_open27(n, &c).unwrap();
    assert_eq!(rep.instance_check.verdict, Verdict::Verified);
    for f in &rep.frontier {
        let ts: Vec<Real> = (1..=n).map(|k| threshold(f.parameter, k, &c)).collect();
        let (mut best, mut at) = (ts[0].clone(), 1);
        for (i, t) in ts.iter().enumerate() {
            let better = if f.parameter.maximized() { t < &best } else { t > &best };
            if better {
                best = t.clone();
                at = i as u64 + 1;
            }
        }
        let err = (&f.frontier - &best).abs();
        assert!(err < Real::pow2(-40, &c) * best.abs().max(Real::one(&c)), "{:?}", f.parameter);
        assert_eq!(f.binding_n, at, "{:?}", f.parameter);
        if f.parameter == Param::Mu {
            assert_eq!(at, 1);
        }
    }
}

#[test]
fn eq26_table_first_row() {
    let t = table_for("EQ26_BAND", &ctx(), &n_max(5)).unwrap();
    let ints: Vec<_> = t.rows.iter().filter(|r| !r[1].contains('.')).collect();
    assert_eq!(ints.len(), 5);
    let c = ctx();
    // Ω_2^(1/2) / Ω_1 = √π/2
    let value = (pi(&c).sqrt().unwrap() / 2).to_plain(10);
    assert_eq!(ints[0][2], value);
}
