use ballcert_core::ball::{ln_omega, ln_root_volume, log_ratio_defect, log_ratio_defect_direct};
use ballcert_core::gamma::{digamma, lgamma};
use ballcert_core::jet::Jet;
use ballcert_core::real::{PrecisionContext, Real};
use proptest::prelude::*;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

/// `|a - b| ≤ 2^-k · max(1, |b|)`.
fn close(a: &Real, b: &Real, k: i32) -> bool {
    let scale = b.abs().max(Real::one(&b.ctx()));
    (a - b).abs() <= Real::pow2(-k, &b.ctx()) * scale
}

fn real(num: i64, den: i64) -> Real {
    Real::from_ratio(num, den, &ctx())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_ln_round_trip(num in 1i64..1_000_000, den in 1i64..1000) {
        let x = real(num, den);
        prop_assert!(close(&x.ln().unwrap().exp(), &x, 240));
    }

    #[test]
    fn lgamma_recurrence(num in 1i64..20_000, den in 1i64..200) {
        let c = ctx();
        let x = real(num, den);
        let lhs = lgamma(&(&x + 1), &c).unwrap() - lgamma(&x, &c).unwrap();
        prop_assert!(close(&lhs, &x.ln().unwrap(), 230));
    }

    #[test]
    fn digamma_recurrence(num in 1i64..20_000, den in 1i64..200) {
        let c = ctx();
        let x = real(num, den);
        let lhs = digamma(&(&x + 1), &c).unwrap() - digamma(&x, &c).unwrap();
        prop_assert!(close(&lhs, &x.recip().unwrap(), 230));
    }

    #[test]
    fn lgamma_deterministic_and_stable_under_precision(num in 1i64..50_000, den in 1i64..100) {
        let lo = ctx();
        let hi = lo.at(512);
        let x = real(num, den);
        let a = lgamma(&x, &lo).unwrap();
        let b = lgamma(&x, &lo).unwrap();
        prop_assert_eq!(a.to_decimal_full(), b.to_decimal_full());
        let fine = lgamma(&x.at_prec(512), &hi).unwrap();
        prop_assert!(close(&a, &fine, 240));
    }

    #[test]
    fn jet_matches_central_difference(num in 1i64..4000, den in 1i64..40) {
        let x = real(num, den);
        let j = ln_omega(&Jet::var(&x, 2).unwrap()).unwrap();
        let h = Real::pow2(-60, &ctx());
        let fd = (ln_omega(&(&x + &h)).unwrap() - ln_omega(&(&x - &h)).unwrap()) / (h * 2);
        prop_assert!(close(&j.derivative(1).unwrap(), &fd, 100));
    }

    #[test]
    fn leibniz_rule(num in 1i64..4000, den in 1i64..40) {
        let x = real(num, den);
        let v = Jet::var(&x, 3).unwrap();
        let (f, g) = (v.ln().unwrap(), ln_omega(&v).unwrap());
        let fg = f.clone() * g.clone();
        let d = |j: &Jet, m| j.derivative(m).unwrap();
        let expected = d(&f, 3) * d(&g, 0)
            + d(&f, 2) * d(&g, 1) * 3
            + d(&f, 1) * d(&g, 2) * 3
            + d(&f, 0) * d(&g, 3);
        prop_assert!(close(&d(&fg, 3), &expected, 220));
    }

    #[test]
    fn log_ratio_defect_forms_agree(num in 1i64..1_000_000, den in 1i64..1000) {
        let x = real(num, den);
        prop_assert!(close(&log_ratio_defect(&x).unwrap(), &log_ratio_defect_direct(&x).unwrap(), 200));
    }

    #[test]
    fn root_volume_scales_to_volume(n in 1i64..100_000) {
        let x = Real::from_i64(n, &ctx());
        let scaled = ln_root_volume(&x).unwrap() * n;
        prop_assert!(close(&scaled, &ln_omega(&x).unwrap(), 230));
    }
}
