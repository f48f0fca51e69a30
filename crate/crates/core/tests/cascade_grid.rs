use ballcert_core::cascade::{verify_chain_identities, verify_sign_claims};
use ballcert_core::grid::GridSpec;
use ballcert_core::real::{PrecisionContext, Real};

fn main_grid(ctx: &PrecisionContext) -> GridSpec {
    let start = Real::from_ratio(1, 2, ctx) + Real::pow2(-64, ctx);
    GridSpec::linear(start, Real::from_i64(50, ctx), 512).unwrap()
}

#[test]
fn chain_identities_hold_on_grid() {
    let ctx = PrecisionContext::default();
    let checks = verify_chain_identities(&main_grid(&ctx), &ctx).unwrap();
    assert_eq!(checks.len(), 22);
    for c in &checks {
        assert!(c.holds, "{} failed at {:?}", c.label, c.failures.first().map(|x| x.to_f64()));
        assert_eq!(c.points, 512);
    }
}

#[test]
fn sign_claims_hold_on_grid() {
    let ctx = PrecisionContext::default();
    for c in verify_sign_claims(&main_grid(&ctx), &ctx).unwrap() {
        assert!(
            c.holds,
            "{}: counterexample {:?}, inconclusive {}",
            c.label,
            c.counterexample.as_ref().map(|x| x.to_f64()),
            c.inconclusive.len()
        );
    }
}
