//! Unit-ball volume `Ω(x) = π^(x/2) / Γ(1 + x/2)` and the functions and
//! sequences built from it, all in log space.
//!
//! Function-valued quantities are generic over [`Scalar`], so the same code
//! yields values (on [`Real`]) and derivatives (on [`crate::jet::Jet`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::real::{pi, PrecisionContext, Real};

pub const MAX_DIMENSION: u64 = 1_000_000;

/// A dimension `n` in `[1, 10^6]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dimension(u64);

impl Dimension {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::Dimension(n));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_real(self, ctx: &PrecisionContext) -> Real {
        Real::from_u64(self.0, ctx)
    }
}

/// Base `a > 1` of `ln Γ(x+1) / (x ln(ax))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaParams {
    a: Real,
}

impl FaParams {
    pub fn new(a: Real) -> Result<Self> {
        if !(a > 1) || !a.is_finite() {
            return Err(Error::Parameter(format!("base a = {a} must exceed 1")));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> &Real {
        &self.a
    }
}

fn ctx_of<S: Scalar>(x: &S) -> PrecisionContext {
    PrecisionContext::fixed(x.prec())
}

fn ln_pi(ctx: &PrecisionContext) -> Real {
    pi(ctx).ln().expect("pi > 0")
}

/// `ln Ω(x) = (x/2) ln π - ln Γ(1 + x/2)` for `x > -2`.
pub fn ln_omega<S: Scalar>(x: &S) -> Result<S> {
    if !(*x.value() > -2) {
        return Err(Error::Domain {
            op: "ln_omega",
            arg: x.value().to_string(),
        });
    }
    let c = ctx_of(x);
    let half = x.clone() / 2;
    Ok(half.clone() * ln_pi(&c) - (half + 1).lgamma()?)
}

/// Errors when `a x` is within rounding noise of 1, where `ln(ax)` vanishes.
fn reject_log_zero(func: &'static str, ax: &Real) -> Result<()> {
    let noise = Real::pow2(8 - ax.prec() as i32, &PrecisionContext::fixed(ax.prec()));
    if (ax - 1).abs() <= noise {
        return Err(Error::Singular {
            func,
            point: ax.to_string(),
        });
    }
    Ok(())
}

fn check_positive(op: &'static str, x: &Real) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::Domain {
            op,
            arg: x.to_string(),
        });
    }
    Ok(())
}

fn lgamma_over_xlog<S: Scalar>(func: &'static str, a: &Real, x: &S) -> Result<S> {
    check_positive(func, x.value())?;
    let a = a.at_prec(x.prec());
    reject_log_zero(func, &(x.value() * &a))?;
    let num = (x.clone() + 1).lgamma()?;
    let den = x.clone() * (x.clone() * a).ln()?;
    Ok(num / den)
}

/// `ln Γ(x+1) / (x ln(ax))` for `x > 0`, `x ≠ 1/a`.
pub fn lgamma_over_xlog_ax<S: Scalar>(p: &FaParams, x: &S) -> Result<S> {
    lgamma_over_xlog("lgamma_over_xlog_ax", &p.a, x)
}

/// `ln Γ(x+1) / (x ln 2x)` for `x > 0`, `x ≠ 1/2`.
pub fn lgamma_over_xlog2x<S: Scalar>(x: &S) -> Result<S> {
    let two = x.value().like_i64(2);
    lgamma_over_xlog("lgamma_over_xlog2x", &two, x)
}

/// `ln Γ(x+1) / (x ln x)` for `x > 0`, `x ≠ 1`.
pub fn lgamma_over_xlogx<S: Scalar>(x: &S) -> Result<S> {
    let one = x.value().like_i64(1);
    lgamma_over_xlog("lgamma_over_xlogx", &one, x)
}

/// `(1/x) ln Γ(1 + x/2)` for `x > 0`.
pub fn half_lgamma_per_x<S: Scalar>(x: &S) -> Result<S> {
    check_positive("half_lgamma_per_x", x.value())?;
    Ok((x.clone() / 2 + 1).lgamma()? / x.clone())
}

/// `ln Γ(1 + x/2) / (x ln x)` for `x > 0`, `x ≠ 1`.
pub fn half_lgamma_per_xlogx<S: Scalar>(x: &S) -> Result<S> {
    check_positive("half_lgamma_per_xlogx", x.value())?;
    reject_log_zero("half_lgamma_per_xlogx", x.value())?;
    Ok((x.clone() / 2 + 1).lgamma()? / (x.clone() * x.ln()?))
}

/// `[1 - ln x / ln(x+1)] x ln x`, evaluated as
/// `[ln x / ln(x+1)] · x ln(1 + 1/x)`, which does not cancel near `x = 1`
/// or for large `x`.
pub fn log_ratio_defect<S: Scalar>(x: &S) -> Result<S> {
    check_positive("log_ratio_defect", x.value())?;
    let lnx = x.ln()?;
    let lnx1 = (x.clone() + 1).ln()?;
    let tail = x.clone() * x.recip()?.ln_1p()?;
    Ok(lnx / lnx1 * tail)
}

/// The defining form `[1 - ln x / ln(x+1)] x ln x`, kept for cross-checks.
pub fn log_ratio_defect_direct<S: Scalar>(x: &S) -> Result<S> {
    check_positive("log_ratio_defect_direct", x.value())?;
    let lnx = x.ln()?;
    let lnx1 = (x.clone() + 1).ln()?;
    let ratio = lnx.clone() / lnx1;
    Ok((x.lift_i64(1) - ratio) * x.clone() * lnx)
}

/// `ln Ω(x)^(1/x) = (1/2) ln π - ln Γ(1 + x/2) / x` for `x > -2`, `x ≠ 0`.
pub fn ln_root_volume<S: Scalar>(x: &S) -> Result<S> {
    if !(*x.value() > -2) {
        return Err(Error::Domain {
            op: "ln_root_volume",
            arg: x.value().to_string(),
        });
    }
    if x.value().is_zero() {
        return Err(Error::Singular {
            func: "ln_root_volume",
            point: "0".into(),
        });
    }
    let c = ctx_of(x);
    let lg = (x.clone() / 2 + 1).lgamma()?;
    Ok(x.lift(ln_pi(&c) / 2) - lg / x.clone())
}

/// `ln Ω(x) / (x ln x)` for real `x > 1`: the log of the continuous
/// `n ln n`-th root of the volume.
pub fn ln_volume_nlogn_root<S: Scalar>(x: &S) -> Result<S> {
    if !(*x.value() > 1) {
        return Err(Error::Domain {
            op: "ln_volume_nlogn_root",
            arg: x.value().to_string(),
        });
    }
    Ok(ln_omega(x)? / (x.clone() * x.ln()?))
}

/// `ln Ω_n^(1/(n ln n))` for `n ≥ 2`.
pub fn ln_volume_nlogn_root_seq(n: Dimension, ctx: &PrecisionContext) -> Result<Real> {
    if n.get() < 2 {
        return Err(Error::Dimension(n.get()));
    }
    ln_volume_nlogn_root(&n.to_real(ctx))
}

/// `ln(Ω_{n+1}^(1/(n+1)) / Ω_n^(1/n))` for `n ≥ 1`.
pub fn ln_root_volume_ratio(n: Dimension, ctx: &PrecisionContext) -> Result<Real> {
    let x = n.to_real(ctx);
    Ok(ln_root_volume(&(&x + 1))? - ln_root_volume(&x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;
    use crate::real::{constant, NamedConstant};

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn r(s: &str) -> Real {
        Real::parse(s, &ctx()).unwrap()
    }

    fn close(a: &Real, b: &Real) -> bool {
        let d = (a - b).abs();
        d.is_zero() || d < b.abs().mul_pow2(-240)
    }

    #[test]
    fn ln_omega_closed_forms() {
        let c = ctx();
        let p = pi(&c);
        let closed = [
            Real::from_i64(2, &c),
            p.clone(),
            &p * 4 / 3,
            &p * &p / 2,
            &p * &p * 8 / 15,
        ];
        for (n, omega) in closed.iter().enumerate() {
            let l = ln_omega(&Real::from_i64(n as i64 + 1, &c)).unwrap();
            assert!(close(&(omega * (-l).exp()), &Real::one(&c)), "n = {}", n + 1);
        }
        assert_eq!(ln_omega(&r("3")).unwrap().truncated_fixed(7), "1.4324119");
        // ln(8π²/15) = 1.66085111…
        assert_eq!(ln_omega(&r("5")).unwrap().truncated_fixed(7), "1.6608511");
        assert!(ln_omega(&r("-2")).is_err());
        assert!(ln_omega(&r("-1.5")).is_ok());
    }

    #[test]
    fn f_family_examples() {
        assert!(lgamma_over_xlog2x(&r("1")).unwrap().is_zero());
        assert!(close(&lgamma_over_xlog2x(&r("2")).unwrap(), &r("0.25")));
        assert!(matches!(
            lgamma_over_xlog2x(&r("0.5")),
            Err(Error::Singular { .. })
        ));
        let two = FaParams::new(r("2")).unwrap();
        assert!(lgamma_over_xlog_ax(&two, &r("1")).unwrap().is_zero());
        let e = FaParams::new(constant(NamedConstant::E, &ctx())).unwrap();
        let inv_e = e.a().recip().unwrap();
        assert!(lgamma_over_xlog_ax(&e, &inv_e).is_err());
        let three = FaParams::new(r("3")).unwrap();
        assert!(lgamma_over_xlog_ax(&three, &r("1")).unwrap().is_zero());
        assert!(FaParams::new(r("1")).is_err());
        for s in ["0.1", "0.7", "3.3", "150"] {
            assert_eq!(
                lgamma_over_xlog_ax(&two, &r(s)).unwrap(),
                lgamma_over_xlog2x(&r(s)).unwrap()
            );
        }
    }

    #[test]
    fn aq_examples() {
        assert!(close(&lgamma_over_xlogx(&r("2")).unwrap(), &r("0.5")));
        assert!(lgamma_over_xlogx(&r("1")).is_err());
        let v = lgamma_over_xlogx(&r("1e6")).unwrap();
        let g = crate::real::euler_gamma(&ctx());
        assert!(Real::one(&ctx()) - g < v && v < 1);
    }

    #[test]
    fn log_ratio_defect_examples() {
        assert!(log_ratio_defect(&r("1")).unwrap().is_zero());
        let c = ctx();
        let ln2 = crate::real::ln2(&c);
        let ln3 = r("3").ln().unwrap();
        let closed = &ln3 * 3 * (&ln2 * 2 - &ln3) / (&ln2 * 2);
        let g3 = log_ratio_defect(&r("3")).unwrap();
        assert!(close(&g3, &closed));
        assert_eq!(g3.truncated_fixed(3), "0.683");
        let big = log_ratio_defect(&r("1e6")).unwrap();
        assert!(big < 1 && big > r("0.9999"));
        for s in ["0.001", "0.5", "1.5", "3", "1000", "1e6"] {
            let a = log_ratio_defect(&r(s)).unwrap();
            let b = log_ratio_defect_direct(&r(s)).unwrap();
            assert!((&a - &b).abs() < a.abs().mul_pow2(-200), "x = {s}");
        }
    }

    #[test]
    fn ln_root_volume_examples() {
        let c = ctx();
        let half_ln_pi = pi(&c).ln().unwrap() / 2;
        assert!(close(&ln_root_volume(&r("2")).unwrap(), &half_ln_pi));
        assert!(close(&ln_root_volume(&r("1")).unwrap(), &crate::real::ln2(&c)));
        // Q(-1) = Γ(1/2) π^(1/2) = π
        let at_minus_one = ln_root_volume(&r("-1")).unwrap();
        assert!(close(&at_minus_one, &(ln_omega(&r("-1")).unwrap() / -1)));
        assert!(close(&at_minus_one, &pi(&c).ln().unwrap()));
        assert!(matches!(ln_root_volume(&r("0")), Err(Error::Singular { .. })));
        assert!(ln_root_volume(&r("-2")).is_err());
        for n in 1..=20 {
            let x = Real::from_i64(n, &c);
            let a = ln_root_volume(&x).unwrap() * n;
            assert!((&a - ln_omega(&x).unwrap()).abs() < Real::pow2(-240, &c));
        }
    }

    #[test]
    fn sequence_examples() {
        let c = ctx();
        let d = |n| Dimension::new(n).unwrap();
        let s2 = ln_volume_nlogn_root_seq(d(2), &c).unwrap();
        let p = pi(&c);
        assert!(close(&s2, &(p.ln().unwrap() / (crate::real::ln2(&c) * 2))));
        let s3 = ln_volume_nlogn_root_seq(d(3), &c).unwrap();
        let three = Real::from_i64(3, &c);
        let expect = (&p * 4 / 3).ln().unwrap() / (three.ln().unwrap() * 3);
        assert!(close(&s3, &expect));
        let big = ln_volume_nlogn_root_seq(d(1_000_000), &c).unwrap().exp();
        assert!((big - Real::from_ratio(-1, 2, &c).exp()).abs() < r("0.1"));
        assert!(ln_volume_nlogn_root_seq(d(1), &c).is_err());
        assert!(Dimension::new(0).is_err());
        assert!(Dimension::new(1_000_001).is_err());
        for n in 2..30 {
            let x = Real::from_u64(n, &c);
            assert_eq!(
                ln_volume_nlogn_root(&x).unwrap(),
                ln_volume_nlogn_root_seq(d(n), &c).unwrap()
            );
        }
    }

    #[test]
    fn ratio_examples() {
        let c = ctx();
        let r1 = ln_root_volume_ratio(Dimension::new(1).unwrap(), &c).unwrap();
        let expect = (pi(&c).sqrt().unwrap() / 2).ln().unwrap();
        assert!(close(&r1, &expect));
        let e = r1.exp();
        assert!(r("0.75").sqrt().unwrap() < e);
        assert!(e < r("0.75").pow(&r("0.25")).unwrap());
        for n in 1..=100 {
            assert!(ln_root_volume_ratio(Dimension::new(n).unwrap(), &c)
                .unwrap()
                .is_negative());
        }
    }

    #[test]
    fn log_convexity_witness_positive() {
        for s in ["3", "100"] {
            let j = Jet::var(&r(s), 2).unwrap();
            let f = ln_volume_nlogn_root(&j).unwrap();
            assert!(f.derivative(2).unwrap().is_positive(), "x = {s}");
        }
        assert!(ln_volume_nlogn_root(&r("1")).is_err());
    }
}
