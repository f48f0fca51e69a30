//! Auxiliary functions from the monotonicity and concavity proofs, with
//! executable checks of their derivative relations, sign claims and quoted
//! spot values.
//!
//! Derivatives are always taken by jets on the closed forms. The displayed
//! derivative formulas in [`displayed`] are only ever used as oracles.

use std::fmt;
use std::str::FromStr;

use crate::ball::{lgamma_over_xlog2x, log_ratio_defect, log_ratio_defect_direct};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::jet::{derivative_at, Jet, Scalar};
use crate::real::{
    certify_zero, pi, sign_with_margin, Gap, PrecisionContext, Real, Sign,
};

/// Horner evaluation of `c[0] + c[1] x + c[2] x^2 + …`.
fn poly<S: Scalar>(x: &S, c: &[i64]) -> S {
    let mut acc = x.lift_i64(c[c.len() - 1]);
    for &ci in c.iter().rev().skip(1) {
        acc = acc * x.clone() + ci;
    }
    acc
}

fn ln2x<S: Scalar>(x: &S) -> Result<S> {
    (x.clone() * 2).ln()
}

fn ln_x1<S: Scalar>(x: &S) -> Result<S> {
    x.ln_1p()
}

fn require_positive(func: &'static str, x: &Real) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::Domain {
            op: func,
            arg: x.to_string(),
        });
    }
    Ok(())
}

/// `x ln(2x) ψ(x+1) - [ln(2x) + 1] ln Γ(x+1)`: numerator of `F'`.
pub fn theta<S: Scalar>(x: &S) -> Result<S> {
    require_positive("theta", x.value())?;
    let l = ln2x(x)?;
    let x1 = x.clone() + 1;
    Ok(x.clone() * l.clone() * x1.digamma()? - (l + 1) * x1.lgamma()?)
}

/// Derivative of the normalised second derivative of `F`, stripped of its
/// positive factor.
pub fn phi<S: Scalar>(x: &S) -> Result<S> {
    require_positive("phi", x.value())?;
    let l = ln2x(x)?;
    let x1 = x.clone() + 1;
    let psi = x1.log_gamma_family(1)?;
    let psi1 = x1.log_gamma_family(2)?;
    let psi2 = x1.log_gamma_family(3)?;
    let d = l.clone() * l.clone() * 2 + l.clone() * 3 + 2;
    let inner = x.clone() * d * psi2 - (l.clone() * 4 + 3) * psi1;
    Ok((l * 2 + 5) * psi + x.clone() * inner)
}

/// Elementary upper bound for [`phi`] obtained from the digamma and
/// polygamma envelopes.
pub fn varphi<S: Scalar>(x: &S) -> Result<S> {
    require_positive("varphi", x.value())?;
    let l = ln2x(x)?;
    let x1 = x.clone() + 1;
    let first = (l.clone() * 2 + 5) * (ln_x1(x)? - (x1.clone() * 2).recip()?);
    let a = x.clone() * (x.clone() + 2) * 4 * l.clone() * l.clone();
    let b = poly(x, &[6, 16, 7]) * 2 * l;
    let c = poly(x, &[9, 23, 10]);
    let x1cubed = x1.clone() * x1.clone() * x1;
    Ok(first - x.clone() * (a + b + c) / (x1cubed * 2))
}

/// `-x (x+1)^4 varphi'(x)` in closed form.
pub fn h1<S: Scalar>(x: &S) -> Result<S> {
    require_positive("h1", x.value())?;
    let l = ln2x(x)?;
    let x1 = x.clone() + 1;
    let x1_4 = {
        let s = x1.clone() * x1;
        s.clone() * s
    };
    let xx = x.clone() * x.clone();
    Ok(poly(x, &[1, 6, 19, 10, 2])
        + (x.clone() + 4) * xx * 2 * l.clone() * l.clone()
        + x.clone() * poly(x, &[3, 20, 10, 2]) * l
        - x1_4 * 2 * ln_x1(x)?)
}

/// `x h1''(x)` in closed form.
pub fn q<S: Scalar>(x: &S) -> Result<S> {
    require_positive("q", x.value())?;
    let l = ln2x(x)?;
    let x1 = x.clone() + 1;
    Ok(poly(x, &[3, 100, 86, 24])
        + x.clone() * (x.clone() * 3 + 4) * 4 * l.clone() * l.clone()
        + x.clone() * poly(x, &[11, 10, 3]) * 8 * l
        - x.clone() * x1.clone() * x1 * 24 * ln_x1(x)?)
}

/// `x^2 (x+1) q'''(x) / 8` in closed form.
pub fn p<S: Scalar>(x: &S) -> Result<S> {
    require_positive("p", x.value())?;
    let l = ln2x(x)?;
    let xx = x.clone() * x.clone();
    Ok(poly(x, &[-11, 18, 53, 18]) - (x.clone() + 1) * xx * 18 * ln_x1(x)?
        + poly(x, &[-2, 1, 12, 9]) * 2 * l)
}

/// `3x^5 + 8x^4 - 9x^2 - 19x - 6`.
pub fn lam<S: Scalar>(x: &S) -> Result<S> {
    Ok(poly(x, &[-6, -19, -9, 0, 8, 3]))
}

/// `ln(x+1) + [ln(x+1) - x/(x+1)] ln x`: numerator of the derivative of
/// `x ln x / ln(x+1)`.
pub fn g3<S: Scalar>(x: &S) -> Result<S> {
    require_positive("g3", x.value())?;
    let lx1 = ln_x1(x)?;
    Ok(lx1.clone() + (lx1 - x.clone() / (x.clone() + 1)) * x.ln()?)
}

/// `4(1+x)/(x(2+x)) + ln x`.
pub fn h3<S: Scalar>(x: &S) -> Result<S> {
    require_positive("h3", x.value())?;
    Ok((x.clone() + 1) * 4 / (x.clone() * (x.clone() + 2)) + x.ln()?)
}

/// `x ln x / ln(x+1)`.
pub fn f1<S: Scalar>(x: &S) -> Result<S> {
    require_positive("f1", x.value())?;
    Ok(x.clone() * x.ln()? / ln_x1(x)?)
}

/// `ln(x+1) - ln x`.
pub fn f2<S: Scalar>(x: &S) -> Result<S> {
    require_positive("f2", x.value())?;
    x.recip()?.ln_1p()
}

/// `x ln x`, extended by `u(0) = 0`.
pub fn u<S: Scalar>(x: &S) -> Result<S> {
    if x.value().is_zero() {
        return Ok(x.lift_i64(0));
    }
    require_positive("u", x.value())?;
    Ok(x.clone() * x.ln()?)
}

/// `ln(x+1)`.
pub fn v<S: Scalar>(x: &S) -> Result<S> {
    ln_x1(x)
}

/// `x^3 ln^3(2x) F''(x) / (2 ln^2(2x) + 3 ln(2x) + 2)` in the closed form
/// `ln Γ(x+1) + [x^2 ln^2(2x) ψ'(x+1) - 2x ln(2x)(ln(2x)+1) ψ(x+1)] / D`.
pub fn normalized_second_derivative<S: Scalar>(x: &S) -> Result<S> {
    require_positive("normalized_second_derivative", x.value())?;
    let l = ln2x(x)?;
    let x1 = x.clone() + 1;
    let d = l.clone() * l.clone() * 2 + l.clone() * 3 + 2;
    let xl = x.clone() * l.clone();
    let num = xl.clone() * xl.clone() * x1.log_gamma_family(2)?
        - xl * (l + 1) * 2 * x1.log_gamma_family(1)?;
    Ok(x1.lgamma()? + num / d)
}

/// The auxiliary functions by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CascadeFn {
    Theta,
    Phi,
    Varphi,
    H1,
    Q,
    P,
    Lam,
    G3,
    H3,
    F1,
    F2,
    U,
    V,
}

impl CascadeFn {
    pub const ALL: [CascadeFn; 13] = [
        CascadeFn::Theta,
        CascadeFn::Phi,
        CascadeFn::Varphi,
        CascadeFn::H1,
        CascadeFn::Q,
        CascadeFn::P,
        CascadeFn::Lam,
        CascadeFn::G3,
        CascadeFn::H3,
        CascadeFn::F1,
        CascadeFn::F2,
        CascadeFn::U,
        CascadeFn::V,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CascadeFn::Theta => "theta",
            CascadeFn::Phi => "phi",
            CascadeFn::Varphi => "varphi",
            CascadeFn::H1 => "h1",
            CascadeFn::Q => "q",
            CascadeFn::P => "p",
            CascadeFn::Lam => "lam",
            CascadeFn::G3 => "g3",
            CascadeFn::H3 => "h3",
            CascadeFn::F1 => "f1",
            CascadeFn::F2 => "f2",
            CascadeFn::U => "u",
            CascadeFn::V => "v",
        }
    }

    pub fn eval<S: Scalar>(self, x: &S) -> Result<S> {
        match self {
            CascadeFn::Theta => theta(x),
            CascadeFn::Phi => phi(x),
            CascadeFn::Varphi => varphi(x),
            CascadeFn::H1 => h1(x),
            CascadeFn::Q => q(x),
            CascadeFn::P => p(x),
            CascadeFn::Lam => lam(x),
            CascadeFn::G3 => g3(x),
            CascadeFn::H3 => h3(x),
            CascadeFn::F1 => f1(x),
            CascadeFn::F2 => f2(x),
            CascadeFn::U => u(x),
            CascadeFn::V => v(x),
        }
    }
}

impl fmt::Display for CascadeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CascadeFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CascadeFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown auxiliary function `{s}`")))
    }
}

/// Evaluates an auxiliary function at `x`, rounded to `ctx`.
pub fn eval_cascade(id: CascadeFn, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    id.eval(&x.at_prec(ctx.bits()))
}

/// The displayed derivative formulas, used only as oracles.
pub mod displayed {
    use super::*;

    fn ln2x(x: &Real) -> Result<Real> {
        (x * 2).ln()
    }

    /// `h1'`.
    pub fn h1_prime(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let x1 = x + 1;
        Ok(poly(x, &[7, 52, 34, 8])
            + x * (x * 3 + 8) * 2 * &l * &l
            + poly(x, &[3, 56, 34, 8]) * &l
            - &x1 * &x1 * &x1 * 8 * x.ln_1p()?)
    }

    /// `q'`.
    pub fn q_prime(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let inner = poly(x, &[47, 57, 18]) + (x * 6 + 4) * &l * &l
            + poly(x, &[15, 23, 9]) * 2 * &l
            - poly(x, &[1, 4, 3]) * 6 * x.ln_1p()?;
        Ok(inner * 4)
    }

    /// `x q''`.
    pub fn x_q_second(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let inner = poly(x, &[30, 97, 36]) + &l * &l * 6 * x
            - (x * 3 + 2) * 12 * x.ln_1p()? * x
            + poly(x, &[8, 58, 36]) * &l;
        Ok(inner * 4)
    }

    /// `x p'`.
    pub fn x_p_prime(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let xx = x * x;
        let inner = poly(x, &[-2, 10, 65, 27]) - (x * 3 + 2) * 9 * &xx * x.ln_1p()?
            + poly(x, &[1, 24, 27]) * x * &l;
        Ok(inner * 2)
    }

    /// `(x+1) x^2 p''`.
    pub fn x1_xx_p_second(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let xx = x * x;
        let inner = poly(x, &[2, 3, 90, 152, 54]) + poly(x, &[4, 13, 9]) * 6 * &xx * &l
            - poly(x, &[1, 4, 3]) * 18 * &xx * x.ln_1p()?;
        Ok(inner * 2)
    }

    /// `(x+1)^2 x^3 p'''`.
    pub fn x1sq_xcube_p_third(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let x1 = x + 1;
        let w = &x1 * &x1 * x * x * x * 54;
        let inner = poly(x, &[-4, -9, 18, 146, 168, 54]) + &w * &l - &w * x.ln_1p()?;
        Ok(inner * 2)
    }

    /// `λ'`.
    pub fn lam_prime(x: &Real) -> Real {
        poly(x, &[-19, -18, 0, 32, 15])
    }

    /// `λ''`.
    pub fn lam_second(x: &Real) -> Real {
        poly(x, &[-18, 0, 96, 60])
    }

    /// `θ' = x ln(2x) ψ'(x+1) - ln Γ(x+1)/x`.
    pub fn theta_prime(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let x1 = x + 1;
        Ok(x * l * x1.log_gamma_family(2)? - x1.lgamma()? / x)
    }

    /// `F' = θ / (x^2 ln^2(2x))`.
    pub fn f_prime(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        Ok(theta(x)? / (x * x * &l * &l))
    }

    /// Derivative of the normalised `F''`: `ln^2(2x) φ / D^2`.
    pub fn normalized_second_derivative_prime(x: &Real) -> Result<Real> {
        let l = ln2x(x)?;
        let d = &l * &l * 2 + &l * 3 + 2;
        Ok(&l * &l * phi(x)? / (&d * &d))
    }

    /// `f1' = g / ln^2(x+1)`.
    pub fn f1_prime(x: &Real) -> Result<Real> {
        let lx1 = x.ln_1p()?;
        Ok(g3(x)? / (&lx1 * &lx1))
    }

    /// `h3' = (x^3 - 4x - 8) / (x^2 (x+2)^2)`.
    pub fn h3_prime(x: &Real) -> Result<Real> {
        let x2 = x + 2;
        Ok(poly(x, &[-8, -4, 0, 1]) / (x * x * &x2 * &x2))
    }

    /// `u'/v' = (x+1)(1 + ln x)`.
    pub fn u_over_v_prime(x: &Real) -> Result<Real> {
        Ok((x + 1) * (x.ln()? + 1))
    }
}

/// One quoted evaluation compared against its closed form.
#[derive(Debug, Clone)]
pub struct SpotValue {
    pub label: &'static str,
    pub computed: Real,
    pub closed_form: Real,
    pub relative_error: Real,
    pub within_tolerance: bool,
    /// The decimal quoted alongside the closed form, if any.
    pub quoted: Option<&'static str>,
    /// `computed` truncated to the quoted number of decimals.
    pub rendered: Option<String>,
}

impl SpotValue {
    pub fn quoted_matches(&self) -> Option<bool> {
        Some(self.quoted? == self.rendered.as_deref()?)
    }
}

#[derive(Debug, Clone)]
pub struct SpotReport {
    pub entries: Vec<SpotValue>,
    pub tolerance: Real,
    pub bits: u32,
}

impl SpotReport {
    pub fn all_within_tolerance(&self) -> bool {
        self.entries.iter().all(|e| e.within_tolerance)
    }

    /// Entries whose quoted decimal disagrees with the closed form.
    pub fn decimal_discrepancies(&self) -> Vec<&SpotValue> {
        self.entries
            .iter()
            .filter(|e| e.quoted_matches() == Some(false))
            .collect()
    }
}

/// Relative tolerance for spot values: `2^(56 - bits)`, i.e. `2^-200` at the
/// default 256 bits.
pub fn spot_tolerance(ctx: &PrecisionContext) -> Real {
    Real::pow2(56 - ctx.bits() as i32, ctx)
}

fn decimals(quoted: &str) -> usize {
    quoted.split_once('.').map_or(0, |(_, d)| d.len())
}

/// Checks every quoted evaluation. Derivatives come from jets on the closed
/// forms; the comparison value is the displayed polynomial-log expression.
pub fn verify_spot_values(ctx: &PrecisionContext) -> Result<SpotReport> {
    let c = ctx;
    let half = Real::from_ratio(1, 2, c);
    let ln32 = Real::from_ratio(3, 2, c).ln()?;
    let rat = |n: i64, d: i64| Real::from_ratio(n, d, c);
    let int = |n: i64| Real::from_i64(n, c);
    let d = |f: fn(&Jet) -> Result<Jet>, x: &Real, m: usize| derivative_at(f, x, m);

    // p''' as x grows: evaluated far enough out that the O(1/x) remainder is
    // below the tolerance.
    let far = Real::pow2((c.bits() * 7 / 8) as i32, c);

    let mut rows: Vec<(&'static str, Real, Real, Option<&'static str>)> = vec![
        ("lam''(1/2)", d(lam, &half, 2)?, rat(27, 2), None),
        ("lam'(1/2)", d(lam, &half, 1)?, rat(-369, 16), None),
        ("lam(1/2)", lam(&half)?, rat(-549, 32), None),
        ("p'''(1/2)", d(p, &half, 3)?, int(188) - &ln32 * 108, Some("144.20")),
        (
            "lim p'''",
            d(p, &far, 3)?,
            (crate::real::ln2(c) + 1) * 108,
            None,
        ),
        ("p''(1/2)", d(p, &half, 2)?, int(258) - &ln32 * 90, Some("221.50")),
        (
            "p'(1/2)",
            d(p, &half, 1)?,
            (int(181) - &ln32 * 63) / 2,
            Some("77.72"),
        ),
        ("p(1/2)", p(&half)?, rat(27, 4) * (int(2) - &ln32), Some("10.76")),
        ("q''(1/2)", d(q, &half, 2)?, int(700) - &ln32 * 168, Some("631.88")),
        ("q'(1/2)", d(q, &half, 1)?, int(320) - &ln32 * 90, None),
        ("q(1/2)", q(&half)?, rat(155, 2) - &ln32 * 27, Some("66.55")),
        ("h1'(1/2)", d(h1, &half, 1)?, rat(85, 2) - &ln32 * 27, Some("33.55")),
        ("h1(1/2)", h1(&half)?, rat(81, 8) * (int(1) - &ln32), Some("6.01")),
        ("varphi(1/2)", varphi(&half)?, rat(-91, 27) + &ln32 * 5, Some("-1.34")),
        ("h3(1)", h3(&int(1))?, rat(8, 3), None),
        (
            "normalized F''(1/2)",
            normalized_second_derivative(&half)?,
            (pi(c).sqrt()? / 2).ln()?,
            Some("-0.12"),
        ),
    ];

    let tol = spot_tolerance(c);
    let entries = rows
        .drain(..)
        .map(|(label, computed, closed_form, quoted)| {
            let relative_error = if closed_form.is_zero() {
                computed.abs()
            } else {
                ((&computed - &closed_form) / &closed_form).abs()
            };
            let rendered = quoted.map(|q| computed.truncated_fixed(decimals(q)));
            SpotValue {
                label,
                within_tolerance: relative_error <= tol,
                computed,
                closed_form,
                relative_error,
                quoted,
                rendered,
            }
        })
        .collect();
    Ok(SpotReport {
        entries,
        tolerance: tol,
        bits: c.bits(),
    })
}

/// Worst outcome of one identity over a grid.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub label: &'static str,
    pub holds: bool,
    /// Largest `|residual| / tolerance` seen; below 1 means within margin.
    pub worst_ratio: f64,
    pub worst_point: Option<Real>,
    pub failures: Vec<Real>,
    pub bits_used: u32,
    pub points: usize,
}

type GapFn = fn(&Real, &PrecisionContext) -> Result<Gap>;

fn jd(f: fn(&Jet) -> Result<Jet>, x: &Real, m: usize) -> Result<Real> {
    derivative_at(f, x, m)
}

fn at(x: &Real, c: &PrecisionContext) -> Real {
    x.at_prec(c.bits())
}

fn id_h1(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let x1 = &x + 1;
    let x1_4 = (&x1 * &x1) * (&x1 * &x1);
    let rhs = -(&x * x1_4 * jd(varphi, &x, 1)?);
    Ok(Gap::difference(&h1(&x)?, &rhs))
}

fn id_h1_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&jd(h1, &x, 1)?, &displayed::h1_prime(&x)?))
}

fn id_q(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&q(&x)?, &(&x * jd(h1, &x, 2)?)))
}

fn id_q_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&jd(q, &x, 1)?, &displayed::q_prime(&x)?))
}

fn id_x_q_second(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&(&x * jd(q, &x, 2)?), &displayed::x_q_second(&x)?))
}

fn id_p(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let lhs = &x * &x * (&x + 1) * jd(q, &x, 3)?;
    Ok(Gap::difference(&lhs, &(p(&x)? * 8)))
}

fn id_x_p_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&(&x * jd(p, &x, 1)?), &displayed::x_p_prime(&x)?))
}

fn id_p_second(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let lhs = (&x + 1) * &x * &x * jd(p, &x, 2)?;
    Ok(Gap::difference(&lhs, &displayed::x1_xx_p_second(&x)?))
}

fn id_p_third(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let x1 = &x + 1;
    let lhs = &x1 * &x1 * &x * &x * &x * jd(p, &x, 3)?;
    Ok(Gap::difference(&lhs, &displayed::x1sq_xcube_p_third(&x)?))
}

fn id_p_fourth(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let x1 = &x + 1;
    let xx = &x * &x;
    let lhs = &x1 * &x1 * &x1 * &xx * &xx * jd(p, &x, 4)?;
    Ok(Gap::difference(&lhs, &(lam(&x)? * -4)))
}

fn id_lam_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&jd(lam, &x, 1)?, &displayed::lam_prime(&x)))
}

fn id_lam_second(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&jd(lam, &x, 2)?, &displayed::lam_second(&x)))
}

fn id_f_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let f = |j: &Jet| lgamma_over_xlog2x(j);
    Ok(Gap::difference(&derivative_at(f, &x, 1)?, &displayed::f_prime(&x)?))
}

fn id_theta_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&jd(theta, &x, 1)?, &displayed::theta_prime(&x)?))
}

fn id_f_second(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let l = (&x * 2).ln()?;
    let d = &l * &l * 2 + &l * 3 + 2;
    let f2nd = derivative_at(|j: &Jet| lgamma_over_xlog2x(j), &x, 2)?;
    let lhs = &x * &x * &x * &l * &l * &l * f2nd / d;
    Ok(Gap::difference(&lhs, &normalized_second_derivative(&x)?))
}

fn id_normalized_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(
        &jd(normalized_second_derivative, &x, 1)?,
        &displayed::normalized_second_derivative_prime(&x)?,
    ))
}

fn id_f1_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&jd(f1, &x, 1)?, &displayed::f1_prime(&x)?))
}

fn id_h3_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&jd(h3, &x, 1)?, &displayed::h3_prime(&x)?))
}

fn id_f1_f2(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&(f1(&x)? * f2(&x)?), &log_ratio_defect(&x)?))
}

fn id_g_forms(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    Ok(Gap::difference(&log_ratio_defect(&x)?, &log_ratio_defect_direct(&x)?))
}

fn id_u_v_ratio(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let zero = x.like_i64(0);
    let lhs = (u(&x)? - u(&zero)?) / (v(&x)? - v(&zero)?);
    Ok(Gap::difference(&lhs, &f1(&x)?))
}

fn id_u_v_prime(x: &Real, c: &PrecisionContext) -> Result<Gap> {
    let x = at(x, c);
    let lhs = jd(u, &x, 1)? / jd(v, &x, 1)?;
    Ok(Gap::difference(&lhs, &displayed::u_over_v_prime(&x)?))
}

/// The first proof's relations, checked on the main grid over `(1/2, 50]`.
const FIRST_PROOF_IDENTITIES: [(&str, GapFn); 16] = [
    ("h1 = -x(x+1)^4 varphi'", id_h1),
    ("h1' displayed", id_h1_prime),
    ("q = x h1''", id_q),
    ("q' displayed", id_q_prime),
    ("x q'' displayed", id_x_q_second),
    ("8p = x^2(x+1) q'''", id_p),
    ("x p' displayed", id_x_p_prime),
    ("(x+1)x^2 p'' displayed", id_p_second),
    ("(x+1)^2 x^3 p''' displayed", id_p_third),
    ("(x+1)^3 x^4 p'''' = -4 lam", id_p_fourth),
    ("lam' displayed", id_lam_prime),
    ("lam'' displayed", id_lam_second),
    ("F' = theta/(x^2 ln^2 2x)", id_f_prime),
    ("theta' displayed", id_theta_prime),
    ("x^3 ln^3(2x) F''/D = normal form", id_f_second),
    ("(normal form)' = ln^2(2x) phi/D^2", id_normalized_prime),
];

/// The second proof's relations, checked on a log grid over `(0, 50]`.
const SECOND_PROOF_IDENTITIES: [(&str, GapFn); 6] = [
    ("f1' = g/ln^2(x+1)", id_f1_prime),
    ("h' = (x^3-4x-8)/(x^2(x+2)^2)", id_h3_prime),
    ("f1 f2 = G", id_f1_f2),
    ("G rewrite = G definition", id_g_forms),
    ("f1 = (u-u(0))/(v-v(0))", id_u_v_ratio),
    ("u'/v' = (x+1)(1+ln x)", id_u_v_prime),
];

fn check_identity(
    label: &'static str,
    f: GapFn,
    points: &[Real],
    ctx: &PrecisionContext,
) -> Result<IdentityCheck> {
    let mut worst = 0f64;
    let mut worst_point = None;
    let mut failures = Vec::new();
    let mut bits_used = ctx.bits();
    for x in points {
        let skip_unit = label.starts_with("f1 = (u") || label.starts_with("G rewrite");
        if skip_unit && *x == 1 {
            // both sides vanish identically at x = 1
            continue;
        }
        let cert = certify_zero(ctx, |c| f(x, c))?;
        bits_used = bits_used.max(cert.bits);
        let ratio = if cert.tolerance.is_zero() {
            if cert.residual.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (&cert.residual / &cert.tolerance).to_f64()
        };
        if ratio > worst || worst_point.is_none() {
            worst = worst.max(ratio);
            worst_point = Some(x.clone());
        }
        if !cert.is_zero {
            failures.push(x.clone());
        }
    }
    Ok(IdentityCheck {
        label,
        holds: failures.is_empty(),
        worst_ratio: worst,
        worst_point,
        failures,
        bits_used,
        points: points.len(),
    })
}

/// Log grid for the second proof's relations: `count` points over
/// `[10^-3, end]`.
pub fn second_proof_grid(grid: &GridSpec, ctx: &PrecisionContext) -> Result<GridSpec> {
    GridSpec::log(Real::from_ratio(1, 1000, ctx), grid.end().at_prec(ctx.bits()), grid.count())
}

/// Every derivative relation between the auxiliary functions, as a residual
/// certified to vanish at each grid point.
pub fn verify_chain_identities(grid: &GridSpec, ctx: &PrecisionContext) -> Result<Vec<IdentityCheck>> {
    let half = Real::from_ratio(1, 2, ctx);
    if !(*grid.start() > half) {
        return Err(Error::Grid(format!(
            "chain grid must lie in (1/2, ∞), starts at {}",
            grid.start()
        )));
    }
    let first = grid.at(ctx).points();
    let second = second_proof_grid(grid, ctx)?.points();
    let mut out = Vec::new();
    for (label, f) in FIRST_PROOF_IDENTITIES {
        out.push(check_identity(label, f, &first, ctx)?);
    }
    for (label, f) in SECOND_PROOF_IDENTITIES {
        out.push(check_identity(label, f, &second, ctx)?);
    }
    Ok(out)
}

/// Worst outcome of one sign claim over a grid.
#[derive(Debug, Clone)]
pub struct SignCheck {
    pub label: &'static str,
    pub expected: Sign,
    pub holds: bool,
    pub min_margin: Option<Real>,
    pub worst_point: Option<Real>,
    /// First point where the opposite sign was certified.
    pub counterexample: Option<Real>,
    pub inconclusive: Vec<Real>,
    pub bits_used: u32,
    pub points: usize,
    pub domain: (Real, Real),
}

/// Shared grid scan for sign claims: every point must certify `expected`.
pub fn scan_sign<F>(
    label: &'static str,
    expected: Sign,
    points: &[Real],
    ctx: &PrecisionContext,
    f: F,
) -> Result<SignCheck>
where
    F: Fn(&Real, &PrecisionContext) -> Result<Gap>,
{
    let mut min_margin: Option<Real> = None;
    let mut worst_point = None;
    let mut counterexample = None;
    let mut inconclusive = Vec::new();
    let mut bits_used = ctx.bits();
    for x in points {
        let verdict = sign_with_margin(ctx, |c| f(x, c))?;
        bits_used = bits_used.max(verdict.bits);
        if verdict.sign == expected {
            if min_margin.as_ref().map_or(true, |m| verdict.margin < *m) {
                min_margin = Some(verdict.margin.clone());
                worst_point = Some(x.clone());
            }
        } else if verdict.sign == Sign::Inconclusive {
            inconclusive.push(x.clone());
        } else if counterexample.is_none() {
            counterexample = Some(x.clone());
        }
    }
    Ok(SignCheck {
        label,
        expected,
        holds: counterexample.is_none() && inconclusive.is_empty(),
        min_margin,
        worst_point,
        counterexample,
        inconclusive,
        bits_used,
        points: points.len(),
        domain: (
            points.first().cloned().unwrap_or_else(|| Real::zero(ctx)),
            points.last().cloned().unwrap_or_else(|| Real::zero(ctx)),
        ),
    })
}

fn jet_gap(f: fn(&Jet) -> Result<Jet>, m: usize) -> impl Fn(&Real, &PrecisionContext) -> Result<Gap> {
    move |x, c| {
        let x = x.at_prec(c.bits());
        let coarse = derivative_at(f, &x, m)?;
        let fine_ctx = c.at(c.bits() + 32);
        let fine = derivative_at(f, &x.at_prec(fine_ctx.bits()), m)?;
        Ok(Gap::from_refinement(&coarse, fine, c.bits()))
    }
}

fn direct_gap(f: fn(&Real) -> Result<Real>) -> impl Fn(&Real, &PrecisionContext) -> Result<Gap> {
    jet_gap_value(f)
}

fn jet_gap_value(f: fn(&Real) -> Result<Real>) -> impl Fn(&Real, &PrecisionContext) -> Result<Gap> {
    move |x, c| {
        let coarse = f(&x.at_prec(c.bits()))?;
        let fine = f(&x.at_prec(c.bits() + 32))?;
        Ok(Gap::from_refinement(&coarse, fine, c.bits()))
    }
}

fn unit_interval_grid(count: usize, lo: Real, hi: Real) -> Result<Vec<Real>> {
    Ok(GridSpec::linear(lo, hi, count)?.points())
}

/// Sign claims of both proofs. `grid` covers `(1/2, 50]`; the sub-claims on
/// `(1/2, 1)`, `(0, 1)` and `(0, 50]` use grids of the same size.
pub fn verify_sign_claims(grid: &GridSpec, ctx: &PrecisionContext) -> Result<Vec<SignCheck>> {
    let eps = ctx.exclusion_radius();
    let half = Real::from_ratio(1, 2, ctx);
    let one = Real::one(ctx);
    let n = grid.count();
    let main = grid.at(ctx).points();
    let theta_pts = unit_interval_grid(n, &half + &eps, &one - &eps)?;
    let unit_pts = GridSpec::log(Real::pow2(-20, ctx), &one - &eps, n)?.points();
    let wide_pts = second_proof_grid(grid, ctx)?.points();
    let mut with_half = vec![half.clone()];
    with_half.extend(main.iter().cloned());

    let phi_below_varphi = |x: &Real, c: &PrecisionContext| -> Result<Gap> {
        let xw = x.at_prec(c.bits());
        Ok(Gap::difference(&varphi(&xw)?, &phi(&xw)?))
    };
    let uv_slope = |x: &Real, c: &PrecisionContext| -> Result<Gap> {
        let w = |j: &Jet| -> Result<Jet> { Ok((j.clone() + 1) * (j.ln()? + 1)) };
        let xw = x.at_prec(c.bits());
        let coarse = derivative_at(w, &xw, 1)?;
        let fine = derivative_at(w, &x.at_prec(c.bits() + 32), 1)?;
        Ok(Gap::from_refinement(&coarse, fine, c.bits()))
    };

    let mut out = vec![
        scan_sign("theta > 0 on (1/2, 1)", Sign::Positive, &theta_pts, ctx, direct_gap(theta))?,
        scan_sign("theta(1/2) > 0", Sign::Positive, std::slice::from_ref(&half), ctx, direct_gap(theta))?,
        scan_sign("lam'' > 0", Sign::Positive, &with_half, ctx, jet_gap(lam, 2))?,
        scan_sign("p''' > 0", Sign::Positive, &with_half, ctx, jet_gap(p, 3))?,
        scan_sign("p'' > 0", Sign::Positive, &with_half, ctx, jet_gap(p, 2))?,
        scan_sign("p' > 0", Sign::Positive, &with_half, ctx, jet_gap(p, 1))?,
        scan_sign("p > 0", Sign::Positive, &with_half, ctx, direct_gap(p))?,
        scan_sign("q'' > 0", Sign::Positive, &with_half, ctx, jet_gap(q, 2))?,
        scan_sign("q' > 0", Sign::Positive, &with_half, ctx, jet_gap(q, 1))?,
        scan_sign("q > 0", Sign::Positive, &with_half, ctx, direct_gap(q))?,
        scan_sign("h1' > 0", Sign::Positive, &with_half, ctx, jet_gap(h1, 1))?,
        scan_sign("h1 > 0", Sign::Positive, &with_half, ctx, direct_gap(h1))?,
        scan_sign("varphi' < 0", Sign::Negative, &with_half, ctx, jet_gap(varphi, 1))?,
        scan_sign("varphi < 0", Sign::Negative, &with_half, ctx, direct_gap(varphi))?,
        scan_sign("phi < varphi", Sign::Positive, &main, ctx, phi_below_varphi)?,
        scan_sign("phi < 0", Sign::Negative, &main, ctx, direct_gap(phi))?,
        scan_sign("g > 0 on (0, 1)", Sign::Positive, &unit_pts, ctx, direct_gap(g3))?,
        scan_sign("h > 0 on (0, 1)", Sign::Positive, &unit_pts, ctx, direct_gap(h3))?,
        scan_sign("h' < 0 on (0, 1)", Sign::Negative, &unit_pts, ctx, jet_gap(h3, 1))?,
        scan_sign("f1' > 0 on (0, 1)", Sign::Positive, &unit_pts, ctx, jet_gap(f1, 1))?,
        scan_sign("f1 < 0 on (0, 1)", Sign::Negative, &unit_pts, ctx, direct_gap(f1))?,
        scan_sign("f2 > 0", Sign::Positive, &wide_pts, ctx, direct_gap(f2))?,
        scan_sign("f2' < 0", Sign::Negative, &wide_pts, ctx, jet_gap(f2, 1))?,
        scan_sign("(u'/v')' > 0", Sign::Positive, &wide_pts, ctx, uv_slope)?,
    ];
    out.retain(|c| c.points > 0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn r(s: &str) -> Real {
        Real::parse(s, &ctx()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let c = ctx();
        let half = r("0.5");
        let th = eval_cascade(CascadeFn::Theta, &half, &c).unwrap();
        let expect = crate::real::ln2(&c) - pi(&c).ln().unwrap() / 2;
        assert!((&th - &expect).abs() < Real::pow2(-240, &c));
        assert!(th.is_positive());
        assert_eq!(th.truncated_fixed(4), "0.1207");
        assert_eq!(eval_cascade(CascadeFn::Lam, &half, &c).unwrap(), Real::from_ratio(-549, 32, &c));
        let vp = eval_cascade(CascadeFn::Varphi, &half, &c).unwrap();
        assert_eq!(vp.truncated_fixed(4), "-1.3430");
        assert!(eval_cascade(CascadeFn::Q, &r("-1"), &c).is_err());
        assert_eq!("h3".parse::<CascadeFn>().unwrap(), CascadeFn::H3);
        assert!("h".parse::<CascadeFn>().is_err());
    }

    #[test]
    fn spot_values_match_closed_forms() {
        let rep = verify_spot_values(&ctx()).unwrap();
        assert_eq!(rep.entries.len(), 16);
        for e in &rep.entries {
            assert!(e.within_tolerance, "{}: rel err {}", e.label, e.relative_error);
        }
        let bad: Vec<_> = rep.decimal_discrepancies().iter().map(|e| e.label).collect();
        assert_eq!(bad, vec!["h1'(1/2)"]);
        let h1p = rep.entries.iter().find(|e| e.label == "h1'(1/2)").unwrap();
        assert_eq!(h1p.rendered.as_deref(), Some("31.55"));
    }

    #[test]
    fn identities_at_single_points() {
        let c = ctx();
        for (label, f) in FIRST_PROOF_IDENTITIES {
            for x in ["1", "2", "0.75", "37.5"] {
                let cert = certify_zero(&c, |cc| f(&r(x), cc)).unwrap();
                assert!(cert.is_zero, "{label} at {x}");
            }
        }
        for (label, f) in SECOND_PROOF_IDENTITIES {
            for x in ["0.01", "0.5", "3"] {
                let cert = certify_zero(&c, |cc| f(&r(x), cc)).unwrap();
                assert!(cert.is_zero, "{label} at {x}");
            }
        }
    }

    #[test]
    fn perturbed_identity_is_caught() {
        let c = ctx();
        let cert = certify_zero(&c, |cc| {
            let g = id_q(&r("1"), cc)?;
            Ok(Gap::new(g.value + Real::pow2(-100, cc), g.scale))
        })
        .unwrap();
        assert!(!cert.is_zero);
    }

    #[test]
    fn phi_gap_positive_at_one() {
        let c = ctx();
        let gap = varphi(&r("1")).unwrap() - phi(&r("1")).unwrap();
        assert!(gap.is_positive());
        let _ = c;
    }

    #[test]
    fn f2_and_h3_examples() {
        let c = ctx();
        assert!((f2(&r("1")).unwrap() - crate::real::ln2(&c)).abs() < Real::pow2(-250, &c));
        assert!(f2(&r("2")).unwrap() < f2(&r("1")).unwrap());
        let (a, b, one) = (h3(&r("0.5")).unwrap(), h3(&r("0.9")).unwrap(), h3(&r("1")).unwrap());
        assert!(a > b && b > one);
        assert!((one - Real::from_ratio(8, 3, &c)).abs() < Real::pow2(-250, &c));
        assert!(u(&r("0")).unwrap().is_zero());
    }

    #[test]
    fn theta_positive_at_three_quarters() {
        let v = sign_with_margin(&ctx(), |c| direct_gap(theta)(&r("0.75"), c)).unwrap();
        assert_eq!(v.sign, Sign::Positive);
    }
}
