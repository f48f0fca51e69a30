//! `ln Γ`, digamma and polygamma for positive real arguments.
//!
//! Arguments are shifted upward with the recurrence until they clear
//! [`shift_threshold`], then the Stirling series (and its term-by-term
//! derivatives) is summed until the next term falls below the target error.
//! Bernoulli numbers are exact rationals from the tangent-number algorithm.

use std::sync::OnceLock;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::real::{pi, Gap, PrecisionContext, Real};

pub const MAX_POLYGAMMA_ORDER: u32 = 16;
pub const MAX_BERNOULLI_INDEX: u32 = 512;

/// Extra bits carried through shift and series before rounding to the caller's
/// precision.
pub const GUARD_BITS: u32 = 32;

const MAX_TERMS: usize = (MAX_BERNOULLI_INDEX / 2) as usize;

/// Order `k` of `ψ^(k)`; `k = 0` is digamma itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolygammaOrder(u32);

impl PolygammaOrder {
    pub fn new(k: u32) -> Result<Self> {
        if k > MAX_POLYGAMMA_ORDER {
            return Err(Error::OrderOutOfRange {
                order: k as usize,
                max: MAX_POLYGAMMA_ORDER as usize,
            });
        }
        Ok(Self(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn bernoulli_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| tangent_bernoulli(MAX_TERMS))
}

/// `B_2, B_4, …, B_{2n}` via tangent numbers `T_k`:
/// `B_{2k} = (-1)^(k-1) 2k T_k / (2^(2k) (2^(2k) - 1))`.
fn tangent_bernoulli(n: usize) -> Vec<Rational> {
    let mut t = vec![Integer::new(); n + 1];
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j - k) as u32);
            let b = Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = a + b;
        }
    }
    (1..=n)
        .map(|k| {
            let pow = Integer::from(1) << (2 * k as u32);
            let den = Integer::from(&pow * (pow.clone() - 1u32));
            let num = Integer::from(&t[k] * (2 * k as u32));
            let mut b = Rational::from((num, den));
            if k % 2 == 0 {
                b = -b;
            }
            b
        })
        .collect()
}

/// Exact `B_index` for even `index` in `[2, 512]`.
pub fn bernoulli_exact(index: u32) -> Result<&'static Rational> {
    if index < 2 || index % 2 != 0 || index > MAX_BERNOULLI_INDEX {
        return Err(Error::BernoulliIndex(index));
    }
    Ok(&bernoulli_table()[(index / 2 - 1) as usize])
}

/// `B_index` rounded to the context precision.
pub fn bernoulli(index: u32, ctx: &PrecisionContext) -> Result<Real> {
    Ok(Real::from_rational(bernoulli_exact(index)?, ctx))
}

/// Smallest argument at which the Stirling series for derivative order `m`
/// reaches relative error `2^(-w-8)` before running out of tabulated
/// Bernoulli numbers.
fn stirling_min_argument(w: u32, m: usize) -> u64 {
    let last = &bernoulli_table()[MAX_TERMS - 1];
    let log2_b = last.numer().significant_bits() as f64 - last.denom().significant_bits() as f64;
    let j2 = MAX_BERNOULLI_INDEX as f64;
    let log2_rising = m as f64 * (j2 + m as f64).log2();
    let need = log2_b - (j2 * (j2 - 1.0)).log2() + log2_rising + w as f64 + 8.0;
    (need / j2).exp2().ceil() as u64 + 1
}

/// Lower bound for the shifted argument: `max(32, bits/4)`, raised where the
/// tabulated Bernoulli numbers would not reach the target error.
pub fn shift_threshold(bits: u32, max_order: usize) -> u64 {
    32u64
        .max((bits / 4) as u64)
        .max(stirling_min_argument(bits + GUARD_BITS, max_order))
}

/// One Stirling-series evaluation: value, number of Bernoulli terms used and
/// the magnitude of the first omitted term.
#[derive(Debug, Clone)]
pub struct StirlingSum {
    pub value: Real,
    pub terms: usize,
    pub tail: Real,
}

fn rising(a: u64, m: usize) -> Integer {
    let mut r = Integer::from(1);
    for i in 0..m as u64 {
        r *= a + i;
    }
    r
}

fn factorial(k: u32) -> Integer {
    Integer::from(Integer::factorial(k))
}

/// Asymptotic expansion of the `m`-th derivative of `ln Γ` at `z`
/// (`m = 0`: `ln Γ`, `m = 1`: `ψ`, `m ≥ 2`: `ψ^(m-1)`), summed at `z`'s
/// precision. Requires `z` large enough for the series to converge to that
/// precision within 256 terms.
pub fn stirling(z: &Real, m: usize) -> Result<StirlingSum> {
    let w = z.prec();
    let ctx = PrecisionContext::fixed(w);
    let zr = z.recip()?;
    let z2r = &zr * &zr;
    let lead = match m {
        0 => {
            let half_ln_2pi = (pi(&ctx) * 2).ln()? / 2;
            (z - Real::from_ratio(1, 2, &ctx)) * z.ln()? - z + half_ln_2pi
        }
        1 => z.ln()? - &zr / 2,
        _ => {
            let k = (m - 1) as u32;
            let zk = zr.powi(k as i32);
            let a = Real::from_rational(&Rational::from(factorial(k - 1)), &ctx) * &zk;
            let b = Real::from_rational(&Rational::from(factorial(k)), &ctx) * &zk * &zr / 2;
            let s = a + b;
            if k % 2 == 1 {
                s
            } else {
                -s
            }
        }
    };
    let mut sum = lead;
    // z^{-(2j-1+m)} starting at j = 1
    let mut p = zr.powi(1 + m as i32);
    let sign_m = if m % 2 == 0 { 1 } else { -1 };
    let table = bernoulli_table();
    for j in 1..=MAX_TERMS {
        let bj = &table[j - 1];
        let coeff = Rational::from(bj / Integer::from(2 * j as u64 * (2 * j as u64 - 1)))
            * rising(2 * j as u64 - 1, m);
        let term = Real::from_rational(&coeff, &ctx) * &p * sign_m;
        let small = term.abs().mul_pow2(w as i32 + 4) < sum.abs();
        if small {
            return Ok(StirlingSum {
                value: sum,
                terms: j - 1,
                tail: term.abs(),
            });
        }
        sum = sum + term;
        p = p * &z2r;
    }
    Err(Error::Parameter(format!(
        "Stirling series did not converge at z = {} with {w} bits",
        z.to_decimal(12)
    )))
}

/// `[ln Γ(x), ψ(x), ψ'(x), …]` up to derivative order `max_m`, each with the
/// magnitude of the largest quantity cancelled while forming it.
fn raw_orders(x: &Real, max_m: usize, w: u32) -> Result<Vec<(Real, Real)>> {
    let ctx = PrecisionContext::fixed(w);
    let x = x.at_prec(w);
    let threshold = shift_threshold(w.saturating_sub(GUARD_BITS), max_m) as f64;
    let xf = x.to_f64();
    let shift = if xf >= threshold {
        0u64
    } else {
        (threshold - xf).ceil() as u64
    };
    let z = &x + Real::from_u64(shift, &ctx);

    let mut out = Vec::with_capacity(max_m + 1);
    // Sums of (x+j)^{-m} for m = 1..=max_m, and the product of (x+j).
    let mut recip_sums: Vec<Real> = vec![Real::zero(&ctx); max_m + 1];
    let mut prod = Real::one(&ctx);
    for j in 0..shift {
        let xj = &x + Real::from_u64(j, &ctx);
        if max_m >= 1 {
            let r = xj.recip()?;
            let mut pw = r.clone();
            for slot in recip_sums.iter_mut().skip(1) {
                *slot = &*slot + &pw;
                pw = pw * &r;
            }
        }
        prod = prod * xj;
    }
    for m in 0..=max_m {
        let s = stirling(&z, m)?.value;
        if m == 0 {
            let ln_prod = prod.ln()?;
            let scale = s.abs().max(ln_prod.abs());
            out.push((s - ln_prod, scale));
        } else {
            let k = (m - 1) as u32;
            let corr = Real::from_rational(&Rational::from(factorial(k)), &ctx) * &recip_sums[m];
            let scale = s.abs().max(corr.abs());
            let v = if k % 2 == 0 { s - corr } else { s + corr };
            out.push((v, scale));
        }
    }
    Ok(out)
}

/// Bits lost to cancellation when `value` was formed from terms of size
/// `scale`.
fn lost_bits(value: &Real, scale: &Real) -> Option<u32> {
    let ev = value.exponent()?;
    let es = scale.exponent()?;
    Some((es - ev).max(0) as u32)
}

/// All derivative orders `0..=max_m` at precision `bits`, retrying any order
/// whose value cancelled past the guard bits.
fn eval_orders(x: &Real, max_m: usize, bits: u32) -> Result<Vec<Real>> {
    let w = bits + GUARD_BITS;
    let raw = raw_orders(x, max_m, w)?;
    let mut out = Vec::with_capacity(raw.len());
    for (m, (v, scale)) in raw.into_iter().enumerate() {
        out.push(settle(x, m, v, scale, bits)?);
    }
    Ok(out)
}

fn settle(x: &Real, m: usize, v: Real, scale: Real, bits: u32) -> Result<Real> {
    if m == 0 && (*x == 1 || *x == 2) {
        return Ok(Real::zero(&PrecisionContext::fixed(bits)));
    }
    let mut v = v;
    let mut scale = scale;
    let mut w = bits + GUARD_BITS;
    // Only ln Γ and ψ change sign, so only they can cancel.
    for _ in 0..6 {
        match lost_bits(&v, &scale) {
            Some(lost) if lost + 8 <= GUARD_BITS => break,
            Some(lost) => w = bits + lost + GUARD_BITS + 8,
            None if v.is_zero() => w *= 2,
            None => break,
        }
        let mut again = raw_orders(x, m, w)?;
        let (nv, ns) = again.swap_remove(m);
        v = nv;
        scale = ns;
    }
    Ok(v.at_prec(bits))
}

fn check_positive(op: &'static str, x: &Real) -> Result<()> {
    if !x.is_positive() || !x.is_finite() {
        return Err(Error::Domain {
            op,
            arg: x.to_string(),
        });
    }
    Ok(())
}

/// `ln Γ(x)` for `x > 0`.
pub fn lgamma(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_positive("lgamma", x)?;
    Ok(eval_orders(&x.at_prec(ctx.bits().max(x.prec())), 0, ctx.bits())?.swap_remove(0))
}

/// `ψ(x)` for `x > 0`.
pub fn digamma(x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    check_positive("digamma", x)?;
    let v = eval_orders(&x.at_prec(ctx.bits().max(x.prec())), 1, ctx.bits())?.swap_remove(1);
    debug_assert!(
        lemma1_digamma_band(x, &v).is_ok_and(|[lo, hi]| !lo.is_negative() && !hi.is_negative()),
        "digamma({x}) = {v} escaped the log band"
    );
    Ok(v)
}

/// `ψ^(k)(x)` for `x > 0`, `0 ≤ k ≤ 16`.
pub fn polygamma(k: u32, x: &Real, ctx: &PrecisionContext) -> Result<Real> {
    let k = PolygammaOrder::new(k)?.get();
    check_positive("polygamma", x)?;
    let m = k as usize + 1;
    let v = eval_orders(&x.at_prec(ctx.bits().max(x.prec())), m, ctx.bits())?.swap_remove(m);
    debug_assert!(
        k == 0
            || lemma1_polygamma_band(k, x, &v)
                .is_ok_and(|[lo, hi]| !lo.is_negative() && !hi.is_negative()),
        "polygamma({k}, {x}) = {v} escaped the power band"
    );
    Ok(v)
}

/// `[ln Γ(x), ψ(x), ψ'(x), …, ψ^(count-2)(x)]`: the first `count` derivatives
/// of `ln Γ` at `x`, sharing one shift.
pub fn log_gamma_derivatives(x: &Real, count: usize, ctx: &PrecisionContext) -> Result<Vec<Real>> {
    check_positive("lgamma", x)?;
    if count == 0 || count > MAX_POLYGAMMA_ORDER as usize + 2 {
        return Err(Error::OrderOutOfRange {
            order: count,
            max: MAX_POLYGAMMA_ORDER as usize + 2,
        });
    }
    eval_orders(&x.at_prec(ctx.bits().max(x.prec())), count - 1, ctx.bits())
}

// Envelopes used both as internal sanity bounds and as registry claims.

/// Gaps `[ψ(x) - (ln x - 1/x), (ln x - 1/(2x)) - ψ(x)]`, both positive for
/// `x > 0`.
fn lemma1_digamma_band(x: &Real, psi: &Real) -> Result<[Real; 2]> {
    let x = x.at_prec(psi.prec());
    let lnx = x.ln()?;
    let r = x.recip()?;
    Ok([psi - (&lnx - &r), (&lnx - r / 2) - psi])
}

fn lemma1_polygamma_band(k: u32, x: &Real, value: &Real) -> Result<[Real; 2]> {
    let ctx = PrecisionContext::fixed(value.prec());
    let x = x.at_prec(value.prec());
    let xk = x.powi(k as i32);
    let a = Real::from_rational(&Rational::from(factorial(k - 1)), &ctx) / &xk;
    let b = Real::from_rational(&Rational::from(factorial(k)), &ctx) / (&xk * &x);
    let signed = if k % 2 == 1 { value.clone() } else { -value };
    Ok([&signed - (&a + &b / 2), (a + b) - signed])
}

/// Lower and upper gaps of the digamma log band at `x`.
pub fn digamma_band_gaps(x: &Real, ctx: &PrecisionContext) -> Result<[Gap; 2]> {
    let psi = digamma(x, ctx)?;
    let xw = x.at_prec(ctx.bits());
    let lnx = xw.ln()?;
    let r = xw.recip()?;
    let lower = &lnx - &r;
    let upper = &lnx - r / 2;
    Ok([Gap::difference(&psi, &lower), Gap::difference(&upper, &psi)])
}

/// Lower and upper gaps of the `k`-th polygamma power band at `x`.
pub fn polygamma_band_gaps(k: u32, x: &Real, ctx: &PrecisionContext) -> Result<[Gap; 2]> {
    if k == 0 {
        return Err(Error::OrderOutOfRange { order: 0, max: 16 });
    }
    let v = polygamma(k, x, ctx)?;
    let xw = x.at_prec(ctx.bits());
    let xk = xw.powi(k as i32);
    let a = Real::from_rational(&Rational::from(factorial(k - 1)), ctx) / &xk;
    let b = Real::from_rational(&Rational::from(factorial(k)), ctx) / (&xk * &xw);
    let signed = if k % 2 == 1 { v } else { -v };
    let lower = &a + &b / 2;
    let upper = a + b;
    Ok([
        Gap::difference(&signed, &lower),
        Gap::difference(&upper, &signed),
    ])
}

/// `x ln(1 + 1/x) - [ln(x + 1) - ln Γ(x + 1)/x]`: the log of
/// `(1 + 1/x)^x` against the log of `(x + 1)/Γ(x + 1)^(1/x)`. Positive for
/// `x > 1`, negative on `(0, 1)`.
pub fn power_vs_gamma_root_gap(x: &Real, ctx: &PrecisionContext) -> Result<Gap> {
    check_positive("power_vs_gamma_root", x)?;
    let xw = x.at_prec(ctx.bits());
    let lhs = &xw * xw.recip()?.ln_1p()?;
    let x1 = &xw + 1;
    let rhs = x1.ln()? - lgamma(&x1, ctx)? / &xw;
    Ok(Gap::difference(&lhs, &rhs))
}

/// Gaps `[ln(1+t) - 2t/(2+t), t(2+t)/(2(1+t)) - ln(1+t)]`: both positive for
/// `t > 0`, both negative on `(-1, 0)`.
pub fn log_bound_gaps(t: &Real, ctx: &PrecisionContext) -> Result<[Gap; 2]> {
    let tw = t.at_prec(ctx.bits());
    let l = tw.ln_1p()?;
    let lower = (&tw * 2) / (&tw + 2);
    let upper = &tw * (&tw + 2) / ((&tw + 1) * 2);
    Ok([Gap::difference(&l, &lower), Gap::difference(&upper, &l)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn r(s: &str) -> Real {
        Real::parse(s, &ctx()).unwrap()
    }

    fn rel_err(a: &Real, b: &Real) -> f64 {
        if b.is_zero() {
            return a.abs().to_f64();
        }
        ((a - b) / b).abs().to_f64()
    }

    /// Bernoulli numbers from `sum_{j=0}^{n} C(n+1, j) B_j = 0`.
    fn bernoulli_oracle(n: usize) -> Vec<Rational> {
        let mut b = vec![Rational::from(1)];
        for m in 1..=n {
            let mut s = Rational::new();
            for (j, bj) in b.iter().enumerate() {
                let c = Integer::from(Integer::binomial_u(m as u32 + 1, j as u32));
                s += Rational::from(bj * &c);
            }
            b.push(-s / Integer::from(m + 1));
        }
        b
    }

    #[test]
    fn bernoulli_matches_recurrence() {
        let oracle = bernoulli_oracle(80);
        for k in 1..=40u32 {
            assert_eq!(bernoulli_exact(2 * k).unwrap(), &oracle[2 * k as usize], "B_{}", 2 * k);
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(*bernoulli_exact(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(*bernoulli_exact(4).unwrap(), Rational::from((-1, 30)));
        assert_eq!(*bernoulli_exact(12).unwrap(), Rational::from((-691, 2730)));
        assert!(bernoulli_exact(3).is_err());
        assert!(bernoulli_exact(514).is_err());
        assert!(bernoulli_exact(0).is_err());
        assert_eq!(bernoulli(2, &ctx()).unwrap(), Real::from_ratio(1, 6, &ctx()));
    }

    #[test]
    fn bernoulli_512_against_zeta() {
        // |B_2n| = 2 (2n)! zeta(2n) / (2 pi)^(2n)
        let p = 600;
        let c = PrecisionContext::fixed(p);
        let b = Real::from_rational(bernoulli_exact(512).unwrap(), &c);
        let fact = Float::with_val(p, factorial(512));
        let zeta = Float::with_val(p, Float::with_val(p, 512).zeta());
        let tp = Float::with_val(p, rug::float::Constant::Pi) * 2u32;
        let oracle = Float::with_val(p, &fact * &zeta) * 2u32 / Float::with_val(p, rug::ops::Pow::pow(&tp, 512u32));
        let oracle = Real::from_float(-oracle);
        assert!(rel_err(&b, &oracle) < 1e-150);
    }

    #[test]
    fn lgamma_examples() {
        let c = ctx();
        assert!(lgamma(&r("1"), &c).unwrap().is_zero());
        assert!(lgamma(&r("2"), &c).unwrap().is_zero());
        let half_pi = pi(&c).sqrt().unwrap() / 2;
        let v = lgamma(&r("1.5"), &c).unwrap();
        assert!(rel_err(&v, &half_pi.ln().unwrap()) < 1e-70);
        assert_eq!(v.to_decimal(7), "-1.207822e-1");
        let v = lgamma(&r("5"), &c).unwrap();
        assert!(rel_err(&v, &Real::from_i64(24, &c).ln().unwrap()) < 1e-70);
        assert!(matches!(lgamma(&r("0"), &c), Err(Error::Domain { .. })));
        assert!(lgamma(&r("-1.5"), &c).is_err());
    }

    #[test]
    fn lgamma_against_mpfr() {
        let c = ctx();
        for s in ["1e-6", "0.01", "0.3", "0.999", "1.0001", "1.9999", "2.5", "7", "31.5", "1000.25", "1e12"] {
            let x = r(s);
            let ours = lgamma(&x, &c).unwrap();
            let oracle = Real::from_float(x.as_float().clone().ln_gamma());
            assert!(rel_err(&ours, &oracle) < 2f64.powi(8 - 256), "x = {s}");
        }
    }

    #[test]
    fn lgamma_relative_accuracy_near_roots() {
        let c = ctx();
        let x = r("1").mul_pow2(0) + Real::pow2(-100, &c);
        let ours = lgamma(&x, &c).unwrap();
        let oracle = Real::from_float(x.as_float().clone().ln_gamma());
        assert!(rel_err(&ours, &oracle) < 2f64.powi(8 - 256));
    }

    #[test]
    fn digamma_examples() {
        let c = ctx();
        let g = crate::real::euler_gamma(&c);
        assert!(rel_err(&digamma(&r("1"), &c).unwrap(), &-&g) < 1e-70);
        let v = digamma(&r("2"), &c).unwrap();
        assert!(rel_err(&v, &(Real::one(&c) - &g)) < 1e-70);
        assert_eq!(v.to_decimal(7), "4.227843e-1");
        let ln2 = crate::real::ln2(&c);
        let lo = &ln2 - Real::from_ratio(1, 2, &c);
        let hi = &ln2 - Real::from_ratio(1, 4, &c);
        assert!(lo < v && v < hi);
        assert_eq!(lo.to_decimal(4), "1.931e-1");
        assert_eq!(hi.to_decimal(4), "4.431e-1");
        let v = digamma(&r("0.5"), &c).unwrap();
        assert!(rel_err(&v, &(-g - ln2 * 2)) < 1e-70);
        assert_eq!(v.to_decimal(8), "-1.9635100");
    }

    #[test]
    fn digamma_against_mpfr() {
        let c = ctx();
        for s in ["1e-5", "0.2", "1.4616321449683623", "1.46163214496836234126", "3.25", "50", "1e9"] {
            let x = r(s);
            let ours = digamma(&x, &c).unwrap();
            let oracle = Real::from_float(x.as_float().clone().digamma());
            assert!(rel_err(&ours, &oracle) < 2f64.powi(8 - 256), "x = {s}");
        }
    }

    #[test]
    fn polygamma_examples() {
        let c = ctx();
        let p = pi(&c);
        let v = polygamma(1, &r("1"), &c).unwrap();
        assert!(rel_err(&v, &(&p * &p / 6)) < 1e-70);
        assert!(Real::from_ratio(3, 2, &c) < v && v < 2);
        let zeta3 = Real::from_float(Float::with_val(256, 3).zeta());
        let v = polygamma(2, &r("1"), &c).unwrap();
        assert!(rel_err(&v, &(zeta3 * -2)) < 1e-70);
        assert_eq!(v.to_decimal(8), "-2.4041138");
        assert!(polygamma(17, &r("1"), &c).is_err());
        assert!(polygamma(1, &r("0"), &c).is_err());
    }

    #[test]
    fn polygamma_against_hurwitz_zeta() {
        // psi^(k)(x) = (-1)^(k+1) k! zeta(k+1, x)
        let c = ctx();
        for k in 1..=16u32 {
            for s in ["0.05", "0.75", "3", "40.5"] {
                let x = r(s);
                let ours = polygamma(k, &x, &c).unwrap();
                let oracle = hurwitz_oracle(k + 1, &x);
                let fact = Real::from_rational(&Rational::from(factorial(k)), &c);
                let expected = if k % 2 == 1 { fact * oracle } else { -(fact * oracle) };
                assert!(rel_err(&ours, &expected) < 2f64.powi(8 - 256), "k = {k}, x = {s}");
            }
        }
    }

    /// Hurwitz `zeta(s, x)`: direct sum to 200 terms, then Euler–Maclaurin
    /// with Bernoulli numbers from the recurrence oracle.
    fn hurwitz_oracle(s: u32, x: &Real) -> Real {
        let p = 320;
        let c = PrecisionContext::fixed(p);
        let x = x.at_prec(p);
        let n = 200u64;
        let mut sum = Real::zero(&c);
        for j in 0..n {
            sum = sum + (&x + Real::from_u64(j, &c)).powi(-(s as i32));
        }
        let a = &x + Real::from_u64(n, &c);
        // integral_a^inf t^-s dt + a^-s / 2
        sum = sum + a.powi(1 - s as i32) / (s as i64 - 1) + a.powi(-(s as i32)) / 2;
        let bern = bernoulli_oracle(120);
        // sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) a^{-s-2k+1}
        for k in 1..=60usize {
            let mut coeff = bern[2 * k].clone() / Integer::from(Integer::factorial(2 * k as u32));
            coeff *= rising(s as u64, 2 * k - 1);
            let term = Real::from_rational(&coeff, &c) * a.powi(-(s as i32) - 2 * k as i32 + 1);
            sum = sum + term;
        }
        sum
    }

    #[test]
    fn shift_threshold_policy() {
        assert_eq!(shift_threshold(256, 0), 64);
        assert!(shift_threshold(64, 0) >= 32);
        assert!(shift_threshold(4096, 0) > 1024);
        // A larger threshold must not change the value beyond margin.
        let c = ctx();
        let x = r("0.37");
        let w = 256 + GUARD_BITS;
        for m in [0usize, 1, 3, 9] {
            let a = raw_orders(&x, m, w).unwrap().swap_remove(m).0;
            let z = &x.at_prec(w) + Real::from_u64(400, &PrecisionContext::fixed(w));
            let far = stirling(&z, m).unwrap().value;
            // undo the 400-step shift by recurrence
            let mut b = far;
            for j in 0..400u64 {
                let xj = &x.at_prec(w) + Real::from_u64(j, &PrecisionContext::fixed(w));
                if m == 0 {
                    b = b - xj.ln().unwrap();
                } else {
                    let k = (m - 1) as u32;
                    let t = Real::from_rational(&Rational::from(factorial(k)), &c) * xj.powi(-(k as i32) - 1);
                    b = if k % 2 == 0 { b - t } else { b + t };
                }
            }
            assert!(rel_err(&a, &b) < 2f64.powi(6 - 256), "m = {m}");
        }
    }

    #[test]
    fn stirling_tail_is_below_target() {
        let c = PrecisionContext::fixed(288);
        let z = Real::from_i64(64, &c);
        for m in 0..10 {
            let s = stirling(&z, m).unwrap();
            assert!(s.tail.mul_pow2(288 + 4) < s.value.abs());
            assert!(s.terms > 0 && s.terms < MAX_TERMS);
        }
    }

    #[test]
    fn high_precision_lgamma() {
        let c = PrecisionContext::new(2048, 4096).unwrap();
        let x = Real::parse("0.7", &c).unwrap();
        let ours = lgamma(&x, &c).unwrap();
        let oracle = Real::from_float(x.as_float().clone().ln_gamma());
        assert!(rel_err(&ours, &oracle) < 2f64.powi(-1000));
    }

    #[test]
    fn lemma_gaps() {
        let c = ctx();
        let [lo, hi] = log_bound_gaps(&r("1"), &c).unwrap();
        assert!(lo.value.is_positive() && hi.value.is_positive());
        let [lo, hi] = log_bound_gaps(&r("-0.5"), &c).unwrap();
        assert!(lo.value.is_negative() && hi.value.is_negative());
        assert!(power_vs_gamma_root_gap(&r("2"), &c).unwrap().value.is_positive());
        assert!(power_vs_gamma_root_gap(&r("0.5"), &c).unwrap().value.is_negative());
        for k in 1..=5 {
            let [lo, hi] = polygamma_band_gaps(k, &r("1"), &c).unwrap();
            assert!(lo.value.is_positive() && hi.value.is_positive(), "k = {k}");
        }
        let [lo, hi] = digamma_band_gaps(&r("2"), &c).unwrap();
        assert!(lo.value.is_positive() && hi.value.is_positive());
    }
}
