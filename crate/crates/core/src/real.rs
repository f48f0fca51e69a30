//! Arbitrary-precision reals, precision contexts, named constants and
//! strict-sign certification with precision escalation.
//!
//! A [`Real`] is a binary floating-point number carrying its own precision.
//! Binary operations round to the larger of the two operand precisions, so a
//! formula evaluated on inputs created from one [`PrecisionContext`] runs
//! entirely at that context's working precision.
//!
//! Error accounting: every elementary operation (`+ - * /`, `ln`, `exp`,
//! `pow`, `sqrt`) is correctly rounded, i.e. relative error at most
//! `2^(-p)`, which sits inside the documented `2^(3-p)` per-operation budget.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_MAX_BITS: u32 = 4096;
pub const DEFAULT_ESCALATION_FACTOR: u32 = 2;

/// Significant digits of serialized reals.
pub const SERIAL_DIGITS: usize = 20;

/// Slack, in bits, between the per-operation error bound and the certification
/// threshold `2^(6 - bits) * scale`.
pub const MARGIN_SLACK_BITS: i32 = 6;

/// Working precision plus the escalation policy used by [`sign_with_margin`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    bits: u32,
    max_bits: u32,
    escalation_factor: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            bits: DEFAULT_BITS,
            max_bits: DEFAULT_MAX_BITS,
            escalation_factor: DEFAULT_ESCALATION_FACTOR,
        }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32, max_bits: u32) -> Result<Self> {
        if bits == 0 || bits > max_bits {
            return Err(Error::InvalidPrecision { bits, max_bits });
        }
        Ok(Self {
            bits,
            max_bits,
            escalation_factor: DEFAULT_ESCALATION_FACTOR,
        })
    }

    pub fn with_escalation_factor(self, factor: u32) -> Result<Self> {
        if factor < 2 {
            return Err(Error::InvalidEscalation(factor));
        }
        Ok(Self {
            escalation_factor: factor,
            ..self
        })
    }

    /// A context with no escalation headroom. Used internally when a value's
    /// own precision is the only information available.
    pub fn fixed(bits: u32) -> Self {
        let bits = bits.max(1);
        Self {
            bits,
            max_bits: bits,
            escalation_factor: DEFAULT_ESCALATION_FACTOR,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    pub fn escalation_factor(&self) -> u32 {
        self.escalation_factor
    }

    /// Same policy, different working precision (clamped to `max_bits`).
    pub fn at(&self, bits: u32) -> Self {
        Self {
            bits: bits.clamp(1, self.max_bits),
            ..*self
        }
    }

    /// The escalation schedule: `bits, bits*f, bits*f^2, ...`, ending exactly
    /// at `max_bits`.
    pub fn levels(&self) -> Vec<u32> {
        let mut out = vec![self.bits];
        let mut cur = self.bits as u64;
        while cur < self.max_bits as u64 {
            cur = (cur * self.escalation_factor as u64).min(self.max_bits as u64);
            out.push(cur as u32);
        }
        out
    }

    /// Radius excluded around singular points of the named functions:
    /// `2^(-bits/4)`.
    pub fn exclusion_radius(&self) -> Real {
        Real::pow2(-((self.bits / 4) as i32), self)
    }

    /// Decimal digits needed to render a value at this precision faithfully.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
    }
}

/// Arbitrary-precision binary floating-point value.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    /// Wraps an MPFR value; its precision is kept.
    pub fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits, 0))
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits, 1))
    }

    pub fn from_i64(v: i64, ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits, v))
    }

    pub fn from_u64(v: u64, ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits, v))
    }

    /// `num / den`, rounded once.
    pub fn from_ratio(num: i64, den: i64, ctx: &PrecisionContext) -> Self {
        assert!(den != 0, "zero denominator");
        Real(Float::with_val(ctx.bits, Rational::from((num, den))))
    }

    pub fn from_rational(q: &Rational, ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits, q))
    }

    pub fn from_f64(v: f64, ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits, v))
    }

    /// Parses a decimal literal such as `"0.5"`, `"-1e-3"` or `"1/3"`.
    pub fn parse(s: &str, ctx: &PrecisionContext) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = Self::parse(n, ctx)?;
            let d = Self::parse(d, ctx)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            return Ok(n / d);
        }
        let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        Ok(Real(Float::with_val(ctx.bits, parsed)))
    }

    /// `2^k` at the context precision.
    pub fn pow2(k: i32, ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits, 1) << k)
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::fixed(self.prec())
    }

    /// Re-rounds to `bits` of precision. Raising precision is exact.
    pub fn at_prec(&self, bits: u32) -> Self {
        Real(Float::with_val(bits, &self.0))
    }

    /// A constant at this value's precision.
    pub fn like_i64(&self, v: i64) -> Self {
        Real(Float::with_val(self.prec(), v))
    }

    pub fn like_ratio(&self, num: i64, den: i64) -> Self {
        Self::from_ratio(num, den, &self.ctx())
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// -1, 0 or 1. NaN maps to 0.
    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i32) -> Self {
        Real(self.0.clone() << k)
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero or
    /// non-finite values.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() || !self.is_finite() {
            return Err(Error::Domain {
                op: "ln",
                arg: self.to_string(),
            });
        }
        Ok(Real(self.0.clone().ln()))
    }

    /// `ln(1 + x)` without forming `1 + x`.
    pub fn ln_1p(&self) -> Result<Self> {
        if !(self.0 > -1) || !self.is_finite() {
            return Err(Error::Domain {
                op: "ln_1p",
                arg: self.to_string(),
            });
        }
        Ok(Real(self.0.clone().ln_1p()))
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() || !self.is_finite() {
            return Err(Error::Domain {
                op: "sqrt",
                arg: self.to_string(),
            });
        }
        Ok(Real(self.0.clone().sqrt()))
    }

    /// `self^y`. Non-integer exponents require a positive base.
    pub fn pow(&self, y: &Real) -> Result<Self> {
        let integral = y.0.is_integer();
        if !self.is_finite() || !y.is_finite() || (!integral && !self.is_positive()) {
            return Err(Error::Domain {
                op: "pow",
                arg: format!("({self}, {y})"),
            });
        }
        let prec = self.prec().max(y.prec());
        Ok(Real(Float::with_val(prec, (&self.0).pow(&y.0))))
    }

    pub fn powi(&self, k: i32) -> Self {
        Real(Float::with_val(self.prec(), (&self.0).pow(k)))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain {
                op: "recip",
                arg: "0".into(),
            });
        }
        Ok(Real(self.0.clone().recip()))
    }

    pub fn floor(&self) -> Self {
        Real(self.0.clone().floor())
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Scientific decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.0
            .to_string_radix_round(10, Some(digits.max(1)), Round::Nearest)
    }

    /// `digits` significant digits in positional notation when the decimal
    /// exponent lies in `[-6, 20)`, scientific otherwise.
    pub fn to_plain(&self, digits: usize) -> String {
        let sci = self.to_decimal(digits);
        let Some((mant, exp)) = sci.split_once('e') else {
            return sci;
        };
        let exp: i64 = exp.parse().expect("decimal exponent");
        if !(-6..20).contains(&exp) {
            return sci;
        }
        let (sign, mant) = match mant.strip_prefix('-') {
            Some(m) => ("-", m),
            None => ("", mant),
        };
        let digits: String = mant.chars().filter(|c| *c != '.').collect();
        let point = exp + 1;
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else if point as usize >= digits.len() {
            format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
        } else {
            let (a, b) = digits.split_at(point as usize);
            format!("{a}.{b}")
        };
        format!("{sign}{body}")
    }

    /// Decimal rendering faithful to the value's own precision.
    pub fn to_decimal_full(&self) -> String {
        self.to_decimal(self.ctx().decimal_digits())
    }

    /// Decimal digits truncated toward zero after `places` fractional digits,
    /// e.g. `144.2097…` with two places gives `"144.20"`.
    pub fn truncated_fixed(&self, places: usize) -> String {
        let scale = Float::with_val(self.prec() + 64, 10).pow(places as u32);
        let scaled = Float::with_val(self.prec() + 64, &self.0 * &scale).trunc();
        let int = scaled.to_integer().expect("finite value");
        let neg = int < 0;
        let digits = int.abs().to_string();
        let padded = format!("{:0>width$}", digits, width = places + 1);
        let (head, tail) = padded.split_at(padded.len() - places);
        let sign = if neg { "-" } else { "" };
        if places == 0 {
            format!("{sign}{head}")
        } else {
            format!("{sign}{head}.{tail}")
        }
    }
}

/// Serialized as a decimal string of [`SERIAL_DIGITS`] significant digits.
impl Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal(SERIAL_DIGITS))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({}; {} bits)", self.to_decimal(24), self.prec())
    }
}

impl PartialEq<i64> for Real {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for Real {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                let prec = self.prec().max(rhs.prec());
                Real(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                let prec = self.prec().max(rhs.prec());
                Real(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl<'a> $tr<Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                let prec = self.prec().max(rhs.prec());
                Real(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'b Real) -> Real {
                let prec = self.prec().max(rhs.prec());
                Real(Float::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $tr<i64> for Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                let prec = self.prec();
                Real(Float::with_val(prec, &self.0 $op rhs))
            }
        }
        impl<'a> $tr<i64> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                Real(Float::with_val(self.prec(), &self.0 $op rhs))
            }
        }
        impl $tr<Real> for i64 {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                Real(Float::with_val(rhs.prec(), self $op &rhs.0))
            }
        }
        impl<'a> $tr<&'a Real> for i64 {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                Real(Float::with_val(rhs.prec(), self $op &rhs.0))
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);
real_binop!(Div, div, /);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl<'a> Neg for &'a Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0.clone())
    }
}

/// The elementary operations every formula in the crate is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Ln,
    Exp,
    Pow,
    Sqrt,
}

/// Applies an elementary operation at the context precision.
pub fn elementary(op: Elementary, args: &[Real], ctx: &PrecisionContext) -> Result<Real> {
    let arity = if op == Elementary::Pow { 2 } else { 1 };
    if args.len() != arity {
        return Err(Error::Parameter(format!(
            "{op:?} takes {arity} argument(s), got {}",
            args.len()
        )));
    }
    let x = args[0].at_prec(ctx.bits());
    match op {
        Elementary::Ln => x.ln(),
        Elementary::Exp => Ok(x.exp()),
        Elementary::Sqrt => x.sqrt(),
        Elementary::Pow => x.pow(&args[1].at_prec(ctx.bits())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConstant {
    Pi,
    E,
    EulerGamma,
}

impl FromStr for NamedConstant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(Self::Pi),
            "e" => Ok(Self::E),
            "euler_gamma" | "gamma" => Ok(Self::EulerGamma),
            other => Err(Error::UnknownConstant(other.to_string())),
        }
    }
}

pub fn constant(name: NamedConstant, ctx: &PrecisionContext) -> Real {
    let p = ctx.bits();
    match name {
        NamedConstant::Pi => Real(Float::with_val(p, Constant::Pi)),
        NamedConstant::E => Real(Float::with_val(p, 1).exp()),
        NamedConstant::EulerGamma => Real(Float::with_val(p, Constant::Euler)),
    }
}

/// Looks a constant up by its textual name.
pub fn constant_named(name: &str, ctx: &PrecisionContext) -> Result<Real> {
    Ok(constant(name.parse()?, ctx))
}

pub fn pi(ctx: &PrecisionContext) -> Real {
    constant(NamedConstant::Pi, ctx)
}

pub fn euler_gamma(ctx: &PrecisionContext) -> Real {
    constant(NamedConstant::EulerGamma, ctx)
}

pub fn ln2(ctx: &PrecisionContext) -> Real {
    Real(Float::with_val(ctx.bits(), Constant::Log2))
}

/// A computed quantity whose sign is to be certified, together with the
/// magnitude `scale` of the terms that cancelled while computing it.
#[derive(Debug, Clone)]
pub struct Gap {
    pub value: Real,
    pub scale: Real,
}

impl Gap {
    pub fn new(value: Real, scale: Real) -> Self {
        Self {
            value,
            scale: scale.abs(),
        }
    }

    /// A value computed without cancellation: its own magnitude is the scale.
    pub fn direct(value: Real) -> Self {
        let scale = value.abs();
        Self { value, scale }
    }

    /// `lhs - rhs`, scaled by the larger side.
    pub fn difference(lhs: &Real, rhs: &Real) -> Self {
        let value = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs());
        Self { value, scale }
    }

    /// Combines a coarse evaluation (at `coarse_bits`) with a finer one of the
    /// same quantity. The observed disagreement, blown up to a relative
    /// error scale, becomes the cancellation estimate.
    pub fn from_refinement(coarse: &Real, fine: Real, coarse_bits: u32) -> Self {
        let drift = (&fine - coarse).abs().mul_pow2(coarse_bits as i32);
        let scale = drift.max(fine.abs());
        Self { value: fine, scale }
    }

    pub fn negate(self) -> Self {
        Self {
            value: -self.value,
            scale: self.scale,
        }
    }

    /// `2^(6 - bits) * scale`.
    pub fn threshold(&self, bits: u32) -> Real {
        self.scale.mul_pow2(MARGIN_SLACK_BITS - bits as i32)
    }

    /// The sign, if it clears the threshold at `bits`.
    pub fn classify(&self, bits: u32) -> Option<SignVerdict> {
        let thr = self.threshold(bits);
        if !self.value.is_finite() {
            return None;
        }
        if self.value > thr {
            Some(SignVerdict {
                sign: Sign::Positive,
                margin: &self.value - &thr,
                bits,
            })
        } else if self.value < -&thr {
            Some(SignVerdict {
                sign: Sign::Negative,
                margin: self.value.abs() - &thr,
                bits,
            })
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Inconclusive,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            Sign::Inconclusive => Sign::Inconclusive,
        }
    }
}

/// Certified sign of a quantity. For `Positive`, `value > margin > 0`; for
/// `Negative`, `-value > margin > 0`; `Inconclusive` carries `|value|` at the
/// final precision.
#[derive(Debug, Clone)]
pub struct SignVerdict {
    pub sign: Sign,
    pub margin: Real,
    pub bits: u32,
}

impl SignVerdict {
    /// Margin with the sign attached: positive, negative, or zero when
    /// inconclusive.
    pub fn signed_margin(&self) -> Real {
        match self.sign {
            Sign::Positive => self.margin.clone(),
            Sign::Negative => -&self.margin,
            Sign::Inconclusive => Real::zero(&PrecisionContext::fixed(self.margin.prec())),
        }
    }
}

/// Escalates precision geometrically until the recomputed value clears
/// `2^(6 - bits) * scale`, or `max_bits` is exhausted.
pub fn sign_with_margin<F>(ctx: &PrecisionContext, recompute: F) -> Result<SignVerdict>
where
    F: Fn(&PrecisionContext) -> Result<Gap>,
{
    escalate(ctx, None, recompute)
}

/// Like [`sign_with_margin`], reusing an evaluation already done at
/// `ctx.bits()`.
pub fn sign_with_margin_seeded<F>(
    ctx: &PrecisionContext,
    first: Gap,
    recompute: F,
) -> Result<SignVerdict>
where
    F: Fn(&PrecisionContext) -> Result<Gap>,
{
    escalate(ctx, Some(first), recompute)
}

fn escalate<F>(ctx: &PrecisionContext, seed: Option<Gap>, recompute: F) -> Result<SignVerdict>
where
    F: Fn(&PrecisionContext) -> Result<Gap>,
{
    let levels = ctx.levels();
    let mut seed = seed;
    let mut last: Option<(Gap, u32)> = None;
    for bits in levels {
        let gap = match seed.take() {
            Some(g) if bits == ctx.bits() => g,
            _ => recompute(&ctx.at(bits))?,
        };
        if let Some(verdict) = gap.classify(bits) {
            return Ok(verdict);
        }
        last = Some((gap, bits));
    }
    let (gap, bits) = last.expect("at least one precision level");
    Ok(SignVerdict {
        sign: Sign::Inconclusive,
        margin: gap.value.abs(),
        bits,
    })
}

/// Outcome of certifying that a residual vanishes.
#[derive(Debug, Clone)]
pub struct ZeroCertificate {
    pub is_zero: bool,
    /// `|residual|` at the level that decided.
    pub residual: Real,
    pub tolerance: Real,
    pub bits: u32,
}

/// Certifies `|residual| <= 2^(6 - ctx.bits) * scale`, raising the evaluation
/// precision when rounding noise alone exceeds the tolerance.
pub fn certify_zero<F>(ctx: &PrecisionContext, recompute: F) -> Result<ZeroCertificate>
where
    F: Fn(&PrecisionContext) -> Result<Gap>,
{
    let mut last = None;
    for bits in ctx.levels() {
        let gap = recompute(&ctx.at(bits))?;
        let tol = gap.threshold(ctx.bits());
        let residual = gap.value.abs();
        if gap.value.is_finite() && residual <= tol {
            return Ok(ZeroCertificate {
                is_zero: true,
                residual,
                tolerance: tol,
                bits,
            });
        }
        last = Some(ZeroCertificate {
            is_zero: false,
            residual,
            tolerance: tol,
            bits,
        });
    }
    Ok(last.expect("at least one precision level"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn context_constructor() {
        let c = PrecisionContext::new(256, 4096).unwrap();
        assert_eq!((c.bits(), c.max_bits()), (256, 4096));
        let c = PrecisionContext::new(64, 64).unwrap();
        assert_eq!(c.levels(), vec![64]);
        assert!(PrecisionContext::new(0, 256).is_err());
        assert!(PrecisionContext::new(512, 256).is_err());
        assert!(c.with_escalation_factor(1).is_err());
    }

    #[test]
    fn escalation_schedule_ends_at_ceiling() {
        let c = PrecisionContext::new(100, 1000).unwrap();
        assert_eq!(c.levels(), vec![100, 200, 400, 800, 1000]);
        let c = c.with_escalation_factor(3).unwrap();
        assert_eq!(c.levels(), vec![100, 300, 900, 1000]);
    }

    #[test]
    fn elementary_values() {
        let c = ctx();
        let one = Real::one(&c);
        assert!(elementary(Elementary::Ln, &[one], &c).unwrap().is_zero());
        let half = Real::from_ratio(-1, 2, &c);
        let e = elementary(Elementary::Exp, &[half], &c).unwrap();
        assert_eq!(e.to_decimal(10), "6.065306597e-1");
        let l = Real::from_ratio(3, 2, &c).ln().unwrap();
        assert_eq!(l.to_decimal(10), "4.054651081e-1");
        let zero = Real::zero(&c);
        let err = elementary(Elementary::Ln, &[zero], &c).unwrap_err();
        assert!(matches!(err, Error::Domain { op: "ln", .. }));
        let neg = Real::from_i64(-2, &c);
        let half = Real::from_ratio(1, 2, &c);
        assert!(elementary(Elementary::Pow, &[neg.clone(), half], &c).is_err());
        let three = Real::from_i64(3, &c);
        assert_eq!(elementary(Elementary::Pow, &[neg, three], &c).unwrap(), -8);
    }

    #[test]
    fn constants() {
        let c = ctx();
        assert_eq!(constant(NamedConstant::Pi, &c).to_decimal(9), "3.14159265");
        assert_eq!(constant(NamedConstant::E, &c).to_decimal(8), "2.7182818");
        assert_eq!(
            constant_named("euler_gamma", &c).unwrap().to_decimal(10),
            "5.772156649e-1"
        );
        assert!(matches!(
            constant_named("tau", &c),
            Err(Error::UnknownConstant(_))
        ));
    }

    #[test]
    fn sign_of_one_is_positive() {
        let c = ctx();
        let v = sign_with_margin(&c, |l| Ok(Gap::direct(Real::one(l)))).unwrap();
        assert_eq!(v.sign, Sign::Positive);
        assert!(v.margin.is_positive() && v.margin < 1);
    }

    #[test]
    fn true_equality_is_inconclusive() {
        // Omega_1 - (2/sqrt(pi)) * Omega_2^(1/2) = 2 - 2.
        let c = PrecisionContext::new(128, 1024).unwrap();
        let v = sign_with_margin(&c, |l| {
            let p = pi(l);
            let lhs = Real::from_i64(2, l);
            let rhs = Real::from_i64(2, l) / p.sqrt()? * p.sqrt()?;
            Ok(Gap::difference(&lhs, &rhs))
        })
        .unwrap();
        assert_eq!(v.sign, Sign::Inconclusive);
        assert_eq!(v.bits, 1024);
    }

    #[test]
    fn truncated_rendering() {
        let c = ctx();
        let v = Real::parse("144.20976", &c).unwrap();
        assert_eq!(v.truncated_fixed(2), "144.20");
        let v = Real::parse("-1.3430448", &c).unwrap();
        assert_eq!(v.truncated_fixed(2), "-1.34");
        let v = Real::parse("-0.1207", &c).unwrap();
        assert_eq!(v.truncated_fixed(2), "-0.12");
    }

    #[test]
    fn plain_rendering() {
        let c = ctx();
        let r = |s: &str| Real::parse(s, &c).unwrap();
        assert_eq!(r("0.75").sqrt().unwrap().to_plain(10), "0.8660254038");
        assert_eq!(r("-144.20976").to_plain(5), "-144.21");
        assert_eq!(r("123456").to_plain(3), "123000");
        assert_eq!(r("0.00001234").to_plain(3), "0.0000123");
        assert_eq!(r("1e30").to_plain(3), "1.00e30");
        assert_eq!(r("0").to_plain(3), "0");
    }

    #[test]
    fn parse_fraction() {
        let c = ctx();
        let v = Real::parse("1/3", &c).unwrap();
        assert_eq!(v, Real::from_ratio(1, 3, &c));
        assert!(Real::parse("abc", &c).is_err());
    }
}
