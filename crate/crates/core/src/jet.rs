//! Truncated Taylor expansions ("jets") of univariate functions.
//!
//! A jet of order `K` at `base` holds `c_0..c_K`, the Taylor coefficients of
//! `f(base + h)`. Arithmetic uses Cauchy products and the usual recurrences
//! for `ln`, `exp` and real powers; `ln Γ` and its derivatives are composed
//! from the exact derivative sequence supplied by [`crate::gamma`].
//!
//! Operators on jets panic on a base/order mismatch, which can only arise
//! from mixing jets built at different points. [`jet_arith`] and [`jet_fn`]
//! are the checked entry points.

use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Integer;

use crate::error::{Error, Result};
use crate::gamma::log_gamma_derivatives;
use crate::real::{PrecisionContext, Real};

pub const MAX_ORDER: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    base: Real,
    coeffs: Vec<Real>,
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

fn factorial_real(m: usize, prec: u32) -> Real {
    Real::from_rational(
        &Integer::from(Integer::factorial(m as u32)).into(),
        &PrecisionContext::fixed(prec),
    )
}

impl Jet {
    /// The identity function at `x`: coefficients `(x, 1, 0, …, 0)`.
    pub fn var(x: &Real, order: usize) -> Result<Self> {
        check_order(order)?;
        let mut coeffs = vec![x.like_i64(0); order + 1];
        coeffs[0] = x.clone();
        if order >= 1 {
            coeffs[1] = x.like_i64(1);
        }
        Ok(Self {
            base: x.clone(),
            coeffs,
        })
    }

    pub fn constant(value: &Real, base: &Real, order: usize) -> Result<Self> {
        check_order(order)?;
        let mut coeffs = vec![value.like_i64(0); order + 1];
        coeffs[0] = value.clone();
        Ok(Self {
            base: base.clone(),
            coeffs,
        })
    }

    /// Builds a jet from raw coefficients.
    pub fn from_coeffs(base: &Real, coeffs: Vec<Real>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::JetMismatch("empty coefficient list".into()));
        }
        check_order(coeffs.len() - 1)?;
        Ok(Self {
            base: base.clone(),
            coeffs,
        })
    }

    pub fn base(&self) -> &Real {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn value(&self) -> &Real {
        &self.coeffs[0]
    }

    /// `m`-th derivative of the represented function at the base point.
    pub fn derivative(&self, m: usize) -> Result<Real> {
        if m > self.order() {
            return Err(Error::OrderOutOfRange {
                order: m,
                max: self.order(),
            });
        }
        Ok(&self.coeffs[m] * factorial_real(m, self.coeffs[m].prec()))
    }

    /// All derivatives `f, f', …, f^(K)`.
    pub fn derivatives(&self) -> Vec<Real> {
        (0..=self.order())
            .map(|m| self.derivative(m).expect("m within order"))
            .collect()
    }

    fn compatible(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::JetMismatch(format!(
                "orders {} and {}",
                self.order(),
                other.order()
            )));
        }
        if self.base != other.base {
            return Err(Error::JetMismatch(format!(
                "bases {} and {}",
                self.base, other.base
            )));
        }
        Ok(())
    }

    fn map_coeffs(&self, f: impl Fn(&Real) -> Real) -> Jet {
        Jet {
            base: self.base.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Jet, f: impl Fn(&Real, &Real) -> Real) -> Jet {
        self.compatible(other).expect("jets from the same point");
        Jet {
            base: self.base.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    fn cauchy(&self, other: &Jet) -> Jet {
        self.compatible(other).expect("jets from the same point");
        let k = self.order();
        let coeffs = (0..=k)
            .map(|n| {
                let mut s = &self.coeffs[0] * &other.coeffs[n];
                for j in 1..=n {
                    s = s + &self.coeffs[j] * &other.coeffs[n - j];
                }
                s
            })
            .collect();
        Jet {
            base: self.base.clone(),
            coeffs,
        }
    }

    fn quotient(&self, other: &Jet) -> Jet {
        self.compatible(other).expect("jets from the same point");
        let k = self.order();
        let b0 = &other.coeffs[0];
        let mut c: Vec<Real> = Vec::with_capacity(k + 1);
        for n in 0..=k {
            let mut s = self.coeffs[n].clone();
            for j in 1..=n {
                s = s - &other.coeffs[j] * &c[n - j];
            }
            c.push(s / b0);
        }
        Jet {
            base: self.base.clone(),
            coeffs: c,
        }
    }

    /// `ln` with the constant term supplied, so `ln` and `ln(1 + ·)` share
    /// the recurrence `b_n = (a_n - (1/n) Σ k b_k a_{n-k}) / a_0`.
    fn log_with(&self, b0: Real, a: &[Real]) -> Jet {
        let k = self.order();
        let mut b = Vec::with_capacity(k + 1);
        b.push(b0);
        for n in 1..=k {
            let mut s = a[0].like_i64(0);
            for j in 1..n {
                s = s + (&b[j] * &a[n - j]) * j as i64;
            }
            b.push((&a[n] - s / n as i64) / &a[0]);
        }
        Jet {
            base: self.base.clone(),
            coeffs: b,
        }
    }

    pub fn ln(&self) -> Result<Jet> {
        let b0 = self.coeffs[0].ln()?;
        Ok(self.log_with(b0, &self.coeffs))
    }

    pub fn ln_1p(&self) -> Result<Jet> {
        let b0 = self.coeffs[0].ln_1p()?;
        let mut a = self.coeffs.clone();
        a[0] = &a[0] + 1;
        Ok(self.log_with(b0, &a))
    }

    pub fn exp(&self) -> Jet {
        let k = self.order();
        let a = &self.coeffs;
        let mut b = Vec::with_capacity(k + 1);
        b.push(a[0].exp());
        for n in 1..=k {
            let mut s = a[0].like_i64(0);
            for j in 1..=n {
                s = s + (&a[j] * &b[n - j]) * j as i64;
            }
            b.push(s / n as i64);
        }
        Jet {
            base: self.base.clone(),
            coeffs: b,
        }
    }

    /// `self^r` for a real constant `r`; requires a positive constant term
    /// unless `r` is a non-negative integer.
    pub fn pow_const(&self, r: &Real) -> Result<Jet> {
        let a = &self.coeffs;
        let k = self.order();
        let p0 = a[0].pow(r)?;
        if a[0].is_zero() {
            if r.is_integer() && !r.is_negative() {
                let n = r.to_f64() as u32;
                let mut out = Jet::constant(&a[0].like_i64(1), &self.base, k)?;
                for _ in 0..n {
                    out = out.cauchy(self);
                }
                return Ok(out);
            }
            return Err(Error::Domain {
                op: "pow",
                arg: format!("(0, {r})"),
            });
        }
        let mut p = Vec::with_capacity(k + 1);
        p.push(p0);
        let r1 = r + 1;
        for n in 1..=k {
            let mut s = a[0].like_i64(0);
            for j in 1..=n {
                let w = &r1 * j as i64 - n as i64;
                s = s + w * &a[j] * &p[n - j];
            }
            p.push(s / (&a[0] * n as i64));
        }
        Ok(Jet {
            base: self.base.clone(),
            coeffs: p,
        })
    }

    pub fn recip(&self) -> Result<Jet> {
        if self.coeffs[0].is_zero() {
            return Err(Error::JetDivisionByZero);
        }
        let one = Jet::constant(&self.coeffs[0].like_i64(1), &self.base, self.order())?;
        Ok(one.quotient(self))
    }

    /// `f ∘ self`, where `derivs[m]` is the `m`-th derivative of `f` at the
    /// constant term of `self` (at least `order + 1` entries).
    pub fn compose(&self, derivs: &[Real]) -> Result<Jet> {
        let k = self.order();
        if derivs.len() < k + 1 {
            return Err(Error::JetMismatch(format!(
                "composition of order {k} needs {} derivatives, got {}",
                k + 1,
                derivs.len()
            )));
        }
        let mut delta = self.clone();
        delta.coeffs[0] = delta.coeffs[0].like_i64(0);
        let prec = self.coeffs[0].prec();
        let mut out = Jet::constant(&derivs[0].at_prec(prec), &self.base, k)?;
        let mut power = Jet::constant(&self.coeffs[0].like_i64(1), &self.base, k)?;
        for (m, d) in derivs.iter().enumerate().take(k + 1).skip(1) {
            power = power.cauchy(&delta);
            let c = d / factorial_real(m, prec);
            out = out + power.clone() * c;
        }
        Ok(out)
    }

    /// `(d/dx)^m ln Γ` composed with `self`: `m = 0` gives `ln Γ`, `m = 1`
    /// gives `ψ`, and so on.
    pub fn log_gamma_family(&self, m: usize) -> Result<Jet> {
        let a0 = &self.coeffs[0];
        let ctx = PrecisionContext::fixed(a0.prec());
        let all = log_gamma_derivatives(a0, m + self.order() + 1, &ctx)?;
        self.compose(&all[m..])
    }
}

/// `f^(m)(x)`, with `f` written against jets.
pub fn derivative_at<F>(f: F, x: &Real, m: usize) -> Result<Real>
where
    F: Fn(&Jet) -> Result<Jet>,
{
    f(&Jet::var(x, m)?)?.derivative(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary jet arithmetic.
pub fn jet_arith(op: JetOp, a: &Jet, b: &Jet) -> Result<Jet> {
    a.compatible(b)?;
    Ok(match op {
        JetOp::Add => a.zip(b, |x, y| x + y),
        JetOp::Sub => a.zip(b, |x, y| x - y),
        JetOp::Mul => a.cauchy(b),
        JetOp::Div => {
            if b.coeffs[0].is_zero() {
                return Err(Error::JetDivisionByZero);
            }
            a.quotient(b)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum JetFn {
    Ln,
    Exp,
    PowConst(Real),
}

/// Checked elementary function of a jet.
pub fn jet_fn(f: &JetFn, a: &Jet) -> Result<Jet> {
    match f {
        JetFn::Ln => a.ln(),
        JetFn::Exp => Ok(a.exp()),
        JetFn::PowConst(r) => a.pow_const(r),
    }
}

/// `ln Γ` composed with `a`.
pub fn jet_lgamma(a: &Jet) -> Result<Jet> {
    if !a.value().is_positive() {
        return Err(Error::Domain {
            op: "lgamma",
            arg: a.value().to_string(),
        });
    }
    a.log_gamma_family(0)
}

macro_rules! jet_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &'a Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(&self, rhs)
            }
        }
        impl<'a> $tr<&'a Jet> for &'a Jet {
            type Output = Jet;
            fn $method(self, rhs: &'a Jet) -> Jet {
                let f: fn(&Jet, &Jet) -> Jet = $body;
                f(self, rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a, b| a.zip(b, |x, y| x + y));
jet_binop!(Sub, sub, |a, b| a.zip(b, |x, y| x - y));
jet_binop!(Mul, mul, |a, b| a.cauchy(b));
jet_binop!(Div, div, |a, b| a.quotient(b));

impl Add<i64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: i64) -> Jet {
        self.coeffs[0] = &self.coeffs[0] + rhs;
        self
    }
}

impl Sub<i64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: i64) -> Jet {
        self.coeffs[0] = &self.coeffs[0] - rhs;
        self
    }
}

impl Mul<i64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: i64) -> Jet {
        self.map_coeffs(|c| c * rhs)
    }
}

impl Div<i64> for Jet {
    type Output = Jet;
    fn div(self, rhs: i64) -> Jet {
        self.map_coeffs(|c| c / rhs)
    }
}

impl Add<Real> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Real) -> Jet {
        self.coeffs[0] = &self.coeffs[0] + rhs;
        self
    }
}

impl Sub<Real> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Real) -> Jet {
        self.coeffs[0] = &self.coeffs[0] - rhs;
        self
    }
}

impl Mul<Real> for Jet {
    type Output = Jet;
    fn mul(self, rhs: Real) -> Jet {
        self.map_coeffs(|c| c * &rhs)
    }
}

impl Div<Real> for Jet {
    type Output = Jet;
    fn div(self, rhs: Real) -> Jet {
        self.map_coeffs(|c| c / &rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map_coeffs(|c| -c)
    }
}

/// Number types the named functions are written against: plain reals for
/// values, jets for derivatives.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<i64, Output = Self>
    + Sub<i64, Output = Self>
    + Mul<i64, Output = Self>
    + Div<i64, Output = Self>
    + Add<Real, Output = Self>
    + Sub<Real, Output = Self>
    + Mul<Real, Output = Self>
    + Div<Real, Output = Self>
{
    /// The function value (constant term).
    fn value(&self) -> &Real;
    /// A constant with the same shape as `self`.
    fn lift(&self, c: Real) -> Self;
    fn ln(&self) -> Result<Self>;
    fn ln_1p(&self) -> Result<Self>;
    fn exp(&self) -> Self;
    fn pow_real(&self, r: &Real) -> Result<Self>;
    fn recip(&self) -> Result<Self>;
    /// `m`-th derivative of `ln Γ`, evaluated at `self`.
    fn log_gamma_family(&self, m: usize) -> Result<Self>;

    fn lift_i64(&self, v: i64) -> Self {
        self.lift(self.value().like_i64(v))
    }

    fn lgamma(&self) -> Result<Self> {
        self.log_gamma_family(0)
    }

    fn digamma(&self) -> Result<Self> {
        self.log_gamma_family(1)
    }

    fn prec(&self) -> u32 {
        self.value().prec()
    }
}

impl Scalar for Real {
    fn value(&self) -> &Real {
        self
    }

    fn lift(&self, c: Real) -> Self {
        c
    }

    fn ln(&self) -> Result<Self> {
        Real::ln(self)
    }

    fn ln_1p(&self) -> Result<Self> {
        Real::ln_1p(self)
    }

    fn exp(&self) -> Self {
        Real::exp(self)
    }

    fn pow_real(&self, r: &Real) -> Result<Self> {
        self.pow(r)
    }

    fn recip(&self) -> Result<Self> {
        Real::recip(self)
    }

    fn log_gamma_family(&self, m: usize) -> Result<Self> {
        let ctx = PrecisionContext::fixed(self.prec());
        Ok(log_gamma_derivatives(self, m + 1, &ctx)?.swap_remove(m))
    }
}

impl Scalar for Jet {
    fn value(&self) -> &Real {
        &self.coeffs[0]
    }

    fn lift(&self, c: Real) -> Self {
        Jet::constant(&c, &self.base, self.order()).expect("order already validated")
    }

    fn ln(&self) -> Result<Self> {
        Jet::ln(self)
    }

    fn ln_1p(&self) -> Result<Self> {
        Jet::ln_1p(self)
    }

    fn exp(&self) -> Self {
        Jet::exp(self)
    }

    fn pow_real(&self, r: &Real) -> Result<Self> {
        self.pow_const(r)
    }

    fn recip(&self) -> Result<Self> {
        Jet::recip(self)
    }

    fn log_gamma_family(&self, m: usize) -> Result<Self> {
        Jet::log_gamma_family(self, m)
    }
}
