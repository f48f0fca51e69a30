//! Limits along geometric schedules, extrapolated in `h = 1/ln x`.

use serde::Serialize;

use crate::ball::{half_lgamma_per_xlogx, ln_volume_nlogn_root, log_ratio_defect};
use crate::error::{Error, Result};
use crate::real::{PrecisionContext, Real};

use super::eval::{constant, of_x, quantity, Band, Bound, Checker, Point};
use super::report::{decimal, CheckReport, SideReport, Verdict};
use super::ClaimCase;

/// Largest exponent `k` of the schedules `2^k` and `10^k`.
pub const SCHEDULE_LEN: u32 = 20;
/// Allowed distance between an extrapolant and its limit.
pub const LIMIT_TOLERANCE: (i64, i64) = (1, 100);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitSequence {
    /// `Ω_n^(1/(n ln n))` along `n = 2^k`, limit `e^(-1/2)`.
    Eq4,
    /// `ln Γ(1+x/2)/(x ln x)` along `x = 2^k`, limit `1/2`.
    Eq3,
    /// `G(x)` along `x = 10^k`, limit `1`.
    Eq13Upper,
}

impl LimitSequence {
    fn base(self) -> i64 {
        match self {
            LimitSequence::Eq13Upper => 10,
            _ => 2,
        }
    }

    /// Raw value at `x`; for `Eq4` the logarithm of the sequence.
    fn raw(self, x: &Real) -> Result<Real> {
        match self {
            LimitSequence::Eq4 => ln_volume_nlogn_root(x),
            LimitSequence::Eq3 => half_lgamma_per_xlogx(x),
            LimitSequence::Eq13Upper => log_ratio_defect(x),
        }
    }

    fn shown(self, v: Real) -> Real {
        match self {
            LimitSequence::Eq4 => v.exp(),
            _ => v,
        }
    }

    pub fn expected(self, ctx: &PrecisionContext) -> Real {
        match self {
            LimitSequence::Eq4 => Real::from_ratio(-1, 2, ctx).exp(),
            LimitSequence::Eq3 => Real::from_ratio(1, 2, ctx),
            LimitSequence::Eq13Upper => Real::one(ctx),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    /// The schedule point, e.g. `2^7`.
    pub point: String,
    pub value: Real,
    /// Linear extrapolation in `h` through this row and the previous one.
    pub level1: Option<Real>,
    /// Quadratic extrapolation through this row and the two previous ones.
    pub level2: Option<Real>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub sequence: LimitSequence,
    pub expected: Real,
    pub extrapolant: Real,
    /// Value at the last schedule point.
    pub tail: Real,
    pub rows: Vec<LimitRow>,
}

impl LimitReport {
    pub fn error(&self) -> Real {
        (&self.extrapolant - &self.expected).abs()
    }
}

/// Neville extrapolation to `h = 0` of `(h_i, f_i)`, two levels.
fn richardson(h: &[Real], f: &[Real]) -> (Vec<Option<Real>>, Vec<Option<Real>>) {
    let n = f.len();
    let mut l1: Vec<Option<Real>> = vec![None; n];
    let mut l2: Vec<Option<Real>> = vec![None; n];
    for i in 1..n {
        l1[i] = Some((&h[i - 1] * &f[i] - &h[i] * &f[i - 1]) / (&h[i - 1] - &h[i]));
    }
    for i in 2..n {
        let (a, b) = (l1[i - 1].as_ref().unwrap(), l1[i].as_ref().unwrap());
        l2[i] = Some((&h[i - 2] * b - &h[i] * a) / (&h[i - 2] - &h[i]));
    }
    (l1, l2)
}

/// Evaluates `seq` along its schedule and extrapolates in `1/ln x`.
pub fn extrapolate_limit(seq: LimitSequence, ctx: &PrecisionContext) -> Result<LimitReport> {
    let base = seq.base();
    let mut h = Vec::new();
    let mut f = Vec::new();
    for k in 1..=SCHEDULE_LEN {
        let x = Real::from_i64(base, ctx).powi(k as i32);
        h.push(x.ln()?.recip()?);
        f.push(seq.raw(&x)?);
    }
    let (l1, l2) = richardson(&h, &f);
    let last = l2
        .last()
        .cloned()
        .flatten()
        .ok_or_else(|| Error::Parameter("schedule too short".into()))?;
    let rows = (0..f.len())
        .map(|i| LimitRow {
            point: format!("{base}^{}", i + 1),
            value: seq.shown(f[i].clone()),
            level1: l1[i].clone().map(|v| seq.shown(v)),
            level2: l2[i].clone().map(|v| seq.shown(v)),
        })
        .collect();
    Ok(LimitReport {
        sequence: seq,
        expected: seq.expected(ctx),
        extrapolant: seq.shown(last),
        tail: seq.shown(f.last().expect("non-empty schedule").clone()),
        rows,
    })
}

fn within_tolerance(label: &str, rep: &LimitReport, ctx: &PrecisionContext) -> SideReport {
    let tol = Real::from_ratio(LIMIT_TOLERANCE.0, LIMIT_TOLERANCE.1, ctx);
    let margin = &tol - rep.error();
    let verdict = if margin.is_positive() {
        Verdict::Verified
    } else {
        Verdict::Counterexample
    };
    SideReport {
        label: label.to_string(),
        strict: true,
        verdict,
        min_margin: Some(decimal(&margin)),
        witness: None,
        points: rep.rows.len(),
        equality_points: Vec::new(),
        inconclusive_points: 0,
        detail: Some(format!(
            "extrapolant {}, limit {}, tail {}",
            decimal(&rep.extrapolant),
            decimal(&rep.expected),
            decimal(&rep.tail)
        )),
        signed_margin: Some(margin),
    }
}

fn schedule(base: i64, sign: i32, ctx: &PrecisionContext) -> Vec<Real> {
    (1..=SCHEDULE_LEN as i32)
        .map(|k| Real::from_i64(base, ctx).powi(sign * k))
        .collect()
}

fn pairs(xs: &[Real]) -> Vec<Point> {
    xs.windows(2).map(|w| Point::Tuple(w.to_vec())).collect()
}

pub(super) fn run(ch: &Checker, case: &ClaimCase) -> Result<CheckReport> {
    let ctx = ch.ctx();
    let (seq, label) = match case.id {
        "EQ4_LIMIT" => (LimitSequence::Eq4, "extrapolant within 1e-2 of e^(-1/2)"),
        "EQ3_LIMIT" => (LimitSequence::Eq3, "extrapolant within 1e-2 of 1/2"),
        _ => (LimitSequence::Eq13Upper, "extrapolant at ∞ within 1e-2 of 1"),
    };
    let rep = extrapolate_limit(seq, ctx)?;
    let mut sides = vec![within_tolerance(label, &rep, ctx)];
    let mut bits = ctx.bits();
    let mut bands = Vec::new();
    match seq {
        LimitSequence::Eq3 => bands.push(
            Band::new("values below 1/2 along x = 2^k", reals(schedule(2, 1, ctx)), of_x(|x, _| half_lgamma_per_xlogx(x)))
                .below(Bound::strict(constant(1, 2))),
        ),
        LimitSequence::Eq13Upper => {
            let up = schedule(10, 1, ctx);
            let down = schedule(10, -1, ctx);
            let g = of_x(|x, _| log_ratio_defect(x));
            let step = quantity(|p, e| {
                let t = p.tuple();
                Ok(log_ratio_defect(&e.real(&t[1]))? - log_ratio_defect(&e.real(&t[0]))?)
            });
            bands.push(
                Band::new("G < 1 along x = 10^k", reals(up.clone()), g.clone())
                    .below(Bound::strict(constant(1, 1))),
            );
            bands.push(Band::new("1 - G shrinking along x = 10^k", pairs(&up), step.clone()).positive());
            bands.push(Band::new("G decreasing along x = 10^-k", pairs(&down), step).negative());
            bands.push(
                Band::new("G(10^-20) < -1000", vec![Point::Real(down.last().expect("schedule").clone())], g)
                    .below(Bound::strict(constant(-1000, 1))),
            );
        }
        LimitSequence::Eq4 => {}
    }
    for b in &bands {
        let (s, used) = ch.check_band(b)?;
        sides.extend(s);
        bits = bits.max(used);
    }
    let mut r = CheckReport::from_sides(case.id, case.statement, case.anchor, false, sides, bits);
    r.value = Some(decimal(&rep.extrapolant));
    r.notes.push(format!(
        "schedule {}^k, k = 1..={SCHEDULE_LEN}; two-level Richardson extrapolation in 1/ln x",
        seq.base()
    ));
    Ok(r)
}

fn reals(xs: Vec<Real>) -> Vec<Point> {
    xs.into_iter().map(Point::Real).collect()
}
