//! Derivative-sign scans: a theorem on AQ and the conjectured patterns for
//! F_a, 1 - G and ln Q.

use std::fmt;

use crate::ball::{lgamma_over_xlog_ax, lgamma_over_xlogx, ln_root_volume, log_ratio_defect, FaParams};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, GridSummary};
use crate::jet::{Jet, MAX_ORDER};
use crate::real::{Gap, PrecisionContext, Real, Sign};

use super::cases::{exclude_near, exclusion_note, grid_of};
use super::eval::{Checker, Point, SideAcc, REFINE_BITS};
use super::report::{CheckReport, SideReport};
use super::{default_function_grid, ClaimCase, Overrides};

/// Highest order scanned without opt-in.
pub const DEFAULT_SCAN_ORDER: usize = 8;
/// Ceiling for opted-in scans.
pub const OPT_IN_SCAN_ORDER: usize = MAX_ORDER;

#[derive(Debug, Clone, PartialEq)]
pub enum ScanFunction {
    /// `ln Γ(x+1)/(x ln x)`.
    Aq,
    /// `ln Γ(x+1)/(x ln ax)`.
    Fa(Real),
    G,
    OneMinusG,
    LnQ,
}

impl fmt::Display for ScanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanFunction::Aq => f.write_str("AQ"),
            ScanFunction::Fa(a) => write!(f, "F_a (a = {})", a.to_plain(10)),
            ScanFunction::G => f.write_str("G"),
            ScanFunction::OneMinusG => f.write_str("1 - G"),
            ScanFunction::LnQ => f.write_str("ln Q"),
        }
    }
}

impl ScanFunction {
    fn eval(&self, x: &Jet) -> Result<Jet> {
        match self {
            ScanFunction::Aq => lgamma_over_xlogx(x),
            ScanFunction::Fa(a) => lgamma_over_xlog_ax(&FaParams::new(a.at_prec(x.base().prec()))?, x),
            ScanFunction::G => log_ratio_defect(x),
            ScanFunction::OneMinusG => Ok(-log_ratio_defect(x)? + 1),
            ScanFunction::LnQ => ln_root_volume(x),
        }
    }

    fn first_order(&self) -> usize {
        match self {
            ScanFunction::OneMinusG => 0,
            _ => 1,
        }
    }

    /// `(-1)^(m-1)` for AQ, F_a and G; `(-1)^m` for 1 - G and ln Q.
    pub fn expected_sign(&self, m: usize) -> Sign {
        let alternating_from_odd = matches!(self, ScanFunction::Aq | ScanFunction::Fa(_) | ScanFunction::G);
        let positive = if alternating_from_odd { m % 2 == 1 } else { m % 2 == 0 };
        if positive {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn pattern(&self, m: usize) -> String {
        let s = if self.expected_sign(m) == Sign::Positive { ">" } else { "<" };
        format!("order {m}: [{self}]^({m}) {s} 0")
    }

    /// Left end of the domain (exclusive) and interior singular points.
    fn domain(&self, ctx: &PrecisionContext) -> (Real, Vec<Real>) {
        match self {
            ScanFunction::Aq => (Real::zero(ctx), vec![Real::one(ctx)]),
            ScanFunction::Fa(a) => {
                let inv = a.at_prec(ctx.bits()).recip().expect("a > 1");
                (inv.clone(), vec![inv])
            }
            ScanFunction::G | ScanFunction::OneMinusG => (Real::zero(ctx), vec![]),
            ScanFunction::LnQ => (Real::from_i64(-2, ctx), vec![Real::zero(ctx)]),
        }
    }

    fn is_conjecture(&self) -> bool {
        !matches!(self, ScanFunction::Aq)
    }
}

fn check_order(max_order: usize, allow_high: bool) -> Result<()> {
    if max_order > OPT_IN_SCAN_ORDER {
        return Err(Error::OrderOutOfRange {
            order: max_order,
            max: OPT_IN_SCAN_ORDER,
        });
    }
    if max_order > DEFAULT_SCAN_ORDER && !allow_high {
        return Err(Error::Parameter(format!(
            "order {max_order} exceeds {DEFAULT_SCAN_ORDER}; orders up to {OPT_IN_SCAN_ORDER} need explicit opt-in"
        )));
    }
    Ok(())
}

/// Grid points inside the domain of `f`, away from its singular points.
fn admissible(f: &ScanFunction, xs: Vec<Real>, ctx: &PrecisionContext) -> (Vec<Real>, Vec<String>) {
    let (left, singular) = f.domain(ctx);
    let before = xs.len();
    let inside: Vec<Real> = xs.into_iter().filter(|x| *x > left).collect();
    let mut notes = Vec::new();
    if inside.len() < before {
        notes.push(format!(
            "{}: {} grid point(s) at or below x = {} outside the domain",
            f,
            before - inside.len(),
            left.to_plain(10)
        ));
    }
    if singular.is_empty() {
        return (inside, notes);
    }
    let (keep, dropped) = exclude_near(inside, &singular, ctx);
    notes.push(format!("{f}: {}", exclusion_note(&singular, &dropped, ctx)));
    (keep, notes)
}

/// One side per order `first..=max_order`, from one jet per point.
fn scan_sides(
    ch: &Checker,
    f: &ScanFunction,
    max_order: usize,
    xs: &[Real],
    prefix: &str,
) -> Result<(Vec<SideReport>, u32)> {
    let ctx = ch.ctx();
    let p = ctx.bits();
    let first = f.first_order();
    let mut accs: Vec<SideAcc> = (first..=max_order)
        .map(|m| SideAcc::new(format!("{prefix}{}", f.pattern(m)), true))
        .collect();
    let signed = |jet: &Jet, m: usize| -> Result<Real> {
        let d = jet.derivative(m)?;
        Ok(if f.expected_sign(m) == Sign::Positive { d } else { -d })
    };
    let mut bits_used = p;
    for x in xs {
        let coarse = f.eval(&Jet::var(&x.at_prec(p), max_order)?)?;
        let fine = f.eval(&Jet::var(&x.at_prec(p + REFINE_BITS), max_order)?)?;
        for (i, m) in (first..=max_order).enumerate() {
            let seed = Gap::from_refinement(&signed(&coarse, m)?, signed(&fine, m)?, p);
            let recompute = |c: &PrecisionContext| -> Result<Gap> {
                let lo = f.eval(&Jet::var(&x.at_prec(c.bits()), max_order)?)?;
                let hi = f.eval(&Jet::var(&x.at_prec(c.bits() + REFINE_BITS), max_order)?)?;
                Ok(Gap::from_refinement(&signed(&lo, m)?, signed(&hi, m)?, c.bits()))
            };
            let (outcome, bits) = ch.classify(seed, recompute, false)?;
            bits_used = bits_used.max(bits);
            accs[i].record(&Point::Real(x.clone()), outcome);
        }
    }
    Ok((accs.into_iter().map(SideAcc::finish).collect(), bits_used))
}

/// Per-order reports of the sign pattern of `f` on `grid`.
pub fn scan_derivative_signs(
    f: &ScanFunction,
    max_order: usize,
    grid: &GridSpec,
    ctx: &PrecisionContext,
) -> Result<Vec<CheckReport>> {
    check_order(max_order, true)?;
    let ch = Checker::new(ctx.clone());
    let (xs, notes) = admissible(f, grid.at(ctx).points(), ctx);
    let (sides, bits) = scan_sides(&ch, f, max_order, &xs, "")?;
    let first = f.first_order();
    Ok(sides
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let label = s.label.clone();
            let mut r = CheckReport::from_sides(
                &format!("SCAN {f}"),
                &label,
                "derivative-sign scan",
                f.is_conjecture(),
                vec![s],
                bits,
            );
            r.order = Some(first + i);
            r.grid = Some(grid.summary());
            r.notes = notes.clone();
            r
        })
        .collect())
}

/// Functions scanned by a registry claim.
fn targets(id: &str, ctx: &PrecisionContext) -> Vec<ScanFunction> {
    match id {
        "EQ6_AQ_SIGNS" => vec![ScanFunction::Aq],
        "CONJ_FA_SIGNS" => vec![
            ScanFunction::Fa(Real::from_i64(2, ctx)),
            ScanFunction::Fa(Real::one(ctx).exp()),
            ScanFunction::Fa(Real::from_i64(10, ctx)),
        ],
        "CONJ_CM_1_MINUS_G" => vec![ScanFunction::OneMinusG],
        "Q_LCM_SCAN" => vec![ScanFunction::LnQ],
        _ => vec![],
    }
}

/// Points scanned for a claim: the override grid, else the default grid,
/// plus the negative half of the domain of ln Q.
fn claim_points(case: &ClaimCase, ov: &Overrides, ctx: &PrecisionContext) -> Result<(Vec<Real>, GridSummary, Vec<String>)> {
    let g = grid_of(case, ov, ctx).unwrap_or_else(|_| default_function_grid(ctx));
    let mut xs = g.points();
    let mut notes = Vec::new();
    if case.id == "Q_LCM_SCAN" && ov.grid.is_none() {
        let neg = GridSpec::linear(
            Real::from_ratio(-199, 100, ctx),
            Real::from_ratio(-1, 100, ctx),
            199,
        )?;
        let mut all = neg.points();
        all.extend(xs);
        xs = all;
        notes.push("plus the linear grid [-1.99, -0.01], 199 points".to_string());
    }
    Ok((xs, g.summary(), notes))
}

/// Scan claims as per-order reports, one per function and order.
pub fn scan_case(id: &str, ctx: &PrecisionContext, ov: &Overrides) -> Result<Vec<CheckReport>> {
    let case = super::lookup(id)?;
    let fs = targets(id, ctx);
    if fs.is_empty() {
        return Err(Error::Parameter(format!("{id} is not a derivative-sign scan")));
    }
    let max_order = ov.max_order.unwrap_or(DEFAULT_SCAN_ORDER);
    check_order(max_order, ov.allow_high_order)?;
    let ch = Checker::new(ctx.clone());
    let (pts, summary, base_notes) = claim_points(&case, ov, ctx)?;
    let mut out = Vec::new();
    for f in &fs {
        let (xs, mut notes) = admissible(f, pts.clone(), ctx);
        notes.splice(0..0, base_notes.iter().cloned());
        let (sides, bits) = scan_sides(&ch, f, max_order, &xs, "")?;
        for (i, s) in sides.into_iter().enumerate() {
            let label = s.label.clone();
            let mut r = CheckReport::from_sides(case.id, &label, case.anchor, case.is_conjecture(), vec![s], bits);
            r.order = Some(f.first_order() + i);
            r.grid = Some(summary.clone());
            r.notes = notes.clone();
            out.push(r);
        }
    }
    Ok(out)
}

pub(super) fn run(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<CheckReport> {
    let ctx = ch.ctx();
    let max_order = ov.max_order.unwrap_or(DEFAULT_SCAN_ORDER);
    check_order(max_order, ov.allow_high_order)?;
    let (pts, summary, mut notes) = claim_points(case, ov, ctx)?;
    let mut sides = Vec::new();
    let mut bits = ctx.bits();
    let fs = targets(case.id, ctx);
    for f in &fs {
        let (xs, n) = admissible(f, pts.clone(), ctx);
        notes.extend(n);
        let prefix = if fs.len() > 1 { format!("{f}, ") } else { String::new() };
        let (s, b) = scan_sides(ch, f, max_order, &xs, &prefix)?;
        sides.extend(s);
        bits = bits.max(b);
    }
    let mut r = CheckReport::from_sides(case.id, case.statement, case.anchor, case.is_conjecture(), sides, bits);
    r.grid = Some(summary);
    r.notes = notes;
    Ok(r)
}

/// Derivatives `f^(m)(x)`, `m = first..=max_order`, at the working precision.
pub(super) fn derivative_rows(
    case: &ClaimCase,
    ov: &Overrides,
    ctx: &PrecisionContext,
) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let max_order = ov.max_order.unwrap_or(DEFAULT_SCAN_ORDER);
    check_order(max_order, ov.allow_high_order)?;
    let (pts, _, _) = claim_points(case, ov, ctx)?;
    let fs = targets(case.id, ctx);
    let mut columns = vec!["function".to_string(), "point".to_string()];
    let first = fs.iter().map(ScanFunction::first_order).min().unwrap_or(1);
    columns.extend((first..=max_order).map(|m| format!("order {m}")));
    let mut rows = Vec::new();
    for f in &fs {
        let (xs, _) = admissible(f, pts.clone(), ctx);
        for x in xs {
            let jet = f.eval(&Jet::var(&x, max_order)?)?;
            let mut row = vec![f.to_string(), x.to_plain(10)];
            for m in first..=max_order {
                row.push(if m < f.first_order() {
                    String::new()
                } else {
                    jet.derivative(m)?.to_plain(10)
                });
            }
            rows.push(row);
        }
    }
    Ok((columns, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::claims::Verdict;

    #[test]
    fn order_ceiling() {
        assert!(check_order(8, false).is_ok());
        assert!(check_order(9, false).is_err());
        assert!(check_order(16, true).is_ok());
        assert!(matches!(check_order(20, true), Err(Error::OrderOutOfRange { order: 20, .. })));
    }

    #[test]
    fn sign_patterns() {
        assert_eq!(ScanFunction::Aq.expected_sign(1), Sign::Positive);
        assert_eq!(ScanFunction::Aq.expected_sign(2), Sign::Negative);
        assert_eq!(ScanFunction::LnQ.expected_sign(1), Sign::Negative);
        assert_eq!(ScanFunction::OneMinusG.expected_sign(0), Sign::Positive);
    }

    #[test]
    fn aq_first_order_positive() {
        let ctx = PrecisionContext::default();
        let g = GridSpec::log(Real::from_ratio(1, 10, &ctx), Real::from_i64(100, &ctx), 24).unwrap();
        let reps = scan_derivative_signs(&ScanFunction::Aq, 1, &g, &ctx).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].verdict, Verdict::Verified);
        assert_eq!(reps[0].order, Some(1));
    }

    #[test]
    fn fa_third_order_on_conjectured_side() {
        let ctx = PrecisionContext::default();
        let f = ScanFunction::Fa(Real::from_i64(2, &ctx));
        let g = GridSpec::log(Real::from_ratio(1, 100, &ctx), Real::from_i64(50, &ctx), 16).unwrap();
        let reps = scan_derivative_signs(&f, 3, &g, &ctx).unwrap();
        assert!(reps.iter().all(|r| r.verdict == Verdict::ConsistentWith));
        assert!(reps[0].notes.iter().any(|n| n.contains("outside the domain")));
    }
}
