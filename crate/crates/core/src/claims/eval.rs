//! Point evaluation and the band checker shared by every inequality claim.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::ball::ln_omega;
use crate::error::{Error, Result};
use crate::real::{
    certify_zero, ln2, pi, sign_with_margin_seeded, Gap, PrecisionContext, Real, Sign,
};

use super::report::{decimal, SideReport, Verdict, Witness};

/// Extra bits of the reference evaluation that estimates rounding drift.
pub const REFINE_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Int(u64),
    Real(Real),
    /// Adjacent grid points, or an `(x, y, t)` sample.
    Tuple(Vec<Real>),
}

impl Point {
    pub fn int(&self) -> i64 {
        match self {
            Point::Int(n) => *n as i64,
            _ => panic!("integer point expected"),
        }
    }

    pub fn real(&self) -> &Real {
        match self {
            Point::Real(x) => x,
            _ => panic!("real point expected"),
        }
    }

    pub fn tuple(&self) -> &[Real] {
        match self {
            Point::Tuple(v) => v,
            _ => panic!("tuple point expected"),
        }
    }

    pub fn witness(&self) -> Witness {
        match self {
            Point::Int(n) => Witness::Integer(*n),
            Point::Real(x) => Witness::Decimal(decimal(x)),
            Point::Tuple(v) => Witness::Decimal(format!(
                "({})",
                v.iter().map(decimal).collect::<Vec<_>>().join(", ")
            )),
        }
    }
}

/// Evaluation at a fixed precision, optionally backed by a precomputed
/// table of `ln Ω(n)`.
pub struct Eval<'a> {
    pub bits: u32,
    table: Option<&'a [Real]>,
}

impl<'a> Eval<'a> {
    pub fn at(bits: u32) -> Eval<'static> {
        Eval { bits, table: None }
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::fixed(self.bits)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(v, &self.ctx())
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        Real::from_ratio(num, den, &self.ctx())
    }

    pub fn real(&self, x: &Real) -> Real {
        x.at_prec(self.bits)
    }

    pub fn ln_pi(&self) -> Real {
        pi(&self.ctx()).ln().expect("pi > 0")
    }

    pub fn ln2(&self) -> Real {
        ln2(&self.ctx())
    }

    /// `ln(num/den)`.
    pub fn ln_ratio(&self, num: i64, den: i64) -> Result<Real> {
        self.ratio(num, den).ln()
    }

    /// `ln Ω_n`.
    pub fn lo(&self, n: i64) -> Result<Real> {
        if let Some(t) = self.table {
            if n >= 1 && ((n - 1) as usize) < t.len() {
                return Ok(t[(n - 1) as usize].clone());
            }
        }
        ln_omega(&self.int(n))
    }

    /// `ln Ω_n^(1/n)`.
    pub fn lq(&self, n: i64) -> Result<Real> {
        Ok(self.lo(n)? / n)
    }

    /// `ln Ω_n^(1/(n ln n))`.
    pub fn s(&self, n: i64) -> Result<Real> {
        Ok(self.lo(n)? / (self.int(n).ln()? * n))
    }
}

pub type Quantity = Rc<dyn Fn(&Point, &Eval) -> Result<Real>>;

pub fn quantity<F>(f: F) -> Quantity
where
    F: Fn(&Point, &Eval) -> Result<Real> + 'static,
{
    Rc::new(f)
}

/// A quantity of the dimension `n`.
pub fn of_n<F>(f: F) -> Quantity
where
    F: Fn(i64, &Eval) -> Result<Real> + 'static,
{
    Rc::new(move |p, e| f(p.int(), e))
}

/// A quantity of a real point, rounded to the evaluation precision.
pub fn of_x<F>(f: F) -> Quantity
where
    F: Fn(&Real, &Eval) -> Result<Real> + 'static,
{
    Rc::new(move |p, e| f(&e.real(p.real()), e))
}

pub fn constant(num: i64, den: i64) -> Quantity {
    Rc::new(move |_, e| Ok(e.ratio(num, den)))
}

#[derive(Clone)]
pub struct Bound {
    pub f: Quantity,
    pub strict: bool,
}

impl Bound {
    pub fn strict(f: Quantity) -> Self {
        Self { f, strict: true }
    }

    pub fn non_strict(f: Quantity) -> Self {
        Self { f, strict: false }
    }
}

/// `lower < value < upper` (either bound optional) at every point.
#[derive(Clone)]
pub struct Band {
    pub label: String,
    pub points: Vec<Point>,
    pub value: Quantity,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    /// Value and bounds are logarithms; tables show them exponentiated.
    pub display_exp: bool,
}

impl Band {
    pub fn new(label: impl Into<String>, points: Vec<Point>, value: Quantity) -> Self {
        Self {
            label: label.into(),
            points,
            value,
            lower: None,
            upper: None,
            display_exp: false,
        }
    }

    pub fn above(mut self, b: Bound) -> Self {
        self.lower = Some(b);
        self
    }

    pub fn below(mut self, b: Bound) -> Self {
        self.upper = Some(b);
        self
    }

    /// `value > 0`.
    pub fn positive(self) -> Self {
        self.above(Bound::strict(constant(0, 1)))
    }

    /// `value < 0`.
    pub fn negative(self) -> Self {
        self.below(Bound::strict(constant(0, 1)))
    }

    pub fn exp_display(mut self) -> Self {
        self.display_exp = true;
        self
    }

    fn side_label(&self, upper: bool) -> String {
        let has_both = self.lower.is_some() && self.upper.is_some();
        match (has_both, upper) {
            (true, false) => format!("{} (lower)", self.label),
            (true, true) => format!("{} (upper)", self.label),
            _ => self.label.clone(),
        }
    }
}

/// Running minimum and violations of one side.
pub(super) struct SideAcc {
    label: String,
    strict: bool,
    least: Option<(Real, Point)>,
    violation: Option<(Real, Point)>,
    equalities: Vec<Point>,
    inconclusive: usize,
    first_inconclusive: Option<Point>,
    points: usize,
}

impl SideAcc {
    pub(super) fn new(label: String, strict: bool) -> Self {
        Self {
            label,
            strict,
            least: None,
            violation: None,
            equalities: Vec::new(),
            inconclusive: 0,
            first_inconclusive: None,
            points: 0,
        }
    }

    pub(super) fn record(&mut self, p: &Point, outcome: PointOutcome) {
        self.points += 1;
        match outcome {
            PointOutcome::Holds(m) => {
                if self.least.as_ref().is_none_or(|(l, _)| m < *l) {
                    self.least = Some((m, p.clone()));
                }
            }
            PointOutcome::Violated(m) => {
                if self.violation.is_none() {
                    self.violation = Some((m, p.clone()));
                }
            }
            PointOutcome::Equal(zero) => {
                if self.strict {
                    if self.violation.is_none() {
                        self.violation = Some((zero, p.clone()));
                    }
                } else {
                    self.equalities.push(p.clone());
                }
            }
            PointOutcome::Unknown => {
                self.inconclusive += 1;
                if self.first_inconclusive.is_none() {
                    self.first_inconclusive = Some(p.clone());
                }
            }
        }
    }

    pub(super) fn finish(self) -> SideReport {
        let verdict = if self.violation.is_some() {
            Verdict::Counterexample
        } else if self.inconclusive > 0 {
            Verdict::Inconclusive
        } else if !self.equalities.is_empty() {
            Verdict::BoundaryEquality
        } else if self.points == 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Verified
        };
        let (margin, witness) = match (&self.violation, &self.least) {
            (Some((m, p)), _) => (Some(m.clone()), Some(p.witness())),
            (None, Some((m, p))) => (Some(m.clone()), Some(p.witness())),
            (None, None) => (None, self.first_inconclusive.as_ref().map(Point::witness)),
        };
        SideReport {
            label: self.label,
            strict: self.strict,
            verdict,
            min_margin: margin.as_ref().map(decimal),
            witness,
            points: self.points,
            equality_points: self.equalities.iter().map(Point::witness).collect(),
            inconclusive_points: self.inconclusive,
            detail: None,
            signed_margin: margin,
        }
    }
}

pub(super) enum PointOutcome {
    Holds(Real),
    Violated(Real),
    Equal(Real),
    Unknown,
}

/// Shared state of a checking run: the precision policy and cached tables of
/// `ln Ω(n)` per precision.
pub struct Checker {
    ctx: PrecisionContext,
    volumes: RefCell<HashMap<u32, Rc<Vec<Real>>>>,
}

impl Checker {
    pub fn new(ctx: PrecisionContext) -> Self {
        Self {
            ctx,
            volumes: RefCell::new(HashMap::new()),
        }
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// `ln Ω(1..=max_n)` at `bits`, extended on demand.
    fn table(&self, bits: u32, max_n: u64) -> Result<Rc<Vec<Real>>> {
        let mut map = self.volumes.borrow_mut();
        let entry = map.entry(bits).or_insert_with(|| Rc::new(Vec::new()));
        let len = entry.len() as u64;
        if len < max_n {
            // Doubling keeps point-by-point growth linear overall.
            let target = max_n.max(2 * len);
            let ctx = PrecisionContext::fixed(bits);
            let v = Rc::make_mut(entry);
            v.reserve((target - len) as usize);
            for n in len + 1..=target {
                v.push(ln_omega(&Real::from_u64(n, &ctx))?);
            }
        }
        Ok(entry.clone())
    }

    /// Largest dimension any quantity of `band` may touch: generous headroom
    /// over the largest point.
    fn table_extent(points: &[Point]) -> Option<u64> {
        let max = points
            .iter()
            .filter_map(|p| match p {
                Point::Int(n) => Some(*n),
                _ => None,
            })
            .max()?;
        Some(max + 8)
    }

    /// Checks every side of `band`; one report per bound.
    pub fn check_band(&self, band: &Band) -> Result<(Vec<SideReport>, u32)> {
        let p = self.ctx.bits();
        let fine_bits = p + REFINE_BITS;
        let tables = match Self::table_extent(&band.points) {
            Some(max_n) => Some((self.table(p, max_n)?, self.table(fine_bits, max_n)?)),
            None => None,
        };
        let coarse_eval = Eval {
            bits: p,
            table: tables.as_ref().map(|t| t.0.as_slice()),
        };
        let fine_eval = Eval {
            bits: fine_bits,
            table: tables.as_ref().map(|t| t.1.as_slice()),
        };

        let mut lower = band
            .lower
            .as_ref()
            .map(|b| SideAcc::new(band.side_label(false), b.strict));
        let mut upper = band
            .upper
            .as_ref()
            .map(|b| SideAcc::new(band.side_label(true), b.strict));
        let mut bits_used = p;

        for point in &band.points {
            let v_c = (band.value)(point, &coarse_eval)?;
            let v_f = (band.value)(point, &fine_eval)?;
            if let (Some(b), Some(acc)) = (&band.lower, lower.as_mut()) {
                let c = &v_c - (b.f)(point, &coarse_eval)?;
                let f = &v_f - (b.f)(point, &fine_eval)?;
                let (outcome, bits) = self.certify(c, f, |e| {
                    Ok((band.value)(point, e)? - (b.f)(point, e)?)
                })?;
                bits_used = bits_used.max(bits);
                acc.record(point, outcome);
            }
            if let (Some(b), Some(acc)) = (&band.upper, upper.as_mut()) {
                let c = (b.f)(point, &coarse_eval)? - &v_c;
                let f = (b.f)(point, &fine_eval)? - &v_f;
                let (outcome, bits) = self.certify(c, f, |e| {
                    Ok((b.f)(point, e)? - (band.value)(point, e)?)
                })?;
                bits_used = bits_used.max(bits);
                acc.record(point, outcome);
            }
        }
        let sides = lower
            .into_iter()
            .chain(upper)
            .map(SideAcc::finish)
            .collect();
        Ok((sides, bits_used))
    }

    /// Certifies the sign of a gap that should be positive, escalating past
    /// the seeded evaluation and testing for exact equality when no sign
    /// can be certified.
    fn certify<F>(&self, coarse: Real, fine: Real, gap: F) -> Result<(PointOutcome, u32)>
    where
        F: Fn(&Eval) -> Result<Real>,
    {
        let seed = Gap::from_refinement(&coarse, fine, self.ctx.bits());
        let recompute = |c: &PrecisionContext| -> Result<Gap> {
            let lo = gap(&Eval::at(c.bits()))?;
            let hi = gap(&Eval::at(c.bits() + REFINE_BITS))?;
            Ok(Gap::from_refinement(&lo, hi, c.bits()))
        };
        self.classify(seed, recompute, true)
    }

    /// Sign of a gap expected positive. With `test_zero`, a gap whose sign
    /// stays uncertain is tested for vanishing exactly.
    pub(super) fn classify<F>(&self, seed: Gap, recompute: F, test_zero: bool) -> Result<(PointOutcome, u32)>
    where
        F: Fn(&PrecisionContext) -> Result<Gap>,
    {
        let verdict = sign_with_margin_seeded(&self.ctx, seed, &recompute)?;
        let outcome = match verdict.sign {
            Sign::Positive => PointOutcome::Holds(verdict.margin),
            Sign::Negative => PointOutcome::Violated(-verdict.margin),
            Sign::Inconclusive if test_zero => {
                if certify_zero(&self.ctx, &recompute)?.is_zero {
                    PointOutcome::Equal(Real::zero(&self.ctx))
                } else {
                    PointOutcome::Unknown
                }
            }
            Sign::Inconclusive => PointOutcome::Unknown,
        };
        Ok((outcome, verdict.bits))
    }

    /// Evaluates `q` at the working precision, using cached volumes.
    pub fn evaluate(&self, q: &Quantity, point: &Point) -> Result<Real> {
        let p = self.ctx.bits();
        let table = match Self::table_extent(std::slice::from_ref(point)) {
            Some(max_n) => Some(self.table(p, max_n)?),
            None => None,
        };
        let e = Eval {
            bits: p,
            table: table.as_ref().map(|t| t.as_slice()),
        };
        q(point, &e)
    }
}

/// Integer points `start..=end`.
pub fn int_points(start: u64, end: u64) -> Result<Vec<Point>> {
    if start > end {
        return Err(Error::Grid(format!("empty integer range [{start}, {end}]")));
    }
    Ok((start..=end).map(Point::Int).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker() -> Checker {
        Checker::new(PrecisionContext::default())
    }

    #[test]
    fn band_verdicts() {
        let ch = checker();
        // n - 3 > 0 fails at n = 1..=3; equality at 3 is a violation too.
        let band = Band::new("n > 3", int_points(1, 6).unwrap(), of_n(|n, e| Ok(e.int(n - 3))))
            .positive();
        let (sides, _) = ch.check_band(&band).unwrap();
        assert_eq!(sides[0].verdict, Verdict::Counterexample);
        assert_eq!(sides[0].witness, Some(Witness::Integer(1)));

        // n - 3 >= 0 on [3, 6]: equality at n = 3.
        let band = Band::new("n >= 3", int_points(3, 6).unwrap(), of_n(|n, e| Ok(e.int(n - 3))))
            .above(Bound::non_strict(constant(0, 1)));
        let (sides, _) = ch.check_band(&band).unwrap();
        assert_eq!(sides[0].verdict, Verdict::BoundaryEquality);
        assert_eq!(sides[0].equality_points, vec![Witness::Integer(3)]);
        assert_eq!(sides[0].witness, Some(Witness::Integer(4)));
    }

    #[test]
    fn cached_and_direct_volumes_agree() {
        let ch = checker();
        let t = ch.table(256, 10).unwrap();
        let e = Eval { bits: 256, table: Some(t.as_slice()) };
        let d = Eval::at(256);
        for n in 1..=12 {
            assert_eq!(e.lo(n).unwrap(), d.lo(n).unwrap());
        }
        // Omega_1 = 2, Omega_2 = pi
        assert!((d.lo(1).unwrap() - d.ln2()).abs() < Real::pow2(-250, &d.ctx()));
        assert!((d.lo(2).unwrap() - d.ln_pi()).abs() < Real::pow2(-250, &d.ctx()));
    }
}
