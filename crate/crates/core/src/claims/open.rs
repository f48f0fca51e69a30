//! Empirical search for the best constants of the open double inequality
//! `(1 - λ/(n+a))^(1/α) < Ω_(n+1)^(1/(n+1)) / Ω_n^(1/n) < (1 - μ/(n+b))^(1/β)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{PrecisionContext, Real};

use super::eval::{int_points, of_n, Band, Bound, Checker, Eval, Point};
use super::report::CheckReport;
use super::lookup;

/// Bisection steps per parameter.
pub const BISECTION_STEPS: usize = 60;

/// Constants of the open problem, inside its constraint box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpenProblemParams {
    pub a: Real,
    pub b: Real,
    pub lambda: Real,
    pub mu: Real,
    pub alpha: Real,
    pub beta: Real,
}

impl OpenProblemParams {
    /// Errors outside `a ≥ 3, b ≤ 3, λ ≤ 1, μ ≥ 1, α ≥ 2, β ≤ 4` or on a
    /// non-positive constant.
    pub fn new(a: Real, b: Real, lambda: Real, mu: Real, alpha: Real, beta: Real) -> Result<Self> {
        let p = Self { a, b, lambda, mu, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    /// `α = 2, λ = 1, a = 3 | β = 4, μ = 1, b = 3`.
    pub fn feasible_instance(ctx: &PrecisionContext) -> Self {
        let i = |v| Real::from_i64(v, ctx);
        Self {
            a: i(3),
            b: i(3),
            lambda: i(1),
            mu: i(1),
            alpha: i(2),
            beta: i(4),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("a", &self.a, self.a >= 3),
            ("b", &self.b, self.b <= 3),
            ("lambda", &self.lambda, self.lambda <= 1),
            ("mu", &self.mu, self.mu >= 1),
            ("alpha", &self.alpha, self.alpha >= 2),
            ("beta", &self.beta, self.beta <= 4),
        ];
        for (name, v, ok) in checks {
            if !ok || !v.is_positive() {
                return Err(Error::Parameter(format!("{name} = {v} outside the constraint box")));
            }
        }
        Ok(())
    }

    /// `(c, s, p)` of the side `(1 - c/(n+s))^(1/p)` that `param` belongs to.
    fn side(&self, param: Param) -> (&Real, &Real, &Real) {
        if param.lower_side() {
            (&self.lambda, &self.a, &self.alpha)
        } else {
            (&self.mu, &self.b, &self.beta)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Alpha,
    Lambda,
    A,
    Beta,
    Mu,
    B,
}

impl Param {
    pub const ALL: [Param; 6] = [Param::Alpha, Param::Lambda, Param::A, Param::Beta, Param::Mu, Param::B];

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Lambda => "lambda",
            Param::A => "a",
            Param::Beta => "beta",
            Param::Mu => "mu",
            Param::B => "b",
        }
    }

    fn lower_side(self) -> bool {
        matches!(self, Param::Alpha | Param::Lambda | Param::A)
    }

    fn get(self, p: &OpenProblemParams) -> &Real {
        match self {
            Param::Alpha => &p.alpha,
            Param::Lambda => &p.lambda,
            Param::A => &p.a,
            Param::Beta => &p.beta,
            Param::Mu => &p.mu,
            Param::B => &p.b,
        }
    }

    fn set(self, p: &mut OpenProblemParams, v: Real) {
        match self {
            Param::Alpha => p.alpha = v,
            Param::Lambda => p.lambda = v,
            Param::A => p.a = v,
            Param::Beta => p.beta = v,
            Param::Mu => p.mu = v,
            Param::B => p.b = v,
        }
    }

    /// A value past the frontier, moving away from the feasible instance in
    /// the tightening direction.
    fn infeasible_end(self, ctx: &PrecisionContext) -> Real {
        match self {
            Param::Alpha | Param::A => Real::from_i64(1000, ctx),
            Param::Lambda | Param::B => Real::zero(ctx),
            Param::Mu => Real::from_i64(4, ctx),
            Param::Beta => Real::from_ratio(1, 1000, ctx),
        }
    }

    /// Whether the frontier is the largest (`true`) or smallest feasible value.
    pub fn maximized(self) -> bool {
        matches!(self, Param::Alpha | Param::A | Param::Mu)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrontierEntry {
    pub parameter: Param,
    /// `max` or `min`: the tightening direction.
    pub direction: &'static str,
    pub instance: Real,
    pub frontier: Real,
    /// The dimension whose inequality fails just past the frontier.
    pub binding_n: u64,
    pub within_box: bool,
}

/// Per-`n` thresholds: the extreme value of each parameter, the others held
/// at the feasible instance, for which the inequality still holds at `n`.
#[derive(Debug, Clone, Serialize)]
pub struct FrontierRow {
    pub n: u64,
    /// `Ω_(n+1)^(1/(n+1)) / Ω_n^(1/n)`.
    pub ratio: Real,
    pub alpha: Real,
    pub lambda: Real,
    pub a: Real,
    pub beta: Real,
    pub mu: Real,
    pub b: Real,
}

impl FrontierRow {
    pub fn get(&self, p: Param) -> &Real {
        match p {
            Param::Alpha => &self.alpha,
            Param::Lambda => &self.lambda,
            Param::A => &self.a,
            Param::Beta => &self.beta,
            Param::Mu => &self.mu,
            Param::B => &self.b,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenProblemReport {
    pub n_max: u64,
    pub instance: OpenProblemParams,
    /// The instance checked as a certified band; agrees with the integer
    /// band of the ratio inequality with `(n+2)/(n+3)`.
    pub instance_check: CheckReport,
    pub frontier: Vec<FrontierEntry>,
    /// Empirical best constants: each parameter at its own frontier.
    pub empirical: Vec<(Param, Real)>,
    pub table: Vec<FrontierRow>,
    pub note: &'static str,
}

/// The instance inequality as a band over `points`.
pub(super) fn instance_band(points: Vec<Point>) -> Band {
    let root = |c: i64, s: i64, p: i64| {
        of_n(move |n, e: &Eval| Ok((-(e.int(c) / (n + s))).ln_1p()? / p))
    };
    Band::new("ln Q(n+1) - ln Q(n)", points, of_n(|n, e| Ok(e.lq(n + 1)? - e.lq(n)?)))
        .above(Bound::strict(root(1, 3, 2)))
        .below(Bound::strict(root(1, 3, 4)))
        .exp_display()
}

/// Per-`n` data that stays fixed while one parameter moves, so a feasibility
/// test is a division and a comparison. `r` is the log of the ratio.
enum Probe {
    /// The exponent moves: `ln(1 - c/(n+s))`, `None` where the base is not
    /// positive.
    Exponent(Vec<Option<Real>>),
    /// `c` or `s` moves: `1 - exp(p r)`.
    Shift(Vec<Real>),
}

impl Probe {
    fn new(param: Param, inst: &OpenProblemParams, r: &[Real]) -> Self {
        let (c, s, p) = inst.side(param);
        match param {
            Param::Alpha | Param::Beta => Probe::Exponent(
                (1..=r.len() as i64)
                    .map(|n| {
                        let t = -(c / (s + n));
                        if t > -1 {
                            t.ln_1p().ok()
                        } else {
                            None
                        }
                    })
                    .collect(),
            ),
            _ => Probe::Shift(r.iter().map(|ri| 1 - (p * ri).exp()).collect()),
        }
    }

    /// Whether the inequality holds at `n = i + 1` for the parameters `q`.
    fn holds(&self, param: Param, q: &OpenProblemParams, r: &[Real], i: usize) -> bool {
        let lower = param.lower_side();
        let (c, s, p) = q.side(param);
        match self {
            Probe::Exponent(k) => k[i].as_ref().is_some_and(|k| {
                let pr = p * &r[i];
                if lower {
                    *k < pr
                } else {
                    pr < *k
                }
            }),
            Probe::Shift(d) => {
                let t = c / (s + (i as i64 + 1));
                t < 1 && if lower { t > d[i] } else { t < d[i] }
            }
        }
    }

    /// Holds for every `n ≤ n_max`, trying `hint` first.
    fn feasible(&self, param: Param, q: &OpenProblemParams, r: &[Real], hint: &mut usize) -> bool {
        if !self.holds(param, q, r, *hint) {
            return false;
        }
        for i in 0..r.len() {
            if !self.holds(param, q, r, i) {
                *hint = i;
                return false;
            }
        }
        true
    }
}

/// Bisects each parameter away from the feasible instance to the last value
/// keeping the inequality for all `n ≤ n_max`. Empirical, not a proof.
pub fn search_open27(n_max: u64, ctx: &PrecisionContext) -> Result<OpenProblemReport> {
    if n_max < 10 {
        return Err(Error::Parameter(format!("n_max = {n_max} below 10")));
    }
    let ch = Checker::new(ctx.clone());
    let ratio_log = of_n(|n, e| Ok(e.lq(n + 1)? - e.lq(n)?));
    let r: Vec<Real> = (1..=n_max)
        .map(|n| ch.evaluate(&ratio_log, &Point::Int(n)))
        .collect::<Result<_>>()?;
    let inst = OpenProblemParams::feasible_instance(ctx);

    let case = lookup("EQ27_OPEN")?;
    let (sides, bits) = ch.check_band(&instance_band(int_points(1, n_max)?))?;
    let instance_check = CheckReport::from_sides(case.id, case.statement, case.anchor, false, sides, bits);

    let mut frontier = Vec::new();
    let mut empirical = Vec::new();
    for param in Param::ALL {
        let probe = Probe::new(param, &inst, &r);
        let mut good = param.get(&inst).clone();
        let mut bad = param.infeasible_end(ctx);
        let mut hint = 0usize;
        let mut trial = inst.clone();
        param.set(&mut trial, bad.clone());
        let unbounded = probe.feasible(param, &trial, &r, &mut hint);
        if !unbounded {
            for _ in 0..BISECTION_STEPS {
                let mid = (&good + &bad) / 2;
                param.set(&mut trial, mid.clone());
                if probe.feasible(param, &trial, &r, &mut hint) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
        } else {
            good = bad;
        }
        let mut at = inst.clone();
        param.set(&mut at, good.clone());
        frontier.push(FrontierEntry {
            parameter: param,
            direction: if param.maximized() { "max" } else { "min" },
            instance: param.get(&inst).clone(),
            frontier: good.clone(),
            binding_n: hint as u64 + 1,
            within_box: at.validate().is_ok(),
        });
        empirical.push((param, good));
    }

    let table = (1..=n_max)
        .map(|n| frontier_row(n, &r[(n - 1) as usize], &inst))
        .collect();

    Ok(OpenProblemReport {
        n_max,
        instance: inst,
        instance_check,
        frontier,
        empirical,
        table,
        note: "frontiers are empirical over n ≤ n_max, not proofs",
    })
}

/// Closed-form thresholds at `n` from `r = ln` of the ratio.
pub(crate) fn frontier_row(n: u64, r: &Real, inst: &OpenProblemParams) -> FrontierRow {
    let n_i = n as i64;
    let one_minus_exp = |p: &Real| 1 - (p * r).exp();
    let alpha = (-(&inst.lambda / (&inst.a + n_i))).ln_1p().expect("λ < n + a") / r;
    let beta = (-(&inst.mu / (&inst.b + n_i))).ln_1p().expect("μ < n + b") / r;
    let la = one_minus_exp(&inst.alpha);
    let lb = one_minus_exp(&inst.beta);
    FrontierRow {
        n,
        ratio: r.exp(),
        alpha,
        lambda: (&inst.a + n_i) * &la,
        a: &inst.lambda / &la - n_i,
        beta,
        mu: (&inst.b + n_i) * &lb,
        b: &inst.mu / &lb - n_i,
    }
}
