//! Check procedures of the registry claims.

use crate::ball::{
    half_lgamma_per_x, lgamma_over_xlog2x, lgamma_over_xlogx, ln_root_volume,
    ln_volume_nlogn_root, log_ratio_defect, MAX_DIMENSION,
};
use crate::cascade::{verify_chain_identities, verify_sign_claims, verify_spot_values};
use crate::error::{Error, Result};
use crate::gamma::{
    digamma_band_gaps, lgamma, log_bound_gaps, polygamma_band_gaps, power_vs_gamma_root_gap,
};
use crate::grid::{GridSpec, GridSummary};
use crate::jet::{derivative_at, Jet};
use crate::real::{euler_gamma, PrecisionContext, Real, Sign};

use super::eval::{
    constant, int_points, of_n, of_x, quantity, Band, Bound, Checker, Eval, Point,
};
use super::report::{decimal, CheckReport, SideReport, Verdict, Witness};
use super::{limits, open, scan, ClaimCase, Domain, Overrides};

/// A function of one variable, usable on reals and on jets.
#[derive(Clone, Copy)]
pub(super) struct Func {
    pub name: &'static str,
    pub real: fn(&Real) -> Result<Real>,
    pub jet: fn(&Jet) -> Result<Jet>,
}

macro_rules! func {
    ($name:literal, $f:path) => {
        Func {
            name: $name,
            real: |x| $f(x),
            jet: |x| $f(x),
        }
    };
}

const F: Func = func!("F", lgamma_over_xlog2x);
const AQ: Func = func!("AQ", lgamma_over_xlogx);
const G: Func = func!("G", log_ratio_defect);
const HALF_LGAMMA_PER_X: Func = func!("(1/x) ln Γ(1+x/2)", half_lgamma_per_x);
const LN_NLOGN_ROOT: Func = func!("ln f", ln_volume_nlogn_root);

/// What a claim is checked with.
pub(super) enum Plan {
    Bands {
        bands: Vec<Band>,
        grid: Option<GridSummary>,
        notes: Vec<String>,
    },
    /// Limits, scans, the cascade and the open problem have their own
    /// procedures.
    Special,
}

pub(super) fn run(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<CheckReport> {
    match plan(ch, case, ov)? {
        Plan::Bands { bands, grid, notes } => {
            let mut r = band_report(ch, case, &bands)?;
            r.grid = grid;
            r.notes.extend(notes);
            r.notes.extend(agreement_note(&r.sides));
            Ok(r)
        }
        Plan::Special => match case.id {
            "EQ3_LIMIT" | "EQ4_LIMIT" | "EQ13_LIMITS" => limits::run(ch, case),
            "EQ6_AQ_SIGNS" | "CONJ_FA_SIGNS" | "CONJ_CM_1_MINUS_G" | "Q_LCM_SCAN" => {
                scan::run(ch, case, ov)
            }
            "CASCADE_SPOT_VALUES" => spot_values(ch, case),
            "CASCADE_CHAIN_IDENTITIES" => chain_identities(ch, case, ov),
            "CASCADE_SIGN_CLAIMS" => sign_claims(ch, case, ov),
            other => Err(Error::UnknownClaim(other.to_string())),
        },
    }
}

fn band_report(ch: &Checker, case: &ClaimCase, bands: &[Band]) -> Result<CheckReport> {
    let mut sides = Vec::new();
    let mut bits = ch.ctx().bits();
    for b in bands {
        let (s, used) = ch.check_band(b)?;
        sides.extend(s);
        bits = bits.max(used);
    }
    Ok(CheckReport::from_sides(
        case.id,
        case.statement,
        case.anchor,
        case.is_conjecture(),
        sides,
        bits,
    ))
}

const JET: &str = " [jet]";
const DIFF: &str = " [differences]";

/// Flags sides checked both by jets and by differences whose verdicts differ.
fn agreement_note(sides: &[SideReport]) -> Option<String> {
    let mut bad = Vec::new();
    for s in sides {
        if let Some(key) = s.label.strip_suffix(JET) {
            let other = sides.iter().find(|o| o.label.strip_suffix(DIFF) == Some(key));
            if let Some(o) = other {
                if o.verdict != s.verdict {
                    bad.push(format!("{key}: jet {} vs differences {}", s.verdict, o.verdict));
                }
            }
        }
    }
    (!bad.is_empty()).then(|| format!("methods disagree: {}", bad.join("; ")))
}

pub(super) fn plan(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<Plan> {
    let ctx = ch.ctx();
    let bands = |bands: Vec<Band>, grid: Option<GridSummary>, notes: Vec<String>| {
        Ok(Plan::Bands { bands, grid, notes })
    };
    match case.id {
        "SERIES_PROBE" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new(
                    "ln Ω_(n+1)^(1/ln(n+1)) - ln Ω_n^(1/ln n) < 0",
                    int_points(s, e)?,
                    of_n(|n, e| Ok(e.lo(n + 1)? / e.int(n + 1).ln()? - e.lo(n)? / e.int(n).ln()?)),
                )
                .negative()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "OMEGA_1N_DEC_LOGCONVEX" => {
            let (s, e) = n_range(case, ov)?;
            let pts = int_points(s, e)?;
            bands(
                vec![
                    Band::new(
                        "decreasing: ln Q(n+1) - ln Q(n) < 0",
                        pts.clone(),
                        of_n(|n, e| Ok(e.lq(n + 1)? - e.lq(n)?)),
                    )
                    .negative(),
                    Band::new(
                        "log-convex: ln Q(n) - 2 ln Q(n+1) + ln Q(n+2) > 0",
                        pts,
                        of_n(|n, e| Ok(e.lq(n)? - e.lq(n + 1)? * 2 + e.lq(n + 2)?)),
                    )
                    .positive(),
                ],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "THM2_LOGCONVEX" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new(
                    "s(n) - 2 s(n+1) + s(n+2) > 0",
                    int_points(s, e)?,
                    of_n(|n, e| Ok(e.s(n)? - e.s(n + 1)? * 2 + e.s(n + 2)?)),
                )
                .positive()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "THM2_RATIO_DEC" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new(
                    "[s(n) - s(n+1)] - [s(n+1) - s(n+2)] > 0",
                    int_points(s, e)?,
                    of_n(|n, e| {
                        let d0 = e.s(n)? - e.s(n + 1)?;
                        let d1 = e.s(n + 1)? - e.s(n + 2)?;
                        Ok(d0 - d1)
                    }),
                )
                .positive()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "EQ9_SHARP" => eq9(ch, case, ov),
        "EQ17_RATIO" => {
            let (s, e) = n_range(case, ov)?;
            let pts = int_points(s, e)?;
            let t = |n: i64, e: &Eval| -> Result<Real> { Ok(e.lq(n)? - e.lq(n + 1)?) };
            bands(
                vec![
                    Band::new(
                        "decreasing: t(n+1) - t(n) < 0",
                        pts.clone(),
                        of_n(move |n, e| Ok(t(n + 1, e)? - t(n, e)?)),
                    )
                    .negative(),
                    Band::new(
                        "log-convex: t(n) - 2 t(n+1) + t(n+2) > 0",
                        pts,
                        of_n(move |n, e| Ok(t(n, e)? - t(n + 1, e)? * 2 + t(n + 2, e)?)),
                    )
                    .positive(),
                ],
                int_grid(s, e, ctx),
                vec!["t(n) = ln Ω_n^(1/n) - ln Ω_(n+1)^(1/(n+1)), the log of the ratio".into()],
            )
        }
        "EQ18_BAND" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new("ln Ω_n", int_points(s, e)?, of_n(|n, e| e.lo(n)))
                    .above(Bound::strict(of_n(root_shift)))
                    .below(Bound::non_strict(of_n(|n, e| {
                        Ok(ln_two_over_sqrt_pi(e) * n + root_shift(n, e)?)
                    })))
                    .exp_display()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "EQ19_BAND" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new("ln Ω_n", int_points(s, e)?, of_n(|n, e| e.lo(n)))
                    .above(Bound::non_strict(of_n(|n, e| {
                        Ok(ln_two_over_sqrt_pi(e) + root_shift(n, e)?)
                    })))
                    .below(Bound::strict(of_n(|n, e| Ok(root_shift(n, e)? + e.ratio(1, 2)))))
                    .exp_display()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "EQ18_VS_19" => {
            let (s, e) = n_range(case, ov)?;
            let factor = of_n(|n, e| Ok(ln_two_over_sqrt_pi(e) * n));
            bands(
                vec![
                    Band::new("n ln(2/√π) < 1/2", int_points(s, e)?, factor.clone())
                        .below(Bound::strict(constant(1, 2)))
                        .exp_display(),
                    Band::new(
                        "reversed past n = 4: n ln(2/√π) > 1/2",
                        int_points(5, 100)?,
                        factor,
                    )
                    .above(Bound::strict(constant(1, 2)))
                    .exp_display(),
                ],
                int_grid(s, e, ctx),
                vec!["the reversed side is checked on n ∈ [5, 100]".into()],
            )
        }
        "EQ21_BAND" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new(
                    "ln Q(n+2) - ln Q(n)",
                    int_points(s, e)?,
                    of_n(|n, e| Ok(e.lq(n + 2)? - e.lq(n)?)),
                )
                .below(Bound::strict(of_n(|n, e| Ok(e.ln_ratio(n, n + 2)? / 4))))
                .exp_display()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "EQ22_BAND" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new(
                    "ln Ω_(n+5)/(n+3) - ln Ω_(n+3)/(n+1)",
                    int_points(s, e)?,
                    of_n(|n, e| Ok(e.lo(n + 5)? / (n + 3) - e.lo(n + 3)? / (n + 1))),
                )
                .below(Bound::strict(of_n(|n, e| {
                    let w = e.ln_pi() * -2 / ((n + 1) * (n + 3));
                    Ok(w + e.ln_ratio(n + 3, n + 5)? / 4)
                })))
                .exp_display()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "EQ24_BAND" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new(
                    "ln Q(n+2) - ln Q(n)",
                    int_points(s, e)?,
                    of_n(|n, e| Ok(e.lq(n + 2)? - e.lq(n)?)),
                )
                .above(Bound::strict(of_n(|n, e| Ok(e.ln_ratio(n + 2, n + 4)? / 2))))
                .below(Bound::strict(of_n(|n, e| Ok(e.ln_ratio(n + 2, n + 4)? / 4))))
                .exp_display()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "EQ24_VS_21" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![Band::new(
                    "(1/4) ln(n/(n+2)) < (1/4) ln((n+2)/(n+4))",
                    int_points(s, e)?,
                    of_n(|n, e| Ok(e.ln_ratio(n, n + 2)? / 4)),
                )
                .below(Bound::strict(of_n(|n, e| Ok(e.ln_ratio(n + 2, n + 4)? / 4))))
                .exp_display()],
                int_grid(s, e, ctx),
                vec![],
            )
        }
        "EQ25_BAND" => {
            let (s, e) = n_range(case, ov)?;
            let mut pts = int_points(s, e)?;
            pts.retain(|p| p.int() != 2);
            let weight = |n: i64, e: &Eval| e.ln_pi() * -2 / (n * (n - 2));
            bands(
                vec![Band::new(
                    "ln Ω_(n+2)/n - ln Ω_n/(n-2)",
                    pts,
                    of_n(|n, e| Ok(e.lo(n + 2)? / n - e.lo(n)? / (n - 2))),
                )
                .above(Bound::strict(of_n(move |n, e| {
                    Ok(weight(n, e) + e.ln_ratio(n + 2, n + 4)? / 2)
                })))
                .below(Bound::strict(of_n(move |n, e| {
                    Ok(weight(n, e) + e.ln_ratio(n + 2, n + 4)? / 8)
                })))
                .exp_display()],
                int_grid(s, e, ctx),
                vec!["n = 2 is excluded: the exponents 1/(n-2) and 2/((n-2)n) are undefined".into()],
            )
        }
        "EQ26_BAND" => eq26(ch, case, ov),
        "EQ27_OPEN" => {
            let (s, e) = n_range(case, ov)?;
            bands(
                vec![open::instance_band(int_points(s, e)?)],
                int_grid(s, e, ctx),
                vec!["feasible instance α = 2, λ = 1, a = 3 | β = 4, μ = 1, b = 3; frontiers come from `search`".into()],
            )
        }
        "EQ20_YAMING" => bands(yaming_bands(ctx), None, vec![
            "y ∈ {-1/2, 0, 1/2, 1, 4}; the inequality has no t, so the sample is a 5x5 (x, y) box per region".into(),
        ]),
        "EQ23_TJM" => bands(tjm_bands(ctx), None, vec![
            "t ∈ {1/4, 1/2, 1, 2, 5}, y ∈ {-1/2, 0, 1/2, 1, 4}, x = -y-1 + {0.3, 0.7, 1.6, 4.2, 20.5}; a = max(1, 1/(y+1)), b = min(1, 1/(2(y+1)))".into(),
        ]),
        "EQ2_INC" => {
            let g = grid_of(case, ov, ctx)?;
            let pts = g.points();
            bands(monotone(HALF_LGAMMA_PER_X, "increasing on [2, ∞)", &pts, true), Some(g.summary()), vec![])
        }
        "EQ7_AQ_RANGE" => eq7(ch, case, ov),
        "THM1_F_INC_LOW" | "THM1_F_INC_HIGH" | "THM1_F_CONCAVE" => thm1(ch, case, ov),
        "THM3_G_INC" => {
            let g = grid_of(case, ov, ctx)?;
            let pts = positive_only(g.points());
            bands(monotone(G, "increasing on (0, ∞)", &pts, true), Some(g.summary()), vec![])
        }
        "EQ11_G_BAND" => {
            let g = grid_of(case, ov, ctx)?;
            let pts = reals(&g.points());
            let g_of = of_x(|x, _| log_ratio_defect(x));
            bands(
                vec![
                    Band::new("G", pts.clone(), g_of.clone())
                        .above(Bound::strict(constant(2, 3)))
                        .below(Bound::strict(constant(1, 1))),
                    Band::new("G(x) ≥ G(3)", pts, g_of)
                        .above(Bound::non_strict(quantity(|_, e| g_at_three(e)))),
                ],
                Some(g.summary()),
                vec![],
            )
        }
        "THM2_PROOF_LOGCONVEX_FN" => {
            let g = grid_of(case, ov, ctx)?;
            let one = Real::one(ctx);
            let (pts, dropped) = exclude_near(g.points(), &[one.clone()], ctx);
            let pts: Vec<Real> = pts.into_iter().filter(|x| *x > one).collect();
            let mut bands_v = vec![derivative_band(LN_NLOGN_ROOT, "convex on (1, ∞)", 2, &pts, Sign::Positive)];
            bands_v.push(slope_band(LN_NLOGN_ROOT, "convex on (1, ∞)", &pts, true));
            bands(
                bands_v,
                Some(g.summary()),
                vec![
                    "grid restricted to x > 1".into(),
                    exclusion_note(&[one], &dropped, ctx),
                ],
            )
        }
        "LEM1" => {
            let g = grid_of(case, ov, ctx)?;
            let pts = reals(&g.points());
            let mut out = Vec::new();
            for k in 0..=5u32 {
                for side in 0..2 {
                    let which = if side == 0 { "lower" } else { "upper" };
                    let label = if k == 0 {
                        format!("ψ band ({which})")
                    } else {
                        format!("ψ^({k}) band ({which})")
                    };
                    let q = of_x(move |x, e| {
                        let gaps = if k == 0 {
                            digamma_band_gaps(x, &e.ctx())?
                        } else {
                            polygamma_band_gaps(k, x, &e.ctx())?
                        };
                        Ok(gaps[side].value.clone())
                    });
                    out.push(Band::new(label, pts.clone(), q).positive());
                }
            }
            bands(out, Some(g.summary()), vec![])
        }
        "LEM2" => {
            let g = grid_of(case, ov, ctx)?;
            let one = Real::one(ctx);
            let (pts, dropped) = exclude_near(positive_only(g.points()), &[one.clone()], ctx);
            let (low, high): (Vec<Real>, Vec<Real>) = pts.into_iter().partition(|x| *x < one);
            let gap = of_x(|x, e| Ok(power_vs_gamma_root_gap(x, &e.ctx())?.value));
            bands(
                vec![
                    Band::new("(1+1/x)^x > (x+1)/Γ(x+1)^(1/x) for x > 1", reals(&high), gap.clone()).positive(),
                    Band::new("reversed for 0 < x < 1", reals(&low), gap).negative(),
                ],
                Some(g.summary()),
                vec![
                    "compared in log form: x ln(1+1/x) against ln(x+1) - ln Γ(x+1)/x".into(),
                    exclusion_note(&[one], &dropped, ctx),
                ],
            )
        }
        "LEM3" => {
            let g = grid_of(case, ov, ctx)?;
            let neg = GridSpec::linear(
                Real::from_ratio(-999, 1000, ctx),
                Real::from_ratio(-1, 1000, ctx),
                g.count(),
            )?;
            let mut out = Vec::new();
            let labels = [
                ("2t/(2+t) < ln(1+t)", "t(2+t)/(2(1+t)) > ln(1+t)"),
                ("reversed on (-1, 0): 2t/(2+t) > ln(1+t)", "reversed on (-1, 0): t(2+t)/(2(1+t)) < ln(1+t)"),
            ];
            for side in 0..2 {
                let q = of_x(move |t, e| Ok(log_bound_gaps(t, &e.ctx())?[side].value.clone()));
                let (lp, ln) = if side == 0 { (labels[0].0, labels[1].0) } else { (labels[0].1, labels[1].1) };
                out.push(Band::new(lp, reals(&g.points()), q.clone()).positive());
                out.push(Band::new(ln, reals(&neg.points()), q).negative());
            }
            bands(
                out,
                Some(g.summary()),
                vec![format!("negative side on the linear grid [-0.999, -0.001], {} points", g.count())],
            )
        }
        _ => Ok(Plan::Special),
    }
}

/// `n ∈ [start, n_max]` for a sequence claim.
pub(super) fn n_range(case: &ClaimCase, ov: &Overrides) -> Result<(u64, u64)> {
    let Domain::Integers { start, default_end } = case.domain else {
        return Err(Error::Parameter(format!("{} has no integer domain", case.id)));
    };
    let end = ov.n_max.unwrap_or(default_end);
    if end < start {
        return Err(Error::Parameter(format!(
            "n_max = {end} is below the first dimension {start} of {}",
            case.id
        )));
    }
    if end > MAX_DIMENSION {
        return Err(Error::Dimension(end));
    }
    Ok((start, end))
}

fn int_grid(start: u64, end: u64, ctx: &PrecisionContext) -> Option<GridSummary> {
    GridSpec::integers(start, end, ctx).ok().map(|g| g.summary())
}

/// The grid of a function claim: the override, else the registry default.
pub(super) fn grid_of(case: &ClaimCase, ov: &Overrides, ctx: &PrecisionContext) -> Result<GridSpec> {
    if let Some(g) = &ov.grid {
        return Ok(g.at(ctx));
    }
    match &case.domain {
        Domain::Grid {
            start,
            end,
            count,
            spacing,
        } => GridSpec::new(Real::parse(start, ctx)?, Real::parse(end, ctx)?, *count, *spacing),
        _ => Err(Error::Grid(format!("{} has no default grid", case.id))),
    }
}

pub(super) fn reals(xs: &[Real]) -> Vec<Point> {
    xs.iter().cloned().map(Point::Real).collect()
}

fn positive_only(xs: Vec<Real>) -> Vec<Real> {
    xs.into_iter().filter(Real::is_positive).collect()
}

/// Drops points closer than the exclusion radius to any singular point.
pub(super) fn exclude_near(
    xs: Vec<Real>,
    singular: &[Real],
    ctx: &PrecisionContext,
) -> (Vec<Real>, Vec<Real>) {
    let r = ctx.exclusion_radius();
    xs.into_iter()
        .partition(|x| singular.iter().all(|s| (x - s).abs() >= r))
}

pub(super) fn exclusion_note(singular: &[Real], dropped: &[Real], ctx: &PrecisionContext) -> String {
    let at = singular.iter().map(|s| s.to_plain(10)).collect::<Vec<_>>().join(", ");
    let radius = ctx.bits() / 4;
    if dropped.is_empty() {
        format!("singular point(s) x = {at}: exclusion radius 2^-{radius}, no grid point dropped")
    } else {
        let list = dropped.iter().map(decimal).collect::<Vec<_>>().join(", ");
        format!("singular point(s) x = {at}: exclusion radius 2^-{radius}, dropped {list}")
    }
}

/// `f^(m)` with the given sign at every point.
pub(super) fn derivative_band(f: Func, key: &str, m: usize, xs: &[Real], sign: Sign) -> Band {
    let jet = f.jet;
    let label = format!("{}: {}{} {} 0 {key}{JET}", f.name, f.name, "'".repeat(m), if sign == Sign::Positive { ">" } else { "<" });
    let b = Band::new(label, reals(xs), of_x(move |x, _| derivative_at(jet, x, m)));
    match sign {
        Sign::Negative => b.negative(),
        _ => b.positive(),
    }
}

/// `f(x_(i+1)) - f(x_i)` of the given sign for adjacent points.
fn difference_band(f: Func, key: &str, xs: &[Real], increasing: bool) -> Band {
    let real = f.real;
    let pts = xs
        .windows(2)
        .map(|w| Point::Tuple(w.to_vec()))
        .collect();
    let label = format!("{}: {key}{DIFF}", f.name);
    let b = Band::new(
        label,
        pts,
        quantity(move |p, e| {
            let t = p.tuple();
            Ok(real(&e.real(&t[1]))? - real(&e.real(&t[0]))?)
        }),
    );
    if increasing {
        b.positive()
    } else {
        b.negative()
    }
}

/// Slope of `f` over `(x1, x2)` minus its slope over `(x0, x1)`: negative
/// for concave, positive for convex.
fn slope_band(f: Func, key: &str, xs: &[Real], convex: bool) -> Band {
    let real = f.real;
    let pts = xs
        .windows(3)
        .map(|w| Point::Tuple(w.to_vec()))
        .collect();
    let label = format!("{}: {key}{DIFF}", f.name);
    let b = Band::new(
        label,
        pts,
        quantity(move |p, e| {
            let t: Vec<Real> = p.tuple().iter().map(|x| e.real(x)).collect();
            let f: Vec<Real> = t.iter().map(real).collect::<Result<_>>()?;
            let s0 = (&f[1] - &f[0]) / (&t[1] - &t[0]);
            let s1 = (&f[2] - &f[1]) / (&t[2] - &t[1]);
            Ok(s1 - s0)
        }),
    );
    if convex {
        b.positive()
    } else {
        b.negative()
    }
}

/// Monotonicity checked by the jet derivative and by adjacent differences.
pub(super) fn monotone(f: Func, key: &str, xs: &[Real], increasing: bool) -> Vec<Band> {
    let sign = if increasing { Sign::Positive } else { Sign::Negative };
    vec![
        derivative_band(f, key, 1, xs, sign),
        difference_band(f, key, xs, increasing),
    ]
}

/// `(n/(n+1)) ln Ω_(n+1)`.
fn root_shift(n: i64, e: &Eval) -> Result<Real> {
    Ok(e.lo(n + 1)? * n / (n + 1))
}

fn ln_two_over_sqrt_pi(e: &Eval) -> Real {
    e.ln2() - e.ln_pi() / 2
}

/// `G(3) = 3 (2 ln 2 - ln 3) ln 3 / (2 ln 2)`.
pub(super) fn g_at_three(e: &Eval) -> Result<Real> {
    let l2 = e.ln2();
    let l3 = e.int(3).ln()?;
    Ok((&l2 * 2 - &l3) * &l3 * 3 / (l2 * 2))
}

/// The sharp constants `a = ln2 lnπ - 2 ln²2 ln(4π/3)/(3 ln3)` and
/// `b = (1 + ln 2π)/2`.
pub fn sharp_ratio_constants(ctx: &PrecisionContext) -> Result<(Real, Real)> {
    let e = Eval::at(ctx.bits());
    let l2 = e.ln2();
    let lp = e.ln_pi();
    let l3 = e.int(3).ln()?;
    let ln_4pi_3 = (&lp + &l2 * 2) - &l3;
    let a = &l2 * &lp - &l2 * &l2 * 2 * ln_4pi_3 / (l3 * 3);
    let b = (lp + l2 + 1) / 2;
    Ok((a, b))
}

fn eq9(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<Plan> {
    let ctx = ch.ctx();
    let (s, e) = n_range(case, ov)?;
    let fixed_a = ov.constants.get("a").cloned();
    let fixed_b = ov.constants.get("b").cloned();
    let mut notes = Vec::new();
    for (k, v) in [("a", &fixed_a), ("b", &fixed_b)] {
        if let Some(v) = v {
            notes.push(format!("constant {k} overridden to {}", decimal(v)));
        }
    }
    let norm = |n: i64, e: &Eval| -> Result<Real> {
        let l = e.int(n).ln()?;
        Ok(&l * &l * n)
    };
    let pick = move |fixed: &Option<Real>, e: &Eval, which: usize| -> Result<Real> {
        match fixed {
            Some(v) => Ok(v.clone()),
            None => {
                let (a, b) = sharp_ratio_constants(&e.ctx())?;
                Ok(if which == 0 { a } else { b })
            }
        }
    };
    let diff = of_n(|n, e| Ok(e.s(n)? - e.s(n + 1)?));
    let band = Band::new("ln ratio = s(n) - s(n+1)", int_points(s, e)?, diff.clone())
        .above(Bound::non_strict(of_n(move |n, e| Ok(pick(&fixed_a, e, 0)? / norm(n, e)?))))
        .below(Bound::strict(of_n(move |n, e| Ok(pick(&fixed_b, e, 1)? / norm(n, e)?))))
        .exp_display();

    // Largest normalized gap n (ln n)^2 ln(ratio) over the range.
    let mut best: Option<(Real, u64)> = None;
    let normalized = of_n(move |n, e| Ok((e.s(n)? - e.s(n + 1)?) * norm(n, e)?));
    for n in s..=e {
        let v = ch.evaluate(&normalized, &Point::Int(n))?;
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, n));
        }
    }
    if let Some((v, n)) = best {
        notes.push(format!(
            "largest n (ln n)^2 ln(ratio) = {} at n = {n}; b = {}",
            decimal(&v),
            decimal(&sharp_ratio_constants(ctx)?.1)
        ));
    }
    Ok(Plan::Bands {
        bands: vec![band],
        grid: int_grid(s, e, ctx),
        notes,
    })
}

fn eq26(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<Plan> {
    let ctx = ch.ctx();
    let (s, e) = n_range(case, ov)?;
    let ints = Band::new(
        "ln Q(n+1) - ln Q(n)",
        int_points(s, e)?,
        of_n(|n, e| Ok(e.lq(n + 1)? - e.lq(n)?)),
    )
    .above(Bound::strict(of_n(|n, e| Ok(e.ln_ratio(n + 2, n + 3)? / 2))))
    .below(Bound::strict(of_n(|n, e| Ok(e.ln_ratio(n + 2, n + 3)? / 4))))
    .exp_display();

    let g = match &ov.grid {
        Some(g) => g.at(ctx),
        None => GridSpec::linear(
            Real::from_ratio(-99, 100, ctx),
            Real::from_ratio(99, 100, ctx),
            199,
        )?,
    };
    let zero = Real::zero(ctx);
    let minus_one = Real::from_i64(-1, ctx);
    let (xs, dropped) = exclude_near(g.points(), &[zero.clone(), minus_one.clone()], ctx);
    let xs: Vec<Real> = xs.into_iter().filter(|x| *x > minus_one).collect();
    let log_frac = |x: &Real| -> Result<Real> { Ok((x + 2).ln()? - (x + 3).ln()?) };
    let continuous = Band::new(
        "real x: ln Q(x+1) - ln Q(x)",
        reals(&xs),
        of_x(|x, _| Ok(ln_root_volume(&(x + 1))? - ln_root_volume(x)?)),
    )
    .above(Bound::strict(of_x(move |x, _| Ok(log_frac(x)? / 2))))
    .below(Bound::strict(of_x(move |x, _| Ok(log_frac(x)? / 4))))
    .exp_display();
    Ok(Plan::Bands {
        bands: vec![ints, continuous],
        grid: int_grid(s, e, ctx),
        notes: vec![
            format!(
                "also checked for real x ∈ ({}, {}) through the continuous extension ln Q; the stated range n ≥ -1 leaves open whether real n is meant",
                g.start().to_plain(6),
                g.end().to_plain(6)
            ),
            exclusion_note(&[minus_one, zero], &dropped, ctx),
        ],
    })
}

fn eq7(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<Plan> {
    let ctx = ch.ctx();
    let g = grid_of(case, ov, ctx)?;
    let one = Real::one(ctx);
    let (pts, dropped) = exclude_near(positive_only(g.points()), &[one.clone()], ctx);
    let (low, high): (Vec<Real>, Vec<Real>) = pts.iter().cloned().partition(|x| *x < one);
    let mut bands = vec![derivative_band(AQ, "increasing on (0, ∞)", 1, &pts, Sign::Positive)];
    // Differences only within each side of the removable singularity.
    let mut d_low = difference_band(AQ, "increasing on (0, ∞)", &low, true);
    let d_high = difference_band(AQ, "increasing on (0, ∞)", &high, true);
    d_low.points.extend(d_high.points);
    bands.push(d_low);
    bands.push(
        Band::new("AQ on (1, ∞)", reals(&high), of_x(|x, _| lgamma_over_xlogx(x)))
            .above(Bound::strict(quantity(|_, e| Ok(1 - euler_gamma(&e.ctx())))))
            .below(Bound::strict(constant(1, 1))),
    );
    Ok(Plan::Bands {
        bands,
        grid: Some(g.summary()),
        notes: vec![exclusion_note(&[one], &dropped, ctx)],
    })
}

fn thm1(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<Plan> {
    let ctx = ch.ctx();
    let g = grid_of(case, ov, ctx)?;
    let half = Real::from_ratio(1, 2, ctx);
    let eps = ctx.exclusion_radius();
    let (pts, dropped) = exclude_near(positive_only(g.points()), &[half.clone()], ctx);
    let mut low: Vec<Real> = pts.iter().filter(|x| **x < half).cloned().collect();
    let mut high: Vec<Real> = pts.iter().filter(|x| **x > half).cloned().collect();
    low.push(&half - &eps);
    high.insert(0, &half + &eps);
    let bands = match case.id {
        "THM1_F_INC_LOW" => monotone(F, "increasing on (0, 1/2)", &low, true),
        "THM1_F_INC_HIGH" => monotone(F, "increasing on (1/2, ∞)", &high, true),
        _ => vec![
            derivative_band(F, "concave on (1/2, ∞)", 2, &high, Sign::Negative),
            slope_band(F, "concave on (1/2, ∞)", &high, false),
        ],
    };
    Ok(Plan::Bands {
        bands,
        grid: Some(g.summary()),
        notes: vec![
            format!("points 1/2 ± 2^-{} added at the edge of the exclusion radius", ctx.bits() / 4),
            exclusion_note(&[half], &dropped, ctx),
        ],
    })
}

const SAMPLE_Y: [(i64, i64); 5] = [(-1, 2), (0, 1), (1, 2), (1, 1), (4, 1)];

/// `ln[Γ(x+y+1)/Γ(y+1)] / x - ln[Γ(x+y+1+t)/Γ(y+1)] / (x+t)`.
fn gamma_ratio_log(x: &Real, y: &Real, t: &Real, e: &Eval) -> Result<Real> {
    let c = e.ctx();
    let base = lgamma(&(y + 1), &c)?;
    let a = (lgamma(&(x + y + 1), &c)? - &base) / x;
    let b = (lgamma(&(x + y + t + 1), &c)? - &base) / (x + t);
    Ok(a - b)
}

fn yaming_bands(ctx: &PrecisionContext) -> Vec<Band> {
    let r = |n, d| Real::from_ratio(n, d, ctx);
    let mut valid = Vec::new();
    let mut reversed = Vec::new();
    for (yn, yd) in SAMPLE_Y {
        let y = r(yn, yd);
        for dx in [(1, 2), (1, 1), (4, 1), (9, 1), (49, 1)] {
            valid.push(Point::Tuple(vec![r(dx.0, dx.1) + 1, y.clone()]));
        }
        let floor = (-&y).max(Real::zero(ctx));
        let width = 1 - &floor;
        for f in [1, 3, 5, 7, 9] {
            reversed.push(Point::Tuple(vec![&floor + &width * r(f, 10), y.clone()]));
        }
    }
    let value = quantity(|p, e| {
        let t = p.tuple();
        let (x, y) = (e.real(&t[0]), e.real(&t[1]));
        gamma_ratio_log(&x, &y, &e.int(1), e)
    });
    let bound = quantity(|p, e| {
        let t = p.tuple();
        let s = e.real(&t[0]) + e.real(&t[1]);
        Ok(((&s).ln()? - (s + 1).ln()?) / 2)
    });
    vec![
        Band::new("x + y > y + 1 > 0", valid, value.clone())
            .below(Bound::strict(bound.clone()))
            .exp_display(),
        Band::new("reversed for 0 < x + y < y + 1", reversed, value)
            .above(Bound::strict(bound))
            .exp_display(),
    ]
}

fn tjm_bands(ctx: &PrecisionContext) -> Vec<Band> {
    let r = |n, d| Real::from_ratio(n, d, ctx);
    let mut pts = Vec::new();
    for t in [(1, 4), (1, 2), (1, 1), (2, 1), (5, 1)] {
        for (yn, yd) in SAMPLE_Y {
            let y = r(yn, yd);
            for dx in [(3, 10), (7, 10), (8, 5), (21, 5), (41, 2)] {
                let x = r(dx.0, dx.1) - &y - 1;
                pts.push(Point::Tuple(vec![x, y.clone(), r(t.0, t.1)]));
            }
        }
    }
    let value = quantity(|p, e| {
        let v = p.tuple();
        gamma_ratio_log(&e.real(&v[0]), &e.real(&v[1]), &e.real(&v[2]), e)
    });
    let log_base = |v: &[Real], e: &Eval| -> Result<Real> {
        let s = e.real(&v[0]) + e.real(&v[1]) + 1;
        Ok((&s).ln()? - (s + e.real(&v[2])).ln()?)
    };
    let lower = quantity(move |p, e| {
        let v = p.tuple();
        let y1 = e.real(&v[1]) + 1;
        let a = y1.recip()?.max(e.int(1));
        Ok(a * log_base(v, e)?)
    });
    let upper = quantity(move |p, e| {
        let v = p.tuple();
        let y1 = e.real(&v[1]) + 1;
        let b = (y1 * 2).recip()?.min(e.int(1));
        Ok(b * log_base(v, e)?)
    });
    vec![Band::new("gamma ratio, log form", pts, value)
        .above(Bound::strict(lower))
        .below(Bound::strict(upper))
        .exp_display()]
}

fn side(label: &str, verdict: Verdict, witness: Option<Witness>, points: usize, detail: String) -> SideReport {
    SideReport {
        label: label.to_string(),
        strict: true,
        verdict,
        min_margin: None,
        witness,
        points,
        equality_points: Vec::new(),
        inconclusive_points: 0,
        detail: Some(detail),
        signed_margin: None,
    }
}

fn spot_values(ch: &Checker, case: &ClaimCase) -> Result<CheckReport> {
    let rep = verify_spot_values(ch.ctx())?;
    let sides = rep
        .entries
        .iter()
        .map(|s| {
            let verdict = if s.within_tolerance {
                Verdict::Verified
            } else {
                Verdict::Counterexample
            };
            let mut detail = format!(
                "value {}, relative error {} (tolerance {})",
                decimal(&s.computed),
                s.relative_error.to_decimal(3),
                rep.tolerance.to_decimal(3)
            );
            if let (Some(q), Some(r)) = (s.quoted, &s.rendered) {
                detail.push_str(&format!(", quoted {q}, computed {r}"));
            }
            side(s.label, verdict, None, 1, detail)
        })
        .collect();
    let mut r = CheckReport::from_sides(case.id, case.statement, case.anchor, false, sides, rep.bits);
    for d in rep.decimal_discrepancies() {
        r.notes.push(format!(
            "quoted decimal {} for {} disagrees with its closed form, which evaluates to {}",
            d.quoted.unwrap_or_default(),
            d.label,
            d.rendered.clone().unwrap_or_default()
        ));
    }
    Ok(r)
}

fn cascade_grid(case: &ClaimCase, ov: &Overrides, ctx: &PrecisionContext) -> Result<GridSpec> {
    if let Some(g) = &ov.grid {
        return Ok(g.at(ctx));
    }
    let Domain::Grid { count, .. } = case.domain else {
        unreachable!("cascade claims carry a grid domain")
    };
    GridSpec::linear(
        Real::from_ratio(1, 2, ctx) + ctx.exclusion_radius(),
        Real::from_i64(50, ctx),
        count,
    )
}

fn chain_identities(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<CheckReport> {
    let ctx = ch.ctx();
    let g = cascade_grid(case, ov, ctx)?;
    let checks = verify_chain_identities(&g, ctx)?;
    let mut bits = ctx.bits();
    let sides = checks
        .iter()
        .map(|c| {
            bits = bits.max(c.bits_used);
            let verdict = if c.holds {
                Verdict::Verified
            } else {
                Verdict::Counterexample
            };
            let witness = c
                .failures
                .first()
                .or(c.worst_point.as_ref())
                .map(|x| Witness::Decimal(decimal(x)));
            side(
                c.label,
                verdict,
                witness,
                c.points,
                format!("largest |residual| / tolerance = {:.3e}", c.worst_ratio),
            )
        })
        .collect();
    let mut r = CheckReport::from_sides(case.id, case.statement, case.anchor, false, sides, bits);
    r.grid = Some(g.summary());
    r.notes.push("relations of the second proof use a log grid on [0.001, end] of the same size".into());
    Ok(r)
}

fn sign_claims(ch: &Checker, case: &ClaimCase, ov: &Overrides) -> Result<CheckReport> {
    let ctx = ch.ctx();
    let g = cascade_grid(case, ov, ctx)?;
    let checks = verify_sign_claims(&g, ctx)?;
    let mut bits = ctx.bits();
    let sides = checks
        .into_iter()
        .map(|c| {
            bits = bits.max(c.bits_used);
            let verdict = if c.counterexample.is_some() {
                Verdict::Counterexample
            } else if !c.inconclusive.is_empty() {
                Verdict::Inconclusive
            } else {
                Verdict::Verified
            };
            let witness = c
                .counterexample
                .as_ref()
                .or(c.inconclusive.first())
                .or(c.worst_point.as_ref())
                .map(|x| Witness::Decimal(decimal(x)));
            let expected = if c.expected == Sign::Positive { "> 0" } else { "< 0" };
            SideReport {
                label: c.label.to_string(),
                strict: true,
                verdict,
                min_margin: c.min_margin.as_ref().map(decimal),
                witness,
                points: c.points,
                equality_points: Vec::new(),
                inconclusive_points: c.inconclusive.len(),
                detail: Some(format!(
                    "expected {expected} on [{}, {}]",
                    c.domain.0.to_plain(10),
                    c.domain.1.to_plain(10)
                )),
                signed_margin: c.min_margin,
            }
        })
        .collect();
    let mut r = CheckReport::from_sides(case.id, case.statement, case.anchor, false, sides, bits);
    r.grid = Some(g.summary());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharp_constants_match_closed_forms() {
        let c = PrecisionContext::default();
        let (a, b) = sharp_ratio_constants(&c).unwrap();
        // Quoted as 0.3... and 1.4...; digits from mpmath at 30 dps.
        assert_eq!(a.to_plain(20), "0.37584450483689160214");
        assert_eq!(b.to_plain(20), "1.4189385332046727418");
    }
}
