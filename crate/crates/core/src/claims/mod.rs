//! Registry of verifiable statements and the checker that turns each into a
//! [`CheckReport`].

mod cases;
mod eval;
mod limits;
mod open;
mod report;
mod scan;
mod table;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Spacing};
use crate::real::{PrecisionContext, Real};

pub use eval::{Checker, Point, REFINE_BITS};
pub use cases::sharp_ratio_constants;
pub use limits::{extrapolate_limit, LimitReport, LimitRow, LimitSequence, LIMIT_TOLERANCE};
pub use open::{
    search_open27, FrontierEntry, FrontierRow, OpenProblemParams, OpenProblemReport, Param,
    BISECTION_STEPS,
};
pub use report::{decimal, CheckReport, SideReport, Verdict, Witness, REPORT_DIGITS};
pub use scan::{
    scan_case, scan_derivative_signs, ScanFunction, DEFAULT_SCAN_ORDER, OPT_IN_SCAN_ORDER,
};
pub use table::{table_for, Table};

/// Largest dimension of sequence claims unless overridden.
pub const DEFAULT_N_MAX: u64 = 100_000;
/// Points of the default function grid.
pub const DEFAULT_GRID_COUNT: usize = 2048;
/// Rows of a sequence table when no `n_max` is given.
pub const DEFAULT_TABLE_ROWS: u64 = 20;

/// The default grid of function claims: `[0.01, 200]`, logarithmic.
pub fn default_function_grid(ctx: &PrecisionContext) -> GridSpec {
    GridSpec::log(
        Real::from_ratio(1, 100, ctx),
        Real::from_i64(200, ctx),
        DEFAULT_GRID_COUNT,
    )
    .expect("valid default grid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimKind {
    TwoSidedIneq,
    OneSidedIneq,
    Monotone,
    Concave,
    Convex,
    LogConvexSeq,
    Limit,
    DerivativeSigns,
    Identity,
    SpotValues,
    ConstantSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    Strict,
    NonStrict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Proved in the source; a violation is a counterexample.
    Theorem,
    /// Stated as a conjecture; reported as consistent-with or refuted.
    Conjecture,
}

/// Where a claim is checked by default.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    /// `n ∈ [start, n_max]`; `n_max` is overridable.
    Integers { start: u64, default_end: u64 },
    /// A real grid; overridable by `--grid`.
    Grid {
        start: String,
        end: String,
        count: usize,
        spacing: Spacing,
    },
    /// A fixed evaluation schedule or sample.
    Fixed { description: &'static str },
}

impl Domain {
    fn ints(start: u64) -> Self {
        Domain::Integers {
            start,
            default_end: DEFAULT_N_MAX,
        }
    }

    fn grid(start: &str, end: &str, count: usize, spacing: Spacing) -> Self {
        Domain::Grid {
            start: start.into(),
            end: end.into(),
            count,
            spacing,
        }
    }

    fn default_grid() -> Self {
        Self::grid("0.01", "200", DEFAULT_GRID_COUNT, Spacing::Log)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCase {
    pub id: &'static str,
    pub kind: ClaimKind,
    pub status: Status,
    pub strictness: Strictness,
    pub domain: Domain,
    pub statement: &'static str,
    /// Evaluators the check is built from.
    pub expressions: &'static [&'static str],
    pub anchor: &'static str,
}

impl ClaimCase {
    pub fn is_conjecture(&self) -> bool {
        self.status == Status::Conjecture
    }
}

/// Per-run changes to a claim's default domain or constants.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    /// Largest dimension of sequence claims.
    pub n_max: Option<u64>,
    /// Replaces the default grid of function claims.
    pub grid: Option<GridSpec>,
    /// Named constants, e.g. `a` and `b` of the sharp double inequality.
    pub constants: BTreeMap<String, Real>,
    /// Highest derivative order of sign scans.
    pub max_order: Option<usize>,
    /// Allows scan orders above [`DEFAULT_SCAN_ORDER`].
    pub allow_high_order: bool,
}

macro_rules! case {
    ($id:literal, $kind:ident, $status:ident, $strict:ident, $domain:expr, $stmt:literal, [$($e:literal),*], $anchor:literal) => {
        ClaimCase {
            id: $id,
            kind: ClaimKind::$kind,
            status: Status::$status,
            strictness: Strictness::$strict,
            domain: $domain,
            statement: $stmt,
            expressions: &[$($e),*],
            anchor: $anchor,
        }
    };
}

/// Every checkable statement, in a fixed order.
pub fn registry() -> Vec<ClaimCase> {
    use Spacing::{Linear, Log};
    vec![
        case!("EQ2_INC", Monotone, Theorem, Strict, Domain::grid("2", "200", DEFAULT_GRID_COUNT, Log),
            "(1/x) ln Γ(1+x/2) is strictly increasing on [2, ∞)",
            ["half_lgamma_per_x"],
            "Introduction: prior result on (1/x) ln Γ(1+x/2), increasing from [2,∞) onto [0,∞)"),
        case!("EQ3_LIMIT", Limit, Theorem, Strict, Domain::Fixed { description: "x = 2^k, k = 1..=20" },
            "ln Γ(1+x/2)/(x ln x) → 1/2 as x → ∞, with values below 1/2",
            ["half_lgamma_per_xlogx"],
            "Introduction: limit of ln Γ(1+x/2)/(x ln x), onto [0,1/2)"),
        case!("EQ4_LIMIT", Limit, Theorem, Strict, Domain::Fixed { description: "n = 2^k, k = 1..=20" },
            "Ω_n^(1/(n ln n)) → e^(-1/2)",
            ["ln_omega"],
            "Introduction: limit of the n ln n-th root of the unit-ball volume"),
        case!("SERIES_PROBE", Monotone, Theorem, Strict, Domain::ints(2),
            "the terms Ω_n^(1/ln n) of the convergent series are strictly decreasing (consecutive ratio < 1)",
            ["ln_omega"],
            "Introduction: the series of Ω_n^(1/ln n) over n ≥ 2 is convergent"),
        case!("OMEGA_1N_DEC_LOGCONVEX", LogConvexSeq, Theorem, Strict, Domain::ints(1),
            "Ω_n^(1/n) is strictly decreasing and strictly logarithmically convex",
            ["ln_root_volume"],
            "Remarks: Q(n) = Ω_n^(1/n), decreasing and log-convex as a consequence of logarithmic complete monotonicity of Q"),
        case!("EQ6_AQ_SIGNS", DerivativeSigns, Theorem, Strict, Domain::default_grid(),
            "(-1)^(m-1) [ln Γ(x+1)/(x ln x)]^(m) > 0 for x > 0, orders m ≤ 8",
            ["lgamma_over_xlogx"],
            "Introduction: prior result on the derivatives of ln Γ(x+1)/(x ln x) for x > 0"),
        case!("EQ7_AQ_RANGE", Monotone, Theorem, Strict, Domain::default_grid(),
            "ln Γ(x+1)/(x ln x) is strictly increasing on (0, ∞) and maps (1, ∞) into (1-γ, 1)",
            ["lgamma_over_xlogx"],
            "Introduction: prior result, increasing from (1,∞) onto (1-γ,1), and increasing on (0,∞)"),
        case!("THM1_F_INC_LOW", Monotone, Theorem, Strict, Domain::default_grid(),
            "F(x) = ln Γ(x+1)/(x ln 2x) is strictly increasing on (0, 1/2)",
            ["lgamma_over_xlog2x"],
            "Main theorem on F: strictly increasing on (0,1/2)"),
        case!("THM1_F_INC_HIGH", Monotone, Theorem, Strict, Domain::default_grid(),
            "F(x) is strictly increasing on (1/2, ∞)",
            ["lgamma_over_xlog2x"],
            "Main theorem on F: strictly increasing on (1/2,∞)"),
        case!("THM1_F_CONCAVE", Concave, Theorem, Strict, Domain::default_grid(),
            "F(x) is strictly concave on (1/2, ∞)",
            ["lgamma_over_xlog2x"],
            "Main theorem on F: strictly concave on (1/2,∞)"),
        case!("THM2_LOGCONVEX", LogConvexSeq, Theorem, Strict, Domain::ints(2),
            "Ω_n^(1/(n ln n)) is strictly logarithmically convex for n ≥ 2",
            ["ln_volume_nlogn_root"],
            "Theorem on the sequence Ω_n^(1/(n ln n)): strictly log-convex for n ≥ 2"),
        case!("THM2_RATIO_DEC", Monotone, Theorem, Strict, Domain::ints(2),
            "Ω_n^(1/(n ln n)) / Ω_(n+1)^(1/((n+1) ln(n+1))) is strictly decreasing for n ≥ 2",
            ["ln_volume_nlogn_root"],
            "Theorem on the sequence Ω_n^(1/(n ln n)): consecutive ratio strictly decreasing for n ≥ 2"),
        case!("EQ9_SHARP", TwoSidedIneq, Theorem, NonStrict, Domain::ints(2),
            "exp(a/(n ln²n)) ≤ Ω_n^(1/(n ln n)) / Ω_(n+1)^(1/((n+1) ln(n+1))) < exp(b/(n ln²n)) for n ≥ 2 with a = ln2 lnπ - 2 ln²2 ln(4π/3)/(3 ln3), b = (1 + ln 2π)/2",
            ["ln_volume_nlogn_root"],
            "Introduction: prior sharp double inequality for the consecutive ratio, valid for n ≥ 2 iff a and b satisfy the stated bounds"),
        case!("EQ11_G_BAND", TwoSidedIneq, Theorem, Strict, Domain::grid("3", "1000000", DEFAULT_GRID_COUNT, Log),
            "2/3 < G(x) < 1 for x ≥ 3, G(x) = [1 - ln x/ln(x+1)] x ln x, and G(x) ≥ G(3) = 3(2 ln2 - ln3) ln3/(2 ln2)",
            ["log_ratio_defect"],
            "Introduction: prior double inequality for G on x ≥ 3; Remarks: lower constant sharpened to G(3)"),
        case!("THM3_G_INC", Monotone, Theorem, Strict, Domain::grid("0.001", "1000000", DEFAULT_GRID_COUNT, Log),
            "G(x) is strictly increasing on (0, ∞)",
            ["log_ratio_defect"],
            "Theorem on G: strictly increasing on (0,∞)"),
        case!("EQ13_LIMITS", Limit, Theorem, Strict, Domain::Fixed { description: "x = 10^k and x = 10^-k, k = 1..=20" },
            "G(x) → -∞ as x → 0+ and G(x) → 1 as x → ∞",
            ["log_ratio_defect"],
            "Theorem on G: limits at 0+ and at ∞"),
        case!("CONJ_FA_SIGNS", DerivativeSigns, Conjecture, Strict, Domain::default_grid(),
            "(-1)^(m-1) F_a^(m)(x) > 0 for x > 1/a, F_a(x) = ln Γ(x+1)/(x ln ax), a ∈ {2, e, 10}, orders m ≤ 8",
            ["lgamma_over_xlog_ax"],
            "Remarks: conjectured derivative signs of F_a for x > 1/a"),
        case!("CONJ_CM_1_MINUS_G", DerivativeSigns, Conjecture, Strict, Domain::default_grid(),
            "(-1)^(k-1) G^(k)(x) > 0 on (0, ∞), orders k ≤ 8 (1 - G completely monotonic)",
            ["log_ratio_defect"],
            "Remarks: conjectured complete monotonicity of 1 - G on (0,∞)"),
        case!("Q_LCM_SCAN", DerivativeSigns, Conjecture, Strict, Domain::default_grid(),
            "(-1)^k [ln Q]^(k)(x) ≥ 0 on (-2, ∞) \\ {0}, Q(x) = √π / Γ(1+x/2)^(1/x), orders k ≤ 8",
            ["ln_root_volume"],
            "Remarks: Q is logarithmically completely monotonic on (-2,∞)"),
        case!("EQ17_RATIO", LogConvexSeq, Theorem, Strict, Domain::ints(1),
            "Ω_n^(1/n) / Ω_(n+1)^(1/(n+1)) is strictly decreasing and strictly logarithmically convex",
            ["ln_root_volume"],
            "Remarks: the consecutive ratio of Ω_n^(1/n), decreasing and log-convex"),
        case!("EQ18_BAND", TwoSidedIneq, Theorem, NonStrict, Domain::ints(1),
            "Ω_(n+1)^(n/(n+1)) < Ω_n ≤ (2/√π)^n Ω_(n+1)^(n/(n+1))",
            ["ln_omega"],
            "Remarks: double inequality derived from the decreasing ratio of Ω_n^(1/n)"),
        case!("EQ18_VS_19", OneSidedIneq, Theorem, Strict, Domain::Integers { start: 1, default_end: 4 },
            "(2/√π)^n < √e exactly for 1 ≤ n ≤ 4, so the upper factor of the first band beats √e there",
            ["ln_omega"],
            "Remarks: comparison of the two upper factors for n from 1 to 4"),
        case!("EQ19_BAND", TwoSidedIneq, Theorem, NonStrict, Domain::ints(1),
            "(2/√π) Ω_(n+1)^(n/(n+1)) ≤ Ω_n < √e Ω_(n+1)^(n/(n+1))",
            ["ln_omega"],
            "Remarks: prior double inequality for Ω_n against Ω_(n+1)^(n/(n+1))"),
        case!("EQ20_YAMING", TwoSidedIneq, Theorem, Strict, Domain::Fixed { description: "5x5 (x, y) sample on both validity regions" },
            "[Γ(x+y+1)/Γ(y+1)]^(1/x) / [Γ(x+y+2)/Γ(y+1)]^(1/(x+1)) < √((x+y)/(x+y+1)) iff x+y > y+1 > 0, reversed iff 0 < x+y < y+1",
            ["lgamma"],
            "Remarks: prior gamma-ratio inequality and its reversal"),
        case!("EQ21_BAND", OneSidedIneq, Theorem, Strict, Domain::ints(3),
            "Ω_(n+2)^(1/(n+2)) / Ω_n^(1/n) < (n/(n+2))^(1/4) for n > 2",
            ["ln_root_volume"],
            "Remarks: gamma-ratio inequality at y = 0, x = n/2"),
        case!("EQ22_BAND", OneSidedIneq, Theorem, Strict, Domain::ints(2),
            "Ω_(n+5)^(1/(n+3)) / Ω_(n+3)^(1/(n+1)) < π^(-2/((n+1)(n+3))) ((n+3)/(n+5))^(1/4) for n ≥ 2",
            ["ln_omega"],
            "Remarks: gamma-ratio inequality at y = 1, x = (n+1)/2"),
        case!("EQ23_TJM", TwoSidedIneq, Theorem, Strict, Domain::Fixed { description: "5x5x5 (x, y, t) sample with x > -y-1" },
            "((x+y+1)/(x+y+t+1))^a < [Γ(x+y+1)/Γ(y+1)]^(1/x) / [Γ(x+y+t+1)/Γ(y+1)]^(1/(x+t)) < ((x+y+1)/(x+y+t+1))^b for t > 0, y > -1, x > -y-1, a = max(1, 1/(y+1)), b = min(1, 1/(2(y+1)))",
            ["lgamma"],
            "Remarks: prior double gamma-ratio inequality with its admissible exponents"),
        case!("EQ24_BAND", TwoSidedIneq, Theorem, Strict, Domain::ints(1),
            "√((n+2)/(n+4)) < Ω_(n+2)^(1/(n+2)) / Ω_n^(1/n) < ((n+2)/(n+4))^(1/4)",
            ["ln_root_volume"],
            "Remarks: double gamma-ratio inequality at t = 1, y = 0, x = n/2"),
        case!("EQ24_VS_21", OneSidedIneq, Theorem, Strict, Domain::ints(3),
            "(n/(n+2))^(1/4) < ((n+2)/(n+4))^(1/4) for n ≥ 3",
            ["ln"],
            "Remarks: the y = 0 single bound is sharper than the upper bound of the t = 1 band when n ≥ 3"),
        case!("EQ25_BAND", TwoSidedIneq, Theorem, Strict, Domain::ints(1),
            "π^(-2/((n-2)n)) √((n+2)/(n+4)) < Ω_(n+2)^(1/n) / Ω_n^(1/(n-2)) < π^(-2/((n-2)n)) ((n+2)/(n+4))^(1/8)",
            ["ln_omega"],
            "Remarks: double gamma-ratio inequality at t = 1, y = 1, x = n/2 - 1"),
        case!("EQ26_BAND", TwoSidedIneq, Theorem, Strict, Domain::ints(1),
            "√((n+2)/(n+3)) < Ω_(n+1)^(1/(n+1)) / Ω_n^(1/n) < ((n+2)/(n+3))^(1/4)",
            ["ln_root_volume"],
            "Remarks: double gamma-ratio inequality at t = 1/2, y = 0, x = n/2"),
        case!("EQ27_OPEN", ConstantSearch, Conjecture, Strict, Domain::ints(1),
            "(1 - λ/(n+a))^(1/α) < Ω_(n+1)^(1/(n+1)) / Ω_n^(1/n) < (1 - μ/(n+b))^(1/β) at the feasible instance α = 2, λ = 1, a = 3, β = 4, μ = 1, b = 3",
            ["ln_root_volume"],
            "Remarks: open question on the best constants a ≥ 3, b ≤ 3, λ ≤ 1, μ ≥ 1, α ≥ 2, β ≤ 4"),
        case!("LEM1", TwoSidedIneq, Theorem, Strict, Domain::grid("0.05", "10000", DEFAULT_GRID_COUNT, Log),
            "ln x - 1/x < ψ(x) < ln x - 1/(2x) and (k-1)!/x^k + k!/(2x^(k+1)) < (-1)^(k+1) ψ^(k)(x) < (k-1)!/x^k + k!/x^(k+1), k = 1..=5",
            ["digamma_band_gaps", "polygamma_band_gaps"],
            "Lemmas: envelopes of the digamma and polygamma functions for x ∈ (0,∞), k ∈ ℕ"),
        case!("LEM2", OneSidedIneq, Theorem, Strict, Domain::default_grid(),
            "(1 + 1/x)^x > (x+1)/Γ(x+1)^(1/x) for x > 1, reversed for 0 < x < 1",
            ["power_vs_gamma_root_gap"],
            "Lemmas: power of (1 + 1/x) against the gamma root, reversed for 0 < x < 1"),
        case!("LEM3", TwoSidedIneq, Theorem, Strict, Domain::grid("0.001", "100", DEFAULT_GRID_COUNT, Log),
            "2t/(2+t) < ln(1+t) < t(2+t)/(2(1+t)) for t > 0, both reversed on (-1, 0)",
            ["log_bound_gaps"],
            "Lemmas: rational bounds of ln(1+t) for t > 0"),
        case!("THM2_PROOF_LOGCONVEX_FN", Convex, Theorem, Strict, Domain::default_grid(),
            "[ln Ω(x)/(x ln x)]'' > 0 for x > 1",
            ["ln_volume_nlogn_root"],
            "Proofs: the continuous n ln n-th root of the volume is strictly log-convex for x > 1"),
        case!("CASCADE_SPOT_VALUES", SpotValues, Theorem, Strict, Domain::Fixed { description: "x = 1/2, x = 1 and a large-x limit" },
            "quoted values of the auxiliary functions of the proofs match their closed forms",
            ["cascade"],
            "Proofs: spot values of the auxiliary functions at 1/2 and 1"),
        case!("CASCADE_CHAIN_IDENTITIES", Identity, Theorem, Strict, Domain::grid("0.5+2^-64", "50", 512, Linear),
            "every displayed derivative relation between the auxiliary functions holds",
            ["cascade"],
            "Proofs: derivative chain from φ down to the quintic λ, and the G decomposition"),
        case!("CASCADE_SIGN_CLAIMS", OneSidedIneq, Theorem, Strict, Domain::grid("0.5+2^-64", "50", 512, Linear),
            "every sign claim of the auxiliary functions holds on its interval",
            ["cascade"],
            "Proofs: signs of θ, the chain from λ'' up to h, and the second proof's f1, f2, u'/v'"),
    ]
}

/// The registry entry for `id`.
pub fn lookup(id: &str) -> Result<ClaimCase> {
    registry()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

/// Checks one claim with its default domain, as changed by `overrides`.
pub fn check_case(id: &str, ctx: &PrecisionContext, overrides: &Overrides) -> Result<CheckReport> {
    Checker::new(ctx.clone()).check(id, overrides)
}

/// Checks several claims sharing one volume cache; reports come back in the
/// order of `ids`.
pub fn check_many(ids: &[&str], ctx: &PrecisionContext, overrides: &Overrides) -> Result<Vec<CheckReport>> {
    for id in ids {
        lookup(id)?;
    }
    let checker = Checker::new(ctx.clone());
    ids.iter().map(|id| checker.check(id, overrides)).collect()
}

impl Checker {
    pub fn check(&self, id: &str, overrides: &Overrides) -> Result<CheckReport> {
        let case = lookup(id)?;
        cases::run(self, &case, overrides)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn ids_unique_and_anchored() {
        let reg = registry();
        let ids: HashSet<_> = reg.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), reg.len());
        assert!(reg.iter().all(|c| !c.anchor.is_empty() && !c.statement.is_empty()));
        assert!(ids.contains("EQ26_BAND"));
    }

    #[test]
    fn unknown_id() {
        let err = check_case("NOPE", &PrecisionContext::default(), &Overrides::default());
        assert_eq!(err.unwrap_err(), Error::UnknownClaim("NOPE".into()));
    }
}
