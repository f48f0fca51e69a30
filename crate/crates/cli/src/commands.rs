use std::fs;
use std::io::Write;

use serde::Serialize;

use ballcert_core::claims::{
    check_many, default_function_grid, lookup, registry, scan_case, search_open27, table_for,
    CheckReport, ClaimKind, FrontierEntry, OpenProblemParams, Overrides, Param, Verdict,
    DEFAULT_N_MAX, DEFAULT_SCAN_ORDER, DEFAULT_TABLE_ROWS,
};
use ballcert_core::grid::GridSpec;
use ballcert_core::real::{PrecisionContext, Real, DEFAULT_BITS, DEFAULT_MAX_BITS};

use crate::args::{Command, RunArgs};
use crate::error::{exit, CliError};
use crate::render;

/// Defaults in force for every run, echoed into each output.
#[derive(Debug, Serialize)]
pub struct Defaults {
    pub bits: u32,
    pub max_bits: u32,
    pub n_max: u64,
    pub grid: String,
    pub scan_order: usize,
    pub table_rows: u64,
}

/// Run parameters; `null` fields fall back to the defaults or to each
/// claim's own domain, which its report records under `grid`.
#[derive(Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub ids: Vec<String>,
    pub bits: u32,
    pub max_bits: u32,
    pub n_max: Option<u64>,
    pub grid: Option<String>,
    pub max_order: Option<usize>,
    pub defaults: Defaults,
}

struct Run {
    args: RunArgs,
    ctx: PrecisionContext,
    overrides: Overrides,
    header: Header,
}

fn grid_string(g: &GridSpec) -> String {
    let s = g.summary();
    format!("{}:{}:{}:{}", s.start, s.end, s.count, s.spacing)
}

fn prepare(command: &'static str, args: RunArgs) -> Result<Run, CliError> {
    let ctx = PrecisionContext::new(args.prec, args.max_prec)?;
    let grid = args.grid.as_deref().map(|g| GridSpec::parse(g, &ctx)).transpose()?;
    let overrides = Overrides {
        n_max: args.n_max,
        grid: grid.clone(),
        max_order: args.max_order,
        allow_high_order: args.allow_high_order,
        ..Overrides::default()
    };
    let header = Header {
        tool: "ballcert",
        version: env!("CARGO_PKG_VERSION"),
        command,
        ids: args.ids.clone(),
        bits: ctx.bits(),
        max_bits: ctx.max_bits(),
        n_max: args.n_max,
        grid: grid.as_ref().map(grid_string),
        max_order: args.max_order,
        defaults: Defaults {
            bits: DEFAULT_BITS,
            max_bits: DEFAULT_MAX_BITS,
            n_max: DEFAULT_N_MAX,
            grid: grid_string(&default_function_grid(&PrecisionContext::default())),
            scan_order: DEFAULT_SCAN_ORDER,
            table_rows: DEFAULT_TABLE_ROWS,
        },
    };
    Ok(Run { args, ctx, overrides, header })
}

pub fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Verify(a) => verify(prepare("verify", a)?),
        Command::Table(a) => table(prepare("table", a)?),
        Command::Scan(a) => scan(prepare("scan", a)?),
        Command::Search(a) => search(prepare("search", a)?),
        Command::Registry(a) => list(prepare("registry", a)?),
    }
}

/// Expands `all` and rejects an empty selection.
fn resolve_ids(ids: &[String]) -> Result<Vec<String>, CliError> {
    if ids.is_empty() {
        return Err(CliError::Usage("--id is required (a claim id or `all`)".into()));
    }
    if ids.iter().any(|i| i == "all") {
        return Ok(registry().iter().map(|c| c.id.to_string()).collect());
    }
    Ok(ids.to_vec())
}

/// Exit status of a set of verdicts: any violation wins over any
/// inconclusive result.
pub fn status<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> i32 {
    let mut code = exit::VERIFIED;
    for v in verdicts {
        if v.is_violation() {
            return exit::COUNTEREXAMPLE;
        }
        if *v == Verdict::Inconclusive {
            code = exit::INCONCLUSIVE;
        }
    }
    code
}

fn emit(run: &Run, text: String) -> Result<(), CliError> {
    match &run.args.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(CliError::Stdout),
    }
}

fn verify(run: Run) -> Result<i32, CliError> {
    let ids = resolve_ids(&run.args.ids)?;
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let reports = check_many(&refs, &run.ctx, &run.overrides)?;
    emit(&run, render::reports(run.args.format, &run.header, &reports)?)?;
    Ok(status(reports.iter().map(|r| &r.verdict)))
}

fn scan(run: Run) -> Result<i32, CliError> {
    let ids = if run.args.ids.is_empty() {
        registry()
            .iter()
            .filter(|c| c.kind == ClaimKind::DerivativeSigns)
            .map(|c| c.id.to_string())
            .collect()
    } else {
        resolve_ids(&run.args.ids)?
    };
    for id in &ids {
        let case = lookup(id)?;
        if case.kind != ClaimKind::DerivativeSigns {
            return Err(CliError::Usage(format!("{id} is not a derivative-sign scan")));
        }
    }
    let mut reports: Vec<CheckReport> = Vec::new();
    for id in &ids {
        reports.extend(scan_case(id, &run.ctx, &run.overrides)?);
    }
    emit(&run, render::reports(run.args.format, &run.header, &reports)?)?;
    Ok(status(reports.iter().map(|r| &r.verdict)))
}

fn table(run: Run) -> Result<i32, CliError> {
    let id = match run.args.ids.as_slice() {
        [id] if id != "all" => id.clone(),
        _ => return Err(CliError::Usage("table takes exactly one claim id".into())),
    };
    let t = table_for(&id, &run.ctx, &run.overrides)?;
    emit(&run, render::table(run.args.format, &run.header, &id, &t)?)?;
    Ok(exit::VERIFIED)
}

/// The search report without its per-dimension threshold table.
#[derive(Debug, Serialize)]
pub struct SearchView<'a> {
    pub n_max: u64,
    pub instance: &'a OpenProblemParams,
    pub instance_feasible: bool,
    pub instance_check: &'a CheckReport,
    pub frontier: &'a [FrontierEntry],
    pub empirical: Vec<(Param, &'a Real)>,
    pub note: &'static str,
}

fn search(run: Run) -> Result<i32, CliError> {
    match run.args.ids.as_slice() {
        [] => {}
        [id] if id == "EQ27_OPEN" => {}
        _ => return Err(CliError::Usage("search supports only --id EQ27_OPEN".into())),
    }
    let n_max = run.overrides.n_max.unwrap_or(DEFAULT_N_MAX);
    let rep = search_open27(n_max, &run.ctx)?;
    let view = SearchView {
        n_max: rep.n_max,
        instance: &rep.instance,
        instance_feasible: rep.instance_check.verdict.is_pass(),
        instance_check: &rep.instance_check,
        frontier: &rep.frontier,
        empirical: rep.empirical.iter().map(|(p, v)| (*p, v)).collect(),
        note: rep.note,
    };
    emit(&run, render::search(run.args.format, &run.header, &view)?)?;
    Ok(status([&rep.instance_check.verdict]))
}

fn list(run: Run) -> Result<i32, CliError> {
    emit(&run, render::registry(run.args.format, &run.header, &registry())?)?;
    Ok(exit::VERIFIED)
}
