use serde::Serialize;

use ballcert_core::claims::{CheckReport, ClaimCase, Table};
use ballcert_core::real::SERIAL_DIGITS;

use crate::args::Format;
use crate::commands::{Header, SearchView};
use crate::error::CliError;

fn json<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

fn csv_doc<R: Serialize>(columns: Option<&[&str]>, rows: impl IntoIterator<Item = R>) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(columns.is_none()).from_writer(Vec::new());
    if let Some(cols) = columns {
        w.write_record(cols)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Stdout(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn text_header(h: &Header) -> String {
    let or_default = |v: Option<String>, d: String| match v {
        Some(v) => v,
        None => format!("{d} (default)"),
    };
    format!(
        "# {} {} {}\n# precision {} bits, ceiling {}; n_max {}; grid {}; scan order {}\n",
        h.tool,
        h.version,
        h.command,
        h.bits,
        h.max_bits,
        or_default(h.n_max.map(|n| n.to_string()), h.defaults.n_max.to_string()),
        or_default(h.grid.clone(), h.defaults.grid.clone()),
        or_default(h.max_order.map(|n| n.to_string()), h.defaults.scan_order.to_string()),
    )
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    header: &'a Header,
    reports: &'a [CheckReport],
}

#[derive(Serialize)]
struct ReportRow<'a> {
    id: &'a str,
    order: Option<usize>,
    verdict: &'a str,
    min_margin: Option<&'a str>,
    witness: Option<String>,
    bits_used: u32,
    grid_start: Option<&'a str>,
    grid_end: Option<&'a str>,
    grid_count: Option<usize>,
    grid_spacing: Option<String>,
    anchor: &'a str,
}

pub fn reports(format: Format, header: &Header, reports: &[CheckReport]) -> Result<String, CliError> {
    match format {
        Format::Json => json(&ReportDoc { header, reports }),
        Format::Csv => csv_doc(
            None,
            reports.iter().map(|r| ReportRow {
                id: &r.id,
                order: r.order,
                verdict: r.verdict.as_str(),
                min_margin: r.min_margin.as_deref(),
                witness: r.witness.as_ref().map(|w| w.to_string()),
                bits_used: r.bits_used,
                grid_start: r.grid.as_ref().map(|g| g.start.as_str()),
                grid_end: r.grid.as_ref().map(|g| g.end.as_str()),
                grid_count: r.grid.as_ref().map(|g| g.count),
                grid_spacing: r.grid.as_ref().map(|g| g.spacing.to_string()),
                anchor: &r.anchor,
            }),
        ),
        Format::Text => {
            let mut out = text_header(header);
            for r in reports {
                let id = match r.order {
                    Some(m) => format!("{} [order {m}]", r.id),
                    None => r.id.clone(),
                };
                out.push_str(&format!("{id:<28} {:<18}", r.verdict.as_str()));
                if let Some(m) = &r.min_margin {
                    out.push_str(&format!(" margin {m}"));
                }
                if let Some(w) = &r.witness {
                    out.push_str(&format!(" at {w}"));
                }
                out.push_str(&format!(" ({} bits)\n", r.bits_used));
                for s in &r.sides {
                    out.push_str(&format!("    {}: {}", s.label, s.verdict.as_str()));
                    if let Some(m) = &s.min_margin {
                        out.push_str(&format!(", margin {m}"));
                    }
                    if let Some(w) = &s.witness {
                        out.push_str(&format!(" at {w}"));
                    }
                    if !s.equality_points.is_empty() {
                        let eq: Vec<String> = s.equality_points.iter().map(|w| w.to_string()).collect();
                        out.push_str(&format!(", equality at {}", eq.join(", ")));
                    }
                    if s.inconclusive_points > 0 {
                        out.push_str(&format!(", {} inconclusive", s.inconclusive_points));
                    }
                    if let Some(d) = &s.detail {
                        out.push_str(&format!(" ({d})"));
                    }
                    out.push('\n');
                }
                for n in &r.notes {
                    out.push_str(&format!("    note: {n}\n"));
                }
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct TableDoc<'a> {
    header: &'a Header,
    id: &'a str,
    columns: &'a [String],
    rows: &'a [Vec<String>],
}

pub fn table(format: Format, header: &Header, id: &str, t: &Table) -> Result<String, CliError> {
    match format {
        Format::Json => json(&TableDoc {
            header,
            id,
            columns: &t.columns,
            rows: &t.rows,
        }),
        Format::Csv => {
            let cols: Vec<&str> = t.columns.iter().map(String::as_str).collect();
            csv_doc(Some(&cols), &t.rows)
        }
        Format::Text => {
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for row in &t.rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                    .collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            let mut out = text_header(header);
            out.push_str(&format!("# {id}\n"));
            out.push_str(&line(&t.columns));
            for row in &t.rows {
                out.push_str(&line(row));
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct SearchDoc<'a> {
    header: &'a Header,
    search: &'a SearchView<'a>,
}

#[derive(Serialize)]
struct FrontierRecord {
    parameter: &'static str,
    direction: &'static str,
    instance: String,
    frontier: String,
    binding_n: u64,
    within_box: bool,
}

pub fn search(format: Format, header: &Header, view: &SearchView) -> Result<String, CliError> {
    let records = || {
        view.frontier.iter().map(|f| FrontierRecord {
            parameter: f.parameter.name(),
            direction: f.direction,
            instance: f.instance.to_decimal(SERIAL_DIGITS),
            frontier: f.frontier.to_decimal(SERIAL_DIGITS),
            binding_n: f.binding_n,
            within_box: f.within_box,
        })
    };
    match format {
        Format::Json => json(&SearchDoc { header, search: view }),
        Format::Csv => csv_doc(None, records()),
        Format::Text => {
            let mut out = text_header(header);
            let i = view.instance;
            out.push_str(&format!(
                "instance alpha = {}, lambda = {}, a = {} | beta = {}, mu = {}, b = {}: {} ({}) for n <= {}\n",
                i.alpha,
                i.lambda,
                i.a,
                i.beta,
                i.mu,
                i.b,
                if view.instance_feasible { "feasible" } else { "infeasible" },
                view.instance_check.verdict.as_str(),
                view.n_max
            ));
            out.push_str("empirical frontier, others held at the instance:\n");
            for r in records() {
                out.push_str(&format!(
                    "  {:<7} {} {:<26} binding n = {:<6} {}\n",
                    r.parameter,
                    r.direction,
                    r.frontier,
                    r.binding_n,
                    if r.within_box { "inside the box" } else { "outside the box" }
                ));
            }
            out.push_str(&format!("note: {}\n", view.note));
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct RegistryDoc<'a> {
    header: &'a Header,
    claims: &'a [ClaimCase],
}

#[derive(Serialize)]
struct RegistryRow<'a> {
    id: &'a str,
    kind: String,
    status: String,
    strictness: String,
    anchor: &'a str,
    statement: &'a str,
}

fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

pub fn registry(format: Format, header: &Header, claims: &[ClaimCase]) -> Result<String, CliError> {
    match format {
        Format::Json => json(&RegistryDoc { header, claims }),
        Format::Csv => csv_doc(
            None,
            claims.iter().map(|c| RegistryRow {
                id: c.id,
                kind: tag(&c.kind),
                status: tag(&c.status),
                strictness: tag(&c.strictness),
                anchor: c.anchor,
                statement: c.statement,
            }),
        ),
        Format::Text => {
            let mut out = text_header(header);
            for c in claims {
                out.push_str(&format!(
                    "{:<26} {:<16} {:<10} {}\n",
                    c.id,
                    tag(&c.kind),
                    tag(&c.status),
                    c.anchor
                ));
            }
            Ok(out)
        }
    }
}
