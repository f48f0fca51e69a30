//! Tabular views of claims: per point values, bounds and margins.

use serde::{Deserialize, Serialize};

use crate::cascade::verify_spot_values;
use crate::error::Result;
use crate::real::{PrecisionContext, Real};

use super::cases::{plan, Plan};
use super::eval::{Band, Checker, Point};
use super::limits::{extrapolate_limit, LimitSequence};
use super::{lookup, scan, Domain, Overrides, DEFAULT_TABLE_ROWS};

/// Significant digits of table cells.
pub const TABLE_DIGITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn cell(x: &Real) -> String {
    x.to_plain(TABLE_DIGITS)
}

fn point_cell(p: &Point) -> String {
    match p {
        Point::Int(n) => n.to_string(),
        Point::Real(x) => cell(x),
        Point::Tuple(v) => format!("({})", v.iter().map(cell).collect::<Vec<_>>().join(", ")),
    }
}

/// Values of the claim `id` at the points of its domain: for inequality
/// claims the columns are point, value, lower, upper, margin (with a leading
/// side column when the claim has several bands); limits give their
/// convergence table.
pub fn table_for(id: &str, ctx: &PrecisionContext, ov: &Overrides) -> Result<Table> {
    let case = lookup(id)?;
    let mut ov = ov.clone();
    if let (Domain::Integers { default_end, .. }, None) = (&case.domain, ov.n_max) {
        ov.n_max = Some((*default_end).min(DEFAULT_TABLE_ROWS));
    }
    let ch = Checker::new(ctx.clone());
    match plan(&ch, &case, &ov)? {
        Plan::Bands { bands, .. } => band_table(&ch, &bands),
        Plan::Special => match id {
            "EQ4_LIMIT" => limit_table(LimitSequence::Eq4, ctx),
            "EQ3_LIMIT" => limit_table(LimitSequence::Eq3, ctx),
            "EQ13_LIMITS" => limit_table(LimitSequence::Eq13Upper, ctx),
            "CASCADE_SPOT_VALUES" => spot_table(ctx),
            "EQ6_AQ_SIGNS" | "CONJ_FA_SIGNS" | "CONJ_CM_1_MINUS_G" | "Q_LCM_SCAN" => {
                let (columns, rows) = scan::derivative_rows(&case, &ov, ctx)?;
                Ok(Table { columns, rows })
            }
            _ => {
                let r = ch.check(id, &ov)?;
                Ok(Table {
                    columns: vec!["side".into(), "verdict".into(), "margin".into(), "witness".into()],
                    rows: r
                        .sides
                        .iter()
                        .map(|s| {
                            vec![
                                s.label.clone(),
                                s.verdict.to_string(),
                                s.min_margin.clone().unwrap_or_default(),
                                s.witness.as_ref().map(|w| w.to_string()).unwrap_or_default(),
                            ]
                        })
                        .collect(),
                })
            }
        },
    }
}

fn band_table(ch: &Checker, bands: &[Band]) -> Result<Table> {
    let multi = bands.len() > 1;
    let mut columns: Vec<String> = Vec::new();
    if multi {
        columns.push("side".into());
    }
    columns.extend(["point", "value", "lower", "upper", "margin"].map(String::from));
    let mut rows = Vec::new();
    for b in bands {
        for p in &b.points {
            let v = ch.evaluate(&b.value, p)?;
            let lo = b.lower.as_ref().map(|q| ch.evaluate(&q.f, p)).transpose()?;
            let hi = b.upper.as_ref().map(|q| ch.evaluate(&q.f, p)).transpose()?;
            let margin = match (&lo, &hi) {
                (Some(l), Some(h)) => Some((&v - l).min(h - &v)),
                (Some(l), None) => Some(&v - l),
                (None, Some(h)) => Some(h - &v),
                (None, None) => None,
            };
            let shown = |x: &Real| if b.display_exp { cell(&x.exp()) } else { cell(x) };
            let mut row = Vec::new();
            if multi {
                row.push(b.label.clone());
            }
            row.push(point_cell(p));
            row.push(shown(&v));
            row.push(lo.as_ref().map(shown).unwrap_or_default());
            row.push(hi.as_ref().map(shown).unwrap_or_default());
            row.push(margin.as_ref().map(cell).unwrap_or_default());
            rows.push(row);
        }
    }
    Ok(Table { columns, rows })
}

fn limit_table(seq: LimitSequence, ctx: &PrecisionContext) -> Result<Table> {
    let rep = extrapolate_limit(seq, ctx)?;
    let opt = |x: &Option<Real>| x.as_ref().map(cell).unwrap_or_default();
    Ok(Table {
        columns: ["point", "value", "level1", "level2"].map(String::from).to_vec(),
        rows: rep
            .rows
            .iter()
            .map(|r| vec![r.point.clone(), cell(&r.value), opt(&r.level1), opt(&r.level2)])
            .collect(),
    })
}

fn spot_table(ctx: &PrecisionContext) -> Result<Table> {
    let rep = verify_spot_values(ctx)?;
    Ok(Table {
        columns: ["label", "computed", "closed_form", "relative_error", "quoted", "rendered"]
            .map(String::from)
            .to_vec(),
        rows: rep
            .entries
            .iter()
            .map(|s| {
                vec![
                    s.label.to_string(),
                    cell(&s.computed),
                    cell(&s.closed_form),
                    s.relative_error.to_decimal(3),
                    s.quoted.unwrap_or_default().to_string(),
                    s.rendered.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq26_first_rows() {
        let ctx = PrecisionContext::default();
        let ov = Overrides {
            n_max: Some(5),
            ..Overrides::default()
        };
        let t = table_for("EQ26_BAND", &ctx, &ov).unwrap();
        assert_eq!(t.columns, ["side", "point", "value", "lower", "upper", "margin"]);
        let ints: Vec<_> = t.rows.iter().filter(|r| r[0] == "ln Q(n+1) - ln Q(n)").collect();
        assert_eq!(ints.len(), 5);
        // √π/2, √(3/4), (3/4)^(1/4)
        assert_eq!(&ints[0][1..5], ["1", "0.8862269255", "0.8660254038", "0.9306048591"]);
    }

    #[test]
    fn limit_table_has_schedule_rows() {
        let ctx = PrecisionContext::default();
        let t = table_for("EQ4_LIMIT", &ctx, &Overrides::default()).unwrap();
        assert_eq!(t.rows.len(), 20);
        assert_eq!(t.rows[19][0], "2^20");
    }
}
