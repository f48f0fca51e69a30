//! Evaluation grids for claims over continuous domains.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{PrecisionContext, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
    /// Consecutive integers; used for sequence claims.
    Integer,
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
            Spacing::Integer => "integer",
        })
    }
}

impl FromStr for Spacing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lin" | "linear" => Ok(Spacing::Linear),
            "log" | "logarithmic" => Ok(Spacing::Log),
            "int" | "integer" => Ok(Spacing::Integer),
            other => Err(Error::Grid(format!("unknown spacing `{other}`"))),
        }
    }
}

/// `count` points from `start` to `end` inclusive. Points are rounded once
/// at the grid's precision and then treated as exact inputs, so
/// re-evaluating at a higher precision sees the same point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    start: Real,
    end: Real,
    count: usize,
    spacing: Spacing,
}

impl GridSpec {
    pub fn new(start: Real, end: Real, count: usize, spacing: Spacing) -> Result<Self> {
        if !(start < end) {
            return Err(Error::Grid(format!("start {start} must be below end {end}")));
        }
        if count < 2 {
            return Err(Error::Grid(format!("count {count} must be at least 2")));
        }
        if spacing == Spacing::Log && !start.is_positive() {
            return Err(Error::Grid(format!(
                "logarithmic spacing needs a positive start, got {start}"
            )));
        }
        if spacing == Spacing::Integer && !(start.is_integer() && end.is_integer()) {
            return Err(Error::Grid("integer grids need integer endpoints".into()));
        }
        Ok(Self {
            start,
            end,
            count,
            spacing,
        })
    }

    pub fn linear(start: Real, end: Real, count: usize) -> Result<Self> {
        Self::new(start, end, count, Spacing::Linear)
    }

    pub fn log(start: Real, end: Real, count: usize) -> Result<Self> {
        Self::new(start, end, count, Spacing::Log)
    }

    /// `start..=end` over the integers.
    pub fn integers(start: u64, end: u64, ctx: &PrecisionContext) -> Result<Self> {
        let count = (end.saturating_sub(start) + 1) as usize;
        Self::new(
            Real::from_u64(start, ctx),
            Real::from_u64(end, ctx),
            count,
            Spacing::Integer,
        )
    }

    /// Parses `start:end:count[:log|:linear]`.
    pub fn parse(s: &str, ctx: &PrecisionContext) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Grid(format!(
                "expected start:end:count[:log], got `{s}`"
            )));
        }
        let start = Real::parse(parts[0], ctx)?;
        let end = Real::parse(parts[1], ctx)?;
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Grid(format!("count `{}`: {e}", parts[2])))?;
        let spacing = match parts.get(3) {
            Some(sp) => sp.trim().parse()?,
            None => Spacing::Linear,
        };
        Self::new(start, end, count, spacing)
    }

    pub fn start(&self) -> &Real {
        &self.start
    }

    pub fn end(&self) -> &Real {
        &self.end
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Same grid with endpoints re-rounded to `ctx`.
    pub fn at(&self, ctx: &PrecisionContext) -> Self {
        Self {
            start: self.start.at_prec(ctx.bits()),
            end: self.end.at_prec(ctx.bits()),
            ..self.clone()
        }
    }

    pub fn points(&self) -> Vec<Real> {
        let n = self.count;
        let last = (n - 1) as i64;
        let mut out = Vec::with_capacity(n);
        match self.spacing {
            Spacing::Linear => {
                let step = (&self.end - &self.start) / last;
                for i in 0..n as i64 {
                    out.push(&self.start + &step * i);
                }
            }
            Spacing::Log => {
                let a = self.start.ln().expect("positive start");
                let b = self.end.ln().expect("positive end");
                let step = (&b - &a) / last;
                for i in 0..n as i64 {
                    out.push((&a + &step * i).exp());
                }
            }
            Spacing::Integer => {
                for i in 0..n as i64 {
                    out.push(&self.start + i);
                }
            }
        }
        out[0] = self.start.clone();
        out[n - 1] = self.end.clone();
        out
    }

    pub fn summary(&self) -> GridSummary {
        let render = |x: &Real| match self.spacing {
            Spacing::Integer => format!("{}", x.to_f64() as i64),
            _ => x.to_decimal(17),
        };
        GridSummary {
            start: render(&self.start),
            end: render(&self.end),
            count: self.count,
            spacing: self.spacing,
        }
    }
}

/// Serialized description of a grid in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSummary {
    pub start: String,
    pub end: String,
    pub count: usize,
    pub spacing: Spacing,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn parse_and_points() {
        let g = GridSpec::parse("1:100:3:log", &ctx()).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 3);
        assert_eq!(p[0], 1);
        assert!((&p[1] - 10).abs() < Real::pow2(-240, &ctx()));
        assert_eq!(p[2], 100);
        let g = GridSpec::parse("0:1:5", &ctx()).unwrap();
        assert_eq!(g.points()[2], Real::from_ratio(1, 2, &ctx()));
        assert_eq!(g.spacing(), Spacing::Linear);
    }

    #[test]
    fn rejects_bad_grids() {
        let c = ctx();
        assert!(GridSpec::parse("2:1:5", &c).is_err());
        assert!(GridSpec::parse("0:1:1", &c).is_err());
        assert!(GridSpec::parse("0:1:5:log", &c).is_err());
        assert!(GridSpec::parse("0:1", &c).is_err());
        assert!(GridSpec::parse("0:1:5:cubic", &c).is_err());
    }

    #[test]
    fn integer_grid() {
        let g = GridSpec::integers(2, 6, &ctx()).unwrap();
        let p: Vec<f64> = g.points().iter().map(Real::to_f64).collect();
        assert_eq!(p, vec![2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(g.summary().spacing, Spacing::Integer);
        assert_eq!((g.summary().start.as_str(), g.summary().end.as_str()), ("2", "6"));
    }
}
