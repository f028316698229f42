//! Named verification suites and their reports.
//!
//! A suite is a fixed, ordered list of checks; each check records what was
//! expected, what was computed and a topic key naming the result it exercises.

mod export;
mod suites;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::parse_scalar;
use crate::scalar::{ScalarExpr, DEFAULT_D};

pub use export::{export_report, export_series_csv, Format};

/// Bumped whenever a field of [`SuiteReport`] changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub const SUITES: [&str; 7] = ["identities", "su3", "su2su2-classify", "bryant-salamon", "gamma-family", "ccy", "hypo-flow"];

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Exact residuals are printed expressions; numeric ones are magnitudes.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Residual {
    Numeric(f64),
    Exact(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: String,
    pub got: String,
    pub residual: Residual,
    /// Topic key of the result under test.
    pub reference: String,
}

/// One sampled table, e.g. norms against `t`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub d: i64,
    pub mc_scale: String,
    pub q_convention: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub ring: RingConfig,
    pub checks: Vec<Check>,
    pub series: Vec<Series>,
    /// Wall time; excluded from the text table so that it stays reproducible.
    pub timing_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }
}

/// Maurer–Cartan scale of the `SU(2)²` frame.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
pub enum McScale {
    /// Calibrated by `dη = 2ω₁` on the standard forms.
    #[default]
    #[serde(rename = "auto")]
    Auto,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "1/2")]
    Half,
}

impl std::str::FromStr for McScale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(McScale::Auto),
            "1" => Ok(McScale::One),
            "1/2" => Ok(McScale::Half),
            _ => Err(Error::Invalid(format!("mc-scale must be auto, 1 or 1/2, not `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub ring_d: i64,
    pub mc_scale: McScale,
    /// Scalar expression; may mention the free parameter `gamma`.
    pub gamma: String,
    /// Intervals of the sine-cone grid on `(0, π)`.
    pub grid_points: usize,
    /// Numeric tolerance; exact checks ignore it.
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { ring_d: DEFAULT_D as i64, mc_scale: McScale::Auto, gamma: "1".into(), grid_points: 64, tol: 1e-9 }
    }
}

impl Options {
    pub fn validate(&self) -> Result<()> {
        if self.ring_d != DEFAULT_D as i64 {
            return Err(Error::Invalid(format!("the models live over Q(√3); ring-d {} is unsupported", self.ring_d)));
        }
        if self.grid_points < 2 {
            return Err(Error::Invalid("grid-points must be at least 2".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Invalid(format!("tol must be positive, not {}", self.tol)));
        }
        self.gamma_expr().map(|_| ())
    }

    pub fn gamma_expr(&self) -> Result<ScalarExpr> {
        let g = parse_scalar(&self.gamma)?;
        if g.depends_on_t() {
            return Err(Error::Invalid(format!("gamma must be constant in t, got {g}")));
        }
        Ok(g)
    }

    pub fn ring(&self) -> RingConfig {
        let mc = match self.mc_scale {
            McScale::Auto => "auto (1/2)",
            McScale::One => "1",
            McScale::Half => "1/2",
        };
        RingConfig { d: self.ring_d, mc_scale: mc.into(), q_convention: "diag(1,-1,-1,-1)".into() }
    }
}

/// Run a registered suite, or all of them in parallel with ordered assembly.
pub fn run_suite(name: &str, opts: &Options) -> Result<SuiteReport> {
    opts.validate()?;
    let start = Instant::now();
    let (checks, series) = if name == "all" {
        let parts: Vec<Result<(Vec<Check>, Vec<Series>)>> = SUITES.par_iter().map(|s| suites::run(s, opts)).collect();
        let mut checks = Vec::new();
        let mut series = Vec::new();
        for (s, part) in SUITES.iter().zip(parts) {
            let (c, ser) = part?;
            checks.extend(c.into_iter().map(|mut c| {
                c.name = format!("{s}/{}", c.name);
                c
            }));
            series.extend(ser);
        }
        (checks, series)
    } else if SUITES.contains(&name) {
        suites::run(name, opts)?
    } else {
        return Err(Error::UnknownSuite(name.into()));
    };
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: name.into(),
        ring: opts.ring(),
        checks,
        series,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suites_are_rejected() {
        assert!(matches!(run_suite("nope", &Options::default()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn options_are_validated() {
        let bad = [
            Options { ring_d: 5, ..Options::default() },
            Options { grid_points: 1, ..Options::default() },
            Options { tol: 0.0, ..Options::default() },
            Options { gamma: "t".into(), ..Options::default() },
        ];
        for o in bad {
            assert!(o.validate().is_err(), "{o:?}");
        }
        let o: Options = serde_json::from_str(r#"{"gamma": "3/2", "mc_scale": "1/2"}"#).unwrap();
        assert_eq!((o.mc_scale, o.grid_points), (McScale::Half, 64));
        assert!(serde_json::from_str::<Options>(r#"{"tolerance": 1}"#).is_err());
    }

    #[test]
    fn identities_suite_fails_only_the_cross_norm() {
        let r = run_suite("identities", &Options::default()).unwrap();
        let names: Vec<&str> = r.failures().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["norm_x_wedge_omega"]);
    }
}
