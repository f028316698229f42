//! `g2kit <suite>`: run a verification suite and print or write its report.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 on bad
//! input or an internal error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;
use g2kit::harness::{export_report, export_series_csv, run_suite, Format, McScale, Options, SUITES};

#[derive(Parser, Debug)]
#[command(name = "g2kit", version, about = "Exact verification suites for G2-structures")]
struct Cli {
    /// One of identities, su3, su2su2-classify, bryant-salamon, gamma-family, ccy, hypo-flow, all.
    suite: String,
    /// JSON file with any of ring_d, mc_scale, gamma, grid_points, tol; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    ring_d: Option<i64>,
    /// auto, 1 or 1/2.
    #[arg(long)]
    mc_scale: Option<McScale>,
    /// Scalar expression for the family parameter, e.g. `1`, `3/2`, `gamma`.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the named sample series as CSV instead of the check table.
    #[arg(long)]
    series: Option<String>,
}

fn options(cli: &Cli) -> anyhow::Result<Options> {
    let mut o = match &cli.config {
        Some(p) => {
            let s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&s).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Options::default(),
    };
    if let Some(d) = cli.ring_d {
        o.ring_d = d;
    }
    if let Some(m) = cli.mc_scale {
        o.mc_scale = m;
    }
    if let Some(g) = &cli.gamma {
        o.gamma = g.clone();
    }
    if let Some(n) = cli.grid_points {
        o.grid_points = n;
    }
    if let Some(t) = cli.tol {
        o.tol = t;
    }
    Ok(o)
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if cli.suite != "all" && !SUITES.contains(&cli.suite.as_str()) {
        bail!("unknown suite `{}`; expected one of {} or all", cli.suite, SUITES.join(", "));
    }
    let opts = options(cli)?;
    let report = run_suite(&cli.suite, &opts)?;
    let bytes = match &cli.series {
        Some(name) => {
            let s = report.series.iter().find(|s| &s.name == name);
            let Some(s) = s else {
                let known: Vec<&str> = report.series.iter().map(|s| s.name.as_str()).collect();
                bail!("suite `{}` has no series `{name}` (available: {})", cli.suite, known.join(", "));
            };
            export_series_csv(s)?
        }
        None => export_report(&report, cli.format)?,
    };
    match &cli.out {
        Some(p) => std::fs::write(p, &bytes).with_context(|| format!("writing {}", p.display()))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes)?;
        }
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("g2kit: {e:#}");
            ExitCode::from(2)
        }
    }
}
