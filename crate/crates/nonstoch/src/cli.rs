//! Command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nonstoch_core::hypotest::{brute_force_optimum, consistent_test, report, ConditionalOutputRanges, DEFAULT_ENUMERATION_CAP};
use nonstoch_core::metrics::{Histogram2D, KlDirection};
use nonstoch_core::privacy::{sweep_epsilon, QuadratureParams};
use nonstoch_core::uvar::Hyp;
use serde::Serialize;
use serde_json::json;

use crate::config::{PolicyConfig, RhoList, TestInput, TestSpec};
use crate::curve::{utility_steps, CurveOptions};
use crate::dataio::{generate_fixture, load_csv, sanitize_table_with, write_bytes, ColumnMap, MissingPolicy};
use crate::output::format_num;

#[derive(Debug, Parser)]
#[command(name = "nonstoch", version, about = "Range-based hypothesis tests and strip-projection data sanitization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the policy to every row of a CSV file.
    Sanitize(SanitizeArgs),
    /// Tabulate ε against ρ.
    Sweep(SweepArgs),
    /// Evaluate the consistent test on a pair of ranges or a finite world.
    Test(TestArgs),
    /// Utility curve and histograms over a list of ρ values.
    Metrics(MetricsArgs),
    /// Write a synthetic weight/height table.
    Fixture(FixtureArgs),
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    /// Comma-separated accuracy levels.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// `lo:hi:steps[:log|lin]`
    #[arg(long, conflicts_with = "rho", allow_hyphen_values = true)]
    pub rho_range: Option<String>,
}

impl RhoArgs {
    fn list(&self, fallback: Option<f64>) -> Result<Vec<f64>> {
        let spec = self.rho.as_deref().or(self.rho_range.as_deref());
        Ok(match (spec, fallback) {
            (Some(s), _) => s.parse::<RhoList>()?.0,
            (None, Some(r)) => RhoList::new(vec![r])?.0,
            (None, None) => bail!("no rho values given: pass --rho or --rho-range, or set `rho` in the config"),
        })
    }
}

#[derive(Debug, Args)]
pub struct SanitizeArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Report path; defaults to `<output>.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value = "Weight:1,Height:2")]
    pub columns: String,
    /// Overrides `rho` from the config.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Fail on rows with a missing mapped value instead of passing them through.
    #[arg(long)]
    pub reject_missing: bool,
    /// Seed for the quasi-Monte Carlo path (more than 3 free coordinates).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub rho: RhoArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// JSON spec with `null`/`alt` ranges or a `world`.
    #[arg(long, visible_alias = "input")]
    pub config: PathBuf,
    /// JSON destination; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Direction {
    OriginalToSanitized,
    SanitizedToOriginal,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "Weight:1,Height:2")]
    pub columns: String,
    #[command(flatten)]
    pub rho: RhoArgs,
    /// Bins per axis.
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Additive smoothing per histogram cell.
    #[arg(long, default_value_t = 1e-9)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "original-to-sanitized")]
    pub direction: Direction,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1010)]
    pub rows: usize,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sanitize(a) => sanitize(a),
        Command::Sweep(a) => sweep(a),
        Command::Test(a) => test(a),
        Command::Metrics(a) => metrics(a),
        Command::Fixture(a) => fixture(a),
    }
}

fn quadrature(seed: Option<u64>) -> QuadratureParams {
    let mut q = QuadratureParams::default();
    if let Some(s) = seed {
        q.seed = s;
    }
    q
}

fn load_config(path: &Path) -> Result<PolicyConfig> {
    PolicyConfig::load(path).with_context(|| format!("loading policy config {}", path.display()))
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v)?;
    s.push(b'\n');
    Ok(s)
}

fn sanitize(a: SanitizeArgs) -> Result<()> {
    let config = load_config(&a.config)?;
    let policy = config.policy(a.rho)?;
    let columns: ColumnMap = a.columns.parse()?;
    let missing = if a.reject_missing { MissingPolicy::Reject } else { MissingPolicy::PassThrough };
    let table = load_csv(&a.input, &columns, missing)?;
    let (out, rep) = sanitize_table_with(&table, &policy, &quadrature(a.seed))?;
    let report_path = a.report.unwrap_or_else(|| {
        let mut p = a.output.clone().into_os_string();
        p.push(".report.json");
        PathBuf::from(p)
    });
    let report_bytes = to_json(&rep)?;
    write_bytes(&a.output, &out.to_csv_bytes()?)?;
    write_bytes(&report_path, &report_bytes)?;
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let config = load_config(&a.config)?;
    let rhos = a.rho.list(config.rho)?;
    let template = config.policy(Some(rhos[0]))?;
    let rows = sweep_epsilon(&template, &rhos, &quadrature(a.seed))?;
    let mut csv = String::from("rho,epsilon,strip_measure,err_estimate,epsilon_times_rho\n");
    for g in &rows {
        writeln!(
            csv,
            "{},{},{},{},{}",
            format_num(g.rho),
            format_num(g.epsilon),
            format_num(g.strip_measure),
            format_num(g.quadrature_error_estimate),
            format_num(g.epsilon * g.rho)
        )?;
    }
    emit(a.output.as_deref(), csv.as_bytes())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_bytes(p, bytes)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn test(a: TestArgs) -> Result<()> {
    let spec = TestSpec::load(&a.config).with_context(|| format!("loading test spec {}", a.config.display()))?;
    let tie = spec.tie_rule.unwrap_or(Hyp::Null);
    let cap = spec.enumeration_cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let value = match spec.input()? {
        TestInput::Sets { null, alt } => {
            let r = ConditionalOutputRanges::new(null, alt)?;
            let t = consistent_test(&r, tie)?;
            let rep = report(&t, &r)?;
            with_fields(serde_json::to_value(rep)?, [("kind", json!("sets")), ("tie_rule", json!(tie))])
        }
        TestInput::World(w) => {
            let r = ConditionalOutputRanges::from_world(&w)?;
            let t = consistent_test(&r, tie)?;
            let rep = report(&t, &r)?;
            let brute = match brute_force_optimum(&w, cap) {
                Ok(bf) => json!({
                    "best": bf.best,
                    "performance": extended(bf.performance()),
                    "witness": bf.witness,
                    "tests_evaluated": bf.tests_evaluated,
                    "consistent_attains_optimum": bf.best == rep.aleph.len(),
                }),
                Err(_) => serde_json::Value::Null,
            };
            with_fields(
                serde_json::to_value(rep)?,
                [("kind", json!("world")), ("tie_rule", json!(tie)), ("brute_force", brute)],
            )
        }
    };
    emit(a.output.as_deref(), &to_json(&value)?)
}

/// Finite values as JSON numbers, infinities as `"inf"` / `"-inf"`.
fn extended(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_num(v))
    }
}

fn with_fields<const N: usize>(mut v: serde_json::Value, extra: [(&str, serde_json::Value); N]) -> serde_json::Value {
    if let Some(map) = v.as_object_mut() {
        for (k, x) in extra {
            map.insert(k.to_string(), x);
        }
    }
    v
}

fn histogram_csv(h: &Histogram2D) -> String {
    let mut s = String::from("xbin,ybin,count\n");
    for (x, y, c) in h.cells() {
        let _ = writeln!(s, "{x},{y},{c}");
    }
    s
}

fn metrics(a: MetricsArgs) -> Result<()> {
    let config = load_config(&a.config)?;
    let rhos = a.rho.list(config.rho)?;
    let template = config.policy(Some(rhos[0]))?;
    let columns: ColumnMap = a.columns.parse()?;
    if !(a.alpha > 0.0 && a.alpha.is_finite()) {
        bail!("--alpha must be positive, got {}", a.alpha);
    }
    if a.bins == 0 {
        bail!("--bins must be at least 1");
    }
    let table = load_csv(&a.input, &columns, MissingPolicy::PassThrough)?;
    let opts = CurveOptions {
        bins: [a.bins, a.bins],
        alpha: a.alpha,
        direction: match a.direction {
            Direction::OriginalToSanitized => KlDirection::OriginalToSanitized,
            Direction::SanitizedToOriginal => KlDirection::SanitizedToOriginal,
        },
    };
    let (original, steps) = utility_steps(&table, &template, &rhos, &opts)?;

    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let mut curve = String::from("rho,mean_diff,kl,rows_modified,rows_used\n");
    let mut reports = Vec::new();
    for (k, s) in steps.iter().enumerate() {
        let p = &s.point;
        writeln!(curve, "{},{},{},{},{}", format_num(p.rho), format_num(p.mean_diff), format_num(p.kl), p.rows_modified, p.rows_used)?;
        reports.push(json!({ "rho": p.rho, "mean_diff": p.mean_diff, "kl": p.kl, "bins": opts.bins, "alpha": opts.alpha }));
        files.push((format!("histogram_rho_{k:03}.csv"), histogram_csv(&s.histogram).into_bytes()));
    }
    files.push(("histogram_original.csv".into(), histogram_csv(&original).into_bytes()));
    files.push(("utility_curve.csv".into(), curve.into_bytes()));
    files.push(("metrics.json".into(), to_json(&reports)?));

    std::fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    for (name, bytes) in files {
        write_bytes(&a.output.join(name), &bytes)?;
    }
    Ok(())
}

fn fixture(a: FixtureArgs) -> Result<()> {
    if a.rows == 0 {
        bail!("--rows must be at least 1");
    }
    let t = generate_fixture(a.seed, a.rows);
    write_bytes(&a.output, &t.to_csv_bytes()?)?;
    Ok(())
}
