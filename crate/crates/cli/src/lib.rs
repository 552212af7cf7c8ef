//! Command-line driver for the deciders, oracles, measure checks and shift
//! generators in `cdsp-core`.
//!
//! Exit status: 0 when the run succeeded and every requested check passed
//! (a decider saying "false" is still a successful run), 1 on internal or
//! input errors and on failed measure or corpus checks, 2 when a hypothesis
//! of the requested operation is violated, 3 when quadrature runs out of
//! budget.

pub mod error;
pub mod input;

use std::path::{Path, PathBuf};
use std::str::FromStr;

use cdsp_core::cdsp::{cross_validate, decide_cdsp, CdspVerdict};
use cdsp_core::cmdeciders::{decide_bideg21_cm, decide_bideg22_cm, decide_quadratic_reciprocal_cm};
use cdsp_core::corpus::{self, CorpusOptions};
use cdsp_core::measures::{
    kernel_eval, sample21_csv, sample_line_csv, verify_line_density, verify_moment_integral, DensitySource, KernelValue,
    LineDensity, MomentReport, Weight21,
};
use cdsp_core::netcore::{self, CmMode, CmOptions, Net2};
use cdsp_core::shifts::shift_bundle;
use cdsp_core::trace::{DecisionTrace, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use error::{exit, CliError, CliResult};
use input::{DecideInput, Family, MeasureInput, OracleInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub width: usize,
    pub height: usize,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad window size `{t}`: {e}"));
        let (width, height) = (parse(w)?, parse(h)?);
        if width == 0 || height == 0 {
            return Err("window sides must be positive".into());
        }
        Ok(Window { width, height })
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

#[derive(Debug, Parser)]
#[command(name = "cdsp", version, about = "Complete monotonicity deciders and Cauchy dual subnormality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Oracle window.
    #[arg(long, global = true, default_value = "12x12")]
    pub window: Window,
    /// Highest total difference order for the oracle.
    #[arg(long, global = true, default_value_t = netcore::DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    /// Relative tolerance for kernel evaluation.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub rel_tol: f64,
    /// Absolute tolerance for moment residuals.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub abs_tol: f64,
    /// Worker threads for the oracle; 0 picks the rayon default.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Seed for randomised sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide Cauchy dual subnormality from gamma, rho or a shift bundle, or
    /// complete monotonicity for a polynomial family.
    Decide {
        #[arg(long, short)]
        input: PathBuf,
        /// Also run the brute-force oracle on 1/gamma and report agreement.
        #[arg(long)]
        cross_validate: bool,
    },
    /// Run the brute-force complete monotonicity oracle on a net, on 1/gamma
    /// or on 1/p for a family.
    Oracle {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Joint)]
        mode: ModeArg,
        /// Write the checked net as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check representing densities by quadrature, or evaluate the kernel.
    Measure {
        #[arg(long, short)]
        input: PathBuf,
        /// Write a density sample grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Points per axis in the CSV grid.
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
    /// Build the weighted 2-shift bundle for rho (or gamma).
    Shift {
        #[arg(long, short)]
        input: PathBuf,
        /// Directory for the four weight CSV grids.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Replay the curated corpus and print a pass/fail table.
    Corpus {
        /// Only entries whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Add this many seeded random decider-true instances.
        #[arg(long, default_value_t = 0)]
        sweep: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Joint,
    Separate,
}

/// What a run produced: the document for `--output` (or stdout), text for
/// the terminal, and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub text: Option<String>,
    pub status: u8,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable output");
    s.push('\n');
    s
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn family_trace(f: &Family) -> CliResult<DecisionTrace> {
    Ok(match f {
        Family::Quadratic(q) => decide_quadratic_reciprocal_cm(q)?,
        Family::Bideg21(p) => decide_bideg21_cm(p)?,
        Family::Bideg22(p) => decide_bideg22_cm(p)?,
    })
}

fn decide(path: &Path, cross: bool, c: &Common) -> CliResult<Outcome> {
    let doc = input::read_json(path)?;
    match input::decide_input(&doc)? {
        DecideInput::Family(f) => {
            let t = family_trace(&f)?;
            let status = if t.verdict == Verdict::PreconditionViolated { exit::PRECONDITION } else { exit::OK };
            Ok(Outcome { json: to_json(&t), text: None, status })
        }
        DecideInput::Moment(g, _) => {
            let d = decide_cdsp(&g)?;
            let status = if d.verdict == CdspVerdict::PreconditionViolated { exit::PRECONDITION } else { exit::OK };
            if cross && status == exit::OK {
                let cv = cross_validate(&g, (c.window.width, c.window.height), c.max_order, c.jobs)?;
                let status = if cv.agreement.consistent() { exit::OK } else { exit::FAILURE };
                return Ok(Outcome { json: to_json(&cv), text: None, status });
            }
            Ok(Outcome { json: to_json(&d), text: None, status })
        }
    }
}

fn oracle(path: &Path, mode: ModeArg, csv: Option<&Path>, c: &Common) -> CliResult<Outcome> {
    let doc = input::read_json(path)?;
    let (w, h) = (c.window.width, c.window.height);
    let net: Net2 = match input::oracle_input(&doc)? {
        OracleInput::Net(n) => n,
        OracleInput::Moment(g) => {
            g.validate()?;
            g.dual_moment_net(w, h)?
        }
        OracleInput::Family(f) => netcore::reciprocal_net(|m, n| f.eval(m as u64, n as u64), w, h)?,
    };
    if let Some(p) = csv {
        write_file(p, &net.to_csv())?;
    }
    let mode = match mode {
        ModeArg::Joint => CmMode::Joint,
        ModeArg::Separate => CmMode::Separate,
    };
    let v = netcore::check_complete_monotone_with(&net, CmOptions { max_order: c.max_order, mode, jobs: c.jobs })?;
    Ok(Outcome { json: to_json(&v), text: Some(v.summary()), status: exit::OK })
}

#[derive(Serialize)]
struct MeasureReport<'a> {
    source: &'a str,
    abs_tol: f64,
    reports: Vec<MomentReport>,
    passed: bool,
}

#[derive(Serialize)]
struct KernelReport {
    rel_tol: f64,
    values: Vec<KernelValue>,
}

fn measure(path: &Path, csv: Option<&Path>, grid: usize, c: &Common) -> CliResult<Outcome> {
    if c.abs_tol.is_nan() || c.abs_tol <= 0.0 {
        return Err(CliError::Usage("--abs-tol must be positive".into()));
    }
    let doc = input::read_json(path)?;
    let (source, reports, sample) = match input::measure_input(&doc)? {
        MeasureInput::Kernel(k) => {
            if !(c.rel_tol > 0.0 && c.rel_tol < 1.0) {
                return Err(CliError::Usage("--rel-tol must lie in (0, 1)".into()));
            }
            if let Some(i) = k.z.iter().position(|z| !z.is_finite()) {
                return Err(CliError::schema(format!("/z/{i}"), "expected a finite number"));
            }
            let values = k.z.iter().map(|&z| kernel_eval(z, c.rel_tol)).collect();
            return Ok(Outcome { json: to_json(&KernelReport { rel_tol: c.rel_tol, values }), text: None, status: exit::OK });
        }
        MeasureInput::Bideg21(b) => {
            let sample = match csv {
                Some(_) => Some(sample21_csv(&Weight21::new(&b.params)?, grid)?),
                None => None,
            };
            let src = DensitySource::Bideg21(b.params);
            let reports = b
                .moments
                .iter()
                .map(|&(m, n)| verify_moment_integral(&src, m, n, c.abs_tol))
                .collect::<Result<Vec<_>, _>>()?;
            ("bideg21", reports, sample)
        }
        MeasureInput::Line22(l) => {
            let src = DensitySource::Line22(l.params.clone());
            let reports = l
                .moments
                .iter()
                .map(|&(m, n)| verify_moment_integral(&src, m, n, c.abs_tol))
                .collect::<Result<Vec<_>, _>>()?;
            let first_m = l.moments.first().map_or(0, |p| p.0);
            let sample = match csv {
                Some(_) => Some(sample_line_csv(&LineDensity::new(&l.params, first_m)?, grid)),
                None => None,
            };
            ("line22", reports, sample)
        }
        MeasureInput::LineRoots(l) => {
            let (r1, r2) = l.roots;
            if !(r1 > 0.0 && r2 > 0.0 && r1 != r2 && r1.is_finite() && r2.is_finite()) {
                return Err(CliError::schema("/roots", "expected two distinct positive finite roots"));
            }
            let d = LineDensity::from_roots(r1.max(r2), r1.min(r2));
            let reports =
                l.moments.iter().map(|&n| verify_line_density(&d, n, c.abs_tol)).collect::<Result<Vec<_>, _>>()?;
            ("line-roots", reports, csv.map(|_| sample_line_csv(&d, grid)))
        }
    };
    if let (Some(p), Some(s)) = (csv, sample) {
        write_file(p, &s)?;
    }
    let passed = reports.iter().all(|r| r.passed(c.abs_tol));
    let report = MeasureReport { source, abs_tol: c.abs_tol, reports, passed };
    Ok(Outcome { json: to_json(&report), text: None, status: if passed { exit::OK } else { exit::FAILURE } })
}

fn shift(path: &Path, csv_dir: Option<&Path>, c: &Common) -> CliResult<Outcome> {
    let doc = input::read_json(path)?;
    let rho = input::shift_input(&doc)?;
    let b = shift_bundle(&rho, c.window.width, c.window.height)?;
    if let Some(dir) = csv_dir {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
        write_file(&dir.join("w1sq.csv"), &b.weights.to_csv(0))?;
        write_file(&dir.join("w2sq.csv"), &b.weights.to_csv(1))?;
        write_file(&dir.join("dual_w1sq.csv"), &b.dual_weights.to_csv(0))?;
        write_file(&dir.join("dual_w2sq.csv"), &b.dual_weights.to_csv(1))?;
    }
    Ok(Outcome { json: to_json(&b), text: None, status: exit::OK })
}

fn run_corpus(filter: Option<&str>, sweep: usize, c: &Common) -> CliResult<Outcome> {
    let mut entries = corpus::all();
    entries.extend(corpus::random_true_entries(c.seed, sweep));
    if let Some(f) = filter {
        entries.retain(|e| e.name.contains(f));
    }
    let opts = CorpusOptions { window: (c.window.width, c.window.height), max_order: c.max_order, jobs: c.jobs };
    let rows = corpus::run(&entries, &opts)?;
    let passed = rows.iter().filter(|r| r.passed).count();
    let mut text = corpus::table(&rows);
    text.push_str(&format!("{passed}/{} passed\n", rows.len()));
    let status = if passed == rows.len() { exit::OK } else { exit::FAILURE };
    Ok(Outcome { json: to_json(&rows), text: Some(text), status })
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::Decide { input, cross_validate } => decide(input, *cross_validate, c),
        Command::Oracle { input, mode, csv } => oracle(input, *mode, csv.as_deref(), c),
        Command::Measure { input, csv, grid } => measure(input, csv.as_deref(), *grid, c),
        Command::Shift { input, csv_dir } => shift(input, csv_dir.as_deref(), c),
        Command::Corpus { filter, sweep } => run_corpus(filter.as_deref(), *sweep, c),
    }
}

/// Runs the command, writes its output and returns the exit status.
///
/// JSON goes to `--output` when given, else to stdout. The corpus table is
/// always printed to stdout, so its JSON is only written with `--output`.
pub fn run(cli: &Cli) -> u8 {
    let out = match execute(cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let is_corpus = matches!(cli.command, Command::Corpus { .. });
    match &cli.common.output {
        Some(p) => {
            if let Err(e) = write_file(p, &out.json) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        }
        None if !is_corpus => print!("{}", out.json),
        None => {}
    }
    if let Some(t) = &out.text {
        if is_corpus {
            print!("{t}");
        } else if cli.common.output.is_some() {
            eprintln!("{t}");
        }
    }
    out.status
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        assert_eq!("12x8".parse::<Window>().unwrap(), Window { width: 12, height: 8 });
        assert!("12".parse::<Window>().is_err());
        assert!("0x3".parse::<Window>().is_err());
    }

    #[test]
    fn exit_codes() {
        let pre = CliError::Core(cdsp_core::Error::PreconditionViolated { reason: "r".into(), witness: "w".into() });
        assert_eq!(pre.exit_code(), exit::PRECONDITION);
        let budget = CliError::Core(cdsp_core::Error::NumericalBudget { evaluations: 1, best_residual: 0.1 });
        assert_eq!(budget.exit_code(), exit::BUDGET);
        assert_eq!(CliError::schema("/a", "m").exit_code(), exit::FAILURE);
    }
}
