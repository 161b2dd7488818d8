use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use phasespace_cli::config::{parse_t_grid, ConfigFile};
use phasespace_cli::suites::{self, Outcome};
use phasespace_cli::RunConfig;

/// Checks and demos for square-integrable representations: the finite Weyl
/// system, phase-space quantization, twirling semigroups, the truncated Fock
/// backend and the continuous wavelet transform.
///
/// Exit status: 0 when every check passes, 1 when some check fails (listed
/// on stderr), 2 on configuration or input errors.
#[derive(Parser)]
#[command(name = "phasespace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Phase-space dimension (odd, >= 3).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated times, e.g. `0,0.5,1`.
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override for a named check (repeatable).
    #[arg(long = "tolerance", value_name = "KEY=VAL")]
    tolerance: Vec<String>,
    /// JSON config file; explicit flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Command-specific parameter, VAL parsed as JSON when possible (repeatable).
    #[arg(long = "param", value_name = "KEY=VAL")]
    param: Vec<String>,
    /// Record per-check wall time in the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonality relations, resolution of the identity, reproducing kernel.
    FrameCheck(Common),
    /// Star products in all three forms, associativity, dequantization.
    StarDemo(Common),
    /// Quantum positive type battery and Wigner round trip.
    QptCheck(Common),
    /// Twirling-semigroup trajectory as CSV (t, entropy, purity, intertwining_defect).
    SemigroupRun {
        #[command(flatten)]
        common: Common,
        /// Semigroup spec JSON `{d, rate, jump_measure}`.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Jump rate when no spec is given.
        #[arg(long)]
        rate: Option<f64>,
    },
    /// Products of states and the twirled product.
    TwirlProduct(Common),
    /// Continuous wavelet transform of a signal, with admissibility report.
    Cwt {
        #[command(flatten)]
        common: Common,
        /// Signal file: CSV `re,im` rows or raw f32 with a JSON sidecar.
        #[arg(long)]
        signal: Option<PathBuf>,
        /// Sampling step (overrides the sidecar).
        #[arg(long)]
        dt: Option<f64>,
        /// morlet, gaussian or mexican_hat.
        #[arg(long)]
        wavelet: Option<String>,
    },
    /// Truncated Fock-space checks and a characteristic-function grid.
    FockDemo {
        #[command(flatten)]
        common: Common,
        /// Fock truncation dimension.
        #[arg(long = "fock-n")]
        fock_n: Option<usize>,
    },
}

type Suite = fn(&RunConfig) -> anyhow::Result<Outcome>;

fn build_config(common: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_file(ConfigFile::load(path)?),
        None => RunConfig::default(),
    };
    if let Some(d) = common.d {
        cfg.d = d;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(t) = &common.t_grid {
        cfg.t_grid = parse_t_grid(t)?;
    }
    if common.out.is_some() {
        cfg.output_path = common.out.clone();
    }
    for spec in &common.tolerance {
        cfg.set_tolerance(spec)?;
    }
    for spec in &common.param {
        let (k, v) = spec
            .split_once('=')
            .with_context(|| format!("malformed --param `{spec}`, expected KEY=VAL"))?;
        let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        cfg.set_param(k.trim(), value);
    }
    cfg.timing = common.timing;
    cfg.validate()?;
    Ok(cfg)
}

fn path_param(cfg: &mut RunConfig, key: &str, path: &Option<PathBuf>) {
    if let Some(p) = path {
        cfg.set_param(key, p.to_string_lossy().into_owned());
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn emit(cfg: &RunConfig, outcome: &Outcome) -> anyhow::Result<()> {
    let report = outcome.report.to_json();
    let main = outcome.primary.as_deref().unwrap_or(report.as_bytes());
    match &cfg.output_path {
        Some(out) => {
            fs::write(out, main).with_context(|| format!("writing {}", out.display()))?;
            if outcome.primary.is_some() {
                fs::write(sibling(out, "report.json"), &report)?;
            }
            for (suffix, bytes) in &outcome.extras {
                fs::write(sibling(out, suffix), bytes)?;
            }
        }
        None => std::io::stdout().write_all(main)?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let (suite, cfg): (Suite, RunConfig) = match &cli.command {
        Command::FrameCheck(c) => (suites::frame_check, build_config(c)?),
        Command::StarDemo(c) => (suites::star_demo, build_config(c)?),
        Command::QptCheck(c) => (suites::qpt_check, build_config(c)?),
        Command::TwirlProduct(c) => (suites::twirl_product, build_config(c)?),
        Command::SemigroupRun { common, spec, rate } => {
            let mut cfg = build_config(common)?;
            path_param(&mut cfg, "spec", spec);
            if let Some(r) = rate {
                cfg.set_param("rate", *r);
            }
            (suites::semigroup_run, cfg)
        }
        Command::Cwt {
            common,
            signal,
            dt,
            wavelet,
        } => {
            let mut cfg = build_config(common)?;
            path_param(&mut cfg, "signal", signal);
            if let Some(dt) = dt {
                cfg.set_param("dt", *dt);
            }
            if let Some(w) = wavelet {
                cfg.set_param("wavelet", w.clone());
            }
            (suites::cwt, cfg)
        }
        Command::FockDemo { common, fock_n } => {
            let mut cfg = build_config(common)?;
            if let Some(n) = fock_n {
                cfg.set_param("fock_n", *n as u64);
            }
            (suites::fock_demo, cfg)
        }
    };
    let outcome = suite(&cfg)?;
    emit(&cfg, &outcome)?;
    let report = &outcome.report;
    let failures = report.failures();
    eprintln!(
        "{}: {}/{} checks passed",
        report.command,
        report.records.len() - failures.len(),
        report.records.len()
    );
    for name in &failures {
        let r = report.record(name).expect("listed failure exists");
        eprintln!("FAILED {name}: value {:e}, tolerance {:e} ({:?})", r.value, r.tolerance, r.rule);
    }
    Ok(failures.is_empty())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
