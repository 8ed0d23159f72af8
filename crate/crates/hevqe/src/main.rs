use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use hevqe::commands::{self, MapArgs};
use hevqe::config::{Scenario, Tier};
use hevqe::error::{is_config_error, ConfigError};
use hevqe::{io, RunConfig};

/// Hardware-efficient VQE: mapping, grouping, optimization and studies.
#[derive(Parser)]
#[command(name = "hevqe", version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the configuration tier.
    #[arg(long, global = true, value_enum)]
    tier: Option<Tier>,
    /// Output directory.
    #[arg(long, global = true, env = "HEVQE_OUT")]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "HEVQE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map FCIDUMP integrals to a tapered qubit Hamiltonian file.
    Map {
        #[arg(long)]
        integrals: PathBuf,
        #[arg(long, default_value = "parity", value_parser = commands::parse_scheme)]
        scheme: hevqe::core::fermion::EncodingScheme,
        /// Lowest spatial orbitals to freeze.
        #[arg(long, default_value_t = 0)]
        frozen: usize,
        /// Electron count; defaults to the file header.
        #[arg(long)]
        electrons: Option<usize>,
        #[arg(long)]
        no_taper: bool,
        /// Output file; defaults to `<out>/<input stem>.qubit.txt`.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Group Hamiltonian terms into tensor-product-basis sets.
    Group {
        /// Hamiltonian text file; otherwise the problem of `--config`.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
    },
    /// Independent VQE runs on the configured problem.
    Optimize,
    /// VQE runs at every sweep point and depth.
    Sweep,
    /// Aggregate report and trace files into CSV and percentiles.
    Report { files: Vec<PathBuf> },
    /// Smallest depth reaching the error threshold.
    DepthSearch,
    /// Error against entangler phase.
    PhaseStudy,
    /// Error against depolarizing strength.
    NoiseScaling,
    /// Error against shots per set (surrogate noise).
    SamplingScaling,
}

fn out_dir(cli: &Cli, cfg: Option<&RunConfig>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| cfg.and_then(|c| c.out.clone()))
        .unwrap_or_else(|| PathBuf::from("results"))
}

fn load_config(cli: &Cli) -> Result<Option<RunConfig>> {
    let Some(path) = &cli.config else {
        return Ok(None);
    };
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tier) = cli.tier {
        cfg.tier = tier;
    }
    cfg.apply_tier();
    cfg.validate()?;
    Ok(Some(cfg))
}

fn scenario_of(cmd: &Command) -> Option<Scenario> {
    Some(match cmd {
        Command::Optimize => Scenario::Optimize,
        Command::Sweep => Scenario::Sweep,
        Command::DepthSearch => Scenario::DepthSearch,
        Command::PhaseStudy => Scenario::PhaseStudy,
        Command::NoiseScaling => Scenario::NoiseScaling,
        Command::SamplingScaling => Scenario::SamplingScaling,
        _ => return None,
    })
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(ConfigError::new("--threads must be at least 1").into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let cfg = load_config(cli)?;
    let out = out_dir(cli, cfg.as_ref());
    match &cli.command {
        Command::Map {
            integrals,
            scheme,
            frozen,
            electrons,
            no_taper,
            output,
        } => {
            let output = output.clone().unwrap_or_else(|| {
                let stem = integrals
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("hamiltonian");
                out.join(format!("{stem}.qubit.txt"))
            });
            let h = commands::cmd_map(&MapArgs {
                integrals: integrals.clone(),
                scheme: *scheme,
                frozen: *frozen,
                electrons: *electrons,
                taper: !no_taper,
                output: output.clone(),
            })?;
            println!(
                "{} qubits, {} terms -> {}",
                h.n_qubits(),
                h.len(),
                output.display()
            );
            Ok(true)
        }
        Command::Group { hamiltonian } => {
            let (h, hash) = commands::group_source(hamiltonian.as_deref(), cfg.as_ref())?;
            let report = commands::cmd_group(&h, &hash);
            let path = out.join("groups.json");
            io::write_json(&path, &report)?;
            println!(
                "{} qubits, {} terms, {} TPB sets -> {}",
                report.n_qubits,
                report.terms,
                report.tpb_sets,
                path.display()
            );
            Ok(true)
        }
        Command::Report { files } => {
            let (report, summary) = commands::aggregate(files)?;
            let csv = out.join("report.csv");
            io::write_text(&csv, &io::report_csv(&report)?)?;
            let json = out.join("report-summary.json");
            io::write_json(&json, &summary)?;
            for p in &summary.points {
                println!(
                    "{:<28} runs {:>4}  error p5 {:.3e} p25 {:.3e} p50 {:.3e} p75 {:.3e} p95 {:.3e}",
                    p.label, p.runs, p.error.p5, p.error.p25, p.error.p50, p.error.p75, p.error.p95
                );
            }
            println!("-> {} and {}", csv.display(), json.display());
            Ok(true)
        }
        cmd => {
            let scenario = scenario_of(cmd).expect("optimization command");
            let cfg =
                cfg.ok_or_else(|| ConfigError::new(format!("{} needs --config", scenario.name())))?;
            let mut report = commands::run_scenario(scenario, &cfg)?;
            let written = commands::write_outputs(&out, &mut report)?;
            print!("{}", commands::summary(&report, cfg.study.threshold));
            if let Some(last) = written.iter().rev().find(|p| has_ext(p, "json")) {
                println!("-> {}", last.display());
            }
            for p in &report.points {
                for f in &p.failures {
                    eprintln!("{}: {f}", p.label);
                }
            }
            Ok(report.failures() == 0)
        }
    }
}

fn has_ext(p: &Path, ext: &str) -> bool {
    p.extension().is_some_and(|e| e == ext)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some runs failed; partial results were written");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
