use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sumprod_core::experiment::{self, CapOverrides};
use sumprod_core::graph::eigen::JacobiOptions;
use sumprod_core::graph::{build_graph, AdjacencyMode, DEFAULT_MAX_MATERIALIZED};
use sumprod_core::harness::{sharpness_probe, vinh_field_check};
use sumprod_core::ring::{RingSpec, DEFAULT_ENUMERATION_CAP};
use sumprod_core::sets::{set_family, SetFamily};

/// Sum-product graphs over finite valuation rings.
#[derive(Parser)]
#[command(name = "sumprod", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the spectrum of the sum-product graph and write its certificate.
    Certify(CertifyArgs),
    /// Run a batch of theorem instances described by a JSON config.
    Experiment(ExperimentArgs),
    /// Measure |f(A,A)||A.A|/(p|A|) for a geometric progression A, f = xy(x+y).
    ProbeSharpness(ProbeArgs),
    /// Check the field-case sum-product inequality on random subsets.
    VinhCheck(VinhArgs),
}

#[derive(Args)]
struct CertifyArgs {
    /// Ring, e.g. `zpr:5,2` or `polyq:3,2,0,1`.
    #[arg(long)]
    ring: RingSpec,
    #[arg(long, default_value = "materialized")]
    mode: AdjacencyMode,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = experiment::ENV_MAX_N)]
    max_n: Option<u64>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    max_n: Option<u64>,
    /// Replace the config's seeds with this one.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    ring: RingSpec,
    /// Progression length.
    #[arg(long, conflicts_with = "alpha", required_unless_present = "alpha")]
    length: Option<usize>,
    /// Choose the length as round(p^alpha).
    #[arg(long)]
    alpha: Option<f64>,
    /// Progression ratio; the smallest primitive root by default.
    #[arg(long)]
    base: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VinhArgs {
    #[arg(long)]
    ring: RingSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Size of each random subset.
    #[arg(long, default_value_t = 10)]
    size: usize,
    /// Number of subsets.
    #[arg(long, default_value_t = 100)]
    count: u64,
}

fn emit(body: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn certify(args: CertifyArgs) -> Result<ExitCode, String> {
    let max_n = args.max_n.unwrap_or(DEFAULT_MAX_MATERIALIZED);
    let graph = build_graph(&args.ring, args.mode, max_n).map_err(|e| e.to_string())?;
    let cert = graph
        .certify(JacobiOptions::default(), max_n)
        .map_err(|e| e.to_string())?;
    let body = serde_json::to_string_pretty(&cert.record()).expect("certificate serializes");
    emit(&body, args.out.as_ref())?;
    Ok(if cert.bound_holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run_experiment(args: ExperimentArgs) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("reading {}: {e}", args.config.display()))?;
    let flags = CapOverrides {
        max_n: args.max_n,
        enum_cap: None,
    };
    let env = CapOverrides::from_env().map_err(|e| e.to_string())?;
    let mut cfg = experiment::parse_config_with(&text, flags.or(env)).map_err(|e| e.to_string())?;
    if let Some(seed) = args.seed {
        cfg.seeds = vec![seed];
    }
    let outcome = experiment::run(&cfg, &args.out, args.jobs).map_err(|e| e.to_string())?;
    let manifest = &outcome.manifest;
    for entry in manifest.certificates.iter().chain(&manifest.instances) {
        if let Some(err) = &entry.error {
            eprintln!("{} {:?} seed {:?}: {err}", entry.ring, entry.theorem, entry.seed);
        }
    }
    eprintln!(
        "{} instances, config {}, output in {}",
        manifest.instances.len(),
        &manifest.config_hash[..12],
        args.out.display()
    );
    if manifest.all_chains_ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("edge-count chain violated; see report.json");
        Ok(ExitCode::FAILURE)
    }
}

fn probe(args: ProbeArgs) -> Result<ExitCode, String> {
    let length = match (args.length, args.alpha) {
        (Some(len), _) => len,
        (None, Some(alpha)) => (args.ring.p() as f64).powf(alpha).round() as usize,
        (None, None) => unreachable!("clap requires one of the two"),
    };
    let base = args
        .base
        .map(|b| args.ring.elem(b))
        .transpose()
        .map_err(|e| e.to_string())?;
    let report = sharpness_probe(&args.ring, length, base).map_err(|e| e.to_string())?;
    emit(
        &serde_json::to_string_pretty(&report).expect("report serializes"),
        args.out.as_ref(),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn vinh(args: VinhArgs) -> Result<ExitCode, String> {
    let family = SetFamily::RandomElements { size: args.size };
    let mut violations = 0;
    for i in 0..args.count {
        let seed = args.seed.wrapping_add(i);
        let a = set_family(&args.ring, &family, seed, None, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| e.to_string())?;
        let report = vinh_field_check(&a).map_err(|e| e.to_string())?;
        if !report.holds {
            violations += 1;
        }
        let line = serde_json::json!({ "seed": seed, "report": report });
        println!("{line}");
    }
    eprintln!("{} subsets, {violations} violations", args.count);
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Certify(args) => certify(args),
        Command::Experiment(args) => run_experiment(args),
        Command::ProbeSharpness(args) => probe(args),
        Command::VinhCheck(args) => vinh(args),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {err}");
        ExitCode::from(2)
    })
}
