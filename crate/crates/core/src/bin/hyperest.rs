use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperest::experiment::{
    brute_m, doubling_ratios, run_estimate, run_sweep, write_sweep_csv, EstimateOptions,
    SweepOptions, DEFAULT_BRUTE_BUDGET,
};
use hyperest::{generate, read_hypergraph, write_hypergraph, GeneratorKind, GeneratorSpec, Hypergraph};
use hyperest::{OracleMode, ProfileMode};

#[derive(Parser)]
#[command(name = "hyperest", about = "Estimate hyperedge counts from subset queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ProfileMode::Practical)]
    profile: ProfileMode,
    #[arg(long, global = true, value_enum, default_value_t = OracleMode::Direct)]
    oracle_mode: OracleMode,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated hypergraph to a file.
    Generate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Estimate the hyperedge count of a file (or of a generated instance)
    /// and print a JSON report.
    Estimate {
        file: Option<PathBuf>,
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Skip ground truth when there are more d-subsets than this.
        #[arg(long, default_value_t = DEFAULT_BRUTE_BUDGET)]
        brute_budget: u128,
        /// Zero all wall-clock fields.
        #[arg(long)]
        no_timing: bool,
    },
    /// Print the exact hyperedge count of a file.
    Brute { file: PathBuf },
    /// CSV of query counts over n = 2^from .. 2^to.
    Sweep {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 8)]
        from: u32,
        #[arg(long, default_value_t = 10)]
        to: u32,
        /// Hyperedges per vertex.
        #[arg(long, default_value_t = 4)]
        density: usize,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Warn when queries(2n)/queries(n) exceeds this.
        #[arg(long, default_value_t = 2.0)]
        ratio_ceiling: f64,
        #[arg(long, default_value_t = DEFAULT_BRUTE_BUDGET)]
        brute_budget: u128,
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Sunflower,
    Clique,
    Empty,
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, value_enum, default_value_t = Kind::Random)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Shared vertices of a sunflower.
    #[arg(long, default_value_t = 1)]
    core: usize,
    /// Size of a planted clique.
    #[arg(long, default_value_t = 8)]
    clique: usize,
}

impl InstanceArgs {
    fn spec(&self, seed: u64) -> Result<GeneratorSpec, String> {
        let n = self.n.ok_or("--n is required")?;
        let kind = match self.kind {
            Kind::Random => GeneratorKind::RandomUniform,
            Kind::Sunflower => GeneratorKind::Sunflower { core: self.core },
            Kind::Clique => GeneratorKind::PlantedClique { clique: self.clique },
            Kind::Empty => GeneratorKind::Empty,
        };
        Ok(GeneratorSpec { kind, n, d: self.d, m: self.m, seed })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Generate { instance, output } => {
            let h = generate(&instance.spec(cli.seed)?).map_err(|e| e.to_string())?;
            write_hypergraph(&h, &output).map_err(|e| e.to_string())?;
            eprintln!("wrote {} hyperedges to {}", h.num_edges(), output.display());
        }
        Command::Estimate { file, instance, eps, brute_budget, no_timing } => {
            let h = load(file, &instance, cli.seed)?;
            let opts = EstimateOptions {
                eps,
                profile: cli.profile,
                oracle_mode: cli.oracle_mode,
                seed: cli.seed,
                brute_budget,
                timing: !no_timing,
            };
            let report = run_estimate(&h, &opts).map_err(|e| e.to_string())?;
            for f in &report.failures {
                eprintln!("warning: {f}");
            }
            let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            writeln!(out, "{json}").map_err(|e| e.to_string())?;
        }
        Command::Brute { file } => {
            let h = read_hypergraph(&file).map_err(|e| e.to_string())?;
            let m = brute_m(&h, u128::MAX).expect("unbounded budget");
            writeln!(out, "{m}").map_err(|e| e.to_string())?;
        }
        Command::Sweep { d, from, to, density, eps, repeat, ratio_ceiling, brute_budget, no_timing } => {
            let opts = SweepOptions {
                d,
                log_n_from: from,
                log_n_to: to,
                density,
                estimate: EstimateOptions {
                    eps,
                    profile: cli.profile,
                    oracle_mode: cli.oracle_mode,
                    seed: cli.seed,
                    brute_budget,
                    timing: !no_timing,
                },
                repeat,
                jobs: cli.jobs,
            };
            let rows = run_sweep(&opts).map_err(|e| e.to_string())?;
            write_sweep_csv(&rows, &mut out).map_err(|e| e.to_string())?;
            for (n, ratio) in doubling_ratios(&rows) {
                let flag = if ratio > ratio_ceiling { "  above ceiling" } else { "" };
                eprintln!("n = {n}: queries grew x{ratio:.3}{flag}");
            }
        }
    }
    Ok(())
}

fn load(file: Option<PathBuf>, instance: &InstanceArgs, seed: u64) -> Result<Hypergraph, String> {
    match file {
        Some(path) => read_hypergraph(&path).map_err(|e| format!("{}: {e}", path.display())),
        None => generate(&instance.spec(seed)?).map_err(|e| e.to_string()),
    }
}
