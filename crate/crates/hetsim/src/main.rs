//! Command-line front end: parses flags, overlays them on an optional
//! settings file, and drives the sweep runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hetsim::runner::{run_sweep, RunStats, Settings};

/// System-level simulator for two-tier heterogeneous downlinks with
/// time- and frequency-domain interference coordination.
#[derive(Debug, Parser)]
#[command(name = "hetsim", version, about)]
struct Cli {
    /// Scheme(s) to run, comma-separated: rp, no-icic-cre, fixed-abs-cre,
    /// fixed-cre-adaptive-abs, static-ql, dynamic-ql, satisfaction, sf-ql,
    /// mf-static-ql, mf-dynamic-ql
    #[arg(long)]
    mode: Option<String>,

    /// Picocells per sector, comma-separated (e.g. 0,2,4,8)
    #[arg(long)]
    pbs: Option<String>,

    /// Simulated TTIs per drop
    #[arg(long)]
    ttis: Option<u64>,

    /// Independent drops per combo
    #[arg(long)]
    drops: Option<u64>,

    /// Master seed; drop i derives its streams from (seed, i)
    #[arg(long)]
    seed: Option<u64>,

    /// Explicit per-drop seeds, comma-separated (overrides --seed derivation)
    #[arg(long)]
    seeds: Option<String>,

    /// TTIs excluded from throughput statistics
    #[arg(long)]
    warmup: Option<u64>,

    /// Cell range expansion bias values in dB, comma-separated
    #[arg(long = "bias-db")]
    bias_db: Option<String>,

    /// Almost-blank-subframe ratio(s): 1/10, 3/10, 7/10
    #[arg(long = "abs-ratio")]
    abs_ratio: Option<String>,

    /// ABS power handling: "mute" or a reduction in dB (0, 6, 9, 12, 18, 24)
    #[arg(long = "abs-reduction-db")]
    abs_reduction_db: Option<String>,

    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for drop execution (default: all cores)
    #[arg(long)]
    threads: Option<usize>,

    /// Settings file (flat `key = value` lines); flags override it
    #[arg(long)]
    config: Option<PathBuf>,

    /// Inter-site distance in meters
    #[arg(long = "isd-m")]
    isd_m: Option<f64>,

    /// UEs dropped per sector
    #[arg(long = "ues-per-sector")]
    ues_per_sector: Option<usize>,

    /// Disable fast fading
    #[arg(long = "no-fading")]
    no_fading: bool,

    /// Disable shadowing
    #[arg(long = "no-shadowing")]
    no_shadowing: bool,

    /// Log per-UE SINR every N TTIs (0 = off)
    #[arg(long = "sinr-every")]
    sinr_every: Option<u64>,

    /// Log the association map every N TTIs (0 = off)
    #[arg(long = "association-every")]
    association_every: Option<u64>,

    /// Dump learner tables every N TTIs (0 = off)
    #[arg(long = "qtable-every")]
    qtable_every: Option<u64>,

    /// Log inter-cell coordination messages
    #[arg(long = "log-x2")]
    log_x2: bool,

    /// Log per-cell utility and action traces (satisfaction scheme)
    #[arg(long = "log-satisfaction")]
    log_satisfaction: bool,

    /// Log per-epoch carrier plans and biases (aggregation schemes)
    #[arg(long = "log-carrier")]
    log_carrier: bool,

    /// Write the generated layout of each drop
    #[arg(long = "log-layout")]
    log_layout: bool,
}

impl Cli {
    fn into_settings(self) -> (Settings, Option<PathBuf>) {
        let flag = |on: bool| on.then_some(true);
        let settings = Settings {
            mode: self.mode,
            pbs: self.pbs,
            ttis: self.ttis,
            drops: self.drops,
            seed: self.seed,
            seeds: self.seeds,
            warmup: self.warmup,
            bias_db: self.bias_db,
            abs_ratio: self.abs_ratio,
            abs_reduction_db: self.abs_reduction_db,
            out: self.out,
            threads: self.threads,
            fading: self.no_fading.then_some(false),
            shadowing: self.no_shadowing.then_some(false),
            isd_m: self.isd_m,
            ues_per_sector: self.ues_per_sector,
            sinr_every: self.sinr_every,
            association_every: self.association_every,
            qtable_every: self.qtable_every,
            log_x2: flag(self.log_x2),
            log_satisfaction: flag(self.log_satisfaction),
            log_carrier: flag(self.log_carrier),
            log_layout: flag(self.log_layout),
        };
        (settings, self.config)
    }
}

fn headline(stats: &RunStats) {
    let mbps = |bps: f64| bps / 1e6;
    let converged = stats.convergence.iter().filter(|t| **t >= 0).count();
    println!(
        "{}: mean {:.3} Mbit/s, p50 {:.3} Mbit/s, p5 {:.3} Mbit/s, converged {}/{} drops",
        stats.label,
        mbps(stats.mean_bps),
        mbps(stats.p50_bps),
        mbps(stats.p5_bps),
        converged,
        stats.num_drops,
    );
}

fn run(cli: Cli) -> hetsim::error::Result<()> {
    let (cli_settings, config_path) = cli.into_settings();
    let settings = match config_path {
        Some(path) => Settings::merged(Settings::from_file(&path)?, cli_settings),
        None => cli_settings,
    };
    let sweep = settings.into_sweep()?;
    let all = run_sweep(&sweep)?;
    for stats in &all {
        headline(stats);
    }
    println!("results written to {}", sweep.out_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
