//! Runs the four classical interference-coordination baselines on a common
//! short scenario and prints a throughput comparison table: resource
//! partitioning, range expansion without coordination, fixed ABS patterns,
//! and fixed range expansion with adaptive muting.
//!
//! ```text
//! cargo run --example baseline_schemes
//! ```

use hetsim::error::Result;
use hetsim::icic::{AbsPattern, AbsPower, IcicMode};
use hetsim::runner::ExperimentConfig;
use hetsim::run_experiment;

fn main() -> Result<()> {
    let schemes = vec![
        IcicMode::Rp,
        IcicMode::NoIcicCre { bias_db: 12.0 },
        IcicMode::FixedAbsCre {
            pattern: AbsPattern::prefix(3, 10, AbsPower::FullMute)?,
            bias_db: 12.0,
        },
        IcicMode::FixedCreAdaptiveAbs { bias_db: 12.0 },
    ];

    let out = std::env::temp_dir().join("hetsim_baseline_schemes");
    println!("{:<28} {:>10} {:>10} {:>10}", "scheme", "mean Mb/s", "p50 Mb/s", "p5 Mb/s");
    for mode in schemes {
        let mut config = ExperimentConfig::desk(mode, out.clone());
        config.num_ttis = 800;
        config.warmup_ttis = 200;
        config.num_drops = 3;
        let stats = run_experiment(&config)?;
        println!(
            "{:<28} {:>10.3} {:>10.3} {:>10.3}",
            stats.label,
            stats.mean_bps / 1e6,
            stats.p50_bps / 1e6,
            stats.p5_bps / 1e6
        );
    }
    println!("\n(800 TTIs, 3 drops each — indicative, not the full desk scale)");
    Ok(())
}
