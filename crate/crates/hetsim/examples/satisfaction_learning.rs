//! Runs the satisfaction-equilibrium scheme on one drop and traces how the
//! picocells' utilities approach their targets: satisfied players freeze
//! their per-RB power draw, unsatisfied ones keep re-sampling and redraw
//! their range-expansion bias each epoch.
//!
//! ```text
//! cargo run --example satisfaction_learning
//! ```

use hetsim::error::Result;
use hetsim::icic::IcicMode;
use hetsim::sim::{run_drop, DropLoggers, DropParams};
use hetsim::topology::ScenarioConfig;

fn main() -> Result<()> {
    let params = DropParams {
        scenario: ScenarioConfig::default(),
        mode: IcicMode::Satisfaction,
        num_ttis: 2000,
        warmup_ttis: 400,
        fading_enabled: true,
        shadowing_enabled: true,
    };

    let mut trace: Vec<u8> = Vec::new();
    let mut loggers = DropLoggers {
        satisfaction: Some(&mut trace),
        ..DropLoggers::default()
    };
    let out = run_drop(&params, 11, 0, &mut loggers)?;

    // rows: tti,cell,utility,satisfied,actions
    let text = String::from_utf8_lossy(&trace);
    let mut cells: Vec<usize> = Vec::new();
    for line in text.lines().take(64) {
        let cell: usize = line.split(',').nth(1).unwrap().parse().unwrap();
        if !cells.contains(&cell) {
            cells.push(cell);
        }
    }

    println!("picocell utility trace (sum over RBs of log2(1+SINR)):");
    println!("{:>6} {}", "tti", cells.iter().map(|c| format!("   cell {c:<12}")).collect::<String>());
    for probe in [0u64, 100, 400, 800, 1200, 1600, 1999] {
        let mut row = format!("{probe:>6} ");
        for cell in &cells {
            for line in text.lines() {
                let mut parts = line.split(',');
                let tti: u64 = parts.next().unwrap().parse().unwrap();
                let c: usize = parts.next().unwrap().parse().unwrap();
                if tti == probe && c == *cell {
                    let u: f64 = parts.next().unwrap().parse().unwrap();
                    let sat: u8 = parts.next().unwrap().parse().unwrap();
                    row.push_str(&format!(
                        "  {u:>8.1} {} ",
                        if sat == 1 { "(sat)  " } else { "(unsat)" }
                    ));
                }
            }
        }
        println!("{row}");
    }

    let satisfied_ttis = text
        .lines()
        .filter(|l| l.split(',').nth(3) == Some("1"))
        .count();
    let total_rows = text.lines().count();
    println!(
        "\nsatisfied player-TTIs: {satisfied_ttis}/{total_rows} ({:.1}%)",
        100.0 * satisfied_ttis as f64 / total_rows as f64
    );
    match out.convergence_tti {
        Some(t) => println!("equilibrium reached at TTI {t} (all satisfied, actions frozen)"),
        None => println!("no full equilibrium within the run (freeze window not met)"),
    }
    println!(
        "mean UE throughput: {:.3} Mbit/s",
        out.per_ue_throughput_bps.iter().sum::<f64>() / out.per_ue_throughput_bps.len() as f64 / 1e6
    );
    Ok(())
}
