//! Traces the per-TTI network sum rate of one dynamic-learning drop and
//! reports the greedy-policy stability verdict, showing how the rate series
//! flattens while persistent exploration keeps the policies themselves live.
//!
//! ```text
//! cargo run --example convergence_trace
//! ```

use hetsim::error::Result;
use hetsim::icic::IcicMode;
use hetsim::sim::{run_drop, DropLoggers, DropParams};
use hetsim::topology::ScenarioConfig;

fn main() -> Result<()> {
    let params = DropParams {
        scenario: ScenarioConfig::default(),
        mode: IcicMode::DynamicQl,
        num_ttis: 2000,
        warmup_ttis: 400,
        fading_enabled: true,
        shadowing_enabled: true,
    };
    let out = run_drop(&params, 21, 0, &mut DropLoggers::default())?;

    println!("network sum rate, 100-TTI block averages:\n");
    let blocks: Vec<f64> = out
        .sum_rate_trace
        .chunks(100)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let peak = blocks.iter().cloned().fold(0.0, f64::max);
    for (i, mbps) in blocks.iter().enumerate() {
        let bar = "#".repeat((mbps / peak * 56.0).round() as usize);
        println!("{:>5}  {:>8.2} Mb/s  {bar}", i * 100, mbps / 1e6);
    }

    let early = blocks[..4].iter().sum::<f64>() / 4.0;
    let late = blocks[blocks.len() - 4..].iter().sum::<f64>() / 4.0;
    println!(
        "\nfirst 400 TTIs avg {:.2} Mb/s → last 400 TTIs avg {:.2} Mb/s ({:+.1}%)",
        early / 1e6,
        late / 1e6,
        (late / early - 1.0) * 100.0
    );
    match out.convergence_tti {
        Some(t) => println!("greedy policies stable from TTI {t}"),
        None => {
            println!("greedy policies never held still for the 200-TTI window:");
            println!("the scheduler keeps rotating UEs through each RB, so per-RB");
            println!("costs stay noisy and the argmins keep trading places even");
            println!("after the sum rate has flattened");
        }
    }
    Ok(())
}
