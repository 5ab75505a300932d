//! Generates one network drop — macro sectors, picocells, hotspot and
//! uniform UEs — and prints the layout with its placement-constraint audit.
//!
//! ```text
//! cargo run --example layout_drop
//! ```

use hetsim::error::Result;
use hetsim::rng::{stream_rng, Stream};
use hetsim::topology::{generate_layout, ScenarioConfig, Tier, UeTag};

fn main() -> Result<()> {
    let mut cfg = ScenarioConfig::default();
    cfg.picos_per_sector = 4;
    cfg.validate()?;

    let mut rng = stream_rng(42, 0, Stream::Layout);
    let layout = generate_layout(&cfg, &mut rng)?;

    println!(
        "layout: {} macro sector(s), {} picocell(s), {} UEs",
        layout.num_macro_cells(),
        layout.num_pico_cells(),
        layout.ues.len()
    );
    println!(
        "hotspot allocation: {} UEs per pico, {} uniform per sector\n",
        cfg.hotspot_ues_per_pico(),
        cfg.uniform_ues_per_sector()
    );

    println!("cells (id, tier, sector, x, y):");
    for cell in &layout.cells {
        println!(
            "  {:>2}  {:>5}  s{}  {:>8.1}  {:>8.1}",
            cell.id.0,
            match cell.tier {
                Tier::Macro => "macro",
                Tier::Pico => "pico",
            },
            cell.sector,
            cell.pos.x,
            cell.pos.y
        );
    }

    // distance audit: the generator enforces these by rejection sampling
    let macro_pos = layout.cells[0].pos;
    let mut min_mbs_pbs = f64::INFINITY;
    let mut min_pbs_pbs = f64::INFINITY;
    for p in &layout.cells {
        if p.tier != Tier::Pico {
            continue;
        }
        min_mbs_pbs = min_mbs_pbs.min(p.pos.dist(&macro_pos));
        for q in &layout.cells {
            if q.tier == Tier::Pico && q.id != p.id {
                min_pbs_pbs = min_pbs_pbs.min(p.pos.dist(&q.pos));
            }
        }
    }
    println!("\nminimum macro-pico distance: {min_mbs_pbs:.1} m (constraint ≥ 75)");
    println!("minimum pico-pico distance:  {min_pbs_pbs:.1} m (constraint ≥ 40)");

    let hotspot = layout
        .ues
        .iter()
        .filter(|u| matches!(u.tag, UeTag::Hotspot(_)))
        .count();
    println!(
        "UEs: {} hotspot, {} uniform",
        hotspot,
        layout.ues.len() - hotspot
    );

    println!("\nlayout CSV (first 8 rows):");
    let mut csv = Vec::new();
    hetsim::topology::export_layout_csv(&layout, &mut csv)
        .map_err(|e| hetsim::SimError::io("layout csv", e))?;
    for line in String::from_utf8_lossy(&csv).lines().take(8) {
        println!("  {line}");
    }
    Ok(())
}
