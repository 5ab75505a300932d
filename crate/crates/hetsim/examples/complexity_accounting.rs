//! Prints the storage and per-iteration operation accounting of the two
//! learning architectures, with the closed-form figures cross-checked
//! against instrumented runs of the actual update routines.
//!
//! ```text
//! cargo run --example complexity_accounting
//! ```

use hetsim::metrics::{complexity_report, measured_ops, ops_q, ops_sat};
use hetsim::qlearn::{PowerLevels, BIAS_LEVELS_DB, NUM_STATES};

fn main() {
    let a_macro = PowerLevels::macro_unprotected_default().num_actions();
    let a_pico = PowerLevels::pico_default().num_actions() * BIAS_LEVELS_DB.len();
    let report = complexity_report(NUM_STATES, a_macro, NUM_STATES, a_pico, 50);

    println!("memory units (one Q entry / one probability = one unit, R = 50):");
    println!(
        "  q-learning:   (|S_m||A_m| + |S_p||A_p|)·R = ({NUM_STATES}·{a_macro} + {NUM_STATES}·{a_pico})·50 = {}",
        report.memory_units_q
    );
    println!(
        "  satisfaction: |A_p|·R = {a_pico}·50 = {}",
        report.memory_units_sat
    );

    println!("\noperations per learning iteration (formula vs instrumented):");
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14}",
        "|A|", "q formula", "q measured", "sat formula", "sat measured"
    );
    for a in [2usize, 3, 4, 5, 12, 100] {
        let (measured_q, measured_sat) = measured_ops(a);
        println!(
            "{:>6} {:>14} {:>14} {:>14} {:>14}",
            a,
            ops_q(a),
            measured_q,
            ops_sat(a),
            measured_sat
        );
    }
    println!("\nq-learning:   4|A|+6  (|A| reads + |A|−1 min-comparisons + 5 update");
    println!("              arithmetic ops + |A| reads + |A|−1 comparisons for the");
    println!("              next greedy lookup)");
    println!("satisfaction: 2|A|+7  (step-size arithmetic + one reinforcement +");
    println!("              |A| scalings + |A| normalization ops)");
}
