//! The sixteen acceptance checks, one printed verdict line each.
//!
//! Checks 1–7 are exact micro-level identities, 8–9 compare the learners
//! against independently coded oracles (value iteration, a hand-solved
//! satisfaction game), and 10–16 run the full simulator at desk scale:
//! one macro site, 2 picos per sector, 5000 TTIs, 10 drops, fading on.
//! Run with `--nocapture` to stream the verdicts; the test fails at the end
//! if any criterion failed, after all lines have printed.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hetsim::association::{associate, rsrp_dbm};
use hetsim::icic::IcicMode;
use hetsim::metrics::{complexity_report, measured_ops, ops_q, ops_sat};
use hetsim::qlearn::{cost, quantize_component, select_action_with, QTable, ALPHA, LAMBDA};
use hetsim::runner::{run_experiment, ExperimentConfig, RunStats};
use hetsim::satisfaction::{
    step_size, ActionDistribution, EquilibriumDetector, SatLearner, DEFAULT_EQUILIBRIUM_WINDOW,
};
use hetsim::topology::CellId;

const MBPS: f64 = 1e6;

/// Records one verdict line; failing criteria are kept for the final assert.
struct Verdicts {
    failures: Vec<String>,
}

impl Verdicts {
    fn new() -> Self {
        Verdicts { failures: Vec::new() }
    }

    fn record(&mut self, id: usize, pass: bool, detail: String) {
        println!(
            "criterion {:02} {} — {}",
            id,
            if pass { "PASS" } else { "FAIL" },
            detail
        );
        if !pass {
            self.failures.push(format!("criterion {id:02}: {detail}"));
        }
    }
}

// ---------------------------------------------------------------------------
// Criteria 1–6: exact identities
// ---------------------------------------------------------------------------

fn criterion_1_quantizer(v: &mut Verdicts) {
    let cases = [
        (17.9, 0u8),
        (18.0, 1),
        (20.0, 1),
        (22.0, 1),
        (22.1, 2),
        (f64::NEG_INFINITY, 0),
    ];
    let got: Vec<u8> = cases.iter().map(|(g, _)| quantize_component(*g)).collect();
    let want: Vec<u8> = cases.iter().map(|(_, w)| *w).collect();
    v.record(
        1,
        got == want,
        format!("SINR quantizer truth table {{17.9,18,20,22,22.1,-inf}} → {got:?} (want {want:?})"),
    );
}

fn criterion_2_cost(v: &mut Verdicts) {
    let on_target = cost(20.0, 1.0, 2.0);
    let off_target = cost(26.0, 1.0, 2.0);
    let overload = cost(20.0, 2.5, 2.0);
    let pass = on_target == 0.0 && off_target == 36.0 && overload == 500.0;
    v.record(
        2,
        pass,
        format!("cost(20 dB)={on_target}, cost(26 dB)={off_target}, overload={overload} (want 0/36/500)"),
    );
}

fn criterion_3_single_update(v: &mut Verdicts) {
    let mut table = QTable::new(2, 2);
    table.update(0, 0, 4.0, 1, ALPHA, LAMBDA);
    let got = table.get(0, 0);
    v.record(
        3,
        got == 2.0,
        format!("zero table, one update with c=4, α=0.5, λ=0.9 → {got} (want exactly 2)"),
    );
}

fn criterion_4_step_size(v: &mut Verdicts) {
    let (u_max, u_target) = (100.0, 80.0);
    let mid = step_size(u_target, u_max, u_target).unwrap();
    let lo = step_size(u_target - u_max, u_max, u_target).unwrap();
    let hi = step_size(u_target + u_max, u_max, u_target).unwrap();
    v.record(
        4,
        mid == 0.5 && lo == 0.0 && hi == 1.0,
        format!("step size at target={mid}, at endpoints=({lo},{hi}) (want 0.5, 0, 1)"),
    );
}

fn criterion_5_prob_update(v: &mut Verdicts) {
    let mut dist = ActionDistribution::uniform(4);
    dist.update(0, 0.5);
    let probs = dist.probs().to_vec();
    let want = [0.625, 0.125, 0.125, 0.125];
    let components = probs.iter().zip(&want).all(|(g, w)| g == w);
    let sum: f64 = probs.iter().sum();
    v.record(
        5,
        components && (sum - 1.0).abs() <= 1e-9,
        format!("uniform-4 reinforced with τb=0.5 → {probs:?}, Σ={sum:.12} (want {want:?}, Σ within 1e-9)"),
    );
}

fn criterion_6_complexity(v: &mut Verdicts) {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [2usize, 5, 12] {
        let (mq, ms) = measured_ops(a);
        ok &= mq == ops_q(a) && ms == ops_sat(a);
        parts.push(format!("|A|={a}: q {mq}/{} sat {ms}/{}", ops_q(a), ops_sat(a)));
    }
    let report = complexity_report(9, 3, 9, 12, 50);
    ok &= report.memory_units_q == 6750 && report.memory_units_sat == 600;
    parts.push(format!(
        "memory {}/{} (want 6750/600)",
        report.memory_units_q, report.memory_units_sat
    ));
    v.record(6, ok, format!("measured vs formula ops — {}", parts.join(", ")));
}

// ---------------------------------------------------------------------------
// Criterion 7: association arithmetic + monotonicity, 1000 random instances
// ---------------------------------------------------------------------------

fn criterion_7_association(v: &mut Verdicts) {
    let mut violations = 0usize;

    // pinned arithmetic cases
    if (rsrp_dbm(46.0, -114.1) - (-68.1)).abs() > 1e-12 {
        violations += 1;
    }
    if (rsrp_dbm(30.0, -62.3) - (-32.3)).abs() > 1e-12 {
        violations += 1;
    }
    let biased_win = associate(&[(CellId(0), -80.0, 0.0), (CellId(1), -88.0, 12.0)]).unwrap();
    if biased_win != (CellId(1), true) {
        violations += 1;
    }
    let unbiased_win = associate(&[(CellId(0), -80.0, 0.0), (CellId(1), -88.0, 0.0)]).unwrap();
    if unbiased_win != (CellId(0), false) {
        violations += 1;
    }
    let tie = associate(&[(CellId(0), -80.0, 0.0), (CellId(1), -86.0, 6.0)]).unwrap();
    if tie.0 != CellId(0) {
        violations += 1;
    }

    let bias_levels = [0.0, 6.0, 12.0];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=6);
        let cands: Vec<(CellId, f64, f64)> = (0..n)
            .map(|i| {
                (
                    CellId(i),
                    rng.gen_range(-120.0..-40.0),
                    bias_levels[rng.gen_range(0..bias_levels.len())],
                )
            })
            .collect();
        let (winner, er) = associate(&cands).unwrap();

        // independent argmax with the lowest-id tie rule
        let argmax = |with_bias: bool| {
            let mut best = 0usize;
            for i in 1..cands.len() {
                let score = |k: usize| cands[k].1 + if with_bias { cands[k].2 } else { 0.0 };
                if score(i) > score(best) {
                    best = i;
                }
            }
            cands[best].0
        };
        if winner != argmax(true) || er != (argmax(true) != argmax(false)) {
            violations += 1;
            continue;
        }

        // shift invariance: a common RSRP offset cannot change the outcome
        let offset = rng.gen_range(-30.0..30.0);
        let shifted: Vec<_> = cands.iter().map(|c| (c.0, c.1 + offset, c.2)).collect();
        if associate(&shifted).unwrap() != (winner, er) {
            violations += 1;
            continue;
        }

        // monotonicity: raising one cell's bias can only pull the win toward it
        let j = rng.gen_range(0..cands.len());
        let mut raised = cands.clone();
        raised[j].2 = 12.0;
        let (winner2, _) = associate(&raised).unwrap();
        if winner2 != winner && winner2 != cands[j].0 {
            violations += 1;
        }
        if winner == cands[j].0 && winner2 != winner {
            violations += 1;
        }
    }
    v.record(
        7,
        violations == 0,
        format!("biased-selection arithmetic, shift invariance and bias monotonicity — {violations} violation(s) over 1000 random instances"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: Q-learning vs value iteration on a 2-state/2-action MDP
// ---------------------------------------------------------------------------

fn criterion_8_value_iteration_oracle(v: &mut Verdicts) {
    let start = Instant::now();
    // deterministic MDP: costs and successor states per (state, action)
    let step_cost = [[1.0, 4.0], [2.0, 0.0]];
    let successor = [[0usize, 1], [0, 1]];

    // oracle: value iteration to fixed point, then the optimal Q
    let mut value = [0.0f64; 2];
    for _ in 0..2000 {
        let mut next = [0.0f64; 2];
        for s in 0..2 {
            next[s] = (0..2)
                .map(|a| step_cost[s][a] + LAMBDA * value[successor[s][a]])
                .fold(f64::INFINITY, f64::min);
        }
        value = next;
    }
    let q_star = |s: usize, a: usize| step_cost[s][a] + LAMBDA * value[successor[s][a]];

    // tabular learner on a uniform-random behavior policy (off-policy)
    let mut table = QTable::new(2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut state = 0usize;
    for _ in 0..10_000 {
        let action = select_action_with(&table, state, 1.0, &mut rng);
        let next = successor[state][action];
        table.update(state, action, step_cost[state][action], next, ALPHA, LAMBDA);
        state = next;
    }

    let mut sup = 0.0f64;
    for s in 0..2 {
        for a in 0..2 {
            sup = sup.max((table.get(s, a) - q_star(s, a)).abs());
        }
    }
    let elapsed = start.elapsed();
    v.record(
        8,
        sup <= 1e-3 && elapsed.as_secs_f64() < 1.0,
        format!(
            "sup-norm gap to value-iteration fixed point {sup:.2e} after 10^4 steps in {:.0} ms (want ≤1e-3, <1 s)",
            elapsed.as_secs_f64() * 1e3
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 9: satisfaction equilibrium on a 2-player toy game
// ---------------------------------------------------------------------------

/// Payoff of one player: 12 − 4·|a − target| − 2·[both picked the same
/// action]. With targets (1, 2) and threshold 10 the unique satisfying
/// action per player is its own target, so (1, 2) is the only pure
/// satisfaction equilibrium.
fn toy_payoff(own: usize, target: usize, collided: bool) -> f64 {
    12.0 - 4.0 * (own as f64 - target as f64).abs() - if collided { 2.0 } else { 0.0 }
}

fn criterion_9_satisfaction_game(v: &mut Verdicts) {
    let start = Instant::now();
    let targets = [1usize, 2usize];
    let (u_max, u_target) = (12.0, 10.0);
    let mut fired = 0usize;
    let mut worst_tti = 0u64;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x9000 + seed);
        let mut players: Vec<SatLearner> = (0..2)
            .map(|_| SatLearner::new(1, 4, u_max, u_target).unwrap())
            .collect();
        let mut detector = EquilibriumDetector::new(DEFAULT_EQUILIBRIUM_WINDOW);
        let mut u_prev = [0.0f64; 2];
        for tti in 0..100_000u64 {
            let mut acts = [0usize; 2];
            for (i, p) in players.iter_mut().enumerate() {
                acts[i] = p.select_actions(u_prev[i], tti, &mut rng)[0];
            }
            let collided = acts[0] == acts[1];
            for i in 0..2 {
                u_prev[i] = toy_payoff(acts[i], targets[i], collided);
            }
            let flags = [players[0].is_satisfied(), players[1].is_satisfied()];
            if detector.observe(tti, &acts, &flags) {
                fired += 1;
                worst_tti = worst_tti.max(tti);
                break;
            }
        }
    }
    let elapsed = start.elapsed();
    v.record(
        9,
        fired >= 95 && elapsed.as_secs_f64() < 30.0,
        format!(
            "equilibrium detector fired in {fired}/100 seeds (latest at iteration {worst_tti}) in {:.1} s (want ≥95, <30 s)",
            elapsed.as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------------------
// Criteria 10–16: desk-scale directional checks
// ---------------------------------------------------------------------------

fn desk_run(mode: IcicMode, picos: usize, root: &Path, tag: &str) -> RunStats {
    let mut config = ExperimentConfig::desk(mode, root.join(tag));
    config.label = tag.to_string();
    config.scenario.picos_per_sector = picos;
    let start = Instant::now();
    let stats = run_experiment(&config).unwrap_or_else(|e| panic!("desk run {tag}: {e}"));
    println!(
        "  [desk] {tag}: mean {:.3} Mb/s, p50 {:.3}, p5 {:.3}, converged {}/{} ({:.0} s)",
        stats.mean_bps / MBPS,
        stats.p50_bps / MBPS,
        stats.p5_bps / MBPS,
        stats.convergence.iter().filter(|t| **t >= 0).count(),
        stats.num_drops,
        start.elapsed().as_secs_f64()
    );
    stats
}

/// Relative path → bytes for every CSV under `root`, recursively.
fn csv_bytes(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(dir: &Path, root: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).expect("read_dir") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                walk(&path, root, out);
            } else if path.extension().is_some_and(|e| e == "csv") {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).expect("read csv"));
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}

fn gain_pct(new: f64, old: f64) -> f64 {
    (new / old - 1.0) * 100.0
}

#[test]
fn acceptance_criteria() {
    let mut v = Verdicts::new();

    criterion_1_quantizer(&mut v);
    criterion_2_cost(&mut v);
    criterion_3_single_update(&mut v);
    criterion_4_step_size(&mut v);
    criterion_5_prob_update(&mut v);
    criterion_6_complexity(&mut v);
    criterion_7_association(&mut v);
    criterion_8_value_iteration_oracle(&mut v);
    criterion_9_satisfaction_game(&mut v);

    let tmp = tempfile::tempdir().expect("tempdir");
    let root = tmp.path();
    let suite_start = Instant::now();

    let rp = desk_run(IcicMode::Rp, 2, root, "rp_p2");
    let nic0 = desk_run(IcicMode::NoIcicCre { bias_db: 0.0 }, 2, root, "no_icic_b0");
    let nic12 = desk_run(IcicMode::NoIcicCre { bias_db: 12.0 }, 2, root, "no_icic_b12");
    let fca12 = desk_run(
        IcicMode::FixedCreAdaptiveAbs { bias_db: 12.0 },
        2,
        root,
        "fixed_cre_adaptive_abs_b12",
    );
    let sql = desk_run(IcicMode::StaticQl, 2, root, "static_ql_p2");
    let sat = desk_run(IcicMode::Satisfaction, 2, root, "satisfaction_p2");
    let dql_p0 = desk_run(IcicMode::DynamicQl, 0, root, "dynamic_ql_p0");
    let dql_p2 = desk_run(IcicMode::DynamicQl, 2, root, "dynamic_ql_p2");
    let dql_p4 = desk_run(IcicMode::DynamicQl, 4, root, "dynamic_ql_p4");
    let dql_p8 = desk_run(IcicMode::DynamicQl, 8, root, "dynamic_ql_p8");
    let sfql = desk_run(IcicMode::SfQl, 2, root, "sf_ql_p2");
    let mfs = desk_run(IcicMode::MfStaticQl, 2, root, "mf_static_ql_p2");
    let mfd = desk_run(IcicMode::MfDynamicQl, 2, root, "mf_dynamic_ql_p2");

    v.record(
        10,
        dql_p2.mean_bps >= 1.5 * rp.mean_bps,
        format!(
            "dynamic-QL mean {:.3} Mb/s vs resource-partitioning {:.3} ({:+.1}%, want ≥ +50%)",
            dql_p2.mean_bps / MBPS,
            rp.mean_bps / MBPS,
            gain_pct(dql_p2.mean_bps, rp.mean_bps)
        ),
    );
    v.record(
        11,
        dql_p2.mean_bps >= fca12.mean_bps,
        format!(
            "dynamic-QL mean {:.3} Mb/s vs fixed-CRE/adaptive-ABS {:.3} ({:+.1}%, want ≥ 0%)",
            dql_p2.mean_bps / MBPS,
            fca12.mean_bps / MBPS,
            gain_pct(dql_p2.mean_bps, fca12.mean_bps)
        ),
    );
    v.record(
        12,
        nic12.p5_bps < nic0.p5_bps,
        format!(
            "uncoordinated range expansion p5: bias 12 dB {:.3} Mb/s vs bias 0 {:.3} (want strictly lower)",
            nic12.p5_bps / MBPS,
            nic0.p5_bps / MBPS
        ),
    );
    v.record(
        13,
        sat.p5_bps >= sql.p5_bps,
        format!(
            "satisfaction p5 {:.3} Mb/s vs static-QL p5 {:.3} (want ≥)",
            sat.p5_bps / MBPS,
            sql.p5_bps / MBPS
        ),
    );
    v.record(
        14,
        mfd.mean_bps >= sfql.mean_bps
            && (mfs.p5_bps >= sfql.p5_bps || mfd.p5_bps >= sfql.p5_bps),
        format!(
            "multi-flow dynamic mean {:.3} vs single-flow {:.3} Mb/s; p5 multi-flow ({:.3}|{:.3}) vs single-flow {:.3}",
            mfd.mean_bps / MBPS,
            sfql.mean_bps / MBPS,
            mfs.p5_bps / MBPS,
            mfd.p5_bps / MBPS,
            sfql.p5_bps / MBPS
        ),
    );
    let density = [&dql_p0, &dql_p2, &dql_p4, &dql_p8];
    v.record(
        15,
        density.windows(2).all(|w| w[0].mean_bps <= w[1].mean_bps),
        format!(
            "dynamic-QL mean over picos/sector 0/2/4/8: {:.3}/{:.3}/{:.3}/{:.3} Mb/s (want nondecreasing)",
            dql_p0.mean_bps / MBPS,
            dql_p2.mean_bps / MBPS,
            dql_p4.mean_bps / MBPS,
            dql_p8.mean_bps / MBPS
        ),
    );

    // repeat two of the runs above with identical seeds, then byte-compare
    let _rp_again = desk_run(IcicMode::Rp, 2, root, "rp_p2_repeat");
    let _dql_again = desk_run(IcicMode::DynamicQl, 2, root, "dynamic_ql_p2_repeat");
    let mut identical = true;
    let mut compared = 0usize;
    for (first, second) in [
        ("rp_p2", "rp_p2_repeat"),
        ("dynamic_ql_p2", "dynamic_ql_p2_repeat"),
    ] {
        let a = csv_bytes(&root.join(first));
        let b = csv_bytes(&root.join(second));
        identical &= a == b;
        compared += a.len();
    }
    v.record(
        16,
        identical && compared > 0,
        format!("{compared} CSV files byte-identical across repeated runs (resource partitioning and dynamic-QL)"),
    );

    println!(
        "desk phase wall time: {:.1} min",
        suite_start.elapsed().as_secs_f64() / 60.0
    );
    assert!(
        v.failures.is_empty(),
        "{} acceptance criterion(s) failed:\n{}",
        v.failures.len(),
        v.failures.join("\n")
    );
}
