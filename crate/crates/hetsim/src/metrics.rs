//! Throughput accounting, percentiles, convergence detection, and the
//! complexity bookkeeping of the learning schemes.
//!
//! Throughput statistics exclude a configurable warm-up window (learning
//! transient); the per-TTI sum-rate trace keeps every TTI so convergence
//! plots show the transient. Percentiles use linear interpolation between
//! order statistics (type-7), the convention of most statistics packages.

use crate::error::{Result, SimError};
use crate::qlearn::OpCounts;

/// TTIs excluded from throughput statistics by default.
pub const DEFAULT_WARMUP_TTIS: u64 = 500;
/// Greedy policies must hold this long to count as converged.
pub const CONVERGENCE_WINDOW_TTIS: u64 = 200;

// ---------------------------------------------------------------------------
// Percentiles and CDFs
// ---------------------------------------------------------------------------

/// Type-7 percentile of an ascending-sorted sample: rank h = (n−1)·q/100,
/// linearly interpolated between the bracketing order statistics.
pub fn percentile(sorted: &[f64], q: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(SimError::Config(
            "percentile of an empty sample".to_string(),
        ));
    }
    debug_assert!(
        sorted.windows(2).all(|w| w[0] <= w[1]),
        "input must be sorted ascending"
    );
    debug_assert!((0.0..=100.0).contains(&q));
    let n = sorted.len();
    let h = (n - 1) as f64 * q / 100.0;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Empirical CDF points of an ascending-sorted sample: (value, (i+1)/n).
pub fn cdf_points(sorted: &[f64]) -> Vec<(f64, f64)> {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, (i + 1) as f64 / n))
        .collect()
}

// ---------------------------------------------------------------------------
// Per-drop accumulation
// ---------------------------------------------------------------------------

/// Folds per-TTI served bits into per-drop statistics: post-warm-up per-UE
/// totals, the full sum-rate trace, and per-tier totals.
#[derive(Debug, Clone)]
pub struct ThroughputAccumulator {
    warmup_ttis: u64,
    tti_s: f64,
    per_ue_bits: Vec<f64>,
    macro_bits: f64,
    pico_bits: f64,
    post_warmup_ttis: u64,
    sum_rate_trace: Vec<f64>,
}

impl ThroughputAccumulator {
    pub fn new(num_ues: usize, warmup_ttis: u64, tti_s: f64) -> Self {
        ThroughputAccumulator {
            warmup_ttis,
            tti_s,
            per_ue_bits: vec![0.0; num_ues],
            macro_bits: 0.0,
            pico_bits: 0.0,
            post_warmup_ttis: 0,
            sum_rate_trace: Vec::new(),
        }
    }

    /// Records one TTI: every UE's served bits plus the macro/pico split of
    /// the same bits.
    pub fn record_tti(&mut self, tti: u64, ue_bits: &[f64], macro_bits: f64, pico_bits: f64) {
        debug_assert_eq!(ue_bits.len(), self.per_ue_bits.len());
        let total: f64 = ue_bits.iter().sum();
        self.sum_rate_trace.push(total / self.tti_s);
        if tti >= self.warmup_ttis {
            for (acc, b) in self.per_ue_bits.iter_mut().zip(ue_bits) {
                *acc += *b;
            }
            self.macro_bits += macro_bits;
            self.pico_bits += pico_bits;
            self.post_warmup_ttis += 1;
        }
    }

    /// Post-warm-up mean throughput per UE, bits/s.
    pub fn per_ue_throughput_bps(&self) -> Vec<f64> {
        let dur = self.post_warmup_ttis.max(1) as f64 * self.tti_s;
        self.per_ue_bits.iter().map(|b| b / dur).collect()
    }

    /// Post-warm-up (macro, pico) tier throughput in bits/s (summed over
    /// the tier's cells).
    pub fn tier_throughput_bps(&self) -> (f64, f64) {
        let dur = self.post_warmup_ttis.max(1) as f64 * self.tti_s;
        (self.macro_bits / dur, self.pico_bits / dur)
    }

    pub fn sum_rate_trace(&self) -> &[f64] {
        &self.sum_rate_trace
    }

    pub fn post_warmup_ttis(&self) -> u64 {
        self.post_warmup_ttis
    }
}

// ---------------------------------------------------------------------------
// Convergence
// ---------------------------------------------------------------------------

/// Finds the first TTI from which the joint greedy policy stayed unchanged
/// for a full window. Feed one policy fingerprint per TTI (empty
/// fingerprints — non-learning schemes — are trivially stable).
#[derive(Debug, Clone)]
pub struct ConvergenceTracker {
    window: u64,
    prev: Option<Vec<u16>>,
    run_start: u64,
    observed: u64,
    first: Option<u64>,
}

impl ConvergenceTracker {
    pub fn new(window: u64) -> Self {
        assert!(window > 0);
        ConvergenceTracker {
            window,
            prev: None,
            run_start: 0,
            observed: 0,
            first: None,
        }
    }

    pub fn observe(&mut self, snapshot: &[u16]) {
        if snapshot.is_empty() {
            // no tunable parameters at all: converged by construction
            self.first = Some(0);
        }
        match &mut self.prev {
            None => self.prev = Some(snapshot.to_vec()),
            Some(prev) => {
                if prev.as_slice() != snapshot {
                    if self.first.is_none() && self.observed - self.run_start >= self.window {
                        self.first = Some(self.run_start);
                    }
                    self.run_start = self.observed;
                    prev.clear();
                    prev.extend_from_slice(snapshot);
                }
            }
        }
        self.observed += 1;
    }

    /// First TTI of the first window-long stable stretch, if any.
    pub fn convergence_tti(&self) -> Option<u64> {
        if self.first.is_some() {
            return self.first;
        }
        (self.observed >= self.run_start + self.window).then_some(self.run_start)
    }
}

// ---------------------------------------------------------------------------
// Complexity accounting
// ---------------------------------------------------------------------------

/// Storage and per-iteration operation requirements of the learning
/// architectures — the formula values, cross-checked against instrumented
/// runs of the actual update routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityReport {
    /// (|S^m|·|A^m| + |S^p|·|A^p|) · R — Q-values stored network-wide per
    /// macro+pico pair when every RB carries its own agent.
    pub memory_units_q: u64,
    /// (1 · |A^p|) · R — probabilities stored per pico.
    pub memory_units_sat: u64,
    /// 4|A^m| + 6 operations per macro Q-learning iteration.
    pub ops_q_macro: u64,
    /// 4|A^p| + 6 operations per pico Q-learning iteration.
    pub ops_q_pico: u64,
    /// 2|A^p| + 7 operations per satisfaction iteration.
    pub ops_sat_pico: u64,
}

/// Per-iteration operation formulas.
pub fn ops_q(num_actions: usize) -> u64 {
    4 * num_actions as u64 + 6
}

pub fn ops_sat(num_actions: usize) -> u64 {
    2 * num_actions as u64 + 7
}

/// Assembles the report from the state/action space sizes and grid size.
pub fn complexity_report(
    s_macro: usize,
    a_macro: usize,
    s_pico: usize,
    a_pico: usize,
    num_rbs: usize,
) -> ComplexityReport {
    ComplexityReport {
        memory_units_q: ((s_macro * a_macro + s_pico * a_pico) * num_rbs) as u64,
        memory_units_sat: (a_pico * num_rbs) as u64,
        ops_q_macro: ops_q(a_macro),
        ops_q_pico: ops_q(a_pico),
        ops_sat_pico: ops_sat(a_pico),
    }
}

/// Runs the instrumented Q-learning and satisfaction iterations once for a
/// given action count and returns their measured operation totals — the
/// evidence backing the formula values.
pub fn measured_ops(num_actions: usize) -> (u64, u64) {
    use crate::qlearn::{learning_iteration_instrumented, QTable, ALPHA, LAMBDA};
    use crate::satisfaction::{sat_iteration_instrumented, ActionDistribution};
    use rand_chacha::rand_core::SeedableRng;

    let mut table = QTable::new(9, num_actions);
    let mut q_ops = OpCounts::default();
    learning_iteration_instrumented(&mut table, 0, 0, 1.0, 1, ALPHA, LAMBDA, &mut q_ops);

    let mut dist = ActionDistribution::uniform(num_actions);
    let mut s_ops = OpCounts::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    sat_iteration_instrumented(&mut dist, 0.0, 100.0, 80.0, 0.5, &mut rng, &mut s_ops);

    (q_ops.total(), s_ops.total())
}

// ---------------------------------------------------------------------------
