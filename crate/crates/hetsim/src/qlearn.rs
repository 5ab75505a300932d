//! Tabular Q-learning primitives for the self-organizing ICIC schemes.
//!
//! Agents live on resource blocks: every base station keeps one Q-table that
//! all of its per-RB agents share (states and costs are per-RB, so the table
//! accumulates R experiences per TTI). States quantize the measured pico- and
//! macro-user SINRs into three levels around the 20 dB target; costs punish
//! the squared distance to the target and, drastically, power-cap overruns;
//! actions index into configurable transmit-power level sets (plus small
//! bias / carrier tables that adapt once per epoch).
//!
//! The instrumented update mirrors the plain one but counts elementary
//! operations (row lookups, memory accesses, comparisons, sums,
//! multiplications, stores), which is how the complexity accounting of the
//! learning schemes is measured rather than assumed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::units::dbm_to_watts;

// ---------------------------------------------------------------------------
// Targets and learning constants
// ---------------------------------------------------------------------------

/// SINR target in dB; the quantizer and the cost are centered here.
pub const GAMMA_TARGET_DB: f64 = 20.0;
/// Lower edge of the "on target" SINR band, dB (inclusive).
pub const GAMMA_LOW_DB: f64 = 18.0;
/// Upper edge of the "on target" SINR band, dB (inclusive).
pub const GAMMA_HIGH_DB: f64 = 22.0;
/// Cost charged to every RB agent of a player whose raw power selection
/// exceeds its cap.
pub const OVERLOAD_COST: f64 = 500.0;
/// Learning rate α.
pub const ALPHA: f64 = 0.5;
/// Discount factor λ.
pub const LAMBDA: f64 = 0.9;

/// Exploration schedule: ε(k) = max(0.05, 0.5·0.999^k).
pub fn epsilon(k: u64) -> f64 {
    (0.5 * 0.999f64.powi(k.min(i32::MAX as u64) as i32)).max(0.05)
}

// ---------------------------------------------------------------------------
// State quantization
// ---------------------------------------------------------------------------

/// Quantized (pico-user, macro-user) SINR pair; 9 states total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QState(pub u8);

/// Number of quantized joint states.
pub const NUM_STATES: usize = 9;

/// Quantizes one SINR: 0 below the band, 1 inside `[18, 22]` dB (closed),
/// 2 above. Unscheduled or muted links (Γ = −∞) land in 0.
pub fn quantize_component(gamma_db: f64) -> u8 {
    if gamma_db < GAMMA_LOW_DB {
        0
    } else if gamma_db <= GAMMA_HIGH_DB {
        1
    } else {
        2
    }
}

/// Packs the two quantized SINRs into a state index.
pub fn quantize_state(gamma_pue_db: f64, gamma_mue_db: f64) -> QState {
    QState(3 * quantize_component(gamma_pue_db) + quantize_component(gamma_mue_db))
}

impl QState {
    pub fn from_components(i_pue: u8, i_mue: u8) -> QState {
        debug_assert!(i_pue < 3 && i_mue < 3);
        QState(3 * i_pue + i_mue)
    }

    pub fn components(self) -> (u8, u8) {
        (self.0 / 3, self.0 % 3)
    }
}

// ---------------------------------------------------------------------------
// Cost
// ---------------------------------------------------------------------------

/// Immediate cost of one RB agent: squared distance of its user's SINR from
/// the target, overridden by the flat overload penalty whenever the player's
/// raw selected power total exceeds its cap.
pub fn cost(gamma_db: f64, total_power_w: f64, p_max_w: f64) -> f64 {
    if total_power_w > p_max_w {
        OVERLOAD_COST
    } else {
        let d = gamma_db - GAMMA_TARGET_DB;
        d * d
    }
}

// ---------------------------------------------------------------------------
// Q-table
// ---------------------------------------------------------------------------

/// Dense state × action table of expected discounted costs, minimized.
#[derive(Debug, Clone)]
pub struct QTable {
    num_states: usize,
    num_actions: usize,
    q: Vec<f64>,
}

impl QTable {
    /// Zero-initialized table.
    pub fn new(num_states: usize, num_actions: usize) -> Self {
        QTable {
            num_states,
            num_actions,
            q: vec![0.0; num_states * num_actions],
        }
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    #[inline]
    pub fn get(&self, s: usize, a: usize) -> f64 {
        self.q[s * self.num_actions + a]
    }

    #[inline]
    pub fn set(&mut self, s: usize, a: usize, v: f64) {
        self.q[s * self.num_actions + a] = v;
    }

    /// Minimizing action in state `s`; ties go to the lowest index.
    pub fn min_action(&self, s: usize) -> (usize, f64) {
        let row = &self.q[s * self.num_actions..(s + 1) * self.num_actions];
        let mut best = 0;
        for (a, v) in row.iter().enumerate().skip(1) {
            if *v < row[best] {
                best = a;
            }
        }
        (best, row[best])
    }

    /// One Q-learning update:
    /// Q(s,a) ← (1−α)·Q(s,a) + α·(c + λ·min_a′ Q(s′,a′)).
    pub fn update(&mut self, s: usize, a: usize, c: f64, s_next: usize, alpha: f64, lambda: f64) {
        let (_, m) = self.min_action(s_next);
        let old = self.get(s, a);
        self.set(s, a, (1.0 - alpha) * old + alpha * (c + lambda * m));
    }

    /// Appends the greedy (argmin) action of every state to `out` — the
    /// policy fingerprint used by convergence detection.
    pub fn greedy_policy(&self, out: &mut Vec<u16>) {
        for s in 0..self.num_states {
            out.push(self.min_action(s).0 as u16);
        }
    }
}

/// ε-greedy selection with an explicit exploration probability.
pub fn select_action_with(
    table: &QTable,
    s: usize,
    eps: f64,
    rng: &mut ChaCha8Rng,
) -> usize {
    let explore: f64 = rng.gen();
    if explore < eps {
        rng.gen_range(0..table.num_actions())
    } else {
        table.min_action(s).0
    }
}

/// ε-greedy selection on the standard schedule, `k` being the agent's
/// iteration count.
pub fn select_action(table: &QTable, s: usize, k: u64, rng: &mut ChaCha8Rng) -> usize {
    select_action_with(table, s, epsilon(k), rng)
}

// ---------------------------------------------------------------------------
// Instrumented update (complexity accounting)
// ---------------------------------------------------------------------------

/// Elementary-operation counters for one learning iteration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// Table-row identifications (locating the rows of s and s′).
    pub identification: u64,
    /// Q-value reads and writes touching table memory.
    pub memory_access: u64,
    /// Pairwise comparisons in argmin/min scans and branch checks.
    pub comparison: u64,
    /// Additions/subtractions.
    pub sum: u64,
    /// Multiplications.
    pub multiplication: u64,
    /// Commits of updated values.
    pub storage: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.identification
            + self.memory_access
            + self.comparison
            + self.sum
            + self.multiplication
            + self.storage
    }
}

/// One full Q-learning iteration — greedy-policy evaluation in the current
/// state plus the temporal-difference update — with every elementary
/// operation counted. Returns the greedy action of `s` after the update.
///
/// Accounting, for |A| actions:
/// 2 row identifications (s, s′) + 2|A| memory reads (one argmin scan per
/// row) + 2(|A|−1) comparisons + 3 sums + 2 multiplications + 1 store,
/// totalling 4|A| + 6.
pub fn learning_iteration_instrumented(
    table: &mut QTable,
    s: usize,
    a: usize,
    c: f64,
    s_next: usize,
    alpha: f64,
    lambda: f64,
    ops: &mut OpCounts,
) -> usize {
    let n = table.num_actions();

    // locate both rows in the table
    ops.identification += 2;

    // min over the next state's row: n reads, n−1 comparisons
    let mut m = table.get(s_next, 0);
    ops.memory_access += 1;
    for a2 in 1..n {
        let v = table.get(s_next, a2);
        ops.memory_access += 1;
        ops.comparison += 1;
        if v < m {
            m = v;
        }
    }

    // temporal-difference update in delta form:
    // Q ← Q + α·(c + λ·m − Q): sums c+λm, −Q, +Q·α-delta; mults λ·m, α·(…)
    // Q(s,a) is modeled as register-resident (cached when the agent last
    // touched this row); the counted accesses are the two argmin scans.
    let old = table.get(s, a);
    let target = c + lambda * m;
    ops.multiplication += 1; // λ·m
    ops.sum += 1; // c + λm
    let delta = target - old;
    ops.sum += 1; // − Q(s,a)
    let new = old + alpha * delta;
    ops.multiplication += 1; // α·delta
    ops.sum += 1; // Q(s,a) + α·delta
    table.set(s, a, new);
    ops.storage += 1;

    // greedy policy of the current state: n reads, n−1 comparisons
    let mut best = 0;
    let mut bv = table.get(s, 0);
    ops.memory_access += 1;
    for a2 in 1..n {
        let v = table.get(s, a2);
        ops.memory_access += 1;
        ops.comparison += 1;
        if v < bv {
            bv = v;
            best = a2;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Action level sets
// ---------------------------------------------------------------------------

/// Pico bias menu in dB; shared by the learned and the fixed-CRE schemes.
pub const BIAS_LEVELS_DB: [f64; 3] = [0.0, 6.0, 12.0];

/// A transmit-power action menu. Labels are total-power equivalents in dBm —
/// the per-RB power is the label spread over the full grid, so a player
/// choosing the top label everywhere lands exactly on its cap. `None` mutes.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLevels {
    levels_dbm: Vec<Option<f64>>,
}

impl PowerLevels {
    pub fn new(levels_dbm: Vec<Option<f64>>) -> Self {
        assert!(!levels_dbm.is_empty());
        PowerLevels { levels_dbm }
    }

    /// Pico per-RB power menu: {10, 16, 22, 30} dBm-equivalent.
    pub fn pico_default() -> Self {
        PowerLevels::new(vec![Some(10.0), Some(16.0), Some(22.0), Some(30.0)])
    }

    /// Macro menu on unprotected RBs: {30, 38, 46} dBm-equivalent.
    pub fn macro_unprotected_default() -> Self {
        PowerLevels::new(vec![Some(30.0), Some(38.0), Some(46.0)])
    }

    /// Macro menu on protected RBs: {mute, 10, 16} dBm-equivalent.
    pub fn macro_protected_default() -> Self {
        PowerLevels::new(vec![None, Some(10.0), Some(16.0)])
    }

    pub fn num_actions(&self) -> usize {
        self.levels_dbm.len()
    }

    /// Watts on one RB for the chosen action.
    pub fn watts_per_rb(&self, action: usize, num_rbs: usize) -> f64 {
        match self.levels_dbm[action] {
            Some(dbm) => dbm_to_watts(dbm) / num_rbs as f64,
            None => 0.0,
        }
    }
}

// ---------------------------------------------------------------------------
// Agent banks
// ---------------------------------------------------------------------------

/// The per-RB agents of one base station: a shared Q-table, a shared
/// iteration counter for the exploration schedule, and the pending
/// (state, action) pair of every RB awaiting its cost.
#[derive(Debug, Clone)]
pub struct RbAgentBank {
    pub table: QTable,
    k: u64,
    pending: Vec<Option<(QState, usize)>>,
}

impl RbAgentBank {
    pub fn new(num_actions: usize, num_rbs: usize) -> Self {
        RbAgentBank {
            table: QTable::new(NUM_STATES, num_actions),
            k: 0,
            pending: vec![None; num_rbs],
        }
    }

    /// Selects this TTI's action for one RB given its current quantized
    /// state, remembering the pair for the upcoming cost observation.
    pub fn select(&mut self, rb: usize, state: QState, rng: &mut ChaCha8Rng) -> usize {
        let a = select_action(&self.table, state.0 as usize, self.k, rng);
        self.pending[rb] = Some((state, a));
        a
    }

    /// Applies the observed cost and successor state to the RB's pending
    /// pair. Without a pending pair (first TTI, or after a skip) this is a
    /// no-op.
    pub fn learn(&mut self, rb: usize, cost: f64, next: QState) {
        if let Some((s, a)) = self.pending[rb].take() {
            self.table
                .update(s.0 as usize, a, cost, next.0 as usize, ALPHA, LAMBDA);
        }
    }

    /// Drops the RB's pending pair — no cost was observable this TTI.
    pub fn skip(&mut self, rb: usize) {
        self.pending[rb] = None;
    }

    /// Advances the shared exploration clock by one TTI.
    pub fn tick(&mut self) {
        self.k += 1;
    }

    pub fn iteration(&self) -> u64 {
        self.k
    }
}

/// A slow agent adapting once per epoch (bias or carrier choice): learns
/// from the epoch-aggregated state/cost and picks the next action.
///
/// The exploration schedule runs on the caller's clock — the TTI count the
/// per-RB agents tick on — so slow and fast exploration decay together. An
/// epoch-indexed clock would leave the slow agents near-fully exploratory
/// for any practical run length (the schedule needs thousands of steps to
/// reach its floor, and there are only a few epochs per thousand TTIs).
#[derive(Debug, Clone)]
pub struct EpochAgent {
    pub table: QTable,
    pending: Option<(QState, usize)>,
    current: usize,
}

impl EpochAgent {
    pub fn new(num_actions: usize) -> Self {
        EpochAgent {
            table: QTable::new(NUM_STATES, num_actions),
            pending: None,
            current: 0,
        }
    }

    pub fn current_action(&self) -> usize {
        self.current
    }

    /// Epoch boundary: folds the finished epoch's cost into the table and
    /// selects the action for the next epoch. `cost` is `None` on the first
    /// boundary of a drop (nothing observed yet); `k` is the shared
    /// exploration clock (the current TTI).
    pub fn step_epoch(
        &mut self,
        state: QState,
        cost: Option<f64>,
        k: u64,
        rng: &mut ChaCha8Rng,
    ) -> usize {
        if let (Some((s, a)), Some(c)) = (self.pending, cost) {
            self.table
                .update(s.0 as usize, a, c, state.0 as usize, ALPHA, LAMBDA);
        }
        let a = select_action(&self.table, state.0 as usize, k, rng);
        self.pending = Some((state, a));
        self.current = a;
        a
    }
}

/// Accumulates quantized state components and costs across an epoch, and
/// collapses them into the epoch agent's aggregated state/cost.
#[derive(Debug, Clone, Default)]
pub struct EpochAccumulator {
    sum_pue: f64,
    sum_mue: f64,
    n_state: u64,
    sum_cost: f64,
    n_cost: u64,
}

impl EpochAccumulator {
    pub fn record_state(&mut self, state: QState) {
        let (p, m) = state.components();
        self.sum_pue += p as f64;
        self.sum_mue += m as f64;
        self.n_state += 1;
    }

    pub fn record_cost(&mut self, c: f64) {
        self.sum_cost += c;
        self.n_cost += 1;
    }

    /// Mean components rounded to the nearest level; mean cost if any was
    /// recorded. Resets the accumulator.
    pub fn finish(&mut self) -> (QState, Option<f64>) {
        let state = if self.n_state == 0 {
            QState::from_components(0, 0)
        } else {
            let p = (self.sum_pue / self.n_state as f64).round().clamp(0.0, 2.0) as u8;
            let m = (self.sum_mue / self.n_state as f64).round().clamp(0.0, 2.0) as u8;
            QState::from_components(p, m)
        };
        let cost = (self.n_cost > 0).then(|| self.sum_cost / self.n_cost as f64);
        *self = EpochAccumulator::default();
        (state, cost)
    }
}

// ---------------------------------------------------------------------------
