//! The per-drop simulation engine.
//!
//! One drop = one random layout + channel realization simulated for K TTIs
//! under a single coordination scheme. Every TTI runs the same phase order,
//! with scheme-specific behavior isolated in the power/bias/carrier policy
//! hooks:
//!
//! 1. advance fast fading;
//! 2. on epoch boundaries (every 20 TTIs): carrier selections, bias
//!    adaptations, satisfaction bias re-draws — association is then rebuilt;
//! 3. picos select per-RB transmit powers (uniform, learned, or sampled),
//!    raw totals are checked against the cap (overload ⇒ cost 500), powers
//!    are projected onto the cap, and each pico schedules its carriers;
//! 4. picos report the RBs carrying range-expanded users over zero-delay
//!    X2; the macros then pick their powers (uniform / ABS / adaptive
//!    muting / learned) and schedule;
//! 5. SINRs, rates, and served bits are computed for every scheduled RB —
//!    these observations feed the proportional-fair averages, the learners'
//!    states and costs, the satisfaction utilities, and the metrics.
//!
//! All randomness flows from three per-drop streams (layout, channel,
//! learning), so a (seed, drop) pair fully determines every byte of output.

use std::io::Write as IoWrite;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::association::{
    build_association, rsrp_dbm, snapshot_csv as association_snapshot_csv, AssociationMap,
    BiasConfig,
};
use crate::carrier::{
    mbs_select_primary_cc, select_sf_pairs, snapshot_csv as carrier_snapshot_csv, CarrierPlan,
    FlowMode,
};
use crate::error::{Result, SimError};
use crate::icic::{AbsPattern, IcicMode};
use crate::metrics::{ConvergenceTracker, ThroughputAccumulator, CONVERGENCE_WINDOW_TTIS};
use crate::qlearn::{
    quantize_state, EpochAccumulator, EpochAgent, PowerLevels, QState, QTable, RbAgentBank,
    BIAS_LEVELS_DB, GAMMA_TARGET_DB, OVERLOAD_COST,
};
use crate::radio::{
    max_power_dbm, noise_per_rb_watts, rate_bps, sinr_lin, FadingParams, LinkGainMap,
    PowerAllocation, RbGrid, ShadowingParams,
};
use crate::rng::{stream_rng, Stream};
use crate::satisfaction::{
    single_player_ceiling, utility_target, EquilibriumDetector, SatLearner,
    DEFAULT_EQUILIBRIUM_WINDOW,
};
use crate::scheduling::{er_rb_report, pf_schedule, PfState, ScheduleMap};
use crate::topology::{
    export_layout_csv, generate_layout, CellId, NetworkLayout, ScenarioConfig, Tier, UeId, UeTag,
};
use crate::units::{db_to_lin, dbm_to_watts, lin_to_db, watts_to_dbm};

/// Slow-timescale adaptation period (bias, carrier selection), in TTIs.
pub const EPOCH_TTIS: u64 = 20;
/// Raw power totals may exceed the cap by this many watts before the
/// overload cost triggers (absorbs floating-point dust from summing
/// per-RB shares).
const OVERLOAD_TOLERANCE_W: f64 = 1e-9;
/// Neutral cost for a macro RB with neither an own user nor a pico victim
/// to observe: the squared distance of a 0 dB SINR from the target.
const IDLE_MACRO_COST: f64 = GAMMA_TARGET_DB * GAMMA_TARGET_DB;

// ---------------------------------------------------------------------------
// Drop-level inputs and outputs
// ---------------------------------------------------------------------------

/// Everything one drop needs besides its seed.
#[derive(Debug, Clone)]
pub struct DropParams {
    pub scenario: ScenarioConfig,
    pub mode: IcicMode,
    pub num_ttis: u64,
    pub warmup_ttis: u64,
    pub fading_enabled: bool,
    pub shadowing_enabled: bool,
}

/// Optional log sinks for one drop. Interval fields gate the per-interval
/// logs (0 = off even when a writer is present); event-driven logs fire
/// whenever their writer exists.
#[derive(Default)]
pub struct DropLoggers<'w> {
    pub sinr_every: u64,
    pub association_every: u64,
    pub qtable_every: u64,
    pub sinr: Option<&'w mut dyn IoWrite>,
    pub association: Option<&'w mut dyn IoWrite>,
    pub qtable: Option<&'w mut dyn IoWrite>,
    pub x2: Option<&'w mut dyn IoWrite>,
    pub satisfaction: Option<&'w mut dyn IoWrite>,
    pub carrier: Option<&'w mut dyn IoWrite>,
    pub layout: Option<&'w mut dyn IoWrite>,
}

/// Per-drop results handed to the aggregation layer.
#[derive(Debug, Clone)]
pub struct DropOutput {
    /// Post-warm-up mean throughput per UE, bits/s.
    pub per_ue_throughput_bps: Vec<f64>,
    /// Post-warm-up summed throughput of the macro tier, bits/s.
    pub macro_throughput_bps: f64,
    /// Post-warm-up summed throughput of the pico tier, bits/s.
    pub pico_throughput_bps: f64,
    /// Network sum-rate per TTI (bits/s), warm-up included.
    pub sum_rate_trace: Vec<f64>,
    /// First TTI of the stable window (greedy policies for Q-learning,
    /// satisfaction equilibrium for the satisfaction scheme, 0 for the
    /// static baselines); None = not converged within the run.
    pub convergence_tti: Option<u64>,
    /// TTIs in which at least one player's raw selection exceeded its cap.
    pub overload_ttis: u64,
    pub num_macro_cells: usize,
    pub num_pico_cells: usize,
}

/// Runs one drop to completion.
pub fn run_drop(
    params: &DropParams,
    master_seed: u64,
    drop_index: u64,
    loggers: &mut DropLoggers,
) -> Result<DropOutput> {
    Engine::new(params, master_seed, drop_index)?.run(loggers)
}

// ---------------------------------------------------------------------------
// Scheme profiles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum PicoPowerPolicy {
    /// Cap spread uniformly over the pico's permitted RBs.
    Uniform,
    /// Uniform over the upper half of the band only.
    RpUpperHalf,
    /// Per-RB Q-learning over the pico power menu.
    Learned,
    /// Per-RB satisfaction sampling.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
enum MacroPowerPolicy {
    /// Cap spread uniformly over all RBs.
    Uniform,
    /// Uniform over the lower half of the band only.
    RpLowerHalf,
    /// Uniform scaled by the ABS pattern of the current subframe.
    Pattern(AbsPattern),
    /// Mute the union of reported expanded-user RBs, uniform on the rest.
    AdaptiveMute,
    /// Per-RB Q-learning: low menu on protected RBs, high menu elsewhere.
    Learned,
    /// Reduced uniform power on carriers the sector's picos call primary.
    ReducedOnPicoPrimary,
}

#[derive(Debug, Clone, PartialEq)]
enum PicoBiasPolicy {
    Zero,
    Fixed(f64),
    Learned,
    /// Satisfaction rule: redraw uniformly when unsatisfied a whole epoch.
    Redrawn,
}

#[derive(Debug, Clone, PartialEq)]
struct ModeProfile {
    num_ccs: usize,
    flow: Option<FlowMode>,
    pico_power: PicoPowerPolicy,
    macro_power: MacroPowerPolicy,
    pico_bias: PicoBiasPolicy,
    macro_bias_learned: bool,
    cc_learned: bool,
}

impl ModeProfile {
    fn of(mode: &IcicMode) -> ModeProfile {
        use IcicMode::*;
        match mode {
            Rp => ModeProfile {
                num_ccs: 1,
                flow: None,
                pico_power: PicoPowerPolicy::RpUpperHalf,
                macro_power: MacroPowerPolicy::RpLowerHalf,
                pico_bias: PicoBiasPolicy::Zero,
                macro_bias_learned: false,
                cc_learned: false,
            },
            NoIcicCre { bias_db } => ModeProfile {
                num_ccs: 1,
                flow: None,
                pico_power: PicoPowerPolicy::Uniform,
                macro_power: MacroPowerPolicy::Uniform,
                pico_bias: PicoBiasPolicy::Fixed(*bias_db),
                macro_bias_learned: false,
                cc_learned: false,
            },
            FixedAbsCre { pattern, bias_db } => ModeProfile {
                num_ccs: 1,
                flow: None,
                pico_power: PicoPowerPolicy::Uniform,
                macro_power: MacroPowerPolicy::Pattern(pattern.clone()),
                pico_bias: PicoBiasPolicy::Fixed(*bias_db),
                macro_bias_learned: false,
                cc_learned: false,
            },
            FixedCreAdaptiveAbs { bias_db } => ModeProfile {
                num_ccs: 1,
                flow: None,
                pico_power: PicoPowerPolicy::Uniform,
                macro_power: MacroPowerPolicy::AdaptiveMute,
                pico_bias: PicoBiasPolicy::Fixed(*bias_db),
                macro_bias_learned: false,
                cc_learned: false,
            },
            StaticQl => ModeProfile {
                num_ccs: 1,
                flow: None,
                pico_power: PicoPowerPolicy::Learned,
                macro_power: MacroPowerPolicy::AdaptiveMute,
                pico_bias: PicoBiasPolicy::Learned,
                macro_bias_learned: false,
                cc_learned: false,
            },
            DynamicQl => ModeProfile {
                num_ccs: 1,
                flow: None,
                pico_power: PicoPowerPolicy::Learned,
                macro_power: MacroPowerPolicy::Learned,
                pico_bias: PicoBiasPolicy::Learned,
                macro_bias_learned: false,
                cc_learned: false,
            },
            Satisfaction => ModeProfile {
                num_ccs: 1,
                flow: None,
                pico_power: PicoPowerPolicy::Sampled,
                macro_power: MacroPowerPolicy::AdaptiveMute,
                pico_bias: PicoBiasPolicy::Redrawn,
                macro_bias_learned: false,
                cc_learned: false,
            },
            SfQl => ModeProfile {
                num_ccs: 2,
                flow: Some(FlowMode::Single),
                pico_power: PicoPowerPolicy::Learned,
                macro_power: MacroPowerPolicy::Learned,
                pico_bias: PicoBiasPolicy::Learned,
                macro_bias_learned: false,
                cc_learned: true,
            },
            MfStaticQl => ModeProfile {
                num_ccs: 2,
                flow: Some(FlowMode::Multi),
                pico_power: PicoPowerPolicy::Learned,
                macro_power: MacroPowerPolicy::ReducedOnPicoPrimary,
                pico_bias: PicoBiasPolicy::Learned,
                macro_bias_learned: false,
                cc_learned: true,
            },
            MfDynamicQl => ModeProfile {
                num_ccs: 2,
                flow: Some(FlowMode::Multi),
                pico_power: PicoPowerPolicy::Learned,
                macro_power: MacroPowerPolicy::Learned,
                pico_bias: PicoBiasPolicy::Learned,
                macro_bias_learned: true,
                cc_learned: true,
            },
        }
    }

    fn has_pico_ql(&self) -> bool {
        self.pico_power == PicoPowerPolicy::Learned
    }

    fn has_macro_ql(&self) -> bool {
        self.macro_power == MacroPowerPolicy::Learned
    }

    fn needs_rb_reports(&self) -> bool {
        self.num_ccs == 1
            && matches!(
                self.macro_power,
                MacroPowerPolicy::AdaptiveMute | MacroPowerPolicy::Learned
            )
    }

    fn is_adaptive(&self) -> bool {
        self.has_pico_ql()
            || self.pico_power == PicoPowerPolicy::Sampled
            || self.cc_learned
            || self.macro_bias_learned
    }
}

/// Reduced uniform level (dBm total-equivalent) of the non-learning macro
/// on carriers its picos call primary in multi-flow static mode — the top
/// of the protected macro menu.
const MF_STATIC_REDUCED_DBM: f64 = 16.0;

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

struct Engine<'p> {
    params: &'p DropParams,
    profile: ModeProfile,
    layout: NetworkLayout,
    grid: RbGrid,
    noise_w: f64,
    gains: LinkGainMap,
    channel_rng: ChaCha8Rng,
    learn_rng: ChaCha8Rng,
    /// Reference power per (cell, cc) for association, dBm.
    budgets_dbm: Vec<f64>,
    biases: BiasConfig,
    plan: Option<CarrierPlan>,
    assoc: AssociationMap,
    /// Single-flow serving pairs per UE (empty unless single-flow CA).
    pairs: Vec<(CellId, usize)>,
    /// UEs each (cell, cc) actually serves this association period.
    candidates: Vec<Vec<UeId>>,
    alloc: PowerAllocation,
    pf: PfState,
    schedule: ScheduleMap,
    pico_levels: PowerLevels,
    macro_unprot: PowerLevels,
    macro_prot: PowerLevels,
    pico_banks: Vec<RbAgentBank>,
    pico_bias_agents: Vec<EpochAgent>,
    pico_cc_agents: Vec<EpochAgent>,
    pico_acc: Vec<EpochAccumulator>,
    /// Learned macro per-RB agents, one bank per sector and protection
    /// context. The same action index maps to a different power menu on
    /// protected and unprotected RBs, so each context keeps its own table
    /// instead of averaging costs across two incompatible regimes.
    macro_banks_prot: Vec<RbAgentBank>,
    macro_banks_unprot: Vec<RbAgentBank>,
    macro_bias_agents: Vec<EpochAgent>,
    macro_acc: Vec<EpochAccumulator>,
    sat: Vec<SatLearner>,
    sat_bias_db: Vec<f64>,
    sat_u_prev: Vec<f64>,
    equilibrium: Option<EquilibriumDetector>,
    /// Last TTI's observed SINRs, dB (−∞ where nothing was scheduled).
    obs_pico_own: Vec<f64>,
    obs_macro_own: Vec<f64>,
    obs_victim_min: Vec<f64>,
    /// RBs reported as carrying expanded users, per sector (this TTI).
    protected: Vec<bool>,
    /// Raw (pre-projection) cap overruns per cell, this TTI.
    overload: Vec<bool>,
    acc: ThroughputAccumulator,
    conv: ConvergenceTracker,
    overload_ttis: u64,
    // scratch buffers reused across TTIs
    served_bps: Vec<f64>,
    ue_bits: Vec<f64>,
    sat_u_now: Vec<f64>,
    policy_buf: Vec<u16>,
    eq_actions: Vec<usize>,
    eq_flags: Vec<bool>,
}

impl<'p> Engine<'p> {
    fn new(params: &'p DropParams, master_seed: u64, drop_index: u64) -> Result<Engine<'p>> {
        params.scenario.validate()?;
        if params.num_ttis == 0 {
            return Err(SimError::Config("num_ttis must be positive".to_string()));
        }

        let profile = ModeProfile::of(&params.mode);
        let mut layout_rng = stream_rng(master_seed, drop_index, Stream::Layout);
        let layout = generate_layout(&params.scenario, &mut layout_rng)?;

        let grid = if profile.num_ccs == 2 {
            RbGrid::carrier_aggregation()
        } else {
            RbGrid::default()
        };
        grid.validate()?;

        let mut channel_rng = stream_rng(master_seed, drop_index, Stream::Channel);
        let shadowing = params.shadowing_enabled.then(ShadowingParams::default);
        let fading = FadingParams {
            enabled: params.fading_enabled,
            ..FadingParams::default()
        };
        let gains = LinkGainMap::new(&layout, &grid, shadowing.as_ref(), &fading, &mut channel_rng);
        let learn_rng = stream_rng(master_seed, drop_index, Stream::Learning);

        let num_cells = layout.cells.len();
        let num_ues = layout.ues.len();
        let num_sectors = layout.num_macro_cells();
        let num_picos = layout.num_pico_cells();
        let num_rbs = grid.num_rbs;
        let noise_w = noise_per_rb_watts(&grid);

        let caps_w: Vec<f64> = layout
            .cells
            .iter()
            .map(|c| dbm_to_watts(max_power_dbm(c.tier)))
            .collect();
        let budgets_dbm: Vec<f64> = layout
            .cells
            .iter()
            .flat_map(|c| {
                let per_cc = dbm_to_watts(max_power_dbm(c.tier)) / profile.num_ccs as f64;
                std::iter::repeat(watts_to_dbm(per_cc)).take(profile.num_ccs)
            })
            .collect();

        let mut biases = BiasConfig::zero(num_cells, profile.num_ccs);
        if let PicoBiasPolicy::Fixed(db) = profile.pico_bias {
            biases = BiasConfig::uniform_pico(&layout, profile.num_ccs, db);
        }

        let plan = profile
            .flow
            .map(|flow| CarrierPlan::new(num_cells, 2, flow));

        let assoc = build_association(&layout, &gains, profile.num_ccs, &|cell, cc| {
            budgets_dbm[cell.0 * profile.num_ccs + cc]
        }, &biases)?;

        let pico_banks = if profile.has_pico_ql() {
            (0..num_picos)
                .map(|_| RbAgentBank::new(PowerLevels::pico_default().num_actions(), num_rbs))
                .collect()
        } else {
            Vec::new()
        };
        let pico_bias_agents = if profile.pico_bias == PicoBiasPolicy::Learned {
            (0..num_picos)
                .map(|_| EpochAgent::new(BIAS_LEVELS_DB.len()))
                .collect()
        } else {
            Vec::new()
        };
        let pico_cc_agents = if profile.cc_learned {
            (0..num_picos).map(|_| EpochAgent::new(2)).collect()
        } else {
            Vec::new()
        };
        let pico_acc = if profile.pico_bias == PicoBiasPolicy::Learned || profile.cc_learned {
            vec![EpochAccumulator::default(); num_picos]
        } else {
            Vec::new()
        };
        let macro_banks_prot = if profile.has_macro_ql() {
            (0..num_sectors)
                .map(|_| {
                    RbAgentBank::new(
                        PowerLevels::macro_protected_default().num_actions(),
                        num_rbs,
                    )
                })
                .collect()
        } else {
            Vec::new()
        };
        let macro_banks_unprot = if profile.has_macro_ql() {
            (0..num_sectors)
                .map(|_| {
                    RbAgentBank::new(
                        PowerLevels::macro_unprotected_default().num_actions(),
                        num_rbs,
                    )
                })
                .collect()
        } else {
            Vec::new()
        };
        let macro_bias_agents = if profile.macro_bias_learned {
            (0..num_sectors)
                .map(|_| EpochAgent::new(BIAS_LEVELS_DB.len()))
                .collect()
        } else {
            Vec::new()
        };
        let macro_acc = if profile.macro_bias_learned {
            vec![EpochAccumulator::default(); num_sectors]
        } else {
            Vec::new()
        };

        let mut sat = Vec::new();
        if profile.pico_power == PicoPowerPolicy::Sampled {
            let u_target = utility_target(num_rbs);
            for s in 0..num_sectors {
                for pico in layout.picos_of_sector(s) {
                    let best = best_served_gain_lin(&layout, &gains, pico)?;
                    let p_max_w = dbm_to_watts(max_power_dbm(Tier::Pico));
                    let u_max = single_player_ceiling(num_rbs, p_max_w, best, noise_w);
                    sat.push(SatLearner::new(
                        num_rbs,
                        PowerLevels::pico_default().num_actions(),
                        u_max,
                        u_target,
                    )?);
                }
            }
        }
        let equilibrium = (profile.pico_power == PicoPowerPolicy::Sampled)
            .then(|| EquilibriumDetector::new(DEFAULT_EQUILIBRIUM_WINDOW));

        Ok(Engine {
            params,
            layout,
            noise_w,
            gains,
            channel_rng,
            learn_rng,
            budgets_dbm,
            biases,
            plan,
            assoc,
            pairs: Vec::new(),
            candidates: vec![Vec::new(); num_cells * profile.num_ccs],
            alloc: PowerAllocation::new(num_cells, num_rbs, caps_w),
            pf: PfState::new(num_ues, profile.num_ccs),
            schedule: ScheduleMap::new(num_cells, num_rbs),
            pico_levels: PowerLevels::pico_default(),
            macro_unprot: PowerLevels::macro_unprotected_default(),
            macro_prot: PowerLevels::macro_protected_default(),
            pico_banks,
            pico_bias_agents,
            pico_cc_agents,
            pico_acc,
            macro_banks_prot,
            macro_banks_unprot,
            macro_bias_agents,
            macro_acc,
            sat,
            sat_bias_db: vec![0.0; num_picos],
            sat_u_prev: vec![0.0; num_picos],
            equilibrium,
            obs_pico_own: vec![f64::NEG_INFINITY; num_picos * num_rbs],
            obs_macro_own: vec![f64::NEG_INFINITY; num_sectors * num_rbs],
            obs_victim_min: vec![f64::NEG_INFINITY; num_sectors * num_rbs],
            protected: vec![false; num_sectors * num_rbs],
            overload: vec![false; num_cells],
            acc: ThroughputAccumulator::new(num_ues, params.warmup_ttis, grid.tti_s),
            conv: ConvergenceTracker::new(CONVERGENCE_WINDOW_TTIS),
            overload_ttis: 0,
            served_bps: vec![0.0; num_ues * profile.num_ccs],
            ue_bits: vec![0.0; num_ues],
            sat_u_now: vec![0.0; num_picos],
            policy_buf: Vec::new(),
            eq_actions: Vec::new(),
            eq_flags: Vec::new(),
            grid,
            profile,
        })
    }

    fn num_picos(&self) -> usize {
        self.layout.num_pico_cells()
    }

    fn num_sectors(&self) -> usize {
        self.layout.num_macro_cells()
    }

    fn pico_cell(&self, pico_idx: usize) -> CellId {
        CellId(self.num_sectors() + pico_idx)
    }

    fn pico_idx(&self, cell: CellId) -> usize {
        cell.0 - self.num_sectors()
    }

    fn run(mut self, loggers: &mut DropLoggers) -> Result<DropOutput> {
        if let Some(w) = loggers.layout.as_deref_mut() {
            export_layout_csv(&self.layout, &mut *w)
                .map_err(|e| SimError::io("layout log", e))?;
        }
        let mut assoc_dirty = true;
        for tti in 0..self.params.num_ttis {
            self.step(tti, &mut assoc_dirty, loggers)?;
        }
        let convergence_tti = match &self.equilibrium {
            Some(det) => det
                .fired_at()
                .map(|t| t + 1 - DEFAULT_EQUILIBRIUM_WINDOW),
            None => self.conv.convergence_tti(),
        };
        let (macro_bps, pico_bps) = self.acc.tier_throughput_bps();
        Ok(DropOutput {
            per_ue_throughput_bps: self.acc.per_ue_throughput_bps(),
            macro_throughput_bps: macro_bps,
            pico_throughput_bps: pico_bps,
            sum_rate_trace: self.acc.sum_rate_trace().to_vec(),
            convergence_tti,
            overload_ttis: self.overload_ttis,
            num_macro_cells: self.num_sectors(),
            num_pico_cells: self.num_picos(),
        })
    }

    fn step(&mut self, tti: u64, assoc_dirty: &mut bool, loggers: &mut DropLoggers) -> Result<()> {
        if tti > 0 {
            self.gains.advance(&mut self.channel_rng);
        }

        if tti % EPOCH_TTIS == 0 && self.profile.is_adaptive() {
            self.epoch_boundary(tti, loggers)?;
            *assoc_dirty = true;
        }
        if *assoc_dirty {
            self.rebuild_association()?;
            *assoc_dirty = false;
        }
        if loggers.association_every > 0 && tti % loggers.association_every == 0 {
            if let Some(w) = loggers.association.as_deref_mut() {
                association_snapshot_csv(&self.assoc, &mut *w, tti)
                    .map_err(|e| SimError::io("association log", e))?;
            }
        }

        self.schedule.clear();
        self.alloc.clear();
        self.overload.iter_mut().for_each(|o| *o = false);

        self.select_pico_powers(tti);
        self.alloc.project_to_caps(&self.grid);
        self.schedule_tier(Tier::Pico);
        self.collect_rb_reports(tti, loggers)?;
        self.select_macro_powers(tti);
        self.alloc.project_to_caps(&self.grid);
        self.schedule_tier(Tier::Macro);

        debug_assert!(
            self.alloc.check_caps(1e-9).is_none(),
            "power cap violated after projection"
        );
        if self.overload.iter().any(|o| *o) {
            self.overload_ttis += 1;
        }

        self.transmit(tti, loggers)?;
        self.learn(tti, loggers)?;
        self.track_convergence(tti);

        if loggers.qtable_every > 0 && tti % loggers.qtable_every == 0 {
            self.dump_qtables(tti, loggers)?;
        }
        Ok(())
    }

    // -- epoch boundary -----------------------------------------------------

    fn epoch_boundary(&mut self, tti: u64, loggers: &mut DropLoggers) -> Result<()> {
        let num_picos = self.num_picos();
        let first_epoch = tti == 0;

        // fold each pico's epoch observations once; both slow agents use them
        let finished: Vec<(QState, Option<f64>)> = if self.pico_acc.is_empty() {
            Vec::new()
        } else {
            self.pico_acc.iter_mut().map(|a| a.finish()).collect()
        };

        for p in 0..num_picos {
            if self.profile.cc_learned {
                let (state, cost) = finished[p];
                let cc =
                    self.pico_cc_agents[p].step_epoch(state, cost, tti, &mut self.learn_rng);
                let cell = self.layout.cells[self.num_sectors() + p].id;
                let plan = self.plan.as_mut().expect("carrier plan in CA mode");
                plan.set_primary(cell, cc);
            }
            if self.profile.pico_bias == PicoBiasPolicy::Learned {
                let (state, cost) = finished[p];
                self.pico_bias_agents[p].step_epoch(state, cost, tti, &mut self.learn_rng);
            }
        }

        if self.profile.pico_bias == PicoBiasPolicy::Redrawn {
            for p in 0..num_picos {
                let redraw = if first_epoch {
                    true
                } else {
                    self.sat[p].finish_epoch_unsatisfied()
                };
                if redraw {
                    let i = self.learn_rng.gen_range(0..BIAS_LEVELS_DB.len());
                    self.sat_bias_db[p] = BIAS_LEVELS_DB[i];
                }
            }
        }

        // macro primary carriers follow the picos' reports
        if self.profile.cc_learned {
            self.select_macro_primaries(tti, loggers)?;
        }

        for m in 0..self.macro_bias_agents.len() {
            let (state, cost) = self.macro_acc[m].finish();
            self.macro_bias_agents[m].step_epoch(state, cost, tti, &mut self.learn_rng);
        }

        if let (Some(plan), Some(mut w)) = (&self.plan, loggers.carrier.as_deref_mut()) {
            carrier_snapshot_csv(plan, &self.biases, &mut w, tti / EPOCH_TTIS)?;
        }
        Ok(())
    }

    fn select_macro_primaries(&mut self, tti: u64, loggers: &mut DropLoggers) -> Result<()> {
        let num_sectors = self.num_sectors();
        for s in 0..num_sectors {
            let picos = self.layout.picos_of_sector(s);
            let plan = self.plan.as_ref().expect("carrier plan in CA mode");
            let choices: Vec<usize> = picos.iter().map(|p| plan.primary_cc(*p)).collect();
            let mut er_per_cc = [0u64; 2];
            for pico in &picos {
                let cc = plan.primary_cc(*pico);
                er_per_cc[cc] += self.expanded_ue_count(*pico, cc);
            }
            let primary = mbs_select_primary_cc(&choices, &er_per_cc);
            let plan = self.plan.as_mut().expect("carrier plan in CA mode");
            plan.set_primary(self.layout.macro_of_sector(s), primary);
            if let Some(w) = loggers.x2.as_deref_mut() {
                for (pico, cc) in picos.iter().zip(&choices) {
                    writeln!(w, "{tti},{},primary_cc,{cc}", pico.0)
                        .map_err(|e| SimError::io("x2 log", e))?;
                }
            }
        }
        Ok(())
    }

    /// Range-expanded UEs currently held by `pico` on `cc` (single-flow
    /// counts serving pairs, multi-flow the per-carrier association).
    fn expanded_ue_count(&self, pico: CellId, cc: usize) -> u64 {
        if !self.pairs.is_empty() {
            (0..self.assoc.num_ues())
                .filter(|u| {
                    self.pairs[*u] == (pico, cc) && self.assoc.is_er(UeId(*u), cc)
                })
                .count() as u64
        } else {
            (0..self.assoc.num_ues())
                .filter(|u| {
                    self.assoc.serving(UeId(*u), cc) == pico && self.assoc.is_er(UeId(*u), cc)
                })
                .count() as u64
        }
    }

    // -- association ----------------------------------------------------------

    fn rebuild_association(&mut self) -> Result<()> {
        let num_ccs = self.profile.num_ccs;

        // biases are derived fresh from their source of truth each rebuild
        match self.profile.pico_bias {
            PicoBiasPolicy::Zero | PicoBiasPolicy::Fixed(_) => {}
            PicoBiasPolicy::Learned => {
                for p in 0..self.num_picos() {
                    let cell = self.pico_cell(p);
                    let db = BIAS_LEVELS_DB[self.pico_bias_agents[p].current_action()];
                    for cc in 0..num_ccs {
                        let on = match &self.plan {
                            Some(plan) => plan.primary_cc(cell) == cc,
                            None => true,
                        };
                        self.biases.set(cell, cc, if on { db } else { 0.0 });
                    }
                }
            }
            PicoBiasPolicy::Redrawn => {
                for p in 0..self.num_picos() {
                    self.biases.set(self.pico_cell(p), 0, self.sat_bias_db[p]);
                }
            }
        }
        if self.profile.macro_bias_learned {
            let plan = self.plan.as_ref().expect("carrier plan in CA mode");
            for s in 0..self.num_sectors() {
                let cell = self.layout.macro_of_sector(s);
                let db = BIAS_LEVELS_DB[self.macro_bias_agents[s].current_action()];
                for cc in 0..num_ccs {
                    let on = plan.primary_cc(cell) == cc;
                    self.biases.set(cell, cc, if on { db } else { 0.0 });
                }
            }
        }

        let budgets = &self.budgets_dbm;
        self.assoc = build_association(&self.layout, &self.gains, num_ccs, &|cell, cc| {
            budgets[cell.0 * num_ccs + cc]
        }, &self.biases)?;

        // single-flow: collapse per-carrier winners to one serving pair
        if self.profile.flow == Some(FlowMode::Single) {
            let plan = self.plan.as_ref().expect("carrier plan in CA mode");
            let assoc = &self.assoc;
            let layout = &self.layout;
            let gains = &self.gains;
            let biases = &self.biases;
            self.pairs = select_sf_pairs(
                assoc.num_ues(),
                &|cc, ue| (assoc.serving(ue, cc), assoc.is_er(ue, cc)),
                &|cell| layout.cells[cell.0].tier,
                plan,
                &|cell, ue, cc| {
                    rsrp_dbm(
                        budgets[cell.0 * num_ccs + cc],
                        gains.mean_gain_db(cell, ue),
                    ) + biases.get(cell, cc)
                },
            );
        }

        // refresh the per-(cell, cc) candidate lists
        for list in &mut self.candidates {
            list.clear();
        }
        let num_ues = self.assoc.num_ues();
        for u in 0..num_ues {
            let ue = UeId(u);
            if !self.pairs.is_empty() {
                let (cell, cc) = self.pairs[u];
                self.candidates[cell.0 * num_ccs + cc].push(ue);
            } else {
                for cc in 0..num_ccs {
                    let cell = self.assoc.serving(ue, cc);
                    self.candidates[cell.0 * num_ccs + cc].push(ue);
                }
            }
        }
        Ok(())
    }

    fn has_candidates(&self, cell: CellId, cc: usize) -> bool {
        !self.candidates[cell.0 * self.profile.num_ccs + cc].is_empty()
    }

    // -- power selection ------------------------------------------------------

    fn select_pico_powers(&mut self, tti: u64) {
        let num_rbs = self.grid.num_rbs;
        let uniform_w = |cap_w: f64, share: usize| cap_w / share as f64;

        for p in 0..self.num_picos() {
            let cell = self.pico_cell(p);
            let cap_w = dbm_to_watts(max_power_dbm(Tier::Pico));
            match self.profile.pico_power {
                PicoPowerPolicy::Uniform => {
                    if self.has_candidates(cell, 0) {
                        let w = uniform_w(cap_w, num_rbs);
                        for rb in 0..num_rbs {
                            self.alloc.set(cell, rb, w);
                        }
                    }
                }
                PicoPowerPolicy::RpUpperHalf => {
                    if self.has_candidates(cell, 0) {
                        let (_, pico_rbs) = crate::icic::rp_masks(num_rbs);
                        let w = uniform_w(cap_w, pico_rbs.len());
                        for rb in pico_rbs {
                            self.alloc.set(cell, rb, w);
                        }
                    }
                }
                PicoPowerPolicy::Learned => {
                    let sector = self.layout.cells[cell.0].sector;
                    for rb in 0..num_rbs {
                        let cc = self.grid.cc_of_rb(rb);
                        if !self.has_candidates(cell, cc) {
                            self.pico_banks[p].skip(rb);
                            continue;
                        }
                        let state = quantize_state(
                            self.obs_pico_own[p * num_rbs + rb],
                            self.obs_macro_own[sector * num_rbs + rb],
                        );
                        let a = self.pico_banks[p].select(rb, state, &mut self.learn_rng);
                        self.alloc
                            .set(cell, rb, self.pico_levels.watts_per_rb(a, num_rbs));
                    }
                }
                PicoPowerPolicy::Sampled => {
                    if self.has_candidates(cell, 0) {
                        let actions =
                            self.sat[p].select_actions(self.sat_u_prev[p], tti, &mut self.learn_rng);
                        for (rb, a) in actions.iter().enumerate() {
                            self.alloc
                                .set(cell, rb, self.pico_levels.watts_per_rb(*a, num_rbs));
                        }
                    }
                }
            }
            self.note_overload(cell);
        }
    }

    fn select_macro_powers(&mut self, tti: u64) {
        let num_rbs = self.grid.num_rbs;
        for s in 0..self.num_sectors() {
            let cell = self.layout.macro_of_sector(s);
            let cap_w = dbm_to_watts(max_power_dbm(Tier::Macro));
            match &self.profile.macro_power {
                MacroPowerPolicy::Uniform => {
                    if self.has_candidates(cell, 0) {
                        let w = cap_w / num_rbs as f64;
                        for rb in 0..num_rbs {
                            self.alloc.set(cell, rb, w);
                        }
                    }
                }
                MacroPowerPolicy::RpLowerHalf => {
                    if self.has_candidates(cell, 0) {
                        let (macro_rbs, _) = crate::icic::rp_masks(num_rbs);
                        let w = cap_w / macro_rbs.len() as f64;
                        for rb in macro_rbs {
                            self.alloc.set(cell, rb, w);
                        }
                    }
                }
                MacroPowerPolicy::Pattern(pattern) => {
                    if self.has_candidates(cell, 0) {
                        let w = pattern.power_scale(tti) * cap_w / num_rbs as f64;
                        if w > 0.0 {
                            for rb in 0..num_rbs {
                                self.alloc.set(cell, rb, w);
                            }
                        }
                    }
                }
                MacroPowerPolicy::AdaptiveMute => {
                    if self.has_candidates(cell, 0) {
                        let base = s * num_rbs;
                        let unprotected =
                            (0..num_rbs).filter(|rb| !self.protected[base + rb]).count();
                        if unprotected > 0 {
                            let w = cap_w / unprotected as f64;
                            for rb in 0..num_rbs {
                                if !self.protected[base + rb] {
                                    self.alloc.set(cell, rb, w);
                                }
                            }
                        }
                    }
                }
                MacroPowerPolicy::Learned => {
                    for rb in 0..num_rbs {
                        let cc = self.grid.cc_of_rb(rb);
                        if !self.has_candidates(cell, cc) {
                            self.macro_banks_prot[s].skip(rb);
                            self.macro_banks_unprot[s].skip(rb);
                            continue;
                        }
                        let state = quantize_state(
                            self.obs_victim_min[s * num_rbs + rb],
                            self.obs_macro_own[s * num_rbs + rb],
                        );
                        // route to the bank of the RB's current context; the
                        // other context's agent stays idle on this RB
                        let (a, levels) = if self.rb_is_protected(s, rb) {
                            self.macro_banks_unprot[s].skip(rb);
                            let a =
                                self.macro_banks_prot[s].select(rb, state, &mut self.learn_rng);
                            (a, &self.macro_prot)
                        } else {
                            self.macro_banks_prot[s].skip(rb);
                            let a =
                                self.macro_banks_unprot[s].select(rb, state, &mut self.learn_rng);
                            (a, &self.macro_unprot)
                        };
                        self.alloc.set(cell, rb, levels.watts_per_rb(a, num_rbs));
                    }
                }
                MacroPowerPolicy::ReducedOnPicoPrimary => {
                    let plan = self.plan.as_ref().expect("carrier plan in CA mode");
                    let picos = self.layout.picos_of_sector(s);
                    for cc in 0..self.profile.num_ccs {
                        if !self.has_candidates(cell, cc) {
                            continue;
                        }
                        let reduced = picos.iter().any(|p| plan.primary_cc(*p) == cc);
                        let w = if reduced {
                            dbm_to_watts(MF_STATIC_REDUCED_DBM) / num_rbs as f64
                        } else {
                            cap_w / num_rbs as f64
                        };
                        for rb in self.grid.rbs_of_cc(cc) {
                            self.alloc.set(cell, rb, w);
                        }
                    }
                }
            }
            self.note_overload(cell);
        }
    }

    /// Protected context of a macro RB: a reported expanded-user RB in the
    /// time-domain schemes, the macro's secondary carrier under CA.
    fn rb_is_protected(&self, sector: usize, rb: usize) -> bool {
        match &self.plan {
            Some(plan) => {
                let cell = self.layout.macro_of_sector(sector);
                self.grid.cc_of_rb(rb) == plan.secondary_cc(cell)
            }
            None => self.protected[sector * self.grid.num_rbs + rb],
        }
    }

    /// Flags a raw (pre-projection) per-carrier cap overrun.
    fn note_overload(&mut self, cell: CellId) {
        let cap_cc = self.alloc.cap(cell) / self.profile.num_ccs as f64;
        for cc in 0..self.profile.num_ccs {
            let total = self.alloc.total_range(cell, self.grid.rbs_of_cc(cc));
            if total > cap_cc + OVERLOAD_TOLERANCE_W {
                self.overload[cell.0] = true;
            }
        }
    }

    // -- scheduling -----------------------------------------------------------

    fn schedule_tier(&mut self, tier: Tier) {
        let num_ccs = self.profile.num_ccs;
        let alloc = &self.alloc;
        let gains = &self.gains;
        let noise = self.noise_w;
        let bw = self.grid.rb_bandwidth_hz;
        let pf = &self.pf;
        let schedule = &mut self.schedule;
        for cell in &self.layout.cells {
            if cell.tier != tier {
                continue;
            }
            for cc in 0..num_ccs {
                let candidates = &self.candidates[cell.id.0 * num_ccs + cc];
                if candidates.is_empty() {
                    continue;
                }
                let id = cell.id;
                pf_schedule(
                    id,
                    self.grid.rbs_of_cc(cc),
                    &|rb| alloc.get(id, rb) > 0.0,
                    candidates,
                    &|ue, rb| {
                        let snr = alloc.get(id, rb) * gains.gain_lin(id, ue, rb) / noise;
                        rate_bps(snr, bw)
                    },
                    pf,
                    cc,
                    schedule,
                );
            }
        }
    }

    fn collect_rb_reports(&mut self, tti: u64, loggers: &mut DropLoggers) -> Result<()> {
        if !self.profile.needs_rb_reports() {
            return Ok(());
        }
        let num_rbs = self.grid.num_rbs;
        self.protected.iter_mut().for_each(|b| *b = false);
        for s in 0..self.num_sectors() {
            for pico in self.layout.picos_of_sector(s) {
                let report = er_rb_report(&self.schedule, pico, 0..num_rbs, &self.assoc, 0);
                if let Some(w) = loggers.x2.as_deref_mut() {
                    let list = report
                        .iter()
                        .map(|rb| rb.to_string())
                        .collect::<Vec<_>>()
                        .join("|");
                    writeln!(w, "{tti},{},er_rbs,{list}", pico.0)
                        .map_err(|e| SimError::io("x2 log", e))?;
                }
                for rb in report {
                    self.protected[s * num_rbs + rb] = true;
                }
            }
        }
        Ok(())
    }

    // -- transmission ---------------------------------------------------------

    fn transmit(&mut self, tti: u64, loggers: &mut DropLoggers) -> Result<()> {
        let num_rbs = self.grid.num_rbs;
        let num_ues = self.assoc.num_ues();
        let bw = self.grid.rb_bandwidth_hz;
        let tti_s = self.grid.tti_s;
        let track_sat = !self.sat.is_empty();

        self.obs_pico_own.iter_mut().for_each(|v| *v = f64::NEG_INFINITY);
        self.obs_macro_own.iter_mut().for_each(|v| *v = f64::NEG_INFINITY);
        self.obs_victim_min.iter_mut().for_each(|v| *v = f64::NEG_INFINITY);
        self.served_bps.iter_mut().for_each(|v| *v = 0.0);
        self.ue_bits.iter_mut().for_each(|v| *v = 0.0);
        self.sat_u_now.iter_mut().for_each(|v| *v = 0.0);
        let mut macro_bits = 0.0;
        let mut pico_bits = 0.0;

        let log_sinr = loggers.sinr_every > 0 && tti % loggers.sinr_every == 0;

        for cell in &self.layout.cells {
            for rb in 0..num_rbs {
                if self.alloc.get(cell.id, rb) <= 0.0 {
                    continue;
                }
                let Some(ue) = self.schedule.get(cell.id, rb) else {
                    continue;
                };
                let sample = sinr_lin(ue, cell.id, rb, &self.alloc, &self.gains, self.noise_w);
                let gamma_db = lin_to_db(sample);
                let rate = rate_bps(sample, bw);
                let bits = rate * tti_s;
                let cc = self.grid.cc_of_rb(rb);
                self.ue_bits[ue.0] += bits;
                self.served_bps[cc * num_ues + ue.0] += rate;
                match cell.tier {
                    Tier::Macro => {
                        macro_bits += bits;
                        self.obs_macro_own[cell.sector * num_rbs + rb] = gamma_db;
                    }
                    Tier::Pico => {
                        pico_bits += bits;
                        let p = self.pico_idx(cell.id);
                        self.obs_pico_own[p * num_rbs + rb] = gamma_db;
                        let v = &mut self.obs_victim_min[cell.sector * num_rbs + rb];
                        if *v == f64::NEG_INFINITY || gamma_db < *v {
                            *v = gamma_db;
                        }
                        if track_sat {
                            self.sat_u_now[p] += (1.0 + sample).log2();
                        }
                    }
                }
                if log_sinr {
                    if let Some(w) = loggers.sinr.as_deref_mut() {
                        writeln!(w, "{tti},{},{rb},{cc},{gamma_db:.6}", ue.0)
                            .map_err(|e| SimError::io("sinr trace", e))?;
                    }
                }
            }
        }

        for cc in 0..self.profile.num_ccs {
            self.pf
                .update(cc, &self.served_bps[cc * num_ues..(cc + 1) * num_ues]);
        }

        debug_assert!({
            let total: f64 = self.ue_bits.iter().sum();
            (total - (macro_bits + pico_bits)).abs() <= 1e-6 * total.max(1.0)
        });
        self.acc.record_tti(tti, &self.ue_bits, macro_bits, pico_bits);
        Ok(())
    }

    // -- learning -------------------------------------------------------------

    fn learn(&mut self, tti: u64, loggers: &mut DropLoggers) -> Result<()> {
        let num_rbs = self.grid.num_rbs;

        if self.profile.has_pico_ql() {
            for p in 0..self.num_picos() {
                let cell = self.pico_cell(p);
                let sector = self.layout.cells[cell.0].sector;
                let overloaded = self.overload[cell.0];
                let track_epoch = !self.pico_acc.is_empty();
                for rb in 0..num_rbs {
                    let own = self.obs_pico_own[p * num_rbs + rb];
                    let next =
                        quantize_state(own, self.obs_macro_own[sector * num_rbs + rb]);
                    let cost = if overloaded {
                        Some(OVERLOAD_COST)
                    } else if own > f64::NEG_INFINITY {
                        let d = own - GAMMA_TARGET_DB;
                        Some(d * d)
                    } else {
                        None
                    };
                    match cost {
                        Some(c) => {
                            self.pico_banks[p].learn(rb, c, next);
                            if track_epoch {
                                self.pico_acc[p].record_cost(c);
                            }
                        }
                        None => self.pico_banks[p].skip(rb),
                    }
                    if track_epoch {
                        self.pico_acc[p].record_state(next);
                    }
                }
                self.pico_banks[p].tick();
            }
        }

        if self.profile.has_macro_ql() {
            for s in 0..self.num_sectors() {
                let cell = self.layout.macro_of_sector(s);
                let overloaded = self.overload[cell.0];
                let track_epoch = !self.macro_acc.is_empty();
                for rb in 0..num_rbs {
                    let own = self.obs_macro_own[s * num_rbs + rb];
                    let victim = self.obs_victim_min[s * num_rbs + rb];
                    let next = quantize_state(victim, own);
                    let cost = if overloaded {
                        OVERLOAD_COST
                    } else if own > f64::NEG_INFINITY {
                        let d = own - GAMMA_TARGET_DB;
                        d * d
                    } else if victim > f64::NEG_INFINITY {
                        let d = victim - GAMMA_TARGET_DB;
                        d * d
                    } else {
                        IDLE_MACRO_COST
                    };
                    // same-TTI protection flags as at selection time, so the
                    // cost lands in the bank that chose the action
                    let bank = if self.rb_is_protected(s, rb) {
                        &mut self.macro_banks_prot[s]
                    } else {
                        &mut self.macro_banks_unprot[s]
                    };
                    bank.learn(rb, cost, next);
                    if track_epoch {
                        self.macro_acc[s].record_state(next);
                        self.macro_acc[s].record_cost(cost);
                    }
                }
                self.macro_banks_prot[s].tick();
                self.macro_banks_unprot[s].tick();
            }
        }

        if !self.sat.is_empty() {
            self.eq_actions.clear();
            self.eq_flags.clear();
            for p in 0..self.num_picos() {
                self.sat_u_prev[p] = self.sat_u_now[p];
                self.eq_actions.extend_from_slice(self.sat[p].actions());
                self.eq_flags.push(self.sat[p].is_satisfied());
                if let Some(w) = loggers.satisfaction.as_deref_mut() {
                    let actions = self.sat[p]
                        .actions()
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join("|");
                    writeln!(
                        w,
                        "{tti},{},{:.6},{},{actions}",
                        self.pico_cell(p).0,
                        self.sat_u_now[p],
                        self.sat[p].is_satisfied() as u8
                    )
                    .map_err(|e| SimError::io("satisfaction log", e))?;
                }
            }
            if let Some(det) = &mut self.equilibrium {
                det.observe(tti, &self.eq_actions, &self.eq_flags);
            }
        }
        Ok(())
    }

    fn track_convergence(&mut self, _tti: u64) {
        if self.equilibrium.is_some() {
            return; // satisfaction mode converges via the equilibrium detector
        }
        self.policy_buf.clear();
        for p in 0..self.num_picos() {
            if self.profile.has_pico_ql() {
                self.pico_banks[p].table.greedy_policy(&mut self.policy_buf);
            }
            if self.profile.pico_bias == PicoBiasPolicy::Learned {
                self.pico_bias_agents[p]
                    .table
                    .greedy_policy(&mut self.policy_buf);
            }
            if self.profile.cc_learned {
                self.pico_cc_agents[p]
                    .table
                    .greedy_policy(&mut self.policy_buf);
            }
        }
        for s in 0..self.macro_banks_prot.len() {
            self.macro_banks_prot[s]
                .table
                .greedy_policy(&mut self.policy_buf);
            self.macro_banks_unprot[s]
                .table
                .greedy_policy(&mut self.policy_buf);
        }
        for s in 0..self.macro_bias_agents.len() {
            self.macro_bias_agents[s]
                .table
                .greedy_policy(&mut self.policy_buf);
        }
        let buf = std::mem::take(&mut self.policy_buf);
        self.conv.observe(&buf);
        self.policy_buf = buf;
    }

    fn dump_qtables(&mut self, tti: u64, loggers: &mut DropLoggers) -> Result<()> {
        let Some(w) = loggers.qtable.as_deref_mut() else {
            return Ok(());
        };
        let dump = |w: &mut dyn IoWrite, label: String, table: &QTable| -> Result<()> {
            for s in 0..table.num_states() {
                for a in 0..table.num_actions() {
                    writeln!(w, "{tti},{label},{s},{a},{:.9}", table.get(s, a))
                        .map_err(|e| SimError::io("q-table log", e))?;
                }
            }
            Ok(())
        };
        for p in 0..self.num_picos() {
            let cell = self.pico_cell(p).0;
            if self.profile.has_pico_ql() {
                dump(&mut *w, format!("{cell}:power"), &self.pico_banks[p].table)?;
            }
            if self.profile.pico_bias == PicoBiasPolicy::Learned {
                dump(&mut *w, format!("{cell}:bias"), &self.pico_bias_agents[p].table)?;
            }
            if self.profile.cc_learned {
                dump(&mut *w, format!("{cell}:cc"), &self.pico_cc_agents[p].table)?;
            }
        }
        for s in 0..self.macro_banks_prot.len() {
            let cell = self.layout.macro_of_sector(s).0;
            dump(
                &mut *w,
                format!("{cell}:power-prot"),
                &self.macro_banks_prot[s].table,
            )?;
            dump(
                &mut *w,
                format!("{cell}:power-unprot"),
                &self.macro_banks_unprot[s].table,
            )?;
        }
        for s in 0..self.macro_bias_agents.len() {
            let cell = self.layout.macro_of_sector(s).0;
            dump(&mut *w, format!("{cell}:bias"), &self.macro_bias_agents[s].table)?;
        }
        Ok(())
    }
}

/// Strongest static channel gain (linear) from `pico` to the UEs it is
/// meant to serve — its hotspot users, falling back to any UE in its sector.
fn best_served_gain_lin(
    layout: &NetworkLayout,
    gains: &LinkGainMap,
    pico: CellId,
) -> Result<f64> {
    let sector = layout.cells[pico.0].sector;
    let best_of = |keep: &dyn Fn(&UeTag) -> bool| {
        layout
            .ues
            .iter()
            .filter(|ue| keep(&ue.tag))
            .map(|ue| gains.mean_gain_db(pico, ue.id))
            .fold(None, |best: Option<f64>, g| {
                Some(best.map_or(g, |b: f64| b.max(g)))
            })
    };
    best_of(&|tag| matches!(tag, UeTag::Hotspot(cell) if *cell == pico))
        .or_else(|| {
            best_of(&|tag| match tag {
                UeTag::Hotspot(cell) => layout.cells[cell.0].sector == sector,
                UeTag::Uniform(s) => *s == sector,
            })
        })
        .map(db_to_lin)
        .ok_or_else(|| {
            SimError::Config(format!(
                "cell {pico} has no users to define a utility ceiling"
            ))
        })
}

// ---------------------------------------------------------------------------
