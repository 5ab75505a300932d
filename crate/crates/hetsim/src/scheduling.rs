//! Per-cell proportional-fair scheduling and expanded-region RB reports.
//!
//! Every TTI each cell ranks its attached UEs per permitted resource block by
//! instantaneous estimated rate over smoothed served rate and assigns the
//! argmax (full-buffer traffic: every permitted RB is always worth
//! assigning). The smoothed rate uses the usual exponential window. Ties
//! break to the lower UE id, so schedules are a pure function of their
//! inputs.

use std::ops::Range;

use crate::association::AssociationMap;
use crate::topology::{CellId, UeId};

/// Default proportional-fair smoothing window in TTIs.
pub const PF_WINDOW_TTIS: f64 = 100.0;
/// Floor on the smoothed rate when dividing, in bit/s; keeps fresh UEs from
/// producing infinite metrics.
pub const PF_RATE_FLOOR_BPS: f64 = 1.0;

// ---------------------------------------------------------------------------
// Smoothed-rate state
// ---------------------------------------------------------------------------

/// Exponentially smoothed served rate per (component carrier, UE).
#[derive(Debug, Clone)]
pub struct PfState {
    num_ues: usize,
    window: f64,
    avg_bps: Vec<f64>,
}

impl PfState {
    pub fn new(num_ues: usize, num_ccs: usize) -> Self {
        PfState {
            num_ues,
            window: PF_WINDOW_TTIS,
            avg_bps: vec![0.0; num_ues * num_ccs],
        }
    }

    #[inline]
    pub fn avg_bps(&self, ue: UeId, cc: usize) -> f64 {
        self.avg_bps[cc * self.num_ues + ue.0]
    }

    /// Metric denominator: smoothed rate, floored.
    #[inline]
    pub fn denominator(&self, ue: UeId, cc: usize) -> f64 {
        self.avg_bps(ue, cc).max(PF_RATE_FLOOR_BPS)
    }

    /// Folds one TTI of served rate into the running averages. Every UE is
    /// updated, with zero for the TTIs it was not served.
    pub fn update(&mut self, cc: usize, served_bps: &[f64]) {
        assert_eq!(served_bps.len(), self.num_ues);
        let a = 1.0 - 1.0 / self.window;
        let b = 1.0 / self.window;
        for u in 0..self.num_ues {
            let i = cc * self.num_ues + u;
            self.avg_bps[i] = a * self.avg_bps[i] + b * served_bps[u];
        }
    }
}

// ---------------------------------------------------------------------------
// Per-TTI schedule
// ---------------------------------------------------------------------------

/// RB assignments for all cells in one TTI.
#[derive(Debug, Clone)]
pub struct ScheduleMap {
    num_rbs: usize,
    assign: Vec<Option<UeId>>,
}

impl ScheduleMap {
    pub fn new(num_cells: usize, num_rbs: usize) -> Self {
        ScheduleMap {
            num_rbs,
            assign: vec![None; num_cells * num_rbs],
        }
    }

    pub fn clear(&mut self) {
        self.assign.iter_mut().for_each(|a| *a = None);
    }

    #[inline]
    pub fn get(&self, cell: CellId, rb: usize) -> Option<UeId> {
        self.assign[cell.0 * self.num_rbs + rb]
    }

    #[inline]
    pub fn set(&mut self, cell: CellId, rb: usize, ue: UeId) {
        self.assign[cell.0 * self.num_rbs + rb] = Some(ue);
    }
}

/// Fills one cell's RB range by the proportional-fair rule.
///
/// `mask` marks the permitted RBs (unpermitted ones stay unassigned),
/// `est_rate_bps(ue, rb)` is the scheduler's channel-aware rate estimate and
/// `cc` selects the smoothed-rate plane of `pf`.
pub fn pf_schedule(
    cell: CellId,
    rbs: Range<usize>,
    mask: &dyn Fn(usize) -> bool,
    candidates: &[UeId],
    est_rate_bps: &dyn Fn(UeId, usize) -> f64,
    pf: &PfState,
    cc: usize,
    out: &mut ScheduleMap,
) {
    if candidates.is_empty() {
        return;
    }
    for rb in rbs {
        if !mask(rb) {
            continue;
        }
        let mut best = candidates[0];
        let mut best_metric = est_rate_bps(best, rb) / pf.denominator(best, cc);
        for &ue in &candidates[1..] {
            let metric = est_rate_bps(ue, rb) / pf.denominator(ue, cc);
            // strictly greater: candidate list is id-ordered, ties stay low
            if metric > best_metric || (metric == best_metric && ue.0 < best.0) {
                best = ue;
                best_metric = metric;
            }
        }
        out.set(cell, rb, best);
    }
}

/// RBs of `cell` (within `rbs`) currently assigned to expanded-region UEs —
/// the zero-delay X2 report the macro layer acts on.
pub fn er_rb_report(
    schedule: &ScheduleMap,
    cell: CellId,
    rbs: Range<usize>,
    assoc: &AssociationMap,
    cc: usize,
) -> Vec<usize> {
    let mut report = Vec::new();
    for rb in rbs {
        if let Some(ue) = schedule.get(cell, rb) {
            if assoc.is_er(ue, cc) {
                report.push(rb);
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
