//! Frequency-domain coordination over two component carriers.
//!
//! Component carriers are indexed 0 and 1 throughout (CSV columns included).
//! Every base station designates one CC as *primary*: picos apply range
//! expansion only there and learn which CC to pick; the macro derives its
//! primary from the picos' reports (least-selected rule) and transmits from
//! the low power menu on its secondary — the carrier the picos favor.
//!
//! Single-flow mode serves each UE on exactly one (cell, CC) pair chosen by
//! a retention rule (range-expanded users stay on the pico primary, inner
//! pico users offload to the secondary, macro users keep the macro primary).
//! Multi-flow mode associates each carrier independently, so a UE may be
//! served by a pico on one CC and the macro on the other at the same time,
//! adding the two rates.

use std::io::Write as IoWrite;

use crate::association::BiasConfig;
use crate::error::Result;
use crate::topology::{CellId, Tier, UeId};

/// How UEs consume the two carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    /// One (cell, CC) serving pair per UE.
    Single,
    /// Independent association per CC; rates add across carriers.
    Multi,
}

/// Per-cell primary-carrier designation.
#[derive(Debug, Clone)]
pub struct CarrierPlan {
    pub flow_mode: FlowMode,
    num_ccs: usize,
    primary: Vec<usize>,
}

impl CarrierPlan {
    pub fn new(num_cells: usize, num_ccs: usize, flow_mode: FlowMode) -> Self {
        assert_eq!(num_ccs, 2, "carrier aggregation runs on exactly two CCs");
        CarrierPlan {
            flow_mode,
            num_ccs,
            primary: vec![0; num_cells],
        }
    }

    pub fn primary_cc(&self, cell: CellId) -> usize {
        self.primary[cell.0]
    }

    pub fn secondary_cc(&self, cell: CellId) -> usize {
        self.num_ccs - 1 - self.primary[cell.0]
    }

    pub fn set_primary(&mut self, cell: CellId, cc: usize) {
        assert!(cc < self.num_ccs);
        self.primary[cell.0] = cc;
    }
}

/// Macro primary-carrier rule: take the CC the fewest picos picked as their
/// primary; on a tie, avoid the CC carrying the larger range-expanded user
/// count (it needs the protection most); any remaining tie goes to CC 0.
/// `er_per_cc[cc]` sums the range-expanded users of the picos whose primary
/// is `cc`. No reports at all → CC 0.
pub fn mbs_select_primary_cc(pico_primary: &[usize], er_per_cc: &[u64; 2]) -> usize {
    let mut counts = [0usize; 2];
    for cc in pico_primary {
        counts[*cc] += 1;
    }
    if counts[0] != counts[1] {
        if counts[0] < counts[1] {
            0
        } else {
            1
        }
    } else if er_per_cc[0] > er_per_cc[1] {
        1
    } else if er_per_cc[1] > er_per_cc[0] {
        0
    } else {
        0
    }
}

/// Single-flow pair selection. For every UE the per-CC association winners
/// are reduced to one serving (cell, CC):
///
/// 1. a pico that won through range expansion on its primary CC keeps the
///    UE there (the protected carrier);
/// 2. a pico winning both carriers outright serves the UE on its secondary
///    (freeing the protected primary for range-expanded users);
/// 3. the same macro winning both carriers serves on the macro primary;
/// 4. mixed winners: the pair with the higher biased RSRP, ties to the
///    lower cell id, then the lower CC.
pub fn select_sf_pairs(
    num_ues: usize,
    winner: &dyn Fn(usize, UeId) -> (CellId, bool),
    tier_of: &dyn Fn(CellId) -> Tier,
    plan: &CarrierPlan,
    biased_rsrp: &dyn Fn(CellId, UeId, usize) -> f64,
) -> Vec<(CellId, usize)> {
    let mut pairs = Vec::with_capacity(num_ues);
    for u in 0..num_ues {
        let ue = UeId(u);
        let per_cc: Vec<(CellId, bool)> = (0..2).map(|cc| winner(cc, ue)).collect();

        // rule 1: range-expanded onto a pico's primary carrier
        let er_pairs: Vec<(CellId, usize)> = (0..2)
            .filter(|cc| {
                let (cell, er) = per_cc[*cc];
                er && tier_of(cell) == Tier::Pico && plan.primary_cc(cell) == *cc
            })
            .map(|cc| (per_cc[cc].0, cc))
            .collect();
        if let Some(best) = pick_best(&er_pairs, ue, biased_rsrp) {
            pairs.push(best);
            continue;
        }

        let (w0, _) = per_cc[0];
        let (w1, _) = per_cc[1];
        if w0 == w1 {
            // rules 2 and 3: one cell owns both carriers
            let cc = match tier_of(w0) {
                Tier::Pico => plan.secondary_cc(w0),
                Tier::Macro => plan.primary_cc(w0),
            };
            pairs.push((w0, cc));
            continue;
        }

        // rule 4: strongest pair wins
        let candidates = [(w0, 0usize), (w1, 1usize)];
        pairs.push(pick_best(&candidates, ue, biased_rsrp).expect("two candidates"));
    }
    pairs
}

fn pick_best(
    candidates: &[(CellId, usize)],
    ue: UeId,
    biased_rsrp: &dyn Fn(CellId, UeId, usize) -> f64,
) -> Option<(CellId, usize)> {
    let mut best: Option<((CellId, usize), f64)> = None;
    for (cell, cc) in candidates {
        let r = biased_rsrp(*cell, ue, *cc);
        let better = match &best {
            None => true,
            Some(((bc, bcc), br)) => {
                r > *br || (r == *br && (cell.0 < bc.0 || (cell.0 == bc.0 && cc < bcc)))
            }
        };
        if better {
            best = Some(((*cell, *cc), r));
        }
    }
    best.map(|(pair, _)| pair)
}

/// Appends one epoch's carrier plan to a CSV stream:
/// `epoch,cell,primary_cc,bias_cc0_db,bias_cc1_db`.
pub fn snapshot_csv<W: IoWrite>(
    plan: &CarrierPlan,
    biases: &BiasConfig,
    w: &mut W,
    epoch: u64,
) -> Result<()> {
    for cell in 0..plan.primary.len() {
        let id = CellId(cell);
        writeln!(
            w,
            "{epoch},{cell},{},{},{}",
            plan.primary_cc(id),
            biases.get(id, 0),
            biases.get(id, 1)
        )
        .map_err(|e| crate::error::SimError::io("carrier plan stream", e))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
