//! Cell selection: biased RSRP association and expanded-region flags.
//!
//! A UE measures RSRP towards every candidate cell (reference power plus
//! average link gain — fading averages out, shadowing does not), adds each
//! cell's selection bias and attaches to the argmax. Cell range expansion is
//! exactly a positive pico bias; a UE whose biased winner differs from its
//! unbiased winner sits in the expanded region (ER) and is the one the
//! interference coordination machinery protects.
//!
//! RSRP is computed from a cell's per-carrier power *budget*, not the
//! instantaneous data allocation: reference symbols are transmitted at
//! constant power, so muted data subframes must not flip associations.

use crate::error::{Result, SimError};
use crate::radio::LinkGainMap;
use crate::topology::{CellId, NetworkLayout, Tier, UeId};

// ---------------------------------------------------------------------------
// Bias configuration
// ---------------------------------------------------------------------------

/// Selection bias in dB per (cell, component carrier).
#[derive(Debug, Clone, PartialEq)]
pub struct BiasConfig {
    num_cells: usize,
    num_ccs: usize,
    bias_db: Vec<f64>,
}

impl BiasConfig {
    pub fn zero(num_cells: usize, num_ccs: usize) -> Self {
        BiasConfig {
            num_cells,
            num_ccs,
            bias_db: vec![0.0; num_cells * num_ccs],
        }
    }

    /// Same bias on every pico (on all carriers), zero on macros — the
    /// classical homogeneous range-expansion setting.
    pub fn uniform_pico(layout: &NetworkLayout, num_ccs: usize, bias_db: f64) -> Self {
        let mut b = BiasConfig::zero(layout.cells.len(), num_ccs);
        for cell in &layout.cells {
            if cell.tier == Tier::Pico {
                for cc in 0..num_ccs {
                    b.set(cell.id, cc, bias_db);
                }
            }
        }
        b
    }

    #[inline]
    pub fn get(&self, cell: CellId, cc: usize) -> f64 {
        self.bias_db[cell.0 * self.num_ccs + cc]
    }

    pub fn set(&mut self, cell: CellId, cc: usize, db: f64) {
        self.bias_db[cell.0 * self.num_ccs + cc] = db;
    }

    pub fn num_ccs(&self) -> usize {
        self.num_ccs
    }
}

// ---------------------------------------------------------------------------
// Core selection rule
// ---------------------------------------------------------------------------

/// RSRP in dBm: reference transmit power plus average link gain.
#[inline]
pub fn rsrp_dbm(total_tx_power_dbm: f64, mean_gain_db: f64) -> f64 {
    total_tx_power_dbm + mean_gain_db
}

/// Picks the serving cell from `(cell, rsrp_dbm, bias_db)` candidates:
/// argmax of biased RSRP, ties to the lowest cell id. The second return is
/// the expanded-region flag — true iff the unbiased argmax differs.
pub fn associate(candidates: &[(CellId, f64, f64)]) -> Result<(CellId, bool)> {
    if candidates.is_empty() {
        return Err(SimError::Invariant(
            "UE has no candidate cell to associate with".into(),
        ));
    }
    let argmax = |key: &dyn Fn(&(CellId, f64, f64)) -> f64| {
        let mut best = &candidates[0];
        for c in &candidates[1..] {
            // strictly-greater keeps the lowest id on ties, provided the
            // candidate list is id-sorted; sort-independence is restored by
            // comparing ids on exact ties
            let (kb, kc) = (key(best), key(c));
            if kc > kb || (kc == kb && c.0 < best.0) {
                best = c;
            }
        }
        best.0
    };
    let biased = argmax(&|c| c.1 + c.2);
    let unbiased = argmax(&|c| c.1);
    Ok((biased, biased != unbiased))
}

// ---------------------------------------------------------------------------
// Network-wide association map
// ---------------------------------------------------------------------------

/// Serving cell and ER flag for every (UE, component carrier).
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationMap {
    num_ues: usize,
    num_ccs: usize,
    serving: Vec<CellId>,
    er: Vec<bool>,
}

impl AssociationMap {
    #[inline]
    pub fn serving(&self, ue: UeId, cc: usize) -> CellId {
        self.serving[cc * self.num_ues + ue.0]
    }

    #[inline]
    pub fn is_er(&self, ue: UeId, cc: usize) -> bool {
        self.er[cc * self.num_ues + ue.0]
    }

    pub fn num_ccs(&self) -> usize {
        self.num_ccs
    }

    pub fn num_ues(&self) -> usize {
        self.num_ues
    }

    /// UEs attached to `cell` on `cc`, in id order.
    pub fn ues_of(&self, cell: CellId, cc: usize) -> Vec<UeId> {
        (0..self.num_ues)
            .filter(|u| self.serving[cc * self.num_ues + u] == cell)
            .map(UeId)
            .collect()
    }
}

/// Builds the per-carrier association map. `budget_dbm(cell, cc)` is the
/// cell's reference power on the carrier; `NEG_INFINITY` marks a cell that
/// never transmits there and removes it from candidacy.
pub fn build_association(
    layout: &NetworkLayout,
    gains: &LinkGainMap,
    num_ccs: usize,
    budget_dbm: &dyn Fn(CellId, usize) -> f64,
    biases: &BiasConfig,
) -> Result<AssociationMap> {
    let num_ues = layout.ues.len();
    let mut serving = Vec::with_capacity(num_ccs * num_ues);
    let mut er = Vec::with_capacity(num_ccs * num_ues);
    for cc in 0..num_ccs {
        let mut candidates: Vec<(CellId, f64, f64)> = Vec::with_capacity(layout.cells.len());
        for ue in &layout.ues {
            candidates.clear();
            for cell in &layout.cells {
                let budget = budget_dbm(cell.id, cc);
                if budget == f64::NEG_INFINITY {
                    continue;
                }
                candidates.push((
                    cell.id,
                    rsrp_dbm(budget, gains.mean_gain_db(cell.id, ue.id)),
                    biases.get(cell.id, cc),
                ));
            }
            let (cell, flag) = associate(&candidates)?;
            serving.push(cell);
            er.push(flag);
        }
    }
    Ok(AssociationMap {
        num_ues,
        num_ccs,
        serving,
        er,
    })
}

/// Association snapshot rows (`ue,cc,serving_cell,er`) for run logging.
pub fn snapshot_csv<W: std::io::Write>(
    map: &AssociationMap,
    mut w: W,
    tti: u64,
) -> std::io::Result<()> {
    for cc in 0..map.num_ccs {
        for u in 0..map.num_ues {
            let ue = UeId(u);
            writeln!(
                w,
                "{},{},{},{},{}",
                tti,
                ue.0,
                cc,
                map.serving(ue, cc).0,
                u8::from(map.is_er(ue, cc))
            )?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
