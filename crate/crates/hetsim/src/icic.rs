//! Static inter-cell interference coordination: mode catalog, resource
//! partitioning masks, almost-blank-subframe (ABS) patterns and the adaptive
//! muting mask the macro derives from pico reports.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::units::db_to_lin;

// ---------------------------------------------------------------------------
// ABS patterns
// ---------------------------------------------------------------------------

/// What the macro transmits during an ABS subframe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AbsPower {
    /// Classical blanking: no macro transmission at all.
    FullMute,
    /// Reduced-power ABS: PSD scaled by 10^(−x/10). Zero dB means no
    /// reduction and anchors the sweep at plain reuse-1.
    ReductionDb(f64),
}

/// Periodic ABS pattern over subframes. The muted subframes are the
/// contiguous prefix of each period, which matches the reference frame
/// layout and keeps patterns describable by a ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsPattern {
    period: usize,
    muted: Vec<bool>,
    power: AbsPower,
}

impl AbsPattern {
    /// Pattern muting the first `muted_count` subframes of every `period`.
    pub fn prefix(muted_count: usize, period: usize, power: AbsPower) -> Result<Self> {
        if period == 0 {
            return Err(SimError::Config("ABS period must be positive".into()));
        }
        if muted_count > period {
            return Err(SimError::Config(format!(
                "ABS pattern mutes {muted_count} of {period} subframes"
            )));
        }
        if let AbsPower::ReductionDb(x) = power {
            if !(x >= 0.0) {
                return Err(SimError::Config(format!(
                    "ABS power reduction must be non-negative, got {x} dB"
                )));
            }
        }
        let muted = (0..period).map(|i| i < muted_count).collect();
        Ok(AbsPattern {
            period,
            muted,
            power,
        })
    }

    /// Fraction of ABS subframes.
    pub fn ratio(&self) -> f64 {
        self.muted.iter().filter(|m| **m).count() as f64 / self.period as f64
    }

    /// Is the given TTI an ABS subframe?
    pub fn is_abs(&self, tti: u64) -> bool {
        self.muted[(tti % self.period as u64) as usize]
    }

    /// Linear multiplier on the macro's PSD in this TTI.
    pub fn power_scale(&self, tti: u64) -> f64 {
        if !self.is_abs(tti) {
            return 1.0;
        }
        match self.power {
            AbsPower::FullMute => 0.0,
            AbsPower::ReductionDb(x) => db_to_lin(-x),
        }
    }
}

// ---------------------------------------------------------------------------
// Scheme catalog
// ---------------------------------------------------------------------------

/// Every interference-coordination scheme the simulator speaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum IcicMode {
    /// Hard spectrum split: macro on the lower RBs, picos on the upper ones.
    Rp,
    /// Reuse-1 with cell range expansion and no coordination at all.
    NoIcicCre { bias_db: f64 },
    /// Fixed CRE plus a fixed ABS pattern on the macro.
    FixedAbsCre { pattern: AbsPattern, bias_db: f64 },
    /// Fixed CRE; the macro mutes exactly the RBs the picos report as
    /// serving expanded-region UEs.
    FixedCreAdaptiveAbs { bias_db: f64 },
    /// Picos learn bias and per-RB power by Q-learning; the macro mutes the
    /// reported ER RBs.
    StaticQl,
    /// Both tiers learn: picos as above, the macro learns per-RB power with
    /// separate level sets on protected and unprotected RBs.
    DynamicQl,
    /// Picos run satisfaction-equilibrium learning; macro as in `StaticQl`.
    Satisfaction,
    /// Carrier aggregation, single-flow association; picos learn primary CC,
    /// bias and power; the macro learns power.
    SfQl,
    /// Carrier aggregation, multi-flow association; only picos learn, the
    /// macro reduces power on reported pico-primary carriers.
    MfStaticQl,
    /// Carrier aggregation, multi-flow association; macro learns bias and
    /// power on its primary carrier too.
    MfDynamicQl,
}

impl IcicMode {
    /// Canonical lowercase name used in CLI values and output paths.
    pub fn name(&self) -> &'static str {
        match self {
            IcicMode::Rp => "rp",
            IcicMode::NoIcicCre { .. } => "no-icic-cre",
            IcicMode::FixedAbsCre { .. } => "fixed-abs-cre",
            IcicMode::FixedCreAdaptiveAbs { .. } => "fixed-cre-adaptive-abs",
            IcicMode::StaticQl => "static-ql",
            IcicMode::DynamicQl => "dynamic-ql",
            IcicMode::Satisfaction => "satisfaction",
            IcicMode::SfQl => "sf-ql",
            IcicMode::MfStaticQl => "mf-static-ql",
            IcicMode::MfDynamicQl => "mf-dynamic-ql",
        }
    }

    /// Carrier-aggregation modes run on a two-carrier grid.
    pub fn uses_carrier_aggregation(&self) -> bool {
        matches!(
            self,
            IcicMode::SfQl | IcicMode::MfStaticQl | IcicMode::MfDynamicQl
        )
    }

    /// Modes with at least one adaptive agent (for convergence reporting).
    pub fn is_learning(&self) -> bool {
        matches!(
            self,
            IcicMode::StaticQl
                | IcicMode::DynamicQl
                | IcicMode::Satisfaction
                | IcicMode::SfQl
                | IcicMode::MfStaticQl
                | IcicMode::MfDynamicQl
        )
    }
}

// ---------------------------------------------------------------------------
// Masks
// ---------------------------------------------------------------------------

/// Resource-partitioning split: macro owns `0..floor(R/2)`, picos share the
/// rest. Disjoint and exhaustive by construction.
pub fn rp_masks(num_rbs: usize) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    let split = num_rbs / 2;
    (0..split, split..num_rbs)
}

/// Muting mask for an adaptive-ABS macro: the union of all reported ER RBs.
pub fn adaptive_abs_mask(reports: &[Vec<usize>], num_rbs: usize) -> Vec<bool> {
    let mut muted = vec![false; num_rbs];
    for report in reports {
        for &rb in report {
            if rb < num_rbs {
                muted[rb] = true;
            }
        }
    }
    muted
}

// ---------------------------------------------------------------------------
