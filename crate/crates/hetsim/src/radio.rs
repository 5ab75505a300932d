//! Radio abstractions: resource grid, link budget, channel evolution, SINR
//! and the rate map.
//!
//! The link gain between a base station and a UE decomposes into distance
//! path loss, antenna gain, lognormal shadowing (drawn once per drop, 0.5
//! correlated across cells) and Rayleigh fast fading (unit-mean exponential
//! power per link and resource block, first-order autoregressive across
//! TTIs). Fading can be switched off entirely, which makes the channel a
//! pure function of the layout — handy for exact unit tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::topology::{CellId, NetworkLayout, Tier, UeId};
use crate::units::db_to_lin;

// ---------------------------------------------------------------------------
// Resource grid
// ---------------------------------------------------------------------------

/// Spectral-efficiency ceiling of the truncated Shannon rate map,
/// log2(1 + 10²): SINRs above 20 dB no longer pay.
pub const ETA_MAX: f64 = 6.658_211_482_751_795;

/// Downlink resource grid: `num_rbs` resource blocks of `rb_bandwidth_hz`
/// each, optionally split into equal contiguous component carriers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RbGrid {
    pub num_rbs: usize,
    pub rb_bandwidth_hz: f64,
    /// TTI (subframe) duration in seconds.
    pub tti_s: f64,
    /// Component carriers; 1 for the time-domain schemes, 2 for carrier
    /// aggregation. RBs are split contiguously: CC c owns
    /// `[c·num_rbs/num_ccs, (c+1)·num_rbs/num_ccs)`.
    pub num_ccs: usize,
}

impl Default for RbGrid {
    fn default() -> Self {
        RbGrid {
            num_rbs: 50,
            rb_bandwidth_hz: 180e3,
            tti_s: 1e-3,
            num_ccs: 1,
        }
    }
}

impl RbGrid {
    /// Grid split into two component carriers for the aggregation schemes.
    pub fn carrier_aggregation() -> Self {
        RbGrid {
            num_ccs: 2,
            ..RbGrid::default()
        }
    }

    pub fn validate(&self) -> crate::error::Result<()> {
        if self.num_rbs == 0 || self.num_ccs == 0 {
            return Err(crate::SimError::Config(
                "grid needs at least one RB and one CC".into(),
            ));
        }
        if self.num_rbs % self.num_ccs != 0 {
            return Err(crate::SimError::Config(format!(
                "num_rbs {} not divisible into {} component carriers",
                self.num_rbs, self.num_ccs
            )));
        }
        if !(self.rb_bandwidth_hz > 0.0) || !(self.tti_s > 0.0) {
            return Err(crate::SimError::Config(
                "rb bandwidth and tti duration must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn rbs_per_cc(&self) -> usize {
        self.num_rbs / self.num_ccs
    }

    pub fn cc_of_rb(&self, rb: usize) -> usize {
        rb / self.rbs_per_cc()
    }

    pub fn rbs_of_cc(&self, cc: usize) -> std::ops::Range<usize> {
        let w = self.rbs_per_cc();
        cc * w..(cc + 1) * w
    }
}

// ---------------------------------------------------------------------------
// Link budget pieces
// ---------------------------------------------------------------------------

/// Thermal noise density in dBm/Hz.
pub const NOISE_PSD_DBM_HZ: f64 = -174.0;
/// UE receiver noise figure in dB.
pub const NOISE_FIGURE_DB: f64 = 9.0;

/// Noise power per resource block in watts.
pub fn noise_per_rb_watts(grid: &RbGrid) -> f64 {
    let dbm = NOISE_PSD_DBM_HZ + 10.0 * grid.rb_bandwidth_hz.log10() + NOISE_FIGURE_DB;
    crate::units::dbm_to_watts(dbm)
}

/// Distance path loss in dB. Distances are clamped to 1 m as a numeric
/// guard; the scenario's minimum-distance constraints keep real links far
/// above that.
pub fn path_loss_db(tier: Tier, dist_m: f64) -> f64 {
    let d_km = dist_m.max(1.0) / 1000.0;
    match tier {
        Tier::Macro => 128.1 + 37.6 * d_km.log10(),
        Tier::Pico => 140.7 + 36.7 * d_km.log10(),
    }
}

/// Horizontal antenna pattern. Macro sectors: −min(12·(θ/70°)², 25) dB
/// relative to a 14 dBi boresight peak; picos: 5 dBi omnidirectional.
pub fn antenna_gain_db(tier: Tier, boresight_deg: Option<f64>, azimuth_to_ue_deg: f64) -> f64 {
    match tier {
        Tier::Macro => {
            let bore = boresight_deg.unwrap_or(0.0);
            let mut theta = (azimuth_to_ue_deg - bore) % 360.0;
            if theta > 180.0 {
                theta -= 360.0;
            } else if theta < -180.0 {
                theta += 360.0;
            }
            let attenuation = (12.0 * (theta / 70.0).powi(2)).min(25.0);
            14.0 - attenuation
        }
        Tier::Pico => 5.0,
    }
}

/// Shadowing parameters: lognormal standard deviation and the correlation of
/// the dB values seen by one UE towards two different cells.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShadowingParams {
    pub sigma_db: f64,
    pub intercell_corr: f64,
}

impl Default for ShadowingParams {
    fn default() -> Self {
        ShadowingParams {
            sigma_db: 8.0,
            intercell_corr: 0.5,
        }
    }
}

/// Draws the per-(cell, ue) shadowing matrix in dB, row-major by cell.
///
/// Correlation is induced by a common per-UE component:
/// S(c,u) = √ρ·S_ue(u) + √(1−ρ)·S_link(c,u), both N(0, σ²), which gives
/// every pair of distinct cells correlation exactly ρ.
pub fn sample_shadowing_db(
    num_cells: usize,
    num_ues: usize,
    params: &ShadowingParams,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let common_w = params.intercell_corr.sqrt();
    let link_w = (1.0 - params.intercell_corr).sqrt();
    let mut common = Vec::with_capacity(num_ues);
    for _ in 0..num_ues {
        let z: f64 = rng.sample(StandardNormal);
        common.push(z * params.sigma_db);
    }
    let mut out = vec![0.0; num_cells * num_ues];
    for c in 0..num_cells {
        for u in 0..num_ues {
            let z: f64 = rng.sample(StandardNormal);
            out[c * num_ues + u] = common_w * common[u] + link_w * z * params.sigma_db;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Channel state: static gains + evolving fast fading
// ---------------------------------------------------------------------------

/// Per-drop channel state: the static link budget for every (cell, UE) pair
/// plus, when enabled, a Rayleigh fading tap per (cell, UE, RB) that evolves
/// as a first-order autoregressive process across TTIs.
#[derive(Debug, Clone)]
pub struct LinkGainMap {
    num_cells: usize,
    num_ues: usize,
    num_rbs: usize,
    /// −path loss + antenna gain + shadowing, in dB.
    static_db: Vec<f64>,
    /// Same, pre-converted to linear for the hot loops.
    static_lin: Vec<f64>,
    /// Complex fading taps, interleaved re/im, per (cell, ue, rb).
    fading: Option<FadingState>,
}

#[derive(Debug, Clone)]
struct FadingState {
    h_re: Vec<f64>,
    h_im: Vec<f64>,
    /// Amplitude AR(1) coefficient per TTI.
    rho: f64,
}

/// Fading configuration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FadingParams {
    pub enabled: bool,
    /// First-order autoregressive coefficient of the complex tap per TTI
    /// (pedestrian mobility). 0 gives i.i.d. blocks, 1 freezes the channel.
    pub ar_coefficient: f64,
}

impl Default for FadingParams {
    fn default() -> Self {
        FadingParams {
            enabled: true,
            ar_coefficient: 0.99,
        }
    }
}

impl LinkGainMap {
    /// Builds the channel for a drop. Draw order is fixed: shadowing matrix
    /// first, then fading taps cell-major, so a seed pins the whole channel.
    pub fn new(
        layout: &NetworkLayout,
        grid: &RbGrid,
        shadowing: Option<&ShadowingParams>,
        fading: &FadingParams,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let num_cells = layout.cells.len();
        let num_ues = layout.ues.len();
        let num_rbs = grid.num_rbs;

        let shadow_db = match shadowing {
            Some(p) => sample_shadowing_db(num_cells, num_ues, p, rng),
            None => vec![0.0; num_cells * num_ues],
        };

        let mut static_db = vec![0.0; num_cells * num_ues];
        for (c, cell) in layout.cells.iter().enumerate() {
            for (u, ue) in layout.ues.iter().enumerate() {
                let d = cell.pos.dist(&ue.pos);
                let az = (crate::topology::Point {
                    x: ue.pos.x - cell.pos.x,
                    y: ue.pos.y - cell.pos.y,
                })
                .azimuth_deg();
                let pl = path_loss_db(cell.tier, d);
                let ant = antenna_gain_db(cell.tier, cell.boresight_deg, az);
                static_db[c * num_ues + u] = -pl + ant + shadow_db[c * num_ues + u];
            }
        }
        let static_lin = static_db.iter().map(|db| db_to_lin(*db)).collect();

        let fading_state = if fading.enabled {
            let n = num_cells * num_ues * num_rbs;
            let mut h_re = Vec::with_capacity(n);
            let mut h_im = Vec::with_capacity(n);
            let amp = (0.5f64).sqrt();
            for _ in 0..n {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                h_re.push(re * amp);
                h_im.push(im * amp);
            }
            Some(FadingState {
                h_re,
                h_im,
                rho: fading.ar_coefficient,
            })
        } else {
            None
        };

        LinkGainMap {
            num_cells,
            num_ues,
            num_rbs,
            static_db,
            static_lin,
            fading: fading_state,
        }
    }

    /// Advances every fading tap by one TTI. No-op when fading is disabled.
    pub fn advance(&mut self, rng: &mut ChaCha8Rng) {
        let Some(f) = self.fading.as_mut() else {
            return;
        };
        let rho = f.rho;
        let innov = (0.5 * (1.0 - rho * rho)).sqrt();
        for i in 0..f.h_re.len() {
            let er: f64 = rng.sample(StandardNormal);
            let ei: f64 = rng.sample(StandardNormal);
            f.h_re[i] = rho * f.h_re[i] + innov * er;
            f.h_im[i] = rho * f.h_im[i] + innov * ei;
        }
    }

    #[inline]
    fn link(&self, cell: CellId, ue: UeId) -> usize {
        debug_assert!(cell.0 < self.num_cells && ue.0 < self.num_ues);
        cell.0 * self.num_ues + ue.0
    }

    /// Instantaneous linear power gain on one RB (includes fading).
    #[inline]
    pub fn gain_lin(&self, cell: CellId, ue: UeId, rb: usize) -> f64 {
        let base = self.static_lin[self.link(cell, ue)];
        match &self.fading {
            Some(f) => {
                let i = self.link(cell, ue) * self.num_rbs + rb;
                let p = f.h_re[i] * f.h_re[i] + f.h_im[i] * f.h_im[i];
                base * p
            }
            None => base,
        }
    }

    /// Average link gain in dB (path loss + antenna + shadowing, fading
    /// excluded). This is what cell selection measures.
    #[inline]
    pub fn mean_gain_db(&self, cell: CellId, ue: UeId) -> f64 {
        self.static_db[self.link(cell, ue)]
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn num_ues(&self) -> usize {
        self.num_ues
    }
}

// ---------------------------------------------------------------------------
// Transmit power
// ---------------------------------------------------------------------------

/// Maximum total transmit power in dBm per tier.
pub fn max_power_dbm(tier: Tier) -> f64 {
    match tier {
        Tier::Macro => 46.0,
        Tier::Pico => 30.0,
    }
}

/// Per-TTI transmit power allocation, watts per (cell, RB).
///
/// The allocation distinguishes the *selected* powers (what a controller or
/// learner asked for) from the *emitted* ones (after cap projection and
/// schedule masking); only emitted power interferes.
#[derive(Debug, Clone)]
pub struct PowerAllocation {
    num_cells: usize,
    num_rbs: usize,
    p: Vec<f64>,
    /// Total cap per cell in watts.
    caps: Vec<f64>,
}

impl PowerAllocation {
    pub fn new(num_cells: usize, num_rbs: usize, caps: Vec<f64>) -> Self {
        assert_eq!(caps.len(), num_cells);
        PowerAllocation {
            num_cells,
            num_rbs,
            p: vec![0.0; num_cells * num_rbs],
            caps,
        }
    }

    pub fn clear(&mut self) {
        self.p.iter_mut().for_each(|v| *v = 0.0);
    }

    #[inline]
    pub fn get(&self, cell: CellId, rb: usize) -> f64 {
        self.p[cell.0 * self.num_rbs + rb]
    }

    #[inline]
    pub fn set(&mut self, cell: CellId, rb: usize, watts: f64) {
        debug_assert!(watts >= 0.0 && watts.is_finite());
        self.p[cell.0 * self.num_rbs + rb] = watts;
    }

    /// Multiplies one cell's power on every RB of a CC range by `scale`.
    pub fn scale_range(&mut self, cell: CellId, rbs: std::ops::Range<usize>, scale: f64) {
        for rb in rbs {
            self.p[cell.0 * self.num_rbs + rb] *= scale;
        }
    }

    pub fn total(&self, cell: CellId) -> f64 {
        let base = cell.0 * self.num_rbs;
        self.p[base..base + self.num_rbs].iter().sum()
    }

    pub fn total_range(&self, cell: CellId, rbs: std::ops::Range<usize>) -> f64 {
        let base = cell.0 * self.num_rbs;
        self.p[base + rbs.start..base + rbs.end].iter().sum()
    }

    pub fn cap(&self, cell: CellId) -> f64 {
        self.caps[cell.0]
    }

    /// Scales each (cell, CC block) down uniformly so the block total meets
    /// `cap / num_ccs`, leaving compliant blocks untouched. Returns true if
    /// any block needed projection. The trigger carries a tiny relative
    /// tolerance so the projection is idempotent despite rounding in the
    /// scale factor.
    pub fn project_to_caps(&mut self, grid: &RbGrid) -> bool {
        let mut projected = false;
        for c in 0..self.num_cells {
            let cap_cc = self.caps[c] / grid.num_ccs as f64;
            for cc in 0..grid.num_ccs {
                let range = grid.rbs_of_cc(cc);
                let total = self.total_range(CellId(c), range.clone());
                if total > cap_cc * (1.0 + 1e-12) {
                    self.scale_range(CellId(c), range, cap_cc / total);
                    projected = true;
                }
            }
        }
        projected
    }

    /// Panics in debug builds if the cap contract is broken; returns the
    /// violating cell in release builds for the engine to report.
    pub fn check_caps(&self, tolerance: f64) -> Option<CellId> {
        for c in 0..self.num_cells {
            if self.total(CellId(c)) > self.caps[c] * (1.0 + tolerance) {
                return Some(CellId(c));
            }
        }
        None
    }

    pub fn num_rbs(&self) -> usize {
        self.num_rbs
    }
}

// ---------------------------------------------------------------------------
// SINR and rate
// ---------------------------------------------------------------------------

/// One measured SINR: UE `ue` served by `cell` on `rb`.
#[derive(Debug, Clone, Copy)]
pub struct SinrSample {
    pub ue: UeId,
    pub cell: CellId,
    pub rb: usize,
    pub sinr_lin: f64,
}

/// Downlink SINR of `ue` served by `serving` on `rb`: serving power·gain over
/// the sum of all other cells' emitted power·gain plus noise. Cells with zero
/// power on the RB contribute nothing.
pub fn sinr_lin(
    ue: UeId,
    serving: CellId,
    rb: usize,
    alloc: &PowerAllocation,
    gains: &LinkGainMap,
    noise_watts: f64,
) -> f64 {
    let signal = alloc.get(serving, rb) * gains.gain_lin(serving, ue, rb);
    let mut interference = 0.0;
    for c in 0..gains.num_cells() {
        if c == serving.0 {
            continue;
        }
        let p = alloc.get(CellId(c), rb);
        if p > 0.0 {
            interference += p * gains.gain_lin(CellId(c), ue, rb);
        }
    }
    signal / (interference + noise_watts)
}

/// Truncated Shannon rate of one RB in bit/s.
#[inline]
pub fn rate_bps(sinr_lin: f64, rb_bandwidth_hz: f64) -> f64 {
    rb_bandwidth_hz * (1.0 + sinr_lin).log2().min(ETA_MAX)
}

// ---------------------------------------------------------------------------
