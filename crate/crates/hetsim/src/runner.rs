//! Experiment orchestration: settings files, sweeps, parallel drop
//! execution, and output emission.
//!
//! A run is described by a flat `key = value` settings file plus CLI
//! overrides; list-valued knobs (`mode`, `pbs`, `bias-db`, `abs-ratio`,
//! `abs-reduction-db`) expand into a Cartesian sweep. Every expanded combo
//! writes one result set:
//!
//! ```text
//! out/                          (single combo — files at the root)
//! out/<label>/                  (sweep — one subdirectory per combo)
//!   ue_throughput.csv           drop,ue,throughput_bps
//!   cdf.csv                     throughput_bps,cum_prob
//!   convergence.csv             drop,convergence_tti (-1 = not converged)
//!   complexity.txt              memory/operation counts, formula vs measured
//!   summary.json                headline percentiles + echoed configuration
//!   drop_00/ue_throughput.csv   per-drop detail (+ optional trace logs)
//!   drop_00/sum_rate.csv
//! out/compare.csv               relative gains between same-scenario combos
//! ```
//!
//! Drops are independent work units: any thread count produces byte-identical
//! files because each drop derives its own random streams and writes only its
//! own subdirectory, while aggregates are folded in drop order after the join.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::icic::{AbsPattern, AbsPower, IcicMode};
use crate::metrics::{
    cdf_points, complexity_report, measured_ops, ops_q, ops_sat, percentile, DEFAULT_WARMUP_TTIS,
};
use crate::qlearn::{PowerLevels, BIAS_LEVELS_DB, NUM_STATES};
use crate::sim::{run_drop, DropLoggers, DropOutput, DropParams};
use crate::topology::ScenarioConfig;

// ---------------------------------------------------------------------------
// Configuration types
// ---------------------------------------------------------------------------

/// Optional per-drop trace logging. Interval values are in TTIs; 0 disables
/// the log. Flags enable event-driven logs.
#[derive(Debug, Clone, Default, Serialize)]
pub struct LogConfig {
    pub sinr_every: u64,
    pub association_every: u64,
    pub qtable_every: u64,
    pub x2: bool,
    pub satisfaction: bool,
    pub carrier: bool,
    pub layout: bool,
}

/// One fully-resolved experiment: a single scheme on a single scenario,
/// simulated over `num_drops` independent drops.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    /// Name of the result set; used for the output subdirectory in sweeps
    /// and echoed in `summary.json`.
    pub label: String,
    pub scenario: ScenarioConfig,
    pub mode: IcicMode,
    pub num_ttis: u64,
    pub warmup_ttis: u64,
    pub num_drops: u64,
    /// Master seed; drop i derives its streams from (seed, i) unless
    /// `drop_seeds` lists explicit per-drop seeds.
    pub master_seed: u64,
    pub drop_seeds: Option<Vec<u64>>,
    pub threads: usize,
    pub fading_enabled: bool,
    pub shadowing_enabled: bool,
    pub out_dir: PathBuf,
    pub logs: LogConfig,
}

impl ExperimentConfig {
    /// Desk-scale defaults: one tri-sector site, 2 picos/sector, 5000 TTIs,
    /// 10 drops, warm-up excluded from statistics.
    pub fn desk(mode: IcicMode, out_dir: PathBuf) -> Self {
        ExperimentConfig {
            label: mode.name().to_string(),
            scenario: ScenarioConfig::default(),
            mode,
            num_ttis: 5000,
            warmup_ttis: DEFAULT_WARMUP_TTIS,
            num_drops: 10,
            master_seed: 1,
            drop_seeds: None,
            threads: default_threads(),
            fading_enabled: true,
            shadowing_enabled: true,
            out_dir,
            logs: LogConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.num_ttis == 0 {
            return Err(SimError::Config("ttis must be positive".to_string()));
        }
        if self.num_ttis < self.warmup_ttis {
            return Err(SimError::Config(format!(
                "ttis ({}) must cover the warm-up ({})",
                self.num_ttis, self.warmup_ttis
            )));
        }
        if self.num_drops == 0 {
            return Err(SimError::Config("drops must be positive".to_string()));
        }
        if self.threads == 0 {
            return Err(SimError::Config("threads must be positive".to_string()));
        }
        if let Some(seeds) = &self.drop_seeds {
            if seeds.len() != self.num_drops as usize {
                return Err(SimError::Config(format!(
                    "seeds lists {} values for {} drops",
                    seeds.len(),
                    self.num_drops
                )));
            }
        }
        Ok(())
    }

    /// Scenario fingerprint for comparison grouping: result sets may be
    /// compared only when everything except the scheme matches.
    pub fn scenario_key(&self) -> String {
        format!(
            "pbs={} isd={} ues={} ttis={} warmup={} drops={} seed={} fading={} shadowing={}",
            self.scenario.picos_per_sector,
            self.scenario.isd_m,
            self.scenario.ues_per_sector,
            self.num_ttis,
            self.warmup_ttis,
            self.num_drops,
            match &self.drop_seeds {
                Some(seeds) => seeds
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join("/"),
                None => self.master_seed.to_string(),
            },
            self.fading_enabled,
            self.shadowing_enabled,
        )
    }

    fn drop_params(&self) -> DropParams {
        DropParams {
            scenario: self.scenario.clone(),
            mode: self.mode.clone(),
            num_ttis: self.num_ttis,
            warmup_ttis: self.warmup_ttis,
            fading_enabled: self.fading_enabled,
            shadowing_enabled: self.shadowing_enabled,
        }
    }
}

/// Default worker count: one per available core, capped later by the number
/// of drops.
pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

// ---------------------------------------------------------------------------
// Settings: flat key=value files merged with CLI overrides
// ---------------------------------------------------------------------------

/// Raw, possibly partial settings. Every field mirrors one CLI flag / file
/// key; `None` means "not given here". List-valued knobs stay unparsed
/// strings until [`Settings::into_sweep`] resolves the whole bundle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub mode: Option<String>,
    pub pbs: Option<String>,
    pub ttis: Option<u64>,
    pub drops: Option<u64>,
    pub seed: Option<u64>,
    pub seeds: Option<String>,
    pub warmup: Option<u64>,
    pub bias_db: Option<String>,
    pub abs_ratio: Option<String>,
    pub abs_reduction_db: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub fading: Option<bool>,
    pub shadowing: Option<bool>,
    pub isd_m: Option<f64>,
    pub ues_per_sector: Option<usize>,
    pub sinr_every: Option<u64>,
    pub association_every: Option<u64>,
    pub qtable_every: Option<u64>,
    pub log_x2: Option<bool>,
    pub log_satisfaction: Option<bool>,
    pub log_carrier: Option<bool>,
    pub log_layout: Option<bool>,
}

impl Settings {
    /// Overlays `over` (typically CLI flags) on `base` (typically the
    /// settings file): any value present in `over` wins.
    pub fn merged(base: Settings, over: Settings) -> Settings {
        macro_rules! pick {
            ($field:ident) => {
                over.$field.or(base.$field)
            };
        }
        Settings {
            mode: pick!(mode),
            pbs: pick!(pbs),
            ttis: pick!(ttis),
            drops: pick!(drops),
            seed: pick!(seed),
            seeds: pick!(seeds),
            warmup: pick!(warmup),
            bias_db: pick!(bias_db),
            abs_ratio: pick!(abs_ratio),
            abs_reduction_db: pick!(abs_reduction_db),
            out: pick!(out),
            threads: pick!(threads),
            fading: pick!(fading),
            shadowing: pick!(shadowing),
            isd_m: pick!(isd_m),
            ues_per_sector: pick!(ues_per_sector),
            sinr_every: pick!(sinr_every),
            association_every: pick!(association_every),
            qtable_every: pick!(qtable_every),
            log_x2: pick!(log_x2),
            log_satisfaction: pick!(log_satisfaction),
            log_carrier: pick!(log_carrier),
            log_layout: pick!(log_layout),
        }
    }

    /// Applies one `key = value` pair. Keys use the CLI spelling.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| {
            SimError::Config(format!("invalid value '{value}' for key '{key}': {what}"))
        };
        match key {
            "mode" => self.mode = Some(value.to_string()),
            "pbs" => self.pbs = Some(value.to_string()),
            "ttis" => self.ttis = Some(value.parse().map_err(|_| bad("expected integer"))?),
            "drops" => self.drops = Some(value.parse().map_err(|_| bad("expected integer"))?),
            "seed" => self.seed = Some(value.parse().map_err(|_| bad("expected integer"))?),
            "seeds" => self.seeds = Some(value.to_string()),
            "warmup" => self.warmup = Some(value.parse().map_err(|_| bad("expected integer"))?),
            "bias-db" => self.bias_db = Some(value.to_string()),
            "abs-ratio" => self.abs_ratio = Some(value.to_string()),
            "abs-reduction-db" => self.abs_reduction_db = Some(value.to_string()),
            "out" => self.out = Some(PathBuf::from(value)),
            "threads" => {
                self.threads = Some(value.parse().map_err(|_| bad("expected integer"))?)
            }
            "fading" => self.fading = Some(parse_bool(value).ok_or_else(|| bad("expected bool"))?),
            "shadowing" => {
                self.shadowing = Some(parse_bool(value).ok_or_else(|| bad("expected bool"))?)
            }
            "isd-m" => self.isd_m = Some(value.parse().map_err(|_| bad("expected number"))?),
            "ues-per-sector" => {
                self.ues_per_sector = Some(value.parse().map_err(|_| bad("expected integer"))?)
            }
            "sinr-every" => {
                self.sinr_every = Some(value.parse().map_err(|_| bad("expected integer"))?)
            }
            "association-every" => {
                self.association_every = Some(value.parse().map_err(|_| bad("expected integer"))?)
            }
            "qtable-every" => {
                self.qtable_every = Some(value.parse().map_err(|_| bad("expected integer"))?)
            }
            "log-x2" => self.log_x2 = Some(parse_bool(value).ok_or_else(|| bad("expected bool"))?),
            "log-satisfaction" => {
                self.log_satisfaction = Some(parse_bool(value).ok_or_else(|| bad("expected bool"))?)
            }
            "log-carrier" => {
                self.log_carrier = Some(parse_bool(value).ok_or_else(|| bad("expected bool"))?)
            }
            "log-layout" => {
                self.log_layout = Some(parse_bool(value).ok_or_else(|| bad("expected bool"))?)
            }
            _ => return Err(SimError::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Parses a flat settings file: one `key = value` per line, `#` comments.
    pub fn from_file(path: &Path) -> Result<Settings> {
        let text = fs::read_to_string(path)
            .map_err(|e| SimError::io(path.display().to_string(), e))?;
        let mut settings = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.split_once('#') {
                Some((before, _)) => before.trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let Some((key, value)) = line.split_once('=') else {
                return Err(SimError::Config(format!(
                    "{} line {lineno}: expected key = value, got '{line}'",
                    path.display()
                )));
            };
            settings.set(key.trim(), value.trim()).map_err(|e| match e {
                SimError::Config(msg) => {
                    SimError::Config(format!("{} line {lineno}: {msg}", path.display()))
                }
                other => other,
            })?;
        }
        Ok(settings)
    }

    /// Resolves defaults and parses the list-valued knobs into a sweep.
    pub fn into_sweep(self) -> Result<SweepSpec> {
        let modes = split_list(self.mode.as_deref().unwrap_or("dynamic-ql"))
            .map(validate_mode_name)
            .collect::<Result<Vec<_>>>()?;
        let picos = split_list(self.pbs.as_deref().unwrap_or("2"))
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| SimError::Config(format!("invalid pbs value '{v}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        let biases = split_list(self.bias_db.as_deref().unwrap_or("12"))
            .map(parse_bias_db)
            .collect::<Result<Vec<_>>>()?;
        let ratios = split_list(self.abs_ratio.as_deref().unwrap_or("3/10"))
            .map(parse_abs_ratio)
            .collect::<Result<Vec<_>>>()?;
        let powers = split_list(self.abs_reduction_db.as_deref().unwrap_or("mute"))
            .map(parse_abs_power)
            .collect::<Result<Vec<_>>>()?;
        let drop_seeds = self
            .seeds
            .as_deref()
            .map(|s| {
                split_list(s)
                    .map(|v| {
                        v.parse::<u64>()
                            .map_err(|_| SimError::Config(format!("invalid seed value '{v}'")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;

        let mut scenario = ScenarioConfig::default();
        if let Some(isd) = self.isd_m {
            scenario.isd_m = isd;
        }
        if let Some(ues) = self.ues_per_sector {
            scenario.ues_per_sector = ues;
        }

        Ok(SweepSpec {
            modes,
            picos_per_sector: picos,
            biases_db: biases,
            abs_ratios: ratios,
            abs_powers: powers,
            scenario,
            num_ttis: self.ttis.unwrap_or(5000),
            warmup_ttis: self.warmup.unwrap_or(DEFAULT_WARMUP_TTIS),
            num_drops: self.drops.unwrap_or(10),
            master_seed: self.seed.unwrap_or(1),
            drop_seeds,
            threads: self.threads.unwrap_or_else(default_threads),
            fading_enabled: self.fading.unwrap_or(true),
            shadowing_enabled: self.shadowing.unwrap_or(true),
            out_dir: self.out.unwrap_or_else(|| PathBuf::from("out")),
            logs: LogConfig {
                sinr_every: self.sinr_every.unwrap_or(0),
                association_every: self.association_every.unwrap_or(0),
                qtable_every: self.qtable_every.unwrap_or(0),
                x2: self.log_x2.unwrap_or(false),
                satisfaction: self.log_satisfaction.unwrap_or(false),
                carrier: self.log_carrier.unwrap_or(false),
                layout: self.log_layout.unwrap_or(false),
            },
        })
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|v| !v.is_empty())
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

const MODE_NAMES: [&str; 10] = [
    "rp",
    "no-icic-cre",
    "fixed-abs-cre",
    "fixed-cre-adaptive-abs",
    "static-ql",
    "dynamic-ql",
    "satisfaction",
    "sf-ql",
    "mf-static-ql",
    "mf-dynamic-ql",
];

fn validate_mode_name(name: &str) -> Result<String> {
    if MODE_NAMES.contains(&name) {
        Ok(name.to_string())
    } else {
        Err(SimError::Config(format!(
            "unknown mode '{name}' (valid: {})",
            MODE_NAMES.join(", ")
        )))
    }
}

fn parse_bias_db(v: &str) -> Result<f64> {
    let db: f64 = v
        .parse()
        .map_err(|_| SimError::Config(format!("invalid bias-db value '{v}'")))?;
    if !db.is_finite() || db < 0.0 {
        return Err(SimError::Config(format!(
            "bias-db must be finite and non-negative, got {v}"
        )));
    }
    Ok(db)
}

/// Accepts `m/period` ("3/10") or a decimal ("0.3"); the reference patterns
/// mute 1, 3, or 7 subframes of a 10-subframe frame.
fn parse_abs_ratio(v: &str) -> Result<(usize, usize)> {
    let err = || {
        SimError::Config(format!(
            "abs-ratio '{v}' not in the supported set (1/10, 3/10, 7/10)"
        ))
    };
    let (muted, period) = if let Some((num, den)) = v.split_once('/') {
        (
            num.trim().parse::<usize>().map_err(|_| err())?,
            den.trim().parse::<usize>().map_err(|_| err())?,
        )
    } else {
        let f: f64 = v.parse().map_err(|_| err())?;
        ((f * 10.0).round() as usize, 10)
    };
    if period == 10 && matches!(muted, 1 | 3 | 7) {
        Ok((muted, period))
    } else {
        Err(err())
    }
}

/// Accepts `mute` for classical blanking or a reduction in dB from the
/// reference set {0, 6, 9, 12, 18, 24}.
fn parse_abs_power(v: &str) -> Result<AbsPower> {
    if v.eq_ignore_ascii_case("mute") || v.eq_ignore_ascii_case("full") {
        return Ok(AbsPower::FullMute);
    }
    let err = || {
        SimError::Config(format!(
            "abs-reduction-db '{v}' not in the supported set (mute, 0, 6, 9, 12, 18, 24)"
        ))
    };
    let db: f64 = v.parse().map_err(|_| err())?;
    if [0.0, 6.0, 9.0, 12.0, 18.0, 24.0].contains(&db) {
        Ok(AbsPower::ReductionDb(db))
    } else {
        Err(err())
    }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// A Cartesian sweep over schemes and their parameters. Axes irrelevant to a
/// scheme (e.g. `bias-db` for plain resource partitioning) do not multiply
/// the combo count.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub modes: Vec<String>,
    pub picos_per_sector: Vec<usize>,
    pub biases_db: Vec<f64>,
    pub abs_ratios: Vec<(usize, usize)>,
    pub abs_powers: Vec<AbsPower>,
    pub scenario: ScenarioConfig,
    pub num_ttis: u64,
    pub warmup_ttis: u64,
    pub num_drops: u64,
    pub master_seed: u64,
    pub drop_seeds: Option<Vec<u64>>,
    pub threads: usize,
    pub fading_enabled: bool,
    pub shadowing_enabled: bool,
    pub out_dir: PathBuf,
    pub logs: LogConfig,
}

/// One expanded sweep cell.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub label: String,
    pub config: ExperimentConfig,
}

impl SweepSpec {
    /// Expands the axes into labeled, fully-resolved experiment configs.
    pub fn expand(&self) -> Result<Vec<RunSpec>> {
        let mut runs = Vec::new();
        for mode_name in &self.modes {
            for &pbs in &self.picos_per_sector {
                let variants: Vec<(String, IcicMode)> = match mode_name.as_str() {
                    "rp" => vec![(String::new(), IcicMode::Rp)],
                    "static-ql" => vec![(String::new(), IcicMode::StaticQl)],
                    "dynamic-ql" => vec![(String::new(), IcicMode::DynamicQl)],
                    "satisfaction" => vec![(String::new(), IcicMode::Satisfaction)],
                    "sf-ql" => vec![(String::new(), IcicMode::SfQl)],
                    "mf-static-ql" => vec![(String::new(), IcicMode::MfStaticQl)],
                    "mf-dynamic-ql" => vec![(String::new(), IcicMode::MfDynamicQl)],
                    "no-icic-cre" => self
                        .biases_db
                        .iter()
                        .map(|&b| {
                            (
                                format!("_b{}", fmt_db(b)),
                                IcicMode::NoIcicCre { bias_db: b },
                            )
                        })
                        .collect(),
                    "fixed-cre-adaptive-abs" => self
                        .biases_db
                        .iter()
                        .map(|&b| {
                            (
                                format!("_b{}", fmt_db(b)),
                                IcicMode::FixedCreAdaptiveAbs { bias_db: b },
                            )
                        })
                        .collect(),
                    "fixed-abs-cre" => {
                        let mut v = Vec::new();
                        for &b in &self.biases_db {
                            for &(muted, period) in &self.abs_ratios {
                                for &power in &self.abs_powers {
                                    let pattern = AbsPattern::prefix(muted, period, power)?;
                                    let power_tag = match power {
                                        AbsPower::FullMute => "mute".to_string(),
                                        AbsPower::ReductionDb(db) => format!("r{}", fmt_db(db)),
                                    };
                                    v.push((
                                        format!("_b{}_abs{muted}of{period}_{power_tag}", fmt_db(b)),
                                        IcicMode::FixedAbsCre {
                                            pattern,
                                            bias_db: b,
                                        },
                                    ));
                                }
                            }
                        }
                        v
                    }
                    other => {
                        return Err(SimError::Config(format!("unknown mode '{other}'")));
                    }
                };
                for (suffix, mode) in variants {
                    let mut scenario = self.scenario.clone();
                    scenario.picos_per_sector = pbs;
                    let label = format!("{mode_name}_p{pbs}{suffix}");
                    let config = ExperimentConfig {
                        label: label.clone(),
                        scenario,
                        mode,
                        num_ttis: self.num_ttis,
                        warmup_ttis: self.warmup_ttis,
                        num_drops: self.num_drops,
                        master_seed: self.master_seed,
                        drop_seeds: self.drop_seeds.clone(),
                        threads: self.threads,
                        fading_enabled: self.fading_enabled,
                        shadowing_enabled: self.shadowing_enabled,
                        out_dir: self.out_dir.clone(),
                        logs: self.logs.clone(),
                    };
                    runs.push(RunSpec { label, config });
                }
            }
        }
        Ok(runs)
    }
}

/// `12` for 12.0, `7.5` for 7.5 — keeps labels free of trailing zeros.
fn fmt_db(db: f64) -> String {
    if db.fract() == 0.0 {
        format!("{}", db as i64)
    } else {
        format!("{db}")
    }
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// Aggregated results for one result set (one sweep combo).
#[derive(Debug, Clone)]
pub struct RunStats {
    pub label: String,
    pub mode_name: String,
    pub scenario_key: String,
    pub num_drops: u64,
    /// Mean per-UE throughput pooled over all drops, bits/s.
    pub mean_bps: f64,
    pub p5_bps: f64,
    pub p50_bps: f64,
    /// Mean per-macro-cell throughput across drops, bits/s.
    pub macro_bps_per_cell: f64,
    /// Mean per-picocell throughput across drops, bits/s (0 without picos).
    pub pico_bps_per_cell: f64,
    /// Per-drop convergence TTIs; -1 = not converged within the run.
    pub convergence: Vec<i64>,
    pub converged_fraction: f64,
    pub overload_ttis: u64,
    /// All per-UE throughputs pooled over drops, ascending.
    pub per_ue_bps_sorted: Vec<f64>,
}

/// Runs one resolved experiment: all drops (parallel when asked), per-drop
/// files, then the aggregate file set. Returns the headline statistics.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunStats> {
    config.validate()?;
    fs::create_dir_all(&config.out_dir)
        .map_err(|e| SimError::io(config.out_dir.display().to_string(), e))?;

    let num_drops = config.num_drops as usize;
    let results: Mutex<Vec<Option<Result<DropOutput>>>> =
        Mutex::new((0..num_drops).map(|_| None).collect());
    let next = AtomicU64::new(0);
    let workers = config.threads.min(num_drops).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed) as usize;
                if i >= num_drops {
                    break;
                }
                let out = execute_drop(config, i);
                results.lock().expect("drop results poisoned")[i] = Some(out);
            });
        }
    });

    let outs: Vec<DropOutput> = results
        .into_inner()
        .expect("drop results poisoned")
        .into_iter()
        .map(|slot| slot.expect("drop skipped by worker pool"))
        .collect::<Result<Vec<_>>>()?;

    let stats = aggregate(config, &outs)?;
    write_aggregates(config, &outs, &stats)?;
    Ok(stats)
}

/// Runs one drop and writes its per-drop file set; called from worker
/// threads, touches only `<out>/drop_XX/`.
fn execute_drop(config: &ExperimentConfig, drop_index: usize) -> Result<DropOutput> {
    let dir = config.out_dir.join(format!("drop_{drop_index:02}"));
    fs::create_dir_all(&dir).map_err(|e| SimError::io(dir.display().to_string(), e))?;

    let logs = &config.logs;
    let mut sinr = open_log(
        logs.sinr_every > 0,
        &dir.join("sinr.csv"),
        "tti,ue,rb,cc,sinr_db",
    )?;
    let mut association = open_log(
        logs.association_every > 0,
        &dir.join("association.csv"),
        "tti,ue,cc,serving_cell,er",
    )?;
    let mut qtable = open_log(
        logs.qtable_every > 0,
        &dir.join("qtable.csv"),
        "tti,agent,state,action,q",
    )?;
    let mut x2 = open_log(logs.x2, &dir.join("x2.csv"), "tti,cell,kind,payload")?;
    let mut satisfaction = open_log(
        logs.satisfaction,
        &dir.join("satisfaction.csv"),
        "tti,cell,utility,satisfied,actions",
    )?;
    let mut carrier = open_log(
        logs.carrier,
        &dir.join("carrier.csv"),
        "epoch,cell,primary_cc,bias_cc0_db,bias_cc1_db",
    )?;
    let mut layout = open_log(logs.layout, &dir.join("layout.csv"), "")?;

    let mut loggers = DropLoggers {
        sinr_every: logs.sinr_every,
        association_every: logs.association_every,
        qtable_every: logs.qtable_every,
        sinr: as_dyn(&mut sinr),
        association: as_dyn(&mut association),
        qtable: as_dyn(&mut qtable),
        x2: as_dyn(&mut x2),
        satisfaction: as_dyn(&mut satisfaction),
        carrier: as_dyn(&mut carrier),
        layout: as_dyn(&mut layout),
    };

    let (seed, derive_index) = match &config.drop_seeds {
        Some(seeds) => (seeds[drop_index], 0),
        None => (config.master_seed, drop_index as u64),
    };
    let params = config.drop_params();
    let out = run_drop(&params, seed, derive_index, &mut loggers)?;
    drop(loggers);
    for w in [sinr, association, qtable, x2, satisfaction, carrier, layout]
        .iter_mut()
        .flatten()
    {
        w.flush()
            .map_err(|e| SimError::io(dir.display().to_string(), e))?;
    }

    let tput_path = dir.join("ue_throughput.csv");
    let mut w = file_writer(&tput_path)?;
    writeln!(w, "ue,throughput_bps").map_err(|e| SimError::io(path_str(&tput_path), e))?;
    for (u, bps) in out.per_ue_throughput_bps.iter().enumerate() {
        writeln!(w, "{u},{bps:.6}").map_err(|e| SimError::io(path_str(&tput_path), e))?;
    }
    w.flush().map_err(|e| SimError::io(path_str(&tput_path), e))?;

    let rate_path = dir.join("sum_rate.csv");
    let mut w = file_writer(&rate_path)?;
    writeln!(w, "tti,sum_rate_bps").map_err(|e| SimError::io(path_str(&rate_path), e))?;
    for (tti, bps) in out.sum_rate_trace.iter().enumerate() {
        writeln!(w, "{tti},{bps:.6}").map_err(|e| SimError::io(path_str(&rate_path), e))?;
    }
    w.flush().map_err(|e| SimError::io(path_str(&rate_path), e))?;

    Ok(out)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn file_writer(path: &Path) -> Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(
        fs::File::create(path).map_err(|e| SimError::io(path_str(path), e))?,
    ))
}

/// Creates a log file with its header when enabled.
fn open_log(enabled: bool, path: &Path, header: &str) -> Result<Option<BufWriter<fs::File>>> {
    if !enabled {
        return Ok(None);
    }
    let mut w = file_writer(path)?;
    if !header.is_empty() {
        writeln!(w, "{header}").map_err(|e| SimError::io(path_str(path), e))?;
    }
    Ok(Some(w))
}

fn as_dyn(slot: &mut Option<BufWriter<fs::File>>) -> Option<&mut dyn Write> {
    slot.as_mut().map(|w| w as &mut dyn Write)
}

fn aggregate(config: &ExperimentConfig, outs: &[DropOutput]) -> Result<RunStats> {
    let mut pooled: Vec<f64> = outs
        .iter()
        .flat_map(|o| o.per_ue_throughput_bps.iter().copied())
        .collect();
    if pooled.is_empty() {
        return Err(SimError::Invariant("no UE throughput records".to_string()));
    }
    pooled.sort_by(f64::total_cmp);
    let mean = pooled.iter().sum::<f64>() / pooled.len() as f64;
    let p5 = percentile(&pooled, 5.0)?;
    let p50 = percentile(&pooled, 50.0)?;

    let n = outs.len() as f64;
    let macro_per_cell = outs
        .iter()
        .map(|o| o.macro_throughput_bps / o.num_macro_cells.max(1) as f64)
        .sum::<f64>()
        / n;
    let pico_per_cell = outs
        .iter()
        .map(|o| {
            if o.num_pico_cells == 0 {
                0.0
            } else {
                o.pico_throughput_bps / o.num_pico_cells as f64
            }
        })
        .sum::<f64>()
        / n;

    let convergence: Vec<i64> = outs
        .iter()
        .map(|o| o.convergence_tti.map_or(-1, |t| t as i64))
        .collect();
    let converged = convergence.iter().filter(|t| **t >= 0).count();

    Ok(RunStats {
        label: config.label.clone(),
        mode_name: config.mode.name().to_string(),
        scenario_key: config.scenario_key(),
        num_drops: config.num_drops,
        mean_bps: mean,
        p5_bps: p5,
        p50_bps: p50,
        macro_bps_per_cell: macro_per_cell,
        pico_bps_per_cell: pico_per_cell,
        converged_fraction: converged as f64 / convergence.len() as f64,
        convergence,
        overload_ttis: outs.iter().map(|o| o.overload_ttis).sum(),
        per_ue_bps_sorted: pooled,
    })
}

fn write_aggregates(
    config: &ExperimentConfig,
    outs: &[DropOutput],
    stats: &RunStats,
) -> Result<()> {
    let dir = &config.out_dir;

    let tput_path = dir.join("ue_throughput.csv");
    let mut w = file_writer(&tput_path)?;
    writeln!(w, "drop,ue,throughput_bps").map_err(|e| SimError::io(path_str(&tput_path), e))?;
    for (d, out) in outs.iter().enumerate() {
        for (u, bps) in out.per_ue_throughput_bps.iter().enumerate() {
            writeln!(w, "{d},{u},{bps:.6}").map_err(|e| SimError::io(path_str(&tput_path), e))?;
        }
    }
    w.flush().map_err(|e| SimError::io(path_str(&tput_path), e))?;

    let cdf_path = dir.join("cdf.csv");
    let mut w = file_writer(&cdf_path)?;
    writeln!(w, "throughput_bps,cum_prob").map_err(|e| SimError::io(path_str(&cdf_path), e))?;
    for (value, prob) in cdf_points(&stats.per_ue_bps_sorted) {
        writeln!(w, "{value:.6},{prob:.8}").map_err(|e| SimError::io(path_str(&cdf_path), e))?;
    }
    w.flush().map_err(|e| SimError::io(path_str(&cdf_path), e))?;

    let conv_path = dir.join("convergence.csv");
    let mut w = file_writer(&conv_path)?;
    writeln!(w, "drop,convergence_tti").map_err(|e| SimError::io(path_str(&conv_path), e))?;
    for (d, tti) in stats.convergence.iter().enumerate() {
        writeln!(w, "{d},{tti}").map_err(|e| SimError::io(path_str(&conv_path), e))?;
    }
    w.flush().map_err(|e| SimError::io(path_str(&conv_path), e))?;

    let cx_path = dir.join("complexity.txt");
    fs::write(&cx_path, complexity_text()).map_err(|e| SimError::io(path_str(&cx_path), e))?;

    let summary_path = dir.join("summary.json");
    let summary = serde_json::json!({
        "label": stats.label,
        "mode": stats.mode_name,
        "scenario_key": stats.scenario_key,
        "throughput_bps": {
            "mean": stats.mean_bps,
            "p5": stats.p5_bps,
            "p50": stats.p50_bps,
        },
        "per_cell_bps": {
            "macro": stats.macro_bps_per_cell,
            "pico": stats.pico_bps_per_cell,
        },
        "convergence": {
            "per_drop_tti": stats.convergence,
            "converged_fraction": stats.converged_fraction,
        },
        "overload_ttis": stats.overload_ttis,
        "config": config,
    });
    let mut text = serde_json::to_string_pretty(&summary)
        .map_err(|e| SimError::Config(format!("summary serialization failed: {e}")))?;
    text.push('\n');
    fs::write(&summary_path, text).map_err(|e| SimError::io(path_str(&summary_path), e))?;
    Ok(())
}

/// Memory and per-iteration operation counts of the two learning update
/// routines, formula next to measurement.
fn complexity_text() -> String {
    let a_macro = PowerLevels::macro_unprotected_default().num_actions();
    let a_bias = BIAS_LEVELS_DB.len();
    let a_pico_power = PowerLevels::pico_default().num_actions();
    let a_pico_joint = a_pico_power * a_bias;
    let report = complexity_report(NUM_STATES, a_macro, NUM_STATES, a_pico_joint, 50);
    let mut text = String::new();
    text.push_str("Per-RB learning complexity (9 states per player, 50 RBs)\n");
    text.push_str(&format!(
        "memory_units_q   = (9*{a_macro} + 9*{a_pico_joint}) * 50 = {}\n",
        report.memory_units_q
    ));
    text.push_str(&format!(
        "memory_units_sat = {a_pico_joint} * 50 = {}\n\n",
        report.memory_units_sat
    ));
    text.push_str("ops per iteration: q-learning 4|A|+6, satisfaction 2|A|+7\n");
    for a in [a_bias, a_pico_power, a_pico_joint] {
        let (measured_q, measured_sat) = measured_ops(a);
        text.push_str(&format!(
            "|A|={a:>2}: ops_q formula {} measured {}, ops_sat formula {} measured {}\n",
            ops_q(a),
            measured_q,
            ops_sat(a),
            measured_sat
        ));
    }
    text
}

// ---------------------------------------------------------------------------
// Sweep driver and comparison report
// ---------------------------------------------------------------------------

/// Expands and runs a sweep. A single combo writes into `out_dir` directly;
/// several combos get per-label subdirectories plus `compare.csv` relating
/// same-scenario sets.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<RunStats>> {
    let runs = spec.expand()?;
    if runs.is_empty() {
        return Err(SimError::Config("sweep expands to no runs".to_string()));
    }
    let multi = runs.len() > 1;
    let mut all = Vec::with_capacity(runs.len());
    for run in &runs {
        let mut config = run.config.clone();
        if multi {
            config.out_dir = spec.out_dir.join(&run.label);
        }
        all.push(run_experiment(&config)?);
    }
    if multi {
        let report = compare_report_grouped(&all);
        let path = spec.out_dir.join("compare.csv");
        fs::write(&path, report).map_err(|e| SimError::io(path_str(&path), e))?;
    }
    Ok(all)
}

/// Relative throughput gains of each set against the first, which must all
/// share one scenario.
pub fn compare_report(sets: &[&RunStats]) -> Result<String> {
    if sets.len() < 2 {
        return Err(SimError::Config(
            "comparison needs at least two result sets".to_string(),
        ));
    }
    let reference = sets[0];
    for s in &sets[1..] {
        if s.scenario_key != reference.scenario_key {
            return Err(SimError::Config(format!(
                "mismatched scenarios: '{}' ran {} but '{}' ran {}",
                reference.label, reference.scenario_key, s.label, s.scenario_key
            )));
        }
    }
    let mut text = String::new();
    for s in sets {
        text.push_str(&compare_row(reference, s));
    }
    Ok(text)
}

fn compare_row(reference: &RunStats, s: &RunStats) -> String {
    let gain = |cand: f64, base: f64| {
        if base > 0.0 {
            (cand / base - 1.0) * 100.0
        } else {
            0.0
        }
    };
    format!(
        "{},{},{:.6},{:.6},{:.6},{:.2},{:.2},{:.2}\n",
        s.label,
        reference.label,
        s.mean_bps,
        s.p50_bps,
        s.p5_bps,
        gain(s.mean_bps, reference.mean_bps),
        gain(s.p50_bps, reference.p50_bps),
        gain(s.p5_bps, reference.p5_bps),
    )
}

/// Groups result sets by scenario (first-appearance order) and compares each
/// group against its first member. Singleton groups still get their row, so
/// every set appears in the report.
pub fn compare_report_grouped(sets: &[RunStats]) -> String {
    let mut text = String::from(
        "label,reference,mean_bps,p50_bps,p5_bps,mean_gain_pct,p50_gain_pct,p5_gain_pct\n",
    );
    let mut keys: Vec<&str> = Vec::new();
    for s in sets {
        if !keys.contains(&s.scenario_key.as_str()) {
            keys.push(&s.scenario_key);
        }
    }
    for key in keys {
        let group: Vec<&RunStats> = sets.iter().filter(|s| s.scenario_key == key).collect();
        for s in &group {
            text.push_str(&compare_row(group[0], s));
        }
    }
    text
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Read;

    fn tiny_settings(out: &Path) -> Settings {
        Settings {
            mode: Some("rp".to_string()),
            pbs: Some("2".to_string()),
            ttis: Some(30),
            drops: Some(2),
            seed: Some(5),
            warmup: Some(10),
            out: Some(out.to_path_buf()),
            threads: Some(1),
            ..Settings::default()
        }
    }

    #[test]
    fn settings_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(
            &path,
            "# experiment\nmode = rp, dynamic-ql\npbs=2,4\nttis = 100\n\nseed=9 # inline comment\nlog-x2 = yes\n",
        )
        .unwrap();
        let s = Settings::from_file(&path).unwrap();
        assert_eq!(s.mode.as_deref(), Some("rp, dynamic-ql"));
        assert_eq!(s.pbs.as_deref(), Some("2,4"));
        assert_eq!(s.ttis, Some(100));
        assert_eq!(s.seed, Some(9));
        assert_eq!(s.log_x2, Some(true));
    }

    #[test]
    fn settings_file_reports_line_and_key() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "ttis = 100\nbogus = 1\n").unwrap();
        let err = Settings::from_file(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("bogus"), "{msg}");

        fs::write(&path, "ttis ninety\n").unwrap();
        let msg = Settings::from_file(&path).unwrap_err().to_string();
        assert!(msg.contains("line 1") && msg.contains("key = value"), "{msg}");

        fs::write(&path, "ttis = ninety\n").unwrap();
        let msg = Settings::from_file(&path).unwrap_err().to_string();
        assert!(msg.contains("line 1") && msg.contains("ttis"), "{msg}");
    }

    #[test]
    fn cli_settings_override_file_settings() {
        let file = Settings {
            ttis: Some(100),
            seed: Some(1),
            ..Settings::default()
        };
        let cli = Settings {
            seed: Some(2),
            ..Settings::default()
        };
        let merged = Settings::merged(file, cli);
        assert_eq!(merged.ttis, Some(100));
        assert_eq!(merged.seed, Some(2));
    }

    #[test]
    fn bool_values_accept_common_spellings() {
        for v in ["true", "yes", "on", "1"] {
            assert_eq!(parse_bool(v), Some(true), "{v}");
        }
        for v in ["false", "no", "off", "0"] {
            assert_eq!(parse_bool(v), Some(false), "{v}");
        }
        assert_eq!(parse_bool("maybe"), None);
    }

    #[test]
    fn abs_ratio_accepts_fraction_and_decimal_forms() {
        assert_eq!(parse_abs_ratio("1/10").unwrap(), (1, 10));
        assert_eq!(parse_abs_ratio("3/10").unwrap(), (3, 10));
        assert_eq!(parse_abs_ratio("0.7").unwrap(), (7, 10));
        assert!(parse_abs_ratio("2/10").is_err());
        assert!(parse_abs_ratio("3/8").is_err());
        assert!(parse_abs_ratio("x").is_err());
    }

    #[test]
    fn abs_power_accepts_mute_and_reference_reductions() {
        assert_eq!(parse_abs_power("mute").unwrap(), AbsPower::FullMute);
        assert_eq!(parse_abs_power("9").unwrap(), AbsPower::ReductionDb(9.0));
        assert_eq!(parse_abs_power("0").unwrap(), AbsPower::ReductionDb(0.0));
        assert!(parse_abs_power("7").is_err());
    }

    #[test]
    fn defaults_give_the_desk_scale() {
        let sweep = Settings::default().into_sweep().unwrap();
        assert_eq!(sweep.modes, vec!["dynamic-ql".to_string()]);
        assert_eq!(sweep.picos_per_sector, vec![2]);
        assert_eq!(sweep.num_ttis, 5000);
        assert_eq!(sweep.num_drops, 10);
        assert_eq!(sweep.warmup_ttis, DEFAULT_WARMUP_TTIS);
        assert_eq!(sweep.scenario.num_sectors, 3);
    }

    #[test]
    fn unknown_mode_is_rejected_at_parse_time() {
        let s = Settings {
            mode: Some("psychic-ql".to_string()),
            ..Settings::default()
        };
        let msg = s.into_sweep().unwrap_err().to_string();
        assert!(msg.contains("psychic-ql") && msg.contains("dynamic-ql"), "{msg}");
    }

    #[test]
    fn sweep_axes_only_multiply_where_relevant() {
        let s = Settings {
            mode: Some("rp,no-icic-cre".to_string()),
            pbs: Some("2,4".to_string()),
            bias_db: Some("0,6,12".to_string()),
            ..Settings::default()
        };
        let runs = s.into_sweep().unwrap().expand().unwrap();
        // rp ignores bias (2 combos); no-icic-cre sweeps it (6 combos)
        assert_eq!(runs.len(), 2 + 6);
        let labels: Vec<&str> = runs.iter().map(|r| r.label.as_str()).collect();
        assert!(labels.contains(&"rp_p2"));
        assert!(labels.contains(&"rp_p4"));
        assert!(labels.contains(&"no-icic-cre_p4_b6"));
        let unique: std::collections::HashSet<&&str> = labels.iter().collect();
        assert_eq!(unique.len(), labels.len(), "labels must be unique");
    }

    #[test]
    fn abs_sweep_labels_carry_pattern_and_power() {
        let s = Settings {
            mode: Some("fixed-abs-cre".to_string()),
            bias_db: Some("6".to_string()),
            abs_ratio: Some("1/10,3/10".to_string()),
            abs_reduction_db: Some("mute,9".to_string()),
            ..Settings::default()
        };
        let runs = s.into_sweep().unwrap().expand().unwrap();
        assert_eq!(runs.len(), 4);
        let labels: Vec<&str> = runs.iter().map(|r| r.label.as_str()).collect();
        assert!(labels.contains(&"fixed-abs-cre_p2_b6_abs1of10_mute"));
        assert!(labels.contains(&"fixed-abs-cre_p2_b6_abs3of10_r9"));
    }

    #[test]
    fn seeds_list_must_match_drop_count() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = tiny_settings(dir.path());
        s.seeds = Some("1,2,3".to_string());
        let runs = s.into_sweep().unwrap().expand().unwrap();
        let err = run_experiment(&runs[0].config).unwrap_err();
        assert!(err.to_string().contains("3 values for 2 drops"));
    }

    #[test]
    fn compare_requires_two_sets_and_matching_scenarios() {
        let a = fake_stats("a", "s1", 10.0);
        let b = fake_stats("b", "s2", 12.0);
        assert!(compare_report(&[&a]).is_err());
        let msg = compare_report(&[&a, &b]).unwrap_err().to_string();
        assert!(msg.contains("mismatched scenarios"), "{msg}");
    }

    #[test]
    fn identical_sets_compare_at_zero_gain() {
        let a = fake_stats("a", "s1", 10.0);
        let b = fake_stats("b", "s1", 10.0);
        let report = compare_report(&[&a, &b]).unwrap();
        let row = report.lines().nth(1).unwrap();
        assert!(row.ends_with("0.00,0.00,0.00"), "{row}");
    }

    #[test]
    fn grouped_report_compares_within_scenarios_only() {
        let sets = vec![
            fake_stats("rp_p2", "p2", 10.0),
            fake_stats("ql_p2", "p2", 15.0),
            fake_stats("rp_p4", "p4", 20.0),
            fake_stats("ql_p4", "p4", 30.0),
        ];
        let report = compare_report_grouped(&sets);
        let rows: Vec<&str> = report.lines().collect();
        assert_eq!(rows.len(), 5); // header + 4
        assert!(rows[2].starts_with("ql_p2,rp_p2,") && rows[2].ends_with("50.00,50.00,50.00"));
        assert!(rows[4].starts_with("ql_p4,rp_p4,") && rows[4].ends_with("50.00,50.00,50.00"));
    }

    fn fake_stats(label: &str, key: &str, bps: f64) -> RunStats {
        RunStats {
            label: label.to_string(),
            mode_name: label.to_string(),
            scenario_key: key.to_string(),
            num_drops: 1,
            mean_bps: bps,
            p5_bps: bps,
            p50_bps: bps,
            macro_bps_per_cell: bps,
            pico_bps_per_cell: bps,
            convergence: vec![0],
            converged_fraction: 1.0,
            overload_ttis: 0,
            per_ue_bps_sorted: vec![bps],
        }
    }

    fn read(path: &Path) -> String {
        let mut text = String::new();
        fs::File::open(path)
            .unwrap()
            .read_to_string(&mut text)
            .unwrap();
        text
    }

    #[test]
    fn experiment_writes_the_full_file_set() {
        let dir = tempfile::tempdir().unwrap();
        let runs = tiny_settings(dir.path()).into_sweep().unwrap().expand().unwrap();
        assert_eq!(runs.len(), 1);
        let stats = run_experiment(&runs[0].config).unwrap();
        assert!(stats.mean_bps > 0.0);
        assert_eq!(stats.convergence, vec![0, 0]); // static scheme: instant

        for name in [
            "ue_throughput.csv",
            "cdf.csv",
            "convergence.csv",
            "complexity.txt",
            "summary.json",
        ] {
            assert!(dir.path().join(name).is_file(), "{name} missing");
        }
        for d in ["drop_00", "drop_01"] {
            assert!(dir.path().join(d).join("ue_throughput.csv").is_file());
            assert!(dir.path().join(d).join("sum_rate.csv").is_file());
        }

        let tput = read(&dir.path().join("ue_throughput.csv"));
        assert!(tput.starts_with("drop,ue,throughput_bps\n"));
        // 2 drops × 90 UEs + header
        assert_eq!(tput.lines().count(), 1 + 2 * 90);

        let cx = read(&dir.path().join("complexity.txt"));
        assert!(cx.contains("6750") && cx.contains("600"), "{cx}");
        assert!(cx.contains("ops_q formula 54 measured 54"), "{cx}");
        assert!(cx.contains("ops_sat formula 31 measured 31"), "{cx}");
    }

    #[test]
    fn repeat_runs_are_byte_identical_across_thread_counts() {
        let mut texts = Vec::new();
        for threads in [1, 3] {
            let dir = tempfile::tempdir().unwrap();
            let mut settings = tiny_settings(dir.path());
            settings.threads = Some(threads);
            settings.drops = Some(3);
            let runs = settings.into_sweep().unwrap().expand().unwrap();
            run_experiment(&runs[0].config).unwrap();
            let mut bundle = String::new();
            for name in ["ue_throughput.csv", "cdf.csv", "convergence.csv"] {
                bundle.push_str(&read(&dir.path().join(name)));
            }
            for d in 0..3 {
                bundle.push_str(&read(
                    &dir.path().join(format!("drop_{d:02}")).join("sum_rate.csv"),
                ));
            }
            texts.push(bundle);
        }
        assert_eq!(texts[0], texts[1]);
    }

    #[test]
    fn sweep_writes_subdirectories_and_compare_report() {
        let dir = tempfile::tempdir().unwrap();
        let mut settings = tiny_settings(dir.path());
        settings.mode = Some("rp,no-icic-cre".to_string());
        settings.bias_db = Some("0".to_string());
        let sweep = settings.into_sweep().unwrap();
        let stats = run_sweep(&sweep).unwrap();
        assert_eq!(stats.len(), 2);
        assert!(dir.path().join("rp_p2").join("summary.json").is_file());
        assert!(dir
            .path()
            .join("no-icic-cre_p2_b0")
            .join("summary.json")
            .is_file());
        let report = read(&dir.path().join("compare.csv"));
        assert!(report.starts_with("label,reference,"));
        assert_eq!(report.lines().count(), 3);
        // both sets share the scenario, so both compare against the first
        assert!(report.lines().nth(2).unwrap().contains(",rp_p2,"));
    }

    #[test]
    fn optional_logs_are_created_with_headers() {
        let dir = tempfile::tempdir().unwrap();
        let mut settings = tiny_settings(dir.path());
        settings.mode = Some("dynamic-ql".to_string());
        settings.ttis = Some(25);
        settings.drops = Some(1);
        settings.sinr_every = Some(10);
        settings.association_every = Some(20);
        settings.qtable_every = Some(20);
        settings.log_x2 = Some(true);
        settings.log_layout = Some(true);
        let runs = settings.into_sweep().unwrap().expand().unwrap();
        run_experiment(&runs[0].config).unwrap();
        let drop_dir = dir.path().join("drop_00");
        assert!(read(&drop_dir.join("sinr.csv")).starts_with("tti,ue,rb,cc,sinr_db\n"));
        let assoc = read(&drop_dir.join("association.csv"));
        assert!(assoc.lines().count() > 90, "association snapshots missing");
        assert!(read(&drop_dir.join("qtable.csv")).lines().count() > 1);
        assert!(read(&drop_dir.join("layout.csv")).starts_with("id,type,x,y,tag\n"));
        assert!(drop_dir.join("x2.csv").is_file());
    }
}
