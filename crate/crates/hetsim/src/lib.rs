//! System-level simulator for a two-tier LTE-A heterogeneous network downlink.
//!
//! One tri-sector macro site shares its spectrum with a layer of low-power
//! picocells. Victim users in the picocells' expanded regions are protected by
//! inter-cell interference coordination (ICIC), and this crate implements the
//! whole ladder of schemes, from classical baselines to self-organizing
//! learners:
//!
//! * static resource partitioning and cell range expansion with fixed
//!   almost-blank-subframe (ABS) patterns ([`icic`]),
//! * distributed Q-learning on per-resource-block power and bias actions, in a
//!   static (pico-only) and a dynamic (pico + macro) flavor ([`qlearn`]),
//! * satisfaction-equilibrium learning, which stops adapting as soon as every
//!   pico meets its utility target ([`satisfaction`]),
//! * carrier-aggregation variants that additionally learn the component
//!   carrier split, with single-flow and multi-flow user association
//!   ([`carrier`]).
//!
//! Everything is deterministic: a run is fully described by its configuration
//! and a master seed, drops may execute in parallel without changing a single
//! output byte, and the emitted CSV/JSON files are byte-identical across
//! repeats.
//!
//! # Layout of the crate
//!
//! | module | contents |
//! |--------|----------|
//! | [`topology`] | scenario parameters, hexagonal sector geometry, random drops |
//! | [`radio`] | path loss, antennas, shadowing, fast fading, SINR, rate |
//! | [`association`] | biased RSRP cell selection and expanded-region flags |
//! | [`scheduling`] | per-cell proportional-fair resource-block assignment |
//! | [`icic`] | resource partitioning, ABS patterns, adaptive muting masks |
//! | [`qlearn`] | tabular Q-learning primitives and instrumented op counts |
//! | [`satisfaction`] | probability-update learning and equilibrium detection |
//! | [`carrier`] | component-carrier plans for the aggregation schemes |
//! | [`sim`] | the per-TTI engine tying channel, scheduler and learners together |
//! | [`metrics`] | throughput percentiles, convergence traces, complexity reports |
//! | [`runner`] | experiment orchestration, sweeps, CSV/JSON emission |
//!
//! # Running things
//!
//! The `examples/` directory is the front door; each example is a small,
//! fast, self-contained study:
//!
//! ```text
//! cargo run --example layout_drop            # drop and export a network layout
//! cargo run --example baseline_schemes      # classical ICIC baselines side by side
//! cargo run --example time_domain_qlearning # static vs dynamic Q-learning
//! cargo run --example satisfaction_learning # satisfaction equilibrium search
//! cargo run --example carrier_aggregation   # single-flow vs multi-flow CA
//! cargo run --example abs_power_reduction   # reduced-power ABS sweep
//! cargo run --example pico_density          # throughput vs number of picocells
//! cargo run --example complexity_accounting # measured op counts vs formulas
//! cargo run --example convergence_trace     # policy-freeze detection
//! ```
//!
//! The thin `hetsim` binary drives full experiments from the command line:
//!
//! ```text
//! hetsim --mode dynamic-ql --pbs 2 --ttis 5000 --drops 10 --seed 7 --out out/
//! ```

pub mod association;
pub mod carrier;
pub mod error;
pub mod icic;
pub mod metrics;
pub mod qlearn;
pub mod radio;
pub mod rng;
pub mod runner;
pub mod satisfaction;
pub mod scheduling;
pub mod sim;
pub mod topology;
pub mod units;

pub use error::SimError;
pub use runner::{run_experiment, ExperimentConfig};
pub use topology::ScenarioConfig;
