//! Error types shared by every layer of the simulator.

use thiserror::Error;

/// Anything that can go wrong while configuring or running a simulation.
#[derive(Debug, Error)]
pub enum SimError {
    /// A configuration value is out of range, inconsistent, or unparseable.
    #[error("configuration error: {0}")]
    Config(String),

    /// Random placement could not satisfy a minimum-distance constraint
    /// within the attempt budget. Names the violated constraint so the
    /// scenario can be fixed instead of silently retried forever.
    #[error("infeasible scenario: could not place {entity} (constraint {constraint}) within {attempts} attempts")]
    Infeasible {
        entity: String,
        constraint: String,
        attempts: u64,
    },

    /// A runtime contract was broken (power cap exceeded after projection,
    /// schedule overlap, UE without any candidate cell, ...). Indicates a bug
    /// or a corrupted input, never a tolerable condition.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Failure reading or writing run artifacts.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl SimError {
    /// Convenience constructor for [`SimError::Io`].
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: config 1, infeasible 2, invariant 3,
    /// i/o counts as a config-level failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) | SimError::Io { .. } => 1,
            SimError::Infeasible { .. } => 2,
            SimError::Invariant(_) => 3,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, SimError>;
