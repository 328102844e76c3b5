//! Experiment runner for `be-spectral`: TOML configurations, parallel
//! sweeps, CSV / JSON reports and the reference check suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barriers;
pub mod config;
pub mod report;
pub mod run;
pub mod suite;

pub use config::ExperimentConfig;
pub use report::{Format, RunReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("solver failure: {0}")]
    Solver(String),
}

impl LabError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::Io(_) => 2,
            LabError::Solver(_) => 3,
        }
    }
}

impl From<be_spectral::Error> for LabError {
    fn from(e: be_spectral::Error) -> Self {
        use be_spectral::Error as E;
        match e {
            E::InvalidModel(_) | E::InvalidProfile(_) | E::PoleRegularity { .. } | E::InvalidArgument(_) => {
                LabError::Config(e.to_string())
            }
            _ => LabError::Solver(e.to_string()),
        }
    }
}

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, LabError> {
    match workers {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| LabError::Io(e.to_string()))?
            .install(f)),
        None => Ok(f()),
    }
}
