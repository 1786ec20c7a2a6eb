//! Command-line front end for the interval-map thermodynamics library:
//! parameter sweeps, reproducible simulations, and machine-readable JSON/CSV
//! outputs, plus the acceptance suite behind `verify`.

pub mod acceptance;
pub mod commands;
pub mod envelope;
pub mod grid;
pub mod output;

/// Exit code for validation failures (bad flags, violated preconditions,
/// grid caps).
pub const EXIT_VALIDATION: i32 = 2;
/// Exit code for numerical non-convergence.
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "LAMBDA_THERMO_THREADS";

/// Classify a core error into an exit code.
pub fn exit_code_for(err: &lambda_thermo_core::Error) -> i32 {
    use lambda_thermo_core::Error::*;
    match err {
        NonConvergence { .. } | BracketFailure { .. } => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}
