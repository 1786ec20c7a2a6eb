//! Thermodynamic formalism for the family `F_lambda` of countably piecewise
//! linear interval maps on `(0,1]`.
//!
//! For a parameter `lambda` in `(0,1)` the map has full branches on the
//! partition cells `W_n = (lambda^n, lambda^{n-1}]`, with slope
//! `1/(1-lambda)` on `W_1` and `1/(lambda(1-lambda))` everywhere else.  The
//! crate computes the objects attached to the geometric potential
//! `Phi_t = -t log |F'|`:
//!
//! * exact symbolic iteration and cylinder combinatorics ([`map`]),
//! * truncated transfer-operator matrices, their characteristic polynomials
//!   and leading eigenvalues, and the closed-form pressure function with its
//!   second-order phase transition ([`spectra`]),
//! * conformal and invariant state measures, eigenfunctions and the
//!   variational identity ([`measures`]),
//! * random-walk simulation, recurrence/transience classification and
//!   partition functions, including the null-recurrent binomial identities
//!   ([`stochastic`]),
//! * Hausdorff dimensions of escaping and hyperbolic sets ([`dimension`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature simply routes float math through the standard library.
//!
//! ```
//! use lambda_thermo_core::{map, measures, spectra, stochastic};
//!
//! // pressure vanishes at t = 1 for lambda <= 1/2, and the conformal
//! // measure there is the geometric law with ratio lambda^t
//! let p = spectra::pressure_closed(0.3, 1.0);
//! assert!(p.abs() < 1e-14);
//! let m = measures::conformal_measure(0.3, 1.0, p).unwrap();
//! assert!((m.mass(1) - 0.7).abs() < 1e-14);
//! assert!(measures::conformal_residual(&m, 0.3, 1.0, p, 100) < 1e-12);
//!
//! // the interval map itself: one exact step from the middle of cell 2
//! let params = map::MapParams::new(0.3).unwrap();
//! let pt = map::StatePoint::new(2, 0.5).unwrap();
//! assert_eq!(map::step(pt, &params).unwrap().state, 2);
//!
//! // recurrence classification with certificates
//! let class = stochastic::classify(0.3, 1.0).unwrap();
//! assert_eq!(class.class, stochastic::Recurrence::PositiveRecurrent);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod dimension;
pub mod map;
pub(crate) mod math;
pub mod measures;
pub mod rational;
pub mod spectra;
pub mod stochastic;

use alloc::string::String;
use core::fmt;

pub use map::{CylinderWord, MapParams, PotentialParams, StatePoint};
pub use measures::{StateMeasure, TailLaw};
pub use spectra::{OperatorKind, SpectralResult, TruncatedOperator};
pub use stochastic::{Recurrence, WalkConfig, WalkStats};

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the operation's domain.
    Domain(String),
    /// A cylinder word violates the one-step-down admissibility rule.
    InadmissibleWord,
    /// No `(t,p)`-conformal measure exists for the requested shift `p`.
    NoConformalMeasure { p: f64, p_conf: f64 },
    /// No invariant probability absolutely continuous w.r.t. the conformal
    /// measure exists at these parameters.
    NoInvariantMeasure(String),
    /// Iterative eigensolve failed to reach the requested residual.
    NonConvergence { iterations: usize, residual: f64 },
    /// A root bracket did not change sign.
    BracketFailure {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    /// Evaluation at a pole of the function.
    Pole(&'static str),
    /// The operation is not defined in this parameter regime.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InadmissibleWord => {
                write!(f, "inadmissible cylinder word (needs e[k+1] >= e[k] - 1)")
            }
            Error::NoConformalMeasure { p, p_conf } => write!(
                f,
                "no conformal measure: shift p = {p} lies below the conformal pressure {p_conf}"
            ),
            Error::NoInvariantMeasure(msg) => write!(f, "no invariant probability: {msg}"),
            Error::NonConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "eigensolve did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::BracketFailure { lo, hi, f_lo, f_hi } => write!(
                f,
                "bracket failure: f({lo}) = {f_lo}, f({hi}) = {f_hi} do not straddle zero"
            ),
            Error::Pole(what) => write!(f, "evaluation at a pole: {what}"),
            Error::Unsupported(msg) => write!(f, "unsupported in this regime: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
