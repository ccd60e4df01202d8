//! Numerical machinery around the two-variable Eisenstein kernel for
//! products of completed Hecke L-functions on the full modular group.
//!
//! The crate provides, bottom up:
//!
//! - [`qexp`]: exact q-expansion arithmetic over the rationals, the Victor
//!   Miller basis of the cusp space, Hecke operators, and the normalized
//!   eigenform basis;
//! - [`specfun`]: the complex special functions every formula needs
//!   (log-gamma, digamma, incomplete gamma, Riemann/Hurwitz/periodic zeta,
//!   the regularized Kummer function);
//! - [`lfunc`]: completed L-functions L*(f, s) as entire functions and
//!   Petersson norms;
//! - [`kernel`]: Fourier coefficients of the completed double Eisenstein
//!   series, the spectral expansion over eigenforms, and a direct
//!   matrix-sum oracle;
//! - [`continuation`]: the analytically continued main-term expansions with
//!   explicit remainder envelopes, the pole-cancelled diagonal pair, and the
//!   derivative sup bound;
//! - [`nonvanish`]: region scans certifying main-term dominance, threshold
//!   weight estimation, the shifted central-line quantity, and the zeta
//!   ratio separation check;
//! - [`report`]: serialization of all reports with reproducibility metadata.
//!
//! The CLI in `src/main.rs` surfaces each capability as a subcommand.

pub mod continuation;
pub mod cx;
pub mod error;
pub mod kernel;
pub mod lfunc;
pub mod nonvanish;
pub mod qexp;
pub mod report;
pub mod specfun;

pub use cx::{LogScaled, C64};
pub use error::{Error, Result};
