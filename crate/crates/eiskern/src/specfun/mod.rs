//! Complex special functions: log-gamma and polygammas, incomplete gamma,
//! Riemann/Hurwitz/periodic zeta, the pole-subtracted zeta, the regularized
//! Kummer function, and divisor sums with complex exponent.

pub mod bernoulli;
pub mod gamma;
pub mod incgamma;
pub mod kummer;
pub mod quad;
pub mod zeta;

pub use gamma::{digamma, gamma, log_gamma, tetragamma, trigamma};
pub use incgamma::{upper_gamma_norm, upper_incomplete_gamma};
pub use kummer::kummer_f11;
pub use zeta::{divisor_sigma, divisors, hurwitz_zeta, periodic_zeta, riemann_zeta, zeta_near_pole};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015329;
