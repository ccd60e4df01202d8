//! Complex branch convention and log-scaled arithmetic.
//!
//! All complex powers in this crate go through [`cpow`], which fixes the
//! branch of z^s = e^{s log z} by log z = log|z| + i arg(z) with
//! -pi < arg(z) <= pi. Products of gamma factors that would overflow f64
//! (e.g. (2 pi)^k / Gamma(k) for k beyond ~170) are carried as [`LogScaled`]
//! values and exponentiated once at the end.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

/// Principal logarithm with arg in (-pi, pi].
///
/// `Complex64::ln` uses `atan2`, which returns -pi for a negative real with
/// a -0.0 imaginary part; adding +0.0 to the imaginary part folds that edge
/// onto the +pi side of the cut.
#[inline]
pub fn clog(z: C64) -> C64 {
    C64::new(z.re, z.im + 0.0).ln()
}

/// z^s = e^{s log z} on the fixed branch. z = 0 maps to 0 (used only with
/// Re(s) > 0 by callers).
#[inline]
pub fn cpow(z: C64, s: C64) -> C64 {
    if z.re == 0.0 && z.im == 0.0 {
        return C64::new(0.0, 0.0);
    }
    (s * clog(z)).exp()
}

/// x^s for real positive x.
#[inline]
pub fn rpow(x: f64, s: C64) -> C64 {
    debug_assert!(x > 0.0);
    (s * x.ln()).exp()
}

/// Wrap a phase into (-pi, pi].
#[inline]
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * std::f64::consts::PI);
    if t > std::f64::consts::PI {
        t -= 2.0 * std::f64::consts::PI;
    }
    t
}

/// A nonzero complex number stored as e^{log_modulus + i phase}.
///
/// Multiplication and division compose additively in the exponent so chains
/// of gamma factors never overflow. `phase` is kept in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScaled {
    pub log_modulus: f64,
    pub phase: f64,
}

impl LogScaled {
    pub fn one() -> Self {
        LogScaled { log_modulus: 0.0, phase: 0.0 }
    }

    /// From a complex logarithm: value = e^{log_value}.
    pub fn from_log(log_value: C64) -> Self {
        LogScaled { log_modulus: log_value.re, phase: wrap_phase(log_value.im) }
    }

    pub fn from_c64(z: C64) -> Self {
        Self::from_log(clog(z))
    }

    /// Exponentiate. Overflows to inf / underflows to 0 like f64.
    pub fn to_c64(self) -> C64 {
        let m = self.log_modulus.exp();
        C64::new(m * self.phase.cos(), m * self.phase.sin())
    }

    pub fn mul(self, other: LogScaled) -> Self {
        LogScaled {
            log_modulus: self.log_modulus + other.log_modulus,
            phase: wrap_phase(self.phase + other.phase),
        }
    }

    pub fn div(self, other: LogScaled) -> Self {
        LogScaled {
            log_modulus: self.log_modulus - other.log_modulus,
            phase: wrap_phase(self.phase - other.phase),
        }
    }

    pub fn mul_c64(self, z: C64) -> C64 {
        self.mul(LogScaled::from_c64(z)).to_c64()
    }

    pub fn abs(self) -> f64 {
        self.log_modulus.exp()
    }
}
