//! Completed Hecke L-functions and Petersson norms.
//!
//! For a normalized eigenform f of weight k the completed L-function in the
//! default convention is
//!   L*(f, s) = (2 pi)^{-s} Gamma(s) L(f, s)
//!            = sum_n a(n) [ Gamma(s, 2 pi n) / (2 pi n)^s
//!                           + (-1)^{k/2} Gamma(k-s, 2 pi n) / (2 pi n)^{k-s} ],
//! an entire function satisfying L*(f, k-s) = (-1)^{k/2} L*(f, s). The
//! incomplete-gamma expansion converges like e^{-2 pi n} and is truncated
//! adaptively. A (2 pi)^{+s} variant is kept available because the two
//! conventions differ by (2 pi)^{2s} and only one of them can satisfy the
//! spectral identity; `kernel::convention_probe` separates them numerically.
//!
//! The Petersson norm <f, f> = int_F |f(x+iy)|^2 y^{k-2} dx dy over the
//! standard fundamental domain splits into an exact piece above y = 1
//! (x-integration kills all off-diagonal terms, leaving incomplete gamma
//! integrals) plus a two-dimensional quadrature over the arc region
//! sqrt(3)/2 <= y <= 1, sqrt(1-y^2) <= |x| <= 1/2.

use serde::{Deserialize, Serialize};

use crate::cx::{rpow, C64};
use crate::error::{Error, Result};
use crate::qexp::Eigenform;
use crate::specfun::incgamma::upper_gamma_norm;
use crate::specfun::quad::scaled_rule;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Sign of the 2 pi exponent in the completion factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LStarConvention {
    /// L* = (2 pi)^{-s} Gamma(s) L  (satisfies the functional equation).
    #[default]
    TwoPiMinus,
    /// L* = (2 pi)^{+s} Gamma(s) L.
    TwoPiPlus,
}

impl LStarConvention {
    pub fn tag(self) -> &'static str {
        match self {
            LStarConvention::TwoPiMinus => "two_pi_minus",
            LStarConvention::TwoPiPlus => "two_pi_plus",
        }
    }
}

/// Partial Dirichlet sum with a rigorous tail bound.
#[derive(Debug, Clone, Copy)]
pub struct DirichletValue {
    pub value: C64,
    pub tail_bound: f64,
}

/// L(f, s) = sum a(n) n^{-s} truncated at `cutoff`, in the absolute
/// convergence half-plane Re(s) > (k+1)/2 + 1/2. The tail is bounded with
/// the Deligne estimate |a(n)| <= d(n) n^{(k-1)/2} <= 2 n^{k/2}.
pub fn dirichlet_l(f: &Eigenform, s: C64, cutoff: usize) -> Result<DirichletValue> {
    let k = f.weight as f64;
    if s.re <= (k + 1.0) / 2.0 + 0.5 {
        return Err(Error::Domain(format!(
            "dirichlet_l needs Re(s) > {}, got {}",
            (k + 1.0) / 2.0 + 0.5,
            s.re
        )));
    }
    if cutoff > f.len() {
        return Err(Error::Coefficients { required: cutoff, available: f.len() });
    }
    let mut value = C64::new(0.0, 0.0);
    for n in 1..=cutoff {
        value += f.a(n) * rpow(n as f64, -s);
    }
    // sum_{n > N} 2 n^{k/2 - Re s} <= 2 N^{k/2 - Re s + 1} / (Re s - k/2 - 1)
    let expo = k / 2.0 - s.re;
    let tail_bound = 2.0 * (cutoff as f64).powf(expo + 1.0) / (-expo - 1.0);
    Ok(DirichletValue { value, tail_bound })
}

/// Adaptive-cutoff hard cap for the incomplete-gamma expansion.
const LSTAR_MAX_TERMS: usize = 200;

/// Estimate of the index where incomplete-gamma terms drop below 1e-15:
/// solve 2 pi n - (k/2) ln n > 36 roughly.
fn required_terms(k: f64) -> usize {
    let mut n = 3.0f64;
    for _ in 0..64 {
        let next = (36.0 + (k / 2.0) * n.ln()) / TWO_PI;
        if (next - n).abs() < 0.5 {
            break;
        }
        n = next;
    }
    (n.ceil() as usize + 2).min(LSTAR_MAX_TERMS)
}

/// Completed L-function at any s with Re(s) in the validated strip
/// [-2, k+2].
pub fn lstar(f: &Eigenform, s: C64, convention: LStarConvention) -> Result<C64> {
    let k = f.weight as f64;
    if s.re < -2.0 || s.re > k + 2.0 {
        return Err(Error::Domain(format!(
            "lstar validated for Re(s) in [-2, {}], got {}",
            k + 2.0,
            s.re
        )));
    }
    let sign = if f.weight / 2 % 2 == 0 { 1.0 } else { -1.0 };
    let need = required_terms(k);
    if f.len() < need.min(8) {
        return Err(Error::Coefficients { required: need, available: f.len() });
    }
    let ks = C64::new(k, 0.0) - s;
    let mut sum = C64::new(0.0, 0.0);
    let mut small_streak = 0;
    let mut n = 1usize;
    loop {
        if n > f.len() {
            return Err(Error::Coefficients { required: need.max(n), available: f.len() });
        }
        let x = TWO_PI * n as f64;
        let term = f.a(n) * (upper_gamma_norm(s, x)? + sign * upper_gamma_norm(ks, x)?);
        sum += term;
        if term.norm() < 1e-15 * sum.norm().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
        n += 1;
        if n > LSTAR_MAX_TERMS {
            break;
        }
    }
    match convention {
        LStarConvention::TwoPiMinus => Ok(sum),
        LStarConvention::TwoPiPlus => Ok(sum * (2.0 * s * TWO_PI.ln()).exp()),
    }
}

/// Petersson norm <f, f> over the standard fundamental domain.
pub fn petersson_norm(f: &Eigenform) -> Result<f64> {
    if f.len() < 30 {
        return Err(Error::Coefficients { required: 30, available: f.len() });
    }
    let k = f.weight as f64;
    // Exact part: int_1^inf int_{-1/2}^{1/2} = sum a(n)^2 Gamma(k-1, 4 pi n)/(4 pi n)^{k-1}
    let km1 = C64::new(k - 1.0, 0.0);
    let mut upper = 0.0f64;
    for n in 1..=f.len().min(48) {
        let x = 2.0 * TWO_PI * n as f64;
        let q = upper_gamma_norm(km1, x)?.re;
        let term = f.a(n) * f.a(n) * q;
        upper += term;
        if term.abs() < 1e-16 * upper.abs() {
            break;
        }
    }
    // Arc region, with Gauss-Legendre doubled until stable.
    let mut prev = arc_integral(f, 24)?;
    for order in [48usize, 96, 192] {
        let next = arc_integral(f, order)?;
        if (next - prev).abs() <= 1e-9 * next.abs() {
            return Ok(upper + next);
        }
        prev = next;
    }
    Err(Error::Convergence(format!(
        "petersson arc quadrature did not stabilize for weight {} (last delta {:.3e})",
        f.weight,
        prev
    )))
}

fn arc_integral(f: &Eigenform, order: usize) -> Result<f64> {
    // Parametrize y = sin(theta): the inner limit x0 = sqrt(1 - y^2) =
    // cos(theta) is then analytic and the sqrt-singularity of dx0/dy at
    // y = 1 disappears (dy = cos(theta) d(theta)).
    let k = f.weight as f64;
    let (thetas, wt) = scaled_rule(order, std::f64::consts::PI / 3.0, std::f64::consts::PI / 2.0);
    let mut total = 0.0f64;
    for (&theta, &wti) in thetas.iter().zip(&wt) {
        let y = theta.sin();
        let x0 = theta.cos();
        if x0 >= 0.5 {
            continue;
        }
        let (xs, wx) = scaled_rule(order, x0, 0.5);
        let mut slice = 0.0f64;
        for (&x, &wxi) in xs.iter().zip(&wx) {
            slice += wxi * f_abs2(f, x, y);
        }
        // the domain is symmetric in x
        total += wti * x0 * 2.0 * slice * y.powf(k - 2.0);
    }
    Ok(total)
}

/// |f(x + iy)|^2 by Horner in q = e^{2 pi i (x + iy)}.
fn f_abs2(f: &Eigenform, x: f64, y: f64) -> f64 {
    let q = C64::new(0.0, TWO_PI * x).exp() * (-TWO_PI * y).exp();
    let n = f.len().min(40);
    let mut val = C64::new(0.0, 0.0);
    for idx in (1..=n).rev() {
        val = (val + f.a(idx)) * q;
    }
    val.norm_sqr()
}
