//! Riemann zeta, Hurwitz zeta, the pole-subtracted zeta, and the periodic
//! zeta F(s, a) = sum_{n>=1} e^{2 pi i n a} n^{-s}.
//!
//! Everything runs on a fixed-depth Euler-Maclaurin formula: 30 initial
//! terms and Bernoulli corrections through B_30. The validated strip is
//! Re(s) > -5, |Im(s)| <= 100; outside it a domain error is returned rather
//! than a silently degraded value.

use crate::cx::{rpow, C64};
use crate::error::{Error, Result};
use crate::specfun::bernoulli::bernoulli_over_factorial;

const EM_TERMS: usize = 30;
const EM_DEPTH: usize = 15; // Bernoulli corrections through B_30
const RE_MIN: f64 = -5.0;
const IM_MAX: f64 = 100.0;

fn strip_check(s: C64, what: &str) -> Result<()> {
    if s.re <= RE_MIN || s.im.abs() > IM_MAX {
        return Err(Error::Domain(format!(
            "{what} validated for Re(s) > {RE_MIN}, |Im(s)| <= {IM_MAX}; got s = {s}"
        )));
    }
    Ok(())
}

/// Euler-Maclaurin tail for sum over (n + a)^{-s}, n >= M, including the
/// integral term (M+a)^{1-s}/(s-1).
fn em_tail(s: C64, base: f64) -> C64 {
    // base = M + a
    let binv = 1.0 / base;
    let bs = rpow(base, -s); // base^{-s}
    let mut out = bs * base / (s - 1.0) + 0.5 * bs;
    // sum_j B_2j/(2j)! * s(s+1)...(s+2j-2) * base^{-s-2j+1}
    let mut poch = s; // running product s(s+1)...(s+2j-2)
    let mut bpow = bs * binv; // base^{-s-1}
    for j in 1..=EM_DEPTH {
        out += bernoulli_over_factorial(j) * poch * bpow;
        poch *= (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        bpow *= binv * binv;
    }
    out
}

/// Riemann zeta on the validated strip, s != 1.
pub fn riemann_zeta(s: C64) -> Result<C64> {
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::Pole("zeta at s = 1".into()));
    }
    strip_check(s, "riemann_zeta")?;
    let mut sum = C64::new(0.0, 0.0);
    for n in 1..EM_TERMS {
        sum += rpow(n as f64, -s);
    }
    Ok(sum + em_tail(s, EM_TERMS as f64))
}

/// Hurwitz zeta(s, a) = sum_{n>=0} (n + a)^{-s} for a > 0 on the validated
/// strip, s != 1.
pub fn hurwitz_zeta(s: C64, a: f64) -> Result<C64> {
    if a <= 0.0 {
        return Err(Error::Domain(format!("hurwitz_zeta requires a > 0, got a = {a}")));
    }
    if (s - 1.0).norm() < 1e-12 {
        return Err(Error::Pole("hurwitz zeta at s = 1".into()));
    }
    strip_check(s, "hurwitz_zeta")?;
    let mut sum = C64::new(0.0, 0.0);
    for n in 0..EM_TERMS {
        sum += rpow(n as f64 + a, -s);
    }
    Ok(sum + em_tail(s, EM_TERMS as f64 + a))
}

/// e^y - 1 computed stably for complex y.
fn cexpm1(y: C64) -> C64 {
    if y.norm() > 0.5 {
        return y.exp() - 1.0;
    }
    let mut term = y;
    let mut sum = y;
    for n in 2..40 {
        term *= y / n as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

/// The entire function zeta(1 + x) - 1/x; equals the Euler constant at x = 0.
///
/// For |x| <= 1/4 every Euler-Maclaurin piece is evaluated in a form that is
/// regular at x = 0 (the integral term (N^{-x} - 1)/x goes through a stable
/// expm1); otherwise the direct subtraction is accurate.
pub fn zeta_near_pole(x: C64) -> Result<C64> {
    if x.norm() >= 10.0 {
        return Err(Error::Domain(format!("zeta_near_pole desk range is |x| < 10, got {x}")));
    }
    if x.norm() > 0.25 {
        return Ok(riemann_zeta(C64::new(1.0, 0.0) + x)? - 1.0 / x);
    }
    let n = EM_TERMS as f64;
    let s = C64::new(1.0, 0.0) + x;
    let mut sum = C64::new(0.0, 0.0);
    for k in 1..EM_TERMS {
        sum += rpow(k as f64, -s);
    }
    // (N^{-x} - 1)/x = -ln N * phi(-x ln N), phi(y) = (e^y - 1)/y
    let y = -x * n.ln();
    let integral = if x.norm() < 1e-100 {
        C64::new(-n.ln(), 0.0) * C64::new(1.0, 0.0)
    } else {
        cexpm1(y) / x
    };
    let bs = rpow(n, -s);
    let mut out = sum + integral + 0.5 * bs;
    let binv = 1.0 / n;
    let mut poch = s;
    let mut bpow = bs * binv;
    for j in 1..=EM_DEPTH {
        out += bernoulli_over_factorial(j) * poch * bpow;
        poch *= (s + (2 * j - 1) as f64) * (s + (2 * j) as f64);
        bpow *= binv * binv;
    }
    Ok(out)
}

/// Periodic zeta F(s, a) = sum_{n>=1} e^{2 pi i n a} / n^s.
///
/// Integer a reduces to zeta(s) (needs Re(s) > 1). Otherwise the Hurwitz
/// identity (DLMF 25.13.2)
///   F(s, a) = (2 pi)^{s-1} Gamma(1-s) [ e^{i pi (1-s)/2} zeta(1-s, a)
///             + e^{-i pi (1-s)/2} zeta(1-s, 1-a) ]
/// is used, which requires Re(s) > 0 and s away from the poles of
/// Gamma(1-s) at positive integers.
pub fn periodic_zeta(s: C64, a: f64) -> Result<C64> {
    use crate::specfun::gamma::log_gamma;
    let frac = a - a.floor();
    if frac < 1e-14 || frac > 1.0 - 1e-14 {
        if s.re <= 1.0 {
            return Err(Error::Domain(format!(
                "periodic_zeta with integer a diverges unless Re(s) > 1; got s = {s}"
            )));
        }
        return riemann_zeta(s);
    }
    if s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "periodic_zeta requires Re(s) > 0 for non-integer a; got s = {s}"
        )));
    }
    if s.im == 0.0 && (s.re - s.re.round()).abs() < 1e-9 && s.re.round() >= 1.0 {
        return Err(Error::Domain(format!(
            "periodic_zeta identity route degenerates at integer s = {}", s.re
        )));
    }
    if 1.0 - s.re <= RE_MIN {
        return Err(Error::Domain(format!(
            "periodic_zeta identity route needs Re(s) < {}; got s = {s}",
            1.0 - RE_MIN
        )));
    }
    let one_minus_s = C64::new(1.0, 0.0) - s;
    let phase = C64::new(0.0, std::f64::consts::FRAC_PI_2) * one_minus_s;
    let za = hurwitz_zeta(one_minus_s, frac)?;
    let zb = hurwitz_zeta(one_minus_s, 1.0 - frac)?;
    let pref = (log_gamma(one_minus_s)? + (s - 1.0) * (2.0 * std::f64::consts::PI).ln()).exp();
    Ok(pref * (phase.exp() * za + (-phase).exp() * zb))
}

/// Divisor sum sigma_s(m) = sum_{d | m} d^s with complex exponent.
pub fn divisor_sigma(m: u64, s: C64) -> C64 {
    debug_assert!(m >= 1);
    let mut out = C64::new(0.0, 0.0);
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            out += rpow(d as f64, s);
            let e = m / d;
            if e != d {
                out += rpow(e as f64, s);
            }
        }
        d += 1;
    }
    out
}

/// Divisors of m in increasing order.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
