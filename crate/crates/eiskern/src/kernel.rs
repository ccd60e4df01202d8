//! Fourier coefficients of the completed double Eisenstein series and the
//! spectral expansion that pairs with them.
//!
//! For even k >= 6 the completed series E*(z, w) attached to (s, k-s) has
//! the expansion
//!   E*(z,w) = P(s,w,k) sum_{m>=1} c_{s,w,k}(m) e^{2 pi i m z},
//!   P = Gamma(s) Gamma(k-s) Gamma(k-w) / (2^{2-w} pi^{k+1-w} Gamma(k-1)),
//! with
//!   c(m) = (2pi)^s/Gamma(s) m^{s-1} sigma_{w-s}(m) zeta(k-s-w+1)
//!        + (-1)^{k/2} (2pi)^{k-s}/Gamma(k-s) m^{k-s-1} sigma_{w+s-k}(m) zeta(s-w+1)
//!        + (-1)^{k/2} (2pi)^k m^{k-1}/(Gamma(s)Gamma(k-s))
//!          * sum_{a,c>0,(a,c)=1} c^{s-k} a^{-s} sum_{n>=1} n^{w-1} sum_{r|m} r^{w-k}
//!            [ e^{i pi s/2} e^{2 pi i (m/r) n a'/c} f11(s,k; -2 pi i m n/(rac))
//!            + e^{-i pi s/2} e^{-2 pi i (m/r) n a'/c} f11(s,k; 2 pi i m n/(rac)) ],
//! a' the inverse of a mod c in (0, c]. The triple sum converges absolutely
//! exactly on the domain
//!   D = { 2 < Re(s) < k-2, Re(w) < min(Re(s)-1, k-Re(s)-1) }.
//!
//! On the spectral side E*(z,w) = sum_f L*(f,s) L*(f,w) / <f,f> f(z) over
//! the eigenform basis, so P * c(m) must equal
//! sum_f L*(f,s) L*(f,w) a_f(m) / <f,f>; `verify_identity` checks this and
//! `convention_probe` uses it to separate the two L* completions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cx::{clog, cpow, rpow, C64, LogScaled};
use crate::error::{Error, Result};
use crate::lfunc::{lstar, petersson_norm, LStarConvention};
use crate::qexp::{cusp_dim, eigenforms, Eigenform};
use crate::specfun::gamma::log_gamma;
use crate::specfun::kummer::kummer_f11;
use crate::specfun::zeta::{divisor_sigma, divisors, riemann_zeta};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A point (s, w) with its weight and region memberships.
///
/// Regions (all conditions on real parts unless noted):
/// - D:  2 < Re(s) < k-2,  Re(w) < min(Re(s)-1, k-Re(s)-1)   (absolute
///   convergence of the double series),
/// - D1: 2 < Re(s) < k-2,  Re(w) < 0,
/// - F:  3/2 < Re(s), Re(w) < k-2   (the wide continuation strip),
/// - F1(T, delta): (k-1)/2 < Re(s), Re(w) < (k+1)/2,
///   Re(s) + Re(w) < k - delta, |Im(s)|, |Im(w)| <= T   (the central
///   window; depends on the scan parameters).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KernelPoint {
    #[serde(with = "crate::report::c64_serde")]
    pub s: C64,
    #[serde(with = "crate::report::c64_serde")]
    pub w: C64,
    pub k: u64,
    pub in_d: bool,
    pub in_d1: bool,
    pub in_f: bool,
    pub in_f1: bool,
}

impl KernelPoint {
    pub fn new(s: C64, w: C64, k: u64) -> Self {
        let kf = k as f64;
        let in_strip = 2.0 < s.re && s.re < kf - 2.0;
        let in_d = in_strip && w.re < (s.re - 1.0).min(kf - s.re - 1.0);
        let in_d1 = in_strip && w.re < 0.0;
        let in_f = 1.5 < s.re && s.re < kf - 2.0 && 1.5 < w.re && w.re < kf - 2.0;
        KernelPoint { s, w, k, in_d, in_d1, in_f, in_f1: false }
    }

    /// Also decide membership in the central window F1(T, delta).
    pub fn with_window(s: C64, w: C64, k: u64, t: f64, delta: f64) -> Self {
        let mut p = Self::new(s, w, k);
        let kf = k as f64;
        p.in_f1 = (kf - 1.0) / 2.0 < s.re
            && s.re < (kf + 1.0) / 2.0
            && (kf - 1.0) / 2.0 < w.re
            && w.re < (kf + 1.0) / 2.0
            && s.re + w.re < kf - delta
            && s.im.abs() <= t
            && w.im.abs() <= t;
        p
    }

    /// The swapped point (w, s) for the same weight.
    pub fn swapped(&self) -> Self {
        Self::new(self.w, self.s, self.k)
    }
}

/// Truncation cutoffs for the triple sum and its doubling policy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Cutoffs {
    pub ac_init: u32,
    pub n_init: u32,
    pub rel_tol: f64,
    pub max_doublings: u32,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs { ac_init: 8, n_init: 32, rel_tol: 1e-8, max_doublings: 5 }
    }
}

/// Final cutoffs and the last increment observed by the doubling ladder.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Truncation {
    pub a_max: u32,
    pub c_max: u32,
    pub n_max: u32,
    pub tail_estimate: f64,
}

/// c_{s,w,k}(m) with its per-term decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientBreakdown {
    #[serde(with = "crate::report::c64_serde")]
    pub term_i: C64,
    #[serde(with = "crate::report::c64_serde")]
    pub term_ii: C64,
    #[serde(with = "crate::report::c64_serde")]
    pub term_iii: C64,
    #[serde(with = "crate::report::c64_serde")]
    pub term_iv: C64,
    #[serde(with = "crate::report::c64_serde")]
    pub total: C64,
    pub prefactor: LogScaled,
    pub truncation: Truncation,
    /// Sum of absolute values of all pair contributions (monotone in the
    /// cutoffs; used to confirm absolute convergence numerically).
    pub abs_sum: f64,
}

impl CoefficientBreakdown {
    /// The prefactor-completed coefficient P * c(m).
    pub fn completed(&self) -> C64 {
        self.prefactor.mul_c64(self.total)
    }
}

/// P(s, w, k) = Gamma(s)Gamma(k-s)Gamma(k-w) / (2^{2-w} pi^{k+1-w} Gamma(k-1)).
pub fn completed_prefactor(s: C64, w: C64, k: u64) -> Result<LogScaled> {
    let kf = k as f64;
    let log = log_gamma(s)?
        + log_gamma(C64::new(kf, 0.0) - s)?
        + log_gamma(C64::new(kf, 0.0) - w)?
        - (C64::new(2.0, 0.0) - w) * 2f64.ln()
        - (C64::new(kf + 1.0, 0.0) - w) * std::f64::consts::PI.ln()
        - log_gamma(C64::new(kf - 1.0, 0.0))?;
    Ok(LogScaled::from_log(log))
}

/// Cached per-(s, k) state for the many f11(s, k; +-i y) evaluations inside
/// the triple sum: the Taylor prefactor and the two asymptotic gamma factors
/// are hoisted out of the inner loop.
struct F11Cache {
    s: C64,
    k: C64,
    taylor_pref: C64,     // Gamma(s)Gamma(k-s)/Gamma(k)
    lg_s: C64,            // log Gamma(s)
    lg_ks: C64,           // log Gamma(k-s)
    series_cutoff: f64,
}

impl F11Cache {
    fn new(s: C64, k: u64) -> Result<Self> {
        let kc = C64::new(k as f64, 0.0);
        let lg_s = log_gamma(s)?;
        let lg_ks = log_gamma(kc - s)?;
        let lg_k = log_gamma(kc)?;
        Ok(F11Cache {
            s,
            k: kc,
            taylor_pref: (lg_s + lg_ks - lg_k).exp(),
            lg_s,
            lg_ks,
            series_cutoff: 12.0,
        })
    }

    /// f11(s, k; i * y) for real y (either sign).
    fn eval(&self, y: f64) -> Result<C64> {
        let z = C64::new(0.0, y);
        if y.abs() <= self.series_cutoff {
            // Taylor with cached prefactor
            let mut term = C64::new(1.0, 0.0);
            let mut sum = term;
            let mut n = 0f64;
            loop {
                term *= (self.s + n) / (self.k + n) * z / (n + 1.0);
                sum += term;
                n += 1.0;
                if n > y.abs() && term.norm() < 1e-17 * sum.norm().max(1e-300) {
                    return Ok(self.taylor_pref * sum);
                }
                if n > 4000.0 {
                    return Err(Error::Convergence("f11 Taylor stalled".into()));
                }
            }
        }
        if let Some(v) = self.asymptotic(z) {
            return Ok(v);
        }
        kummer_f11(self.s, self.k, z)
    }

    fn asymptotic(&self, z: C64) -> Option<C64> {
        let sum_asym = |p: C64, q: C64, x: C64| -> Option<C64> {
            let mut term = C64::new(1.0, 0.0);
            let mut sum = term;
            for sdx in 0..60 {
                let sf = sdx as f64;
                let next = term * (p + sf) * (q + sf) / ((sf + 1.0) * x);
                if next.norm() >= term.norm() {
                    return if term.norm() < 1e-12 * sum.norm().max(1e-300) {
                        Some(sum)
                    } else {
                        None
                    };
                }
                term = next;
                sum += term;
                if term.norm() < 1e-16 * sum.norm().max(1e-300) {
                    return Some(sum);
                }
            }
            None
        };
        let ba = self.k - self.s;
        let s1 = sum_asym(ba, 1.0 - self.s, z)?;
        let s2 = sum_asym(self.s, self.s - self.k + 1.0, -z)?;
        let t1 = (self.lg_ks + z + (self.s - self.k) * clog(z)).exp() * s1;
        let t2 = self.lg_s.exp() * cpow(-z, -self.s) * s2;
        Some(t1 + t2)
    }
}

/// Modular inverse of a mod c in (0, c]; a' = 1 when c = 1.
fn inverse_mod(a: u64, c: u64) -> u64 {
    if c == 1 {
        return 1;
    }
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (c as i64, (a % c) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert!(r == 1, "inputs must be coprime");
    let m = t.rem_euclid(c as i64) as u64;
    if m == 0 {
        c
    } else {
        m
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The n-sum attached to one coprime pair (a, c):
///   sum_{n>=1} n^{w-1} sum_{r|m} r^{w-k}
///     [ e^{i pi s/2} e^{2 pi i (m/r) n a'/c} f11(s,k; -i y)
///     + e^{-i pi s/2} e^{-2 pi i (m/r) n a'/c} f11(s,k; +i y) ],
///   y = 2 pi m n / (r a c),
/// truncated at n <= n_cap with early exit once terms fall below rel_floor
/// of the running sum for three consecutive n.
fn pair_sum(
    cache: &F11Cache,
    w: C64,
    k: u64,
    m: u64,
    a: u64,
    c: u64,
    n_cap: u32,
    rel_floor: f64,
    abs_floor: f64,
) -> Result<C64> {
    let a_inv = inverse_mod(a % c.max(1), c);
    let kf = k as f64;
    let phase_s = (C64::new(0.0, std::f64::consts::FRAC_PI_2) * cache.s).exp();
    let phase_s_inv = 1.0 / phase_s;
    let divs = divisors(m);
    let mut r_pow: Vec<C64> = Vec::with_capacity(divs.len());
    let mut units: Vec<C64> = Vec::with_capacity(divs.len());
    for &r in &divs {
        r_pow.push(cpow(C64::new(r as f64, 0.0), w - kf));
        // e^{2 pi i (m/r) a'/c}
        let frac = (m / r) as f64 * a_inv as f64 / c as f64;
        units.push(C64::new(0.0, TWO_PI * frac).exp());
    }
    let mut unit_pows: Vec<C64> = vec![C64::new(1.0, 0.0); divs.len()];
    let mut sum = C64::new(0.0, 0.0);
    let mut small_streak = 0u32;
    for n in 1..=n_cap {
        let nw = cpow(C64::new(n as f64, 0.0), w - 1.0);
        let mut term = C64::new(0.0, 0.0);
        for (i, &r) in divs.iter().enumerate() {
            unit_pows[i] *= units[i];
            let y = TWO_PI * (m as f64) * (n as f64) / (r as f64 * a as f64 * c as f64);
            let f_minus = cache.eval(-y)?;
            let f_plus = cache.eval(y)?;
            let up = unit_pows[i];
            term += r_pow[i] * (phase_s * up * f_minus + phase_s_inv * up.conj() * f_plus);
        }
        term *= nw;
        sum += term;
        // Exit once terms are negligible relative to this pair's sum or, in
        // absolute terms, to the whole triple sum (abs_floor already carries
        // a safety margin against the initial n^{Re(w)-1} growth).
        if term.norm() < (rel_floor * sum.norm().max(1e-300)).max(abs_floor) {
            small_streak += 1;
            if small_streak >= 3 && n >= 12 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    Ok(sum)
}

/// One full evaluation of the triple sum at fixed cutoffs (a <= a_max,
/// c <= c_max, n <= n_max). Pairs run in parallel; the reduction is a
/// deterministic pairwise tree over the (a, c)-lexicographic order.
fn triple_sum(
    cache: &F11Cache,
    w: C64,
    k: u64,
    m: u64,
    a_max: u32,
    c_max: u32,
    n_max: u32,
    rel_floor: f64,
) -> Result<(C64, f64)> {
    let s = cache.s;
    let kf = k as f64;
    // The (1, 1) pair sets the scale for the absolute cutoff used to skip
    // negligible high-(a, c) pairs.
    let lead = pair_sum(cache, w, k, m, 1, 1, n_max, rel_floor, 0.0)?;
    let scale = lead.norm().max(1e-300);
    let pairs: Vec<(u64, u64)> = (1..=a_max as u64)
        .flat_map(|a| (1..=c_max as u64).map(move |c| (a, c)))
        .filter(|&(a, c)| gcd(a, c) == 1 && (a, c) != (1, 1))
        .collect();
    let contributions: Vec<Result<(C64, f64)>> = pairs
        .par_iter()
        .map(|&(a, c)| {
            let weight = cpow(C64::new(c as f64, 0.0), s - kf) * rpow(a as f64, -s);
            let abs_floor = rel_floor * 1e-4 * scale / weight.norm().max(1e-300);
            let inner = pair_sum(cache, w, k, m, a, c, n_max, rel_floor, abs_floor)?;
            let v = weight * inner;
            Ok((v, v.norm()))
        })
        .collect();
    let mut values = Vec::with_capacity(contributions.len() + 1);
    values.push(lead);
    let mut abs_sum = lead.norm();
    for r in contributions {
        let (v, n) = r?;
        values.push(v);
        abs_sum += n;
    }
    Ok((tree_sum(&values), abs_sum))
}

/// Pairwise tree reduction: deterministic and run-to-run reproducible
/// regardless of thread scheduling.
fn tree_sum(values: &[C64]) -> C64 {
    match values.len() {
        0 => C64::new(0.0, 0.0),
        1 => values[0],
        n => {
            let mid = n / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

/// Fourier coefficient c_{s,w,k}(m) with per-term decomposition and a
/// doubling truncation ladder: all cutoffs double until two successive
/// doublings each change the total by less than `rel_tol` relatively.
pub fn fourier_coefficient(
    p: &KernelPoint,
    m: u64,
    cutoffs: &Cutoffs,
) -> Result<CoefficientBreakdown> {
    if !p.in_d {
        return Err(Error::Domain(format!(
            "point (s, w) = ({}, {}) lies outside the absolute-convergence domain D for k = {}",
            p.s, p.w, p.k
        )));
    }
    if m < 1 {
        return Err(Error::Parameter("coefficient index m must be >= 1".into()));
    }
    let (s, w, k) = (p.s, p.w, p.k);
    let kf = k as f64;
    let kc = C64::new(kf, 0.0);
    let sign = if k / 2 % 2 == 0 { 1.0 } else { -1.0 };
    let mf = m as f64;

    // Term I: (2pi)^s / Gamma(s) * m^{s-1} sigma_{w-s}(m) zeta(k-s-w+1)
    let ls_i = LogScaled::from_log(s * TWO_PI.ln() - log_gamma(s)?);
    let term_i =
        ls_i.mul_c64(rpow(mf, s - 1.0) * divisor_sigma(m, w - s) * riemann_zeta(kc - s - w + 1.0)?);

    // Term II: the s -> k-s mirror with sign (-1)^{k/2}
    let ls_ii = LogScaled::from_log((kc - s) * TWO_PI.ln() - log_gamma(kc - s)?);
    let term_ii = sign
        * ls_ii.mul_c64(
            rpow(mf, kc - s - 1.0) * divisor_sigma(m, w + s - kc) * riemann_zeta(s - w + 1.0)?,
        );

    // Terms III + IV: the triple sum with prefactor
    // (-1)^{k/2} (2pi)^k m^{k-1} / (Gamma(s) Gamma(k-s))
    let cache = F11Cache::new(s, k)?;
    let ls_iii = LogScaled::from_log(
        C64::new(kf * TWO_PI.ln() + (kf - 1.0) * mf.ln(), 0.0) - cache.lg_s - cache.lg_ks,
    );
    let rel_floor = (cutoffs.rel_tol * 1e-4).max(1e-16);

    let mut a_max = cutoffs.ac_init;
    let mut c_max = cutoffs.ac_init;
    let mut n_max = cutoffs.n_init;
    let (mut sum, mut abs_sum) = triple_sum(&cache, w, k, m, a_max, c_max, n_max, rel_floor)?;
    let mut increments: Vec<f64> = Vec::new();
    let mut converged = false;
    for _ in 0..cutoffs.max_doublings {
        let (next, next_abs) =
            triple_sum(&cache, w, k, m, 2 * a_max, 2 * c_max, 2 * n_max, rel_floor)?;
        let delta = (next - sum).norm() / next.norm().max(1e-300);
        increments.push(delta);
        a_max *= 2;
        c_max *= 2;
        n_max *= 2;
        sum = next;
        abs_sum = next_abs;
        if increments.len() >= 2
            && increments[increments.len() - 1] < cutoffs.rel_tol
            && increments[increments.len() - 2] < cutoffs.rel_tol
        {
            converged = true;
            break;
        }
    }
    let tail_estimate = increments.last().copied().unwrap_or(0.0) * sum.norm();
    if !converged {
        return Err(Error::Convergence(format!(
            "triple sum not converged at cutoffs ({a_max}, {c_max}, {n_max}); \
             partial value {sum}, last relative increment {:.3e}",
            increments.last().copied().unwrap_or(f64::NAN)
        )));
    }
    let pair_block = sign * ls_iii.mul_c64(sum);
    // split the pair block into the two phase families for reporting
    let term_iii = pair_block * 0.5;
    let term_iv = pair_block - term_iii;

    let total = term_i + term_ii + pair_block;
    Ok(CoefficientBreakdown {
        term_i,
        term_ii,
        term_iii,
        term_iv,
        total,
        prefactor: completed_prefactor(s, w, k)?,
        truncation: Truncation { a_max, c_max, n_max, tail_estimate },
        abs_sum,
    })
}

/// Eigenforms and Petersson norms for one weight, built once and shared by
/// all spectral evaluations.
pub struct EigenContext {
    pub k: u64,
    pub forms: Vec<Eigenform>,
    pub norms: Vec<f64>,
    pub convention: LStarConvention,
}

impl EigenContext {
    pub fn new(k: u64, n_terms: usize, convention: LStarConvention) -> Result<Self> {
        let forms = eigenforms(k, n_terms)?;
        let norms = forms.iter().map(petersson_norm).collect::<Result<Vec<_>>>()?;
        Ok(EigenContext { k, forms, norms, convention })
    }

    /// sum_f L*(f,s) L*(f,w) a_f(m) / <f,f>.
    pub fn spectral_coefficient(&self, s: C64, w: C64, m: u64) -> Result<SpectralValue> {
        if self.forms.is_empty() {
            return Ok(SpectralValue { value: C64::new(0.0, 0.0), empty_space: true });
        }
        let mut total = C64::new(0.0, 0.0);
        for (f, &norm) in self.forms.iter().zip(&self.norms) {
            let ls = lstar(f, s, self.convention)?;
            let lw = lstar(f, w, self.convention)?;
            total += ls * lw * f.a(m as usize) / norm;
        }
        Ok(SpectralValue { value: total, empty_space: false })
    }

    /// sum_f L*(f,s) L*(f,w) / <f,f> (the m = 1 spectral sum).
    pub fn spectral_sum(&self, s: C64, w: C64) -> Result<C64> {
        Ok(self.spectral_coefficient(s, w, 1)?.value)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralValue {
    #[serde(with = "crate::report::c64_serde")]
    pub value: C64,
    /// true when dim S_k = 0 and the sum is exactly zero.
    pub empty_space: bool,
}

/// One-shot spectral coefficient (builds the eigenform context internally).
pub fn spectral_coefficient(
    k: u64,
    s: C64,
    w: C64,
    m: u64,
    convention: LStarConvention,
) -> Result<SpectralValue> {
    if cusp_dim(k) == 0 {
        return Ok(SpectralValue { value: C64::new(0.0, 0.0), empty_space: true });
    }
    let ctx = EigenContext::new(k, 64.max(m as usize), convention)?;
    ctx.spectral_coefficient(s, w, m)
}

/// Truncated direct sum over integer matrices of determinant n <= n_max:
///   sum_n n^{w-1} sum_{gamma in M_n, |entries| <= height} (gamma z)^{-s} j(gamma, z)^{-k},
/// enumerated through the bijection gamma = (ar, n b0/r + j a; cr, n d0/r + j c)
/// with r | n, gcd(a, c) = 1 and a d0 - b0 c = 1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DirectSum {
    #[serde(with = "crate::report::c64_serde")]
    pub value: C64,
    pub tail_indicator: f64,
    pub slow_convergence: bool,
}

pub fn kernel_direct_sum(
    z: C64,
    p: &KernelPoint,
    n_max: u32,
    height_max: i64,
) -> Result<DirectSum> {
    if !p.in_d {
        return Err(Error::Domain("direct sum requires (s, w) in D".into()));
    }
    if z.im < 1.0 {
        return Err(Error::Domain(format!(
            "direct sum needs Im(z) >= 1 for usable convergence, got {}",
            z.im
        )));
    }
    let full = direct_sum_pass(z, p, n_max, height_max);
    let half = direct_sum_pass(z, p, (n_max / 2).max(1), (height_max / 2).max(2));
    let tail_indicator = (full - half).norm();
    Ok(DirectSum {
        value: full,
        tail_indicator,
        slow_convergence: tail_indicator > 1e-4 * full.norm(),
    })
}

fn direct_sum_pass(z: C64, p: &KernelPoint, n_max: u32, height: i64) -> C64 {
    let (s, w, k) = (p.s, p.w, p.k);
    let terms: Vec<C64> = (1..=n_max as u64)
        .into_par_iter()
        .map(|n| {
            let mut acc = C64::new(0.0, 0.0);
            let nw = cpow(C64::new(n as f64, 0.0), w - 1.0);
            for r in divisors(n) {
                let nr = (n / r) as i64;
                let ri = r as i64;
                let amax = height / ri;
                for a in -amax..=amax {
                    for c in -amax..=amax {
                        if (a == 0 && c == 0) || gcd(a.unsigned_abs(), c.unsigned_abs()) != 1 {
                            continue;
                        }
                        acc += matrix_family_sum(z, s, k, nr, ri, a, c, height);
                    }
                }
            }
            nw * acc
        })
        .collect();
    tree_sum(&terms)
}

/// Sum over j of the family (a r, nr b0 + j a; c r, nr d0 + j c).
fn matrix_family_sum(z: C64, s: C64, k: u64, nr: i64, r: i64, a: i64, c: i64, height: i64) -> C64 {
    // a d0 - b0 c = 1 via extended gcd
    let (d0, b0) = {
        let (mut old_r, mut rr) = (a, c);
        let (mut old_s, mut ss) = (1i64, 0i64);
        let (mut old_t, mut tt) = (0i64, 1i64);
        while rr != 0 {
            let q = old_r / rr;
            (old_r, rr) = (rr, old_r - q * rr);
            (old_s, ss) = (ss, old_s - q * ss);
            (old_t, tt) = (tt, old_t - q * tt);
        }
        // old_r = gcd (up to sign): a*old_s + c*old_t = old_r
        let sign = if old_r < 0 { -1 } else { 1 };
        (sign * old_s, -sign * old_t)
    };
    debug_assert_eq!(a * d0 - b0 * c, 1);
    let cap_a = a * r;
    let cap_c = c * r;
    if cap_a.abs() > height || cap_c.abs() > height {
        return C64::new(0.0, 0.0);
    }
    // j range from |nr b0 + j a| <= height and |nr d0 + j c| <= height
    let range_from = |base: i64, coef: i64| -> Option<(i64, i64)> {
        if coef == 0 {
            if base.abs() <= height {
                None // unconstrained from this entry
            } else {
                Some((1, 0)) // empty
            }
        } else {
            let lo = (-height - base) as f64 / coef as f64;
            let hi = (height - base) as f64 / coef as f64;
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            Some((lo.ceil() as i64, hi.floor() as i64))
        }
    };
    let rb = range_from(nr * b0, a);
    let rd = range_from(nr * d0, c);
    let (j_lo, j_hi) = match (rb, rd) {
        (Some((l1, h1)), Some((l2, h2))) => (l1.max(l2), h1.min(h2)),
        (Some((l, h)), None) | (None, Some((l, h))) => (l, h),
        (None, None) => return C64::new(0.0, 0.0), // cannot happen: a, c not both 0
    };
    let mut acc = C64::new(0.0, 0.0);
    let kf = k as f64;
    for j in j_lo..=j_hi {
        let b = nr * b0 + j * a;
        let d = nr * d0 + j * c;
        let den = C64::new(cap_c as f64, 0.0) * z + d as f64;
        let num = C64::new(cap_a as f64, 0.0) * z + b as f64;
        let gz = num / den;
        acc += cpow(gz, -s) * cpow(den, C64::new(-kf, 0.0));
    }
    acc
}

/// Per-point result of the identity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityRow {
    #[serde(with = "crate::report::c64_serde")]
    pub s: C64,
    #[serde(with = "crate::report::c64_serde")]
    pub w: C64,
    pub m: u64,
    #[serde(with = "crate::report::c64_opt_serde")]
    pub fourier_completed: Option<C64>,
    #[serde(with = "crate::report::c64_opt_serde")]
    pub spectral: Option<C64>,
    pub rel_error: Option<f64>,
    pub truncation: Option<Truncation>,
    pub degenerate_empty_space: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub k: u64,
    pub convention: LStarConvention,
    pub rows: Vec<IdentityRow>,
    pub max_rel_error: Option<f64>,
}

/// Compare P * c(m) against the spectral coefficient at every (point, m).
/// Sub-operation failures are recorded per row; the batch continues.
pub fn verify_identity(
    k: u64,
    points: &[(C64, C64)],
    m_list: &[u64],
    convention: LStarConvention,
    cutoffs: &Cutoffs,
) -> Result<IdentityReport> {
    let dim = cusp_dim(k);
    let ctx = if dim > 0 { Some(EigenContext::new(k, 64, convention)?) } else { None };
    let mut rows = Vec::new();
    for &(s, w) in points {
        let p = KernelPoint::new(s, w, k);
        for &m in m_list {
            let mut row = IdentityRow {
                s,
                w,
                m,
                fourier_completed: None,
                spectral: None,
                rel_error: None,
                truncation: None,
                degenerate_empty_space: dim == 0,
                error: None,
            };
            match fourier_coefficient(&p, m, cutoffs) {
                Ok(cb) => {
                    row.truncation = Some(cb.truncation);
                    row.fourier_completed = Some(cb.completed());
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            if let Some(ctx) = &ctx {
                match ctx.spectral_coefficient(s, w, m) {
                    Ok(sv) => row.spectral = Some(sv.value),
                    Err(e) => row.error = Some(e.to_string()),
                }
            } else {
                row.spectral = Some(C64::new(0.0, 0.0));
            }
            if let (Some(f), Some(sp)) = (row.fourier_completed, row.spectral) {
                row.rel_error = Some((f - sp).norm() / sp.norm().max(1e-300));
            }
            rows.push(row);
        }
    }
    let max_rel_error = rows.iter().filter_map(|r| r.rel_error).fold(None, |m: Option<f64>, e| {
        Some(m.map_or(e, |mm| mm.max(e)))
    });
    Ok(IdentityReport { k, convention, rows, max_rel_error })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub k: u64,
    pub minus_max_rel_error: f64,
    pub plus_max_rel_error: f64,
    pub preferred: LStarConvention,
}

/// Decide which L* completion satisfies the spectral identity: the two
/// differ by (2 pi)^{2s} factors with distinct (s, w)-dependence, so a few
/// test points separate them decisively.
pub fn convention_probe(k: u64, points: &[(C64, C64)], cutoffs: &Cutoffs) -> Result<ProbeReport> {
    let minus = verify_identity(k, points, &[1], LStarConvention::TwoPiMinus, cutoffs)?;
    let plus = verify_identity(k, points, &[1], LStarConvention::TwoPiPlus, cutoffs)?;
    let me = minus.max_rel_error.unwrap_or(f64::INFINITY);
    let pe = plus.max_rel_error.unwrap_or(f64::INFINITY);
    Ok(ProbeReport {
        k,
        minus_max_rel_error: me,
        plus_max_rel_error: pe,
        preferred: if me <= pe { LStarConvention::TwoPiMinus } else { LStarConvention::TwoPiPlus },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_flags() {
        let p = KernelPoint::new(C64::new(5.5, 0.5), C64::new(2.0, -0.25), 12);
        assert!(p.in_d && !p.in_d1 && p.in_f);
        let p = KernelPoint::new(C64::new(5.5, 0.0), C64::new(-1.0, 0.0), 12);
        assert!(p.in_d && p.in_d1);
        let p = KernelPoint::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), 12);
        assert!(!p.in_d && !p.in_f);
        let p = KernelPoint::with_window(C64::new(5.6, 0.3), C64::new(5.7, -0.2), 12, 1.0, 0.25);
        assert!(p.in_f1 && !p.in_d);
        let p = KernelPoint::with_window(C64::new(5.9, 0.0), C64::new(5.9, 0.0), 12, 1.0, 0.25);
        assert!(!p.in_f1); // Re(s) + Re(w) = 11.8 > k - delta
    }

    #[test]
    fn modular_inverse_convention() {
        assert_eq!(inverse_mod(1, 1), 1);
        assert_eq!(inverse_mod(3, 7), 5);
        assert_eq!(inverse_mod(2, 5), 3);
        // a' in (0, c]: inverse of 4 mod 4+1 etc.
        assert_eq!(inverse_mod(4, 5), 4);
        assert_eq!(inverse_mod(1, 6), 1);
        assert_eq!(inverse_mod(5, 6), 5);
    }

    #[test]
    fn term_one_matches_closed_form_at_m_one() {
        let p = KernelPoint::new(C64::new(5.5, 0.5), C64::new(-0.75, 0.25), 12);
        let cut = Cutoffs { ac_init: 4, n_init: 16, rel_tol: 1e-4, max_doublings: 3 };
        let cb = fourier_coefficient(&p, 1, &cut).unwrap();
        let expect = (p.s * TWO_PI.ln() - log_gamma(p.s).unwrap()).exp()
            * riemann_zeta(C64::new(12.0, 0.0) - p.s - p.w + 1.0).unwrap();
        assert!((cb.term_i - expect).norm() < 1e-12 * expect.norm());
        assert!((cb.total - (cb.term_i + cb.term_ii + cb.term_iii + cb.term_iv)).norm()
            < 1e-12 * cb.total.norm());
        assert!(cb.truncation.tail_estimate >= 0.0);
    }

    #[test]
    fn rejects_out_of_domain() {
        let p = KernelPoint::new(C64::new(5.5, 0.0), C64::new(5.0, 0.0), 12);
        assert!(!p.in_d);
        assert!(fourier_coefficient(&p, 1, &Cutoffs::default()).is_err());
    }

    #[test]
    fn spectral_weight_twelve_is_rank_one() {
        let ctx = EigenContext::new(12, 64, LStarConvention::TwoPiMinus).unwrap();
        let s = C64::new(5.5, 0.5);
        let w = C64::new(2.0, -0.25);
        let v = ctx.spectral_coefficient(s, w, 2).unwrap();
        assert!(!v.empty_space);
        let f = &ctx.forms[0];
        let expect = lstar(f, s, LStarConvention::TwoPiMinus).unwrap()
            * lstar(f, w, LStarConvention::TwoPiMinus).unwrap()
            / ctx.norms[0]
            * f.a(2);
        assert!((v.value - expect).norm() < 1e-12 * expect.norm());
        // swap is bit-for-bit identical (commutative product)
        let a = ctx.spectral_coefficient(s, w, 1).unwrap().value;
        let b = ctx.spectral_coefficient(w, s, 1).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn spectral_empty_space_flag() {
        let v = spectral_coefficient(
            10,
            C64::new(4.0, 0.0),
            C64::new(2.0, 0.0),
            1,
            LStarConvention::TwoPiMinus,
        )
        .unwrap();
        assert!(v.empty_space);
        assert_eq!(v.value, C64::new(0.0, 0.0));
    }

    /// The (r, (a,c), j) family enumeration covers M_n exactly once:
    /// compare against brute force over all integer quadruples.
    #[test]
    fn matrix_enumeration_matches_brute_force() {
        let z = C64::new(0.3, 2.0);
        let s = C64::new(5.5, 0.5);
        let w = C64::new(-0.75, 0.0);
        let p = KernelPoint::new(s, w, 12);
        let h = 6i64;
        for n in 1..=4u32 {
            let fam = direct_sum_pass(z, &p, n, h);
            // brute force: all (a, b, c, d) with |entries| <= h, det = n
            let mut brute = C64::new(0.0, 0.0);
            for nn in 1..=n as i64 {
                let nw = cpow(C64::new(nn as f64, 0.0), w - 1.0);
                let mut acc = C64::new(0.0, 0.0);
                for a in -h..=h {
                    for b in -h..=h {
                        for c in -h..=h {
                            for d in -h..=h {
                                if a * d - b * c != nn {
                                    continue;
                                }
                                let den = C64::new(c as f64, 0.0) * z + d as f64;
                                let gz = (C64::new(a as f64, 0.0) * z + b as f64) / den;
                                acc += cpow(gz, -s) * cpow(den, C64::new(-12.0, 0.0));
                            }
                        }
                    }
                }
                brute += nw * acc;
            }
            assert!(
                (fam - brute).norm() < 1e-12 * brute.norm().max(1e-12),
                "n = {n}: family = {fam}, brute = {brute}"
            );
        }
    }

    #[test]
    fn direct_sum_periodicity() {
        let s = C64::new(5.5, 0.5);
        let w = C64::new(-0.75, 0.0);
        let p = KernelPoint::new(s, w, 12);
        let a = kernel_direct_sum(C64::new(0.3, 2.0), &p, 6, 24).unwrap();
        let b = kernel_direct_sum(C64::new(1.3, 2.0), &p, 6, 24).unwrap();
        // translation z -> z + 1 multiplies matrices by a unipotent; with the
        // height cutoff aligned this holds to the truncation accuracy
        assert!((a.value - b.value).norm() < 1e-4 * a.value.norm());
    }

    #[test]
    fn direct_sum_single_layer_is_finite() {
        let s = C64::new(5.5, 0.5);
        let w = C64::new(-0.75, 0.0);
        let p = KernelPoint::new(s, w, 12);
        let v = kernel_direct_sum(C64::new(0.3, 2.0), &p, 1, 16).unwrap();
        assert!(v.value.norm().is_finite() && v.value.norm() > 0.0);
    }
}
