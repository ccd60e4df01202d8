//! Analytic continuation of the coefficient formula's pair sums and the
//! main-term expansions used by the nonvanishing scans.
//!
//! For a coprime pair (a, c) the inner sum
//!   G_{a,c}(s, w) = sum_{n>=1} n^{w-1} [ e^{i pi s/2} e^{2 pi i n a'/c}
//!                   f11(s,k; -2 pi i n/(ac))
//!                 + e^{-i pi s/2} e^{-2 pi i n a'/c} f11(s,k; 2 pi i n/(ac)) ]
//! converges for Re(w) < 0 and continues to the full convergence domain D as
//!   G_{a,c}(s, w) = 2 (2 pi)^{-w} Gamma(w) int_0^1 u^{s-1The} ... (see `pair_sum`)
//! through the periodic-zeta/Hurwitz identity. Summing the continued form
//! over (a, c) and extracting the elementary pieces yields, on the strip
//! F = {3/2 < Re(s), Re(w) < k-2}, four explicit main terms plus a
//! holomorphic remainder with the explicit envelope implemented in
//! [`strip_main_terms`]. Multiplying through by (2 pi)^w / Gamma(w) and
//! applying the zeta functional equation gives the symmetric form of
//! [`window_main_terms`], whose first term dominates on the central window
//! F1 once the weight is large; that dominance is the engine of the
//! nonvanishing scans.
//!
//! Near the diagonal s = w the second and third symmetric terms have
//! cancelling poles; [`diagonal_pair`] evaluates the pole-free combination
//!   g(s) [zeta(1+s-w) - 1/(s-w)] + g(w) [zeta(1+w-s) - 1/(w-s)]
//!   + (g(s) - g(w))/(s - w),
//!   g(z) = (2 pi)^{k-2z} Gamma(z) / Gamma(k-z),
//! switching the difference quotient to a derivative form when |s-w| is
//! tiny. Note g'(z) = g(z) (-2 log(2 pi) + psi(z) + psi(k-z)), which the
//! finite-difference oracle in the tests confirms.

use serde::{Deserialize, Serialize};

use crate::cx::{cpow, C64};
use crate::error::{Error, Result};
use crate::kernel::KernelPoint;
use crate::specfun::gamma::{digamma, log_gamma, tetragamma, trigamma};
use crate::specfun::quad::scaled_rule;
use crate::specfun::zeta::{hurwitz_zeta, riemann_zeta, zeta_near_pole};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Evaluation route for a coprime pair sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairSumRoute {
    /// Direct n-series; valid on D1 = {2 < Re(s) < k-2, Re(w) < 0}.
    Series,
    /// Hurwitz-integral continuation; valid on all of D.
    HurwitzIntegral,
}

/// G_{a,c}(s, w) by either route.
pub fn coprime_pair_sum(a: u32, c: u32, p: &KernelPoint, route: PairSumRoute) -> Result<C64> {
    if a == 0 || c == 0 || gcd(a as u64, c as u64) != 1 {
        return Err(Error::Parameter(format!("(a, c) = ({a}, {c}) must be coprime and positive")));
    }
    match route {
        PairSumRoute::Series => {
            if !p.in_d1 {
                return Err(Error::Domain(
                    "series route needs Re(w) < 0 and 2 < Re(s) < k-2 (domain D1)".into(),
                ));
            }
            series_pair_sum(a, c, p)
        }
        PairSumRoute::HurwitzIntegral => {
            if !p.in_d {
                return Err(Error::Domain(
                    "Hurwitz route is continued on the convergence domain D".into(),
                ));
            }
            hurwitz_pair_sum(a, c, p)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

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
    let m = t.rem_euclid(c as i64) as u64;
    if m == 0 {
        c
    } else {
        m
    }
}

fn series_pair_sum(a: u32, c: u32, p: &KernelPoint) -> Result<C64> {
    use crate::specfun::kummer::kummer_f11;
    let (s, w) = (p.s, p.w);
    let kc = C64::new(p.k as f64, 0.0);
    let a_inv = inverse_mod(a as u64 % c as u64, c as u64) as f64;
    let phase_s = (C64::new(0.0, std::f64::consts::FRAC_PI_2) * s).exp();
    let unit = C64::new(0.0, TWO_PI * a_inv / c as f64).exp();
    let mut unit_pow = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut prev = sum;
    for block in 0..14u32 {
        let n_lo = if block == 0 { 1 } else { (64 << (block - 1)) + 1 };
        let n_hi = 64 << block;
        for n in n_lo..=n_hi {
            unit_pow *= unit;
            let y = TWO_PI * n as f64 / (a as f64 * c as f64);
            let f_minus = kummer_f11(s, kc, C64::new(0.0, -y))?;
            let f_plus = kummer_f11(s, kc, C64::new(0.0, y))?;
            sum += cpow(C64::new(n as f64, 0.0), w - 1.0)
                * (phase_s * unit_pow * f_minus + unit_pow.conj() / phase_s * f_plus);
        }
        if block > 0 && (sum - prev).norm() < 1e-9 * sum.norm().max(1e-300) {
            return Ok(sum);
        }
        prev = sum;
    }
    Err(Error::Convergence(format!(
        "pair series (a, c) = ({a}, {c}) still moving after {} terms",
        64 << 13
    )))
}

fn hurwitz_pair_sum(a: u32, c: u32, p: &KernelPoint) -> Result<C64> {
    let (s, w) = (p.s, p.w);
    let kf = p.k as f64;
    let a_inv = inverse_mod(a as u64 % c as u64, c as u64) as f64;
    let ac = a as f64 * c as f64;
    let x0 = a_inv / c as f64;
    let cos_plus = (std::f64::consts::FRAC_PI_2 * (s + w)).cos();
    let cos_minus = (std::f64::consts::FRAC_PI_2 * (s - w)).cos();
    let integrand = |u: f64| -> Result<C64> {
        let za = hurwitz_zeta(w, x0 - u / ac)?;
        let zb = hurwitz_zeta(w, 1.0 - x0 + u / ac)?;
        // u^{s-1} (1-u)^{k-s-1}
        let weight = ((s - 1.0) * u.ln() + (C64::new(kf - 1.0, 0.0) - s) * (1.0 - u).ln()).exp();
        Ok(weight * (cos_plus * za + cos_minus * zb))
    };
    // u = sin^2(pi t / 2) flattens both endpoint singularities
    let pass = |order: usize| -> Result<C64> {
        let (ts, ws) = scaled_rule(order, 0.0, 1.0);
        let mut total = C64::new(0.0, 0.0);
        for (&t, &wt) in ts.iter().zip(&ws) {
            let sh = (0.5 * std::f64::consts::PI * t).sin();
            let ch = (0.5 * std::f64::consts::PI * t).cos();
            let u = sh * sh;
            if u <= 0.0 || u >= 1.0 {
                continue;
            }
            let du = std::f64::consts::PI * sh * ch;
            total += wt * du * integrand(u)?;
        }
        Ok(total)
    };
    let mut prev = pass(128)?;
    for order in [256usize, 512, 1024] {
        let next = pass(order)?;
        if (next - prev).norm() <= 1e-10 * next.norm().max(1e-300) {
            let pref = (w.scale(-TWO_PI.ln()) + log_gamma(w)?).exp() * 2.0;
            return Ok(pref * next);
        }
        prev = next;
    }
    Err(Error::Convergence(format!(
        "pair integral (a, c) = ({a}, {c}) did not stabilize under node doubling"
    )))
}

/// Which main-term normalization a [`ContinuationValue`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// Four terms valid on the wide strip F (gamma-cosine form).
    Strip,
    /// Symmetric four terms on the central window F1 (zeta form).
    Window,
}

/// How the window remainder constant is produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RemainderMode {
    /// Explicit envelope: every constituent computed at the point, with the
    /// cosine factors evaluated rather than bounded by e^{pi(|Im s|+|Im w|)},
    /// plus the measured fourth-term absorption difference.
    Heuristic,
    /// Calibrated against measured |exact - main| on weights where the
    /// spectral side is exactly computable (the coefficient already includes
    /// the safety factor).
    Empirical { coefficient: f64 },
}

impl RemainderMode {
    pub fn tag(&self) -> String {
        match self {
            RemainderMode::Heuristic => "heuristic".into(),
            RemainderMode::Empirical { coefficient } => format!("empirical({coefficient:.3e})"),
        }
    }
}

/// Four main terms plus a remainder envelope.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuationValue {
    pub main_terms: [(f64, f64); 4],
    #[serde(with = "crate::report::c64_serde")]
    pub total_main: C64,
    pub remainder_bound: f64,
    pub normalization: Normalization,
}

impl ContinuationValue {
    fn new(terms: [C64; 4], remainder_bound: f64, normalization: Normalization) -> Self {
        ContinuationValue {
            main_terms: [
                (terms[0].re, terms[0].im),
                (terms[1].re, terms[1].im),
                (terms[2].re, terms[2].im),
                (terms[3].re, terms[3].im),
            ],
            total_main: terms[0] + terms[1] + terms[2] + terms[3],
            remainder_bound,
            normalization,
        }
    }

    pub fn term(&self, i: usize) -> C64 {
        C64::new(self.main_terms[i].0, self.main_terms[i].1)
    }
}

fn sign_of(k: u64) -> f64 {
    if k / 2 % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn pole_guard(x: C64, what: &str) -> Result<()> {
    if x.im.abs() < 1e-9 && x.re < 0.5 && (x.re - x.re.round()).abs() < 1e-9 {
        return Err(Error::Pole(format!(
            "{what} hits a gamma pole at {x}; use the diagonal route"
        )));
    }
    Ok(())
}

/// cos(pi x / 2) zeta(x), stable through the zeta pole at x = 1 where the
/// cosine zero cancels it.
fn cos_zeta(x: C64) -> Result<C64> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    if (x - 1.0).norm() > 0.25 {
        return Ok((half_pi * x).cos() * riemann_zeta(x)?);
    }
    let e = x - 1.0;
    // cos(pi x/2) = -sin(pi e/2); sin(y)/y is regular
    let y = half_pi * e;
    let sinc = if y.norm() < 1e-8 { C64::new(1.0, 0.0) - y * y / 6.0 } else { y.sin() / y };
    Ok(-y.sin() * zeta_near_pole(e)? - half_pi * sinc)
}

/// The four explicit main terms on the strip F:
///   M1 = (2pi)^s / Gamma(s) zeta(k-s-w+1),
///   M2 = (-1)^{k/2} (2pi)^{k-s} / Gamma(k-s) zeta(s-w+1),
///   M3 = 2 (-1)^{k/2} (2pi)^{k-w} Gamma(w) Gamma(s-w) cos(pi(s-w)/2) zeta(s-w)
///        / (Gamma(s) Gamma(k-w)),
///   M4 = 2 (-1)^{k/2} (2pi)^{k-w} Gamma(w) Gamma(k-s-w) cos(pi(s+w)/2)
///        / (Gamma(k-s) Gamma(k-w)),
/// with the remainder envelope
///   2 e^{pi(|Im s|+|Im w|)} (2pi)^{k-Re w} |Gamma(w)| zeta(Re s)
///   (zeta(k-1-Re w) + zeta(Re w) + 1) / |Gamma(s) Gamma(k-s)|.
pub fn strip_main_terms(p: &KernelPoint) -> Result<ContinuationValue> {
    if !p.in_f {
        return Err(Error::Domain(format!(
            "strip expansion needs 3/2 < Re(s), Re(w) < k - 2; got ({}, {})",
            p.s, p.w
        )));
    }
    let (s, w) = (p.s, p.w);
    let kf = p.k as f64;
    let kc = C64::new(kf, 0.0);
    let sign = sign_of(p.k);
    pole_guard(s - w, "Gamma(s - w) in the third strip term")?;

    let m1 = (s * TWO_PI.ln() - log_gamma(s)?).exp() * riemann_zeta(kc - s - w + 1.0)?;
    let m2 = sign
        * ((kc - s) * TWO_PI.ln() - log_gamma(kc - s)?).exp()
        * riemann_zeta(s - w + 1.0)?;
    let m3 = 2.0
        * sign
        * ((kc - w) * TWO_PI.ln() + log_gamma(w)? + log_gamma(s - w)?
            - log_gamma(s)?
            - log_gamma(kc - w)?)
        .exp()
        * cos_zeta(s - w)?;
    let m4 = 2.0
        * sign
        * ((kc - w) * TWO_PI.ln() + log_gamma(w)? + log_gamma(kc - s - w)?
            - log_gamma(kc - s)?
            - log_gamma(kc - w)?)
        .exp()
        * (std::f64::consts::FRAC_PI_2 * (s + w)).cos();

    let remainder = strip_remainder_envelope(p)?;
    Ok(ContinuationValue::new([m1, m2, m3, m4], remainder, Normalization::Strip))
}

/// The explicit strip remainder envelope (by direct substitution).
pub fn strip_remainder_envelope(p: &KernelPoint) -> Result<f64> {
    let (s, w) = (p.s, p.w);
    let kf = p.k as f64;
    let zr = |x: f64| -> Result<f64> { Ok(riemann_zeta(C64::new(x, 0.0))?.re) };
    let gamma_w = log_gamma(w)?.re.exp() * 1.0; // |Gamma(w)| = e^{Re log Gamma(w)}
    let gamma_s = log_gamma(s)?.re.exp();
    let gamma_ks = log_gamma(C64::new(kf, 0.0) - s)?.re.exp();
    Ok(2.0
        * (std::f64::consts::PI * (s.im.abs() + w.im.abs())).exp()
        * TWO_PI.powf(kf - w.re)
        * gamma_w
        * zr(s.re)?
        * (zr(kf - 1.0 - w.re)? + zr(w.re)? + 1.0)
        / (gamma_s * gamma_ks))
}

/// The symmetric main terms on the central window F1:
///   T1 = (2pi)^{s+w}  zeta(k-s-w+1) / (Gamma(s) Gamma(w)),
///   T2 = (-1)^{k/2} (2pi)^{k-s+w} zeta(s-w+1) / (Gamma(w) Gamma(k-s)),
///   T3 = (-1)^{k/2} (2pi)^{k+s-w} zeta(w-s+1) / (Gamma(s) Gamma(k-w)),
///   T4 = (2pi)^{2k-s-w} zeta(s+w-k+1) / (Gamma(k-s) Gamma(k-w)).
///
/// T1..T3 equal (2pi)^w / Gamma(w) times the first three strip terms
/// exactly (zeta functional equation); T4 differs from the renormalized
/// fourth strip term by the factor zeta(k-s-w), and that difference is part
/// of the remainder. The heuristic remainder envelope mirrors the strip
/// envelope with the cosine factors computed pointwise and adds the
/// measured fourth-term difference |T4' - T4|.
pub fn window_main_terms(p: &KernelPoint, mode: RemainderMode) -> Result<ContinuationValue> {
    let (s, w) = (p.s, p.w);
    let kf = p.k as f64;
    let kc = C64::new(kf, 0.0);
    let sign = sign_of(p.k);
    if (s - w).norm() < 1e-12 {
        return Err(Error::Pole(
            "window terms T2, T3 have poles at s = w; use diagonal_pair".into(),
        ));
    }
    if (s + w - kc).norm() < 1e-12 {
        return Err(Error::Pole("window term T4 has a pole at s + w = k".into()));
    }
    let lg_s = log_gamma(s)?;
    let lg_w = log_gamma(w)?;
    let lg_ks = log_gamma(kc - s)?;
    let lg_kw = log_gamma(kc - w)?;
    let t1 = ((s + w) * TWO_PI.ln() - lg_s - lg_w).exp() * riemann_zeta(kc - s - w + 1.0)?;
    let t2 = sign
        * ((kc - s + w) * TWO_PI.ln() - lg_w - lg_ks).exp()
        * riemann_zeta(s - w + 1.0)?;
    let t3 = sign
        * ((kc + s - w) * TWO_PI.ln() - lg_s - lg_kw).exp()
        * riemann_zeta(w - s + 1.0)?;
    let t4 = ((2.0 * kc - s - w) * TWO_PI.ln() - lg_ks - lg_kw).exp()
        * riemann_zeta(s + w - kc + 1.0)?;

    let remainder = match mode {
        RemainderMode::Heuristic => {
            // T4' = (2pi)^w / Gamma(w) * (fourth strip term)
            let t4_strip = 2.0
                * sign
                * (kc * TWO_PI.ln() + log_gamma(kc - s - w)? - lg_ks - lg_kw).exp()
                * (std::f64::consts::FRAC_PI_2 * (s + w)).cos();
            let cos_plus = (std::f64::consts::FRAC_PI_2 * (s + w)).cos().norm();
            let cos_minus = (std::f64::consts::FRAC_PI_2 * (s - w)).cos().norm();
            let zr = |x: f64| -> Result<f64> { Ok(riemann_zeta(C64::new(x, 0.0))?.re) };
            let envelope = 2.0
                * (cos_plus + cos_minus)
                * zr(s.re)?
                * (zr(kf - 1.0 - w.re)? + zr(w.re)? + 1.0)
                * (kf * TWO_PI.ln() - lg_s.re - lg_ks.re).exp();
            envelope + (t4_strip - t4).norm()
        }
        RemainderMode::Empirical { coefficient } => {
            coefficient * (kf * TWO_PI.ln() - lg_s.re - lg_ks.re).exp()
        }
    };
    Ok(ContinuationValue::new([t1, t2, t3, t4], remainder, Normalization::Window))
}

/// g(z) = (2 pi)^{k-2z} Gamma(z) / Gamma(k-z).
pub fn g_weight(z: C64, k: u64) -> Result<C64> {
    let kc = C64::new(k as f64, 0.0);
    Ok(((kc - 2.0 * z) * TWO_PI.ln() + log_gamma(z)? - log_gamma(kc - z)?).exp())
}

/// g'(z) = g(z) (-2 log(2 pi) + psi(z) + psi(k-z)).
pub fn g_weight_derivative(z: C64, k: u64) -> Result<C64> {
    let kc = C64::new(k as f64, 0.0);
    Ok(g_weight(z, k)? * (digamma(z)? + digamma(kc - z)? - 2.0 * TWO_PI.ln()))
}

fn g_log_derivatives(z: C64, k: u64) -> Result<(C64, C64, C64)> {
    let kc = C64::new(k as f64, 0.0);
    let h = digamma(z)? + digamma(kc - z)? - 2.0 * TWO_PI.ln();
    let h1 = trigamma(z)? - trigamma(kc - z)?;
    let h2 = tetragamma(z)? + tetragamma(kc - z)?;
    Ok((h, h1, h2))
}

/// The pole-cancelled near-diagonal combination
///   g(s) [zeta(1+s-w) - 1/(s-w)] + g(w) [zeta(1+w-s) - 1/(w-s)]
///   + (g(s) - g(w)) / (s - w),
/// valid for |s - w| < 1/2. The difference quotient switches to
/// g'(midpoint) plus the second-order Taylor correction once |s - w| < 1e-4.
pub fn diagonal_pair(p: &KernelPoint) -> Result<C64> {
    let (s, w, k) = (p.s, p.w, p.k);
    let d = s - w;
    if d.norm() >= 0.5 {
        return Err(Error::Domain(format!(
            "diagonal combination is for |s - w| < 1/2, got |{d}| = {}",
            d.norm()
        )));
    }
    let gs = g_weight(s, k)?;
    let gw = g_weight(w, k)?;
    let regular = gs * zeta_near_pole(d)? + gw * zeta_near_pole(-d)?;
    let quotient = if d.norm() >= 1e-4 {
        (gs - gw) / d
    } else {
        let mid = 0.5 * (s + w);
        let gm = g_weight(mid, k)?;
        let (h, h1, h2) = g_log_derivatives(mid, k)?;
        let g1 = gm * h;
        let g3 = gm * (h * h * h + 3.0 * h * h1 + h2);
        g1 + d * d / 24.0 * g3
    };
    Ok(regular + quotient)
}

/// Report from the derivative sup bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SupBound {
    pub value: f64,
    /// |sup(grid 0.01) - sup(grid 0.02)|, a grid-sensitivity indicator.
    pub refinement_delta: f64,
}

/// Numerical sup of |g'(z)| over the strip
/// {-1/2 <= Re(z) - k/2 <= -delta, |Im(z)| <= T} on a 0.01 grid.
pub fn derivative_sup_bound(k: u64, t: f64, delta: f64) -> Result<SupBound> {
    if !(0.0 < delta && delta <= 0.5) {
        return Err(Error::Parameter("need 0 < delta <= 1/2".into()));
    }
    if t <= 0.0 {
        return Err(Error::Parameter("need T > 0".into()));
    }
    if k % 2 != 0 || k < 6 {
        return Err(Error::Parameter("need even k >= 6".into()));
    }
    let sup_on_grid = |step: f64| -> Result<f64> {
        let kf = k as f64;
        let re_lo = kf / 2.0 - 0.5;
        let re_hi = kf / 2.0 - delta;
        let n_re = ((re_hi - re_lo) / step).round() as usize;
        let n_im = (t / step).ceil() as usize;
        let mut sup = 0.0f64;
        for i in 0..=n_re {
            let re = re_lo + (re_hi - re_lo) * i as f64 / n_re.max(1) as f64;
            // |g'| is conjugation-symmetric; scan Im >= 0 only
            for j in 0..=n_im {
                let im = t * j as f64 / n_im as f64;
                let v = g_weight_derivative(C64::new(re, im), k)?.norm();
                if v > sup {
                    sup = v;
                }
            }
        }
        Ok(sup)
    };
    let fine = sup_on_grid(0.01)?;
    let coarse = sup_on_grid(0.02)?;
    Ok(SupBound { value: fine, refinement_delta: (fine - coarse).abs() })
}
