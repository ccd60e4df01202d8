//! Exact q-expansion arithmetic over the rationals and the normalized Hecke
//! eigenform basis of the cusp space S_k on the full modular group.
//!
//! Cusp forms are built from the classical generators E_4, E_6, Delta as the
//! echelonized Victor Miller basis {g_i = q^i + O(q^{d+1})}. Hecke operators
//! act by (T_p f)(n) = a(pn) + p^{k-1} a(n/p); their matrices on the Miller
//! basis are exact rational (in fact integral) and are split by the smallest
//! prime with distinct eigenvalues. Everything before the eigen-decomposition
//! is exact; the decomposition itself is the only floating-point step and is
//! verified by a residual bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Supported weight ceiling; coefficient growth makes exactness costly past this.
pub const MAX_WEIGHT: u64 = 120;

/// Truncated power series sum_{n=0}^{N} c_n q^n with exact rational
/// coefficients. All arithmetic truncates at the common order.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Q>,
    trunc: usize,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty());
        let trunc = coeffs.len() - 1;
        PowerSeries { coeffs, trunc }
    }

    pub fn zero(trunc: usize) -> Self {
        PowerSeries { coeffs: vec![Q::zero(); trunc + 1], trunc }
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = Q::one();
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, n: usize) -> &Q {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.trunc.min(other.trunc);
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        PowerSeries::new(coeffs)
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.trunc.min(other.trunc);
        let coeffs = (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        PowerSeries::new(coeffs)
    }

    pub fn scale(&self, c: &Q) -> PowerSeries {
        PowerSeries::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Product truncated at the smaller order; never reads past it.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.trunc.min(other.trunc);
        let mut coeffs = vec![Q::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        PowerSeries::new(coeffs)
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, e: u32) -> PowerSeries {
        let mut result = PowerSeries::one(self.trunc);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// sigma_e(n) = sum of e-th powers of divisors, exact.
fn divisor_power_sum(n: u64, e: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(e);
            let q = n / d;
            if q != d {
                acc += BigInt::from(q).pow(e);
            }
        }
        d += 1;
    }
    acc
}

/// E_4 = 1 + 240 sum sigma_3(n) q^n or E_6 = 1 - 504 sum sigma_5(n) q^n,
/// truncated at order `n`.
pub fn eisenstein_qexp(weight: u32, n: usize) -> Result<PowerSeries> {
    if n < 1 {
        return Err(Error::Parameter("truncation order must be >= 1".into()));
    }
    let (mult, e): (i64, u32) = match weight {
        4 => (240, 3),
        6 => (-504, 5),
        _ => {
            return Err(Error::Parameter(format!(
                "eisenstein_qexp supports weight 4 or 6, got {weight}"
            )))
        }
    };
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[0] = Q::one();
    for m in 1..=n {
        coeffs[m] = Q::from_integer(BigInt::from(mult) * divisor_power_sum(m as u64, e));
    }
    Ok(PowerSeries::new(coeffs))
}

/// Delta = (E_4^3 - E_6^2) / 1728, truncated at order `n`.
pub fn delta_qexp(n: usize) -> Result<PowerSeries> {
    let e4 = eisenstein_qexp(4, n)?;
    let e6 = eisenstein_qexp(6, n)?;
    let num = e4.pow(3).sub(&e6.pow(2));
    Ok(num.scale(&(Q::one() / qi(1728))))
}

/// dim S_k for even k >= 4 on the full modular group.
pub fn cusp_dim(k: u64) -> usize {
    assert!(k >= 4 && k % 2 == 0);
    // write k = 12c + r with r in {0, 4, 6, 8, 10, 14}; then dim S_k = c
    if k % 12 == 2 {
        ((k - 14) / 12) as usize
    } else {
        (k / 12) as usize
    }
}

/// The cusp space S_k with its echelonized Miller basis
/// g_i = q^i + O(q^{d+1}), i = 1..d.
#[derive(Debug, Clone)]
pub struct CuspSpace {
    pub weight: u64,
    pub dimension: usize,
    pub miller_basis: Vec<PowerSeries>,
    pub truncation: usize,
}

/// Build the Miller basis of S_k to truncation order `n`.
pub fn miller_basis(k: u64, n: usize) -> Result<CuspSpace> {
    if k % 2 != 0 || k < 4 {
        return Err(Error::Parameter(format!("weight must be even and >= 4, got {k}")));
    }
    if k > MAX_WEIGHT {
        return Err(Error::Capability(format!(
            "weights above {MAX_WEIGHT} are outside the supported desk scale"
        )));
    }
    let d = cusp_dim(k);
    if n < d + 1 {
        return Err(Error::Parameter(format!(
            "truncation order {n} too small for dimension {d}; need at least {}",
            d + 1
        )));
    }
    if d == 0 {
        return Ok(CuspSpace { weight: k, dimension: 0, miller_basis: vec![], truncation: n });
    }
    let c = if k % 12 == 2 { (k - 14) / 12 } else { k / 12 };
    let r = k - 12 * c;
    let (ar, br) = match r {
        0 => (0u32, 0u32),
        4 => (1, 0),
        6 => (0, 1),
        8 => (2, 0),
        10 => (1, 1),
        14 => (2, 1),
        _ => unreachable!(),
    };
    let e4 = eisenstein_qexp(4, n)?;
    let e6 = eisenstein_qexp(6, n)?;
    let delta = delta_qexp(n)?;
    let head = e4.pow(ar).mul(&e6.pow(br));

    // f_j = Delta^j E_4^{3(c-j)} * head has leading term q^j
    let mut forms: Vec<PowerSeries> = Vec::with_capacity(d);
    for j in 1..=d {
        let f = delta.pow(j as u32).mul(&e4.pow(3 * (c as u32 - j as u32))).mul(&head);
        forms.push(f);
    }
    // echelonize: clear column i of every other row (pivots are already 1)
    for j in (0..d).rev() {
        debug_assert!(forms[j].coeff(j + 1).is_one());
        for i in 0..j {
            let factor = forms[i].coeff(j + 1).clone();
            if !factor.is_zero() {
                let sub = forms[j].scale(&factor);
                forms[i] = forms[i].sub(&sub);
            }
        }
    }
    Ok(CuspSpace { weight: k, dimension: d, miller_basis: forms, truncation: n })
}

/// Matrix of T_p on the Miller basis: column j holds the coefficients of
/// T_p g_{j+1} in the basis, read off at q^1..q^d thanks to the echelon form.
pub fn hecke_matrix(space: &CuspSpace, p: u64) -> Result<Vec<Vec<Q>>> {
    let d = space.dimension;
    if d == 0 {
        return Ok(vec![]);
    }
    let needed = p as usize * d + 1;
    if space.truncation < needed {
        return Err(Error::Truncation { required: needed, available: space.truncation });
    }
    let pk = BigInt::from(p).pow(space.weight as u32 - 1);
    let mut m = vec![vec![Q::zero(); d]; d];
    for (j, g) in space.miller_basis.iter().enumerate() {
        for i in 1..=d {
            let mut entry = g.coeff(p as usize * i).clone();
            if i % p as usize == 0 {
                entry += g.coeff(i / p as usize) * Q::from_integer(pk.clone());
            }
            m[i - 1][j] = entry;
        }
    }
    Ok(m)
}

/// A normalized Hecke eigenform a(1) = 1 carried as floating-point Fourier
/// coefficients a(1..=N). `exact` marks the one-dimensional case where the
/// coefficients are integers.
#[derive(Debug, Clone)]
pub struct Eigenform {
    pub weight: u64,
    coeffs: Vec<f64>,
    pub exact: bool,
}

impl Eigenform {
    /// a(n) for 1 <= n <= N.
    pub fn a(&self, n: usize) -> f64 {
        self.coeffs[n - 1]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }
}

fn q_to_f64(x: &Q) -> Result<f64> {
    x.to_f64().filter(|v| v.is_finite()).ok_or_else(|| {
        Error::Capability("rational coefficient exceeds f64 range".into())
    })
}

/// The basis of normalized Hecke eigenforms of S_k with coefficients through
/// index `n`. Splitting uses the smallest prime (tried in 2, 3, ..., 19)
/// whose Hecke matrix has distinct eigenvalues.
pub fn eigenforms(k: u64, n: usize) -> Result<Vec<Eigenform>> {
    if k % 2 != 0 || k < 4 {
        return Err(Error::Parameter(format!("weight must be even and >= 4, got {k}")));
    }
    if k > MAX_WEIGHT {
        return Err(Error::Capability(format!(
            "weights above {MAX_WEIGHT} are outside the supported desk scale"
        )));
    }
    if n < 1 {
        return Err(Error::Parameter("need at least one coefficient".into()));
    }
    let d = cusp_dim(k);
    if d == 0 {
        return Ok(vec![]);
    }

    for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
        let trunc = n.max(p as usize * d + 1);
        let space = miller_basis(k, trunc)?;
        let tp = hecke_matrix(&space, p)?;
        match split_space(&space, &tp, k, n)? {
            Some(forms) => return Ok(forms),
            None => continue, // repeated eigenvalues at this prime
        }
    }
    Err(Error::Convergence(format!(
        "no prime <= 19 splits S_{k}; repeated Hecke eigenvalues throughout"
    )))
}

/// Diagonalize one Hecke matrix; `None` when eigenvalues are not distinct.
fn split_space(
    space: &CuspSpace,
    tp: &[Vec<Q>],
    k: u64,
    n: usize,
) -> Result<Option<Vec<Eigenform>>> {
    let d = space.dimension;
    let eigenvalues: Vec<f64> = if d == 1 {
        vec![q_to_f64(&tp[0][0])?]
    } else if d == 2 {
        let tr = &tp[0][0] + &tp[1][1];
        let det = &tp[0][0] * &tp[1][1] - &tp[0][1] * &tp[1][0];
        let disc = &tr * &tr - qi(4) * det;
        if !disc.is_positive() {
            return Ok(None);
        }
        let trf = q_to_f64(&tr)?;
        let root = q_to_f64(&disc)?.sqrt();
        vec![(trf + root) / 2.0, (trf - root) / 2.0]
    } else {
        let poly = char_poly(tp)?;
        match real_distinct_roots(&poly) {
            Some(r) => r,
            None => return Ok(None),
        }
    };

    // distinctness check relative to the spectral scale
    let scale = eigenvalues.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    for i in 0..d {
        for j in (i + 1)..d {
            if (eigenvalues[i] - eigenvalues[j]).abs() <= 1e-9 * scale {
                return Ok(None);
            }
        }
    }

    let m: Vec<Vec<f64>> = tp
        .iter()
        .map(|row| row.iter().map(q_to_f64).collect::<Result<Vec<f64>>>())
        .collect::<Result<_>>()?;

    let mut forms = Vec::with_capacity(d);
    for &lambda in &eigenvalues {
        let v = eigenvector(&m, lambda)?;
        residual_check(&m, &v, lambda, scale)?;
        // f = sum v_j g_j; a(1) = v_0 by the echelon property
        let v0 = v[0];
        if v0.abs() < 1e-12 * v.iter().map(|x| x.abs()).fold(0.0, f64::max) {
            return Err(Error::Convergence(
                "eigenvector has vanishing leading coefficient".into(),
            ));
        }
        let mut coeffs = vec![0.0f64; n];
        for (j, g) in space.miller_basis.iter().enumerate() {
            if v[j] == 0.0 {
                continue;
            }
            let w = v[j] / v0;
            for idx in 1..=n {
                coeffs[idx - 1] += w * q_to_f64(g.coeff(idx))?;
            }
        }
        forms.push(Eigenform { weight: k, coeffs, exact: d == 1 });
    }
    Ok(Some(forms))
}

/// Monic characteristic polynomial (ascending coefficients, exact) by the
/// Faddeev-LeVerrier recurrence.
fn char_poly(m: &[Vec<Q>]) -> Result<Vec<Q>> {
    let d = m.len();
    let mut c = vec![Q::zero(); d + 1];
    c[d] = Q::one();
    let mut aux: Vec<Vec<Q>> = vec![vec![Q::zero(); d]; d]; // M_0 = 0
    for i in 1..=d {
        // M_i = A * M_{i-1} + c_{d-i+1} I
        let mut next = vec![vec![Q::zero(); d]; d];
        for r in 0..d {
            for s in 0..d {
                let mut acc = Q::zero();
                for t in 0..d {
                    if !m[r][t].is_zero() && !aux[t][s].is_zero() {
                        acc += &m[r][t] * &aux[t][s];
                    }
                }
                next[r][s] = acc;
            }
            next[r][r] += &c[d - i + 1];
        }
        // c_{d-i} = -tr(A * M_i) / i
        let mut tr = Q::zero();
        for r in 0..d {
            for t in 0..d {
                if !m[r][t].is_zero() && !next[t][r].is_zero() {
                    tr += &m[r][t] * &next[t][r];
                }
            }
        }
        c[d - i] = -tr / qi(i as i64);
        aux = next;
    }
    Ok(c)
}

/// All-real distinct roots of a monic polynomial by Newton from above the
/// largest root, deflating as each root is found, then polishing on the
/// original polynomial. Returns `None` when roots are not distinct enough.
fn real_distinct_roots(poly: &[Q]) -> Option<Vec<f64>> {
    let deg = poly.len() - 1;
    let mut coeffs: Vec<f64> = poly.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let original = coeffs.clone();
    let bound = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| c.abs())
            .fold(0.0, f64::max);
    let mut roots = Vec::with_capacity(deg);
    for _ in 0..deg {
        let r = newton_from_above(&coeffs, bound)?;
        roots.push(r);
        coeffs = deflate(&coeffs, r);
    }
    // polish on the original polynomial
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_poly(&original, *r);
            if dp != 0.0 && p.is_finite() {
                let step = p / dp;
                if step.is_finite() {
                    *r -= step;
                }
            }
        }
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Some(roots)
}

fn eval_poly(coeffs: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// For a monic polynomial with all-real roots, Newton from x0 > max root
/// converges monotonically to the largest root.
fn newton_from_above(coeffs: &[f64], bound: f64) -> Option<f64> {
    let mut x = bound;
    for _ in 0..500 {
        let (p, dp) = eval_poly(coeffs, x);
        if dp == 0.0 || !p.is_finite() {
            return None;
        }
        let step = p / dp;
        x -= step;
        if step.abs() <= 1e-14 * x.abs().max(1.0) {
            return Some(x);
        }
    }
    Some(x)
}

fn deflate(coeffs: &[f64], r: f64) -> Vec<f64> {
    // synthetic division by (x - r); input monic of degree d, output degree d-1
    let d = coeffs.len() - 1;
    let mut out = vec![0.0; d];
    out[d - 1] = coeffs[d];
    for i in (0..d - 1).rev() {
        out[i] = coeffs[i + 1] + r * out[i + 1];
    }
    out
}

/// Null vector of (M - lambda I) by Gaussian elimination with partial pivoting.
fn eigenvector(m: &[Vec<f64>], lambda: f64) -> Result<Vec<f64>> {
    let d = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for i in 0..d {
        a[i][i] -= lambda;
    }
    let mut pivot_cols = Vec::new();
    let mut row = 0usize;
    for col in 0..d {
        let (best, mag) = (row..d)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap_or((row, 0.0));
        let scale: f64 = a.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
        if mag <= 1e-10 * scale.max(1.0) {
            continue; // free column
        }
        a.swap(row, best);
        for r in 0..d {
            if r != row && a[r][col] != 0.0 {
                let f = a[r][col] / a[row][col];
                for c in 0..d {
                    a[r][c] -= f * a[row][c];
                }
            }
        }
        pivot_cols.push((row, col));
        row += 1;
        if row == d {
            break;
        }
    }
    let free_col = (0..d)
        .find(|c| !pivot_cols.iter().any(|&(_, pc)| pc == *c))
        .ok_or_else(|| Error::Convergence("no null direction found for eigenvalue".into()))?;
    let mut v = vec![0.0; d];
    v[free_col] = 1.0;
    for &(r, c) in pivot_cols.iter().rev() {
        v[c] = -a[r][free_col] / a[r][c];
    }
    Ok(v)
}

fn residual_check(m: &[Vec<f64>], v: &[f64], lambda: f64, scale: f64) -> Result<()> {
    let d = m.len();
    let mut res = 0.0f64;
    let mut norm = 0.0f64;
    for i in 0..d {
        let mut acc = 0.0;
        for j in 0..d {
            acc += m[i][j] * v[j];
        }
        res += (acc - lambda * v[i]).powi(2);
        norm += v[i] * v[i];
    }
    if res.sqrt() > 1e-10 * scale.max(1.0) * norm.sqrt() {
        return Err(Error::Convergence(format!(
            "eigenpair residual {:.3e} exceeds tolerance at lambda = {lambda}",
            res.sqrt()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qint(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn eisenstein_low_coefficients() {
        let e4 = eisenstein_qexp(4, 2).unwrap();
        assert_eq!(e4.coeffs(), &[qint(1), qint(240), qint(2160)]);
        let e4b = eisenstein_qexp(4, 1).unwrap();
        assert_eq!(e4b.coeff(1), &qint(240));
        let e6 = eisenstein_qexp(6, 1).unwrap();
        assert_eq!(e6.coeff(1), &qint(-504));
        assert!(eisenstein_qexp(8, 4).is_err());
    }

    /// Brute-force eta product q prod (1 - q^n)^24 as an independent oracle
    /// for Delta.
    fn delta_by_eta_product(n: usize) -> PowerSeries {
        let mut prod = PowerSeries::one(n);
        for m in 1..=n {
            let mut factor = PowerSeries::one(n);
            factor = {
                let mut c = factor.coeffs().to_vec();
                c[m] = qint(-1);
                PowerSeries::new(c)
            };
            prod = prod.mul(&factor.pow(24));
        }
        // multiply by q: shift up
        let mut shifted = vec![Q::zero(); n + 1];
        for i in 0..n {
            shifted[i + 1] = prod.coeff(i).clone();
        }
        PowerSeries::new(shifted)
    }

    #[test]
    fn delta_matches_eta_product() {
        let d = delta_qexp(12).unwrap();
        let oracle = delta_by_eta_product(12);
        assert_eq!(d.coeffs(), oracle.coeffs());
        assert_eq!(d.coeff(0), &Q::zero());
        assert_eq!(d.coeff(1), &qint(1));
        assert_eq!(d.coeff(2), &qint(-24));
        // multiplicativity at 6 = 2 * 3
        assert_eq!(d.coeff(6), &(d.coeff(2) * d.coeff(3)));
    }

    #[test]
    fn dimensions() {
        for (k, d) in [(4, 0), (6, 0), (8, 0), (10, 0), (12, 1), (14, 0), (16, 1), (18, 1),
                       (20, 1), (22, 1), (24, 2), (26, 1), (36, 3), (120, 10)] {
            assert_eq!(cusp_dim(k), d, "k = {k}");
        }
    }

    #[test]
    fn miller_basis_shapes() {
        let s12 = miller_basis(12, 10).unwrap();
        assert_eq!(s12.dimension, 1);
        let delta = delta_qexp(10).unwrap();
        assert_eq!(s12.miller_basis[0], delta);

        let s10 = miller_basis(10, 10).unwrap();
        assert_eq!(s10.dimension, 0);
        assert!(s10.miller_basis.is_empty());

        let s24 = miller_basis(24, 10).unwrap();
        assert_eq!(s24.dimension, 2);
        // echelon: g_1 = q + 0 q^2 + ..., g_2 = q^2 + ...
        assert!(s24.miller_basis[0].coeff(1).is_one());
        assert!(s24.miller_basis[0].coeff(2).is_zero());
        assert!(s24.miller_basis[1].coeff(1).is_zero());
        assert!(s24.miller_basis[1].coeff(2).is_one());

        assert!(miller_basis(13, 10).is_err());
        assert!(miller_basis(2, 10).is_err());
        assert!(miller_basis(24, 2).is_err());
    }

    #[test]
    fn echelon_property_exact_for_larger_weight() {
        let s = miller_basis(36, 12).unwrap();
        assert_eq!(s.dimension, 3);
        for (i, g) in s.miller_basis.iter().enumerate() {
            for j in 1..=s.dimension {
                if j == i + 1 {
                    assert!(g.coeff(j).is_one());
                } else {
                    assert!(g.coeff(j).is_zero());
                }
            }
        }
    }

    #[test]
    fn hecke_matrix_values() {
        let s12 = miller_basis(12, 16).unwrap();
        let t2 = hecke_matrix(&s12, 2).unwrap();
        assert_eq!(t2, vec![vec![qint(-24)]]);

        let s10 = miller_basis(10, 16).unwrap();
        assert!(hecke_matrix(&s10, 2).unwrap().is_empty());

        let s24 = miller_basis(24, 16).unwrap();
        let t2 = hecke_matrix(&s24, 2).unwrap();
        // integral entries with positive discriminant
        let tr = &t2[0][0] + &t2[1][1];
        let det = &t2[0][0] * &t2[1][1] - &t2[0][1] * &t2[1][0];
        let disc = &tr * &tr - qint(4) * det;
        assert!(disc.is_positive());
        for row in &t2 {
            for e in row {
                assert!(e.denom().is_one(), "non-integral Hecke entry {e}");
            }
        }

        let short = miller_basis(24, 4).unwrap();
        assert!(matches!(hecke_matrix(&short, 2), Err(Error::Truncation { .. })));
    }

    #[test]
    fn hecke_operators_commute_exactly() {
        let s = miller_basis(24, 40).unwrap();
        let t2 = hecke_matrix(&s, 2).unwrap();
        let t3 = hecke_matrix(&s, 3).unwrap();
        let ab = mat_mul(&t2, &t3);
        let ba = mat_mul(&t3, &t2);
        assert_eq!(ab, ba);
    }

    fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let d = a.len();
        let mut out = vec![vec![Q::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                for t in 0..d {
                    out[i][j] += &a[i][t] * &b[t][j];
                }
            }
        }
        out
    }

    #[test]
    fn weight_twelve_eigenform_is_delta() {
        let forms = eigenforms(12, 6).unwrap();
        assert_eq!(forms.len(), 1);
        let expect = [1.0, -24.0, 252.0, -1472.0, 4830.0, -6048.0];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(forms[0].a(i + 1), e);
        }
        assert!(forms[0].exact);

        let one = eigenforms(12, 1).unwrap();
        assert_eq!(one[0].a(1), 1.0);
    }

    #[test]
    fn weight_twentyfour_pair() {
        let forms = eigenforms(24, 4).unwrap();
        assert_eq!(forms.len(), 2);
        let s = miller_basis(24, 10).unwrap();
        let t2 = hecke_matrix(&s, 2).unwrap();
        let tr = q_to_f64(&(&t2[0][0] + &t2[1][1])).unwrap();
        let det =
            q_to_f64(&(&t2[0][0] * &t2[1][1] - &t2[0][1] * &t2[1][0])).unwrap();
        for f in &forms {
            let a2 = f.a(2);
            // a(2) is a root of the characteristic polynomial of T_2
            assert!((a2 * a2 - tr * a2 + det).abs() < 1e-6 * (a2 * a2).abs());
            // Hecke recursion a(4) = a(2)^2 - 2^{k-1}
            let expect = a2 * a2 - 2f64.powi(23);
            assert!((f.a(4) - expect).abs() < 1e-9 * expect.abs());
        }
        assert!((forms[0].a(2) - forms[1].a(2)).abs() > 1.0);
    }

    #[test]
    fn multiplicativity_and_prime_square_relations() {
        for k in [12u64, 16, 18, 20, 22, 24, 26, 36] {
            let n = 60usize;
            for f in eigenforms(k, n).unwrap() {
                for (p, q) in [(2usize, 3usize), (2, 5), (3, 5), (2, 7), (3, 7), (2, 11)] {
                    if p * q <= n {
                        let lhs = f.a(p * q);
                        let rhs = f.a(p) * f.a(q);
                        assert!(
                            (lhs - rhs).abs() <= 1e-9 * rhs.abs() + 1e-9,
                            "k = {k}, a({p}*{q})"
                        );
                    }
                }
                for p in [2usize, 3, 5, 7] {
                    if p * p <= n {
                        let lhs = f.a(p * p);
                        let rhs = f.a(p) * f.a(p) - (p as f64).powi(k as i32 - 1);
                        assert!(
                            (lhs - rhs).abs() <= 1e-9 * rhs.abs() + 1e-9,
                            "k = {k}, a({p}^2)"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn large_dimension_splits() {
        // dim S_36 = 3 exercises the deflation path
        let forms = eigenforms(36, 10).unwrap();
        assert_eq!(forms.len(), 3);
        for f in &forms {
            assert_eq!(f.a(1), 1.0);
        }
        // eigenvalues of T_2 are the a(2); they must be pairwise distinct
        assert!((forms[0].a(2) - forms[1].a(2)).abs() > 1.0);
        assert!((forms[1].a(2) - forms[2].a(2)).abs() > 1.0);
    }

    #[test]
    fn degenerate_and_guarded_inputs() {
        assert!(eigenforms(10, 5).unwrap().is_empty());
        assert!(eigenforms(13, 5).is_err());
        assert!(eigenforms(122, 5).is_err());
    }
}
