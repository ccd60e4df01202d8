//! Bernoulli numbers B_2 .. B_30 as exact rationals.
//!
//! Fifteen even-index Bernoulli numbers feed every Euler-Maclaurin tail and
//! Stirling series in this crate. The table is verified in the tests against
//! the defining recurrence sum_{j=0}^{n} C(n+1, j) B_j = 0 in exact
//! arithmetic.

/// (numerator, denominator) of B_{2j} for j = 1..=15.
pub const BERNOULLI_2J: [(i64, i64); 15] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
];

/// B_{2j} as f64, j = 1..=15.
pub fn bernoulli_f64(j: usize) -> f64 {
    let (n, d) = BERNOULLI_2J[j - 1];
    n as f64 / d as f64
}

/// B_{2j} / (2j)! as f64, j = 1..=15 (Euler-Maclaurin weights).
pub fn bernoulli_over_factorial(j: usize) -> f64 {
    let mut fact = 1.0f64;
    for i in 2..=(2 * j) {
        fact *= i as f64;
    }
    bernoulli_f64(j) / fact
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    /// Recompute B_0..B_30 from the recurrence and compare with the table.
    #[test]
    fn table_matches_recurrence() {
        let n_max = 30usize;
        let mut b: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        b.push(BigRational::one());
        for n in 1..=n_max {
            // sum_{j=0}^{n} C(n+1, j) B_j = 0  =>  B_n = -1/C(n+1,n) * sum_{j<n} C(n+1,j) B_j
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(n+1, 0)
            for (j, bj) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bj;
                binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
            }
            let c = BigRational::from_integer(binom); // C(n+1, n)
            b.push(-acc / c);
        }
        for (j, &(num, den)) in BERNOULLI_2J.iter().enumerate() {
            let expect = BigRational::new(BigInt::from(num), BigInt::from(den));
            assert_eq!(b[2 * (j + 1)], expect, "B_{}", 2 * (j + 1));
        }
    }
}
