//! Gauss-Legendre quadrature nodes and weights.
//!
//! Nodes are the roots of P_n found by Newton iteration from the Chebyshev
//! initial guess; weights are 2 / ((1 - x^2) P_n'(x)^2). Rules are cheap to
//! build (O(n^2)) relative to the integrand work here, so they are computed
//! per call and nothing is cached.

/// Nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev guess for the i-th positive root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Map a rule from [-1, 1] to [a, b].
pub fn scaled_rule(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|&t| mid + half * t).collect(),
        w.iter().map(|&wi| wi * half).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        // GL-n is exact through degree 2n-1.
        let (x, w) = gauss_legendre(8);
        let val: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-13);
        let odd: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(9)).sum();
        assert!(odd.abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for &n in &[2usize, 16, 33, 128] {
            let (_, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-12, "n = {n}");
        }
        let (_, w) = scaled_rule(16, 1.0, 4.0);
        assert!((w.iter().sum::<f64>() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integral_reference() {
        // int_0^1 cos(40 x) dx = sin(40)/40, resolved by a 64-node rule.
        let (x, w) = scaled_rule(64, 0.0, 1.0);
        let val: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * (40.0 * xi).cos()).sum();
        assert!((val - 40f64.sin() / 40.0).abs() < 1e-12);
    }
}
