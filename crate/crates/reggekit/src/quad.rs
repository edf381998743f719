//! Gauss-Legendre quadrature, 1D and tensorized.

use crate::error::{Error, Result};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; good to machine precision
/// for the orders used here (n <= 64).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// P_n(x) and its derivative via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// A 2D quadrature rule on a rectangle [0,a] x [0,b]: nodes with weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule2D {
    pub nodes: Vec<([f64; 2], f64)>,
}

impl QuadratureRule2D {
    /// Tensor Gauss-Legendre of the given order per axis.
    pub fn tensor_gauss(order: usize, a: f64, b: f64) -> Self {
        let (x0, w0) = gauss_legendre_on(order, 0.0, a);
        let (x1, w1) = gauss_legendre_on(order, 0.0, b);
        let mut nodes = Vec::with_capacity(order * order);
        for (i, &xi) in x0.iter().enumerate() {
            for (j, &xj) in x1.iter().enumerate() {
                nodes.push(([xi, xj], w0[i] * w1[j]));
            }
        }
        QuadratureRule2D { nodes }
    }

    /// Weights must sum to the rectangle area.
    pub fn validate(&self, area: f64) -> Result<()> {
        let sum: f64 = self.nodes.iter().map(|(_, w)| w).sum();
        if (sum - area).abs() > 1e-12 * area.max(1.0) {
            return Err(Error::QuadratureResolution {
                detail: format!("weights sum to {sum}, expected {area}"),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        // n-point Gauss is exact up to degree 2n-1.
        for n in 1..=20 {
            let (xs, ws) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let got: f64 = xs
                    .iter()
                    .zip(&ws)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 0 {
                    2.0 / (deg as f64 + 1.0)
                } else {
                    0.0
                };
                assert!(
                    (got - exact).abs() < 1e-12,
                    "n={n} deg={deg}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn mapped_rule_integrates_exp() {
        let (xs, ws) = gauss_legendre_on(20, 0.0, 1.0);
        let got: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.exp()).sum();
        assert!((got - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn tensor_rule_weight_sum() {
        let q = QuadratureRule2D::tensor_gauss(8, 0.8, 0.6);
        q.validate(0.8 * 0.6).unwrap();
    }
}

/// Nodes and weights zipped into pairs on [-1, 1].
pub fn gauss_legendre_pairs(n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    x.into_iter().zip(w).collect()
}

/// Nodes and weights zipped into pairs on [a, b].
pub fn gauss_legendre_on_pairs(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre_on(n, a, b);
    x.into_iter().zip(w).collect()
}
