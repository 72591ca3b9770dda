//! Gauss–Legendre rules on finite and semi-infinite intervals.

use std::f64::consts::PI;

/// Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes from Newton iteration on P_n started at the Chebyshev-like guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// (node, weight) pairs mapped to [a, b].
    pub fn interval(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * x, half * w))
            .collect()
    }

    /// (node, weight) pairs for (0, ∞) under `x = s·t/(1-t)`, t ∈ (0, 1).
    pub fn semi_infinite(&self, scale: f64) -> Vec<(f64, f64)> {
        self.interval(0.0, 1.0)
            .into_iter()
            .map(|(t, w)| {
                let one_minus = 1.0 - t;
                (scale * t / one_minus, w * scale / (one_minus * one_minus))
            })
            .collect()
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.interval(a, b).into_iter().map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 40, 101] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::new(6);
        // degree 11 is integrated exactly by 6 nodes
        let v = g.integrate(0.0, 2.0, |x| x.powi(11) - 3.0 * x.powi(4));
        let exact = 2f64.powi(12) / 12.0 - 3.0 * 2f64.powi(5) / 5.0;
        assert!((v - exact).abs() < 1e-11 * exact.abs());
    }

    #[test]
    fn known_three_point_rule() {
        let g = GaussLegendre::new(3);
        assert!((g.nodes()[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((g.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn semi_infinite_exponential() {
        let g = GaussLegendre::new(40);
        let v: f64 = g
            .semi_infinite(0.5)
            .into_iter()
            .map(|(x, w)| w * (-2.0 * x).exp() * x)
            .sum();
        assert!((v - 0.25).abs() < 1e-10, "{v}");
    }

    #[test]
    fn nodes_strictly_inside() {
        let g = GaussLegendre::new(64);
        for (x, w) in g.semi_infinite(1.0) {
            assert!(x > 0.0 && x.is_finite() && w > 0.0);
        }
    }
}
