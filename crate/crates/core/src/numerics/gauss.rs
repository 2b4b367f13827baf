//! Gauss–Legendre rules and an adaptive integrator built on them.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{LabError, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n from the Tricomi-style initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(n, z);
                dp = nf * (z * p - p_prev) / (z * z - 1.0);
                let dz = p / dp;
                z -= dz;
                if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                    let (p, p_prev) = legendre_pair(n, z);
                    dp = nf * (z * p - p_prev) / (z * z - 1.0);
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared, lazily built rule.
    pub fn cached(n: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&n) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(Self::new(n));
        cache
            .lock()
            .expect("rule cache poisoned")
            .entry(n)
            .or_insert_with(|| Arc::clone(&rule));
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * t)?;
        }
        Ok(half * sum)
    }
}

/// (P_n(z), P_{n-1}(z)) by the three-term recurrence.
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut p_prev = 0.0;
    for j in 0..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * z * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Globally adaptive bisection comparing a 16-point rule on each panel with
/// the sum over its halves.
pub fn adaptive<F>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let rule = GaussLegendre::cached(16);
    let whole = rule.integrate(&mut f, a, b)?;
    let mut stack = vec![(a, b, whole, 0u32)];
    let mut total = 0.0;
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&mut f, lo, mid)?;
        let right = rule.integrate(&mut f, mid, hi)?;
        let fine = left + right;
        let scale = (hi - lo).abs() / (b - a).abs();
        if (fine - coarse).abs() <= (abs_tol * scale).max(rel_tol * fine.abs()) {
            total += fine;
        } else if depth >= 60 {
            return Err(LabError::NotConverged(format!(
                "adaptive quadrature stalled on [{lo}, {hi}]"
            )));
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 257, 1024] {
            let rule = GaussLegendre::new(n);
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let rule = GaussLegendre::new(8);
        // ∫_{-1}^{1} x^14 dx = 2/15
        let v = rule.integrate(|x| Ok(x.powi(14)), -1.0, 1.0).unwrap();
        assert!((v - 2.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(33);
        for w in rule.nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..33 {
            assert_eq!(rule.nodes[i], -rule.nodes[32 - i]);
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // ∫_0^1 1/(1e-4 + x^2) dx = 100·atan(100)
        let v = adaptive(|x| Ok(1.0 / (1e-4 + x * x)), 0.0, 1.0, 1e-12, 1e-13).unwrap();
        assert!((v - 100.0 * 100f64.atan()).abs() < 1e-9);
    }

    #[test]
    fn adaptive_reversed_limits_change_sign() {
        let v = adaptive(|x| Ok(x.exp()), 1.0, 0.0, 1e-13, 1e-14).unwrap();
        assert!((v + (1f64.exp() - 1.0)).abs() < 1e-13);
    }
}
