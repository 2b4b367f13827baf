//! Lowest eigenvalues of a real symmetric tridiagonal matrix by Sturm-sequence
//! bisection, plus inverse iteration for a single eigenvector.

use crate::error::{LabError, Result};

/// Symmetric tridiagonal matrix: `diag` of length n, `off` of length n - 1.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n - 1");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (negative pivots of T − xI).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin_lower(&self) -> f64 {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i] - left - right
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// The `k` smallest eigenvalues in ascending order, each bisected to a
    /// few ulps.
    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k > self.len() {
            return Err(LabError::InvalidConfig(format!(
                "requested {k} eigenvalues of a {}x{} matrix",
                self.len(),
                self.len()
            )));
        }
        let lower = self.gershgorin_lower();
        let mut upper = lower.abs().max(1.0);
        while self.count_below(upper) < k {
            upper = upper.abs() * 2.0 + 1.0;
            if !upper.is_finite() {
                return Err(LabError::NotConverged("eigenvalue upper bound overflowed".into()));
            }
        }
        let mut out = Vec::with_capacity(k);
        let mut floor = lower - 1e-12 * lower.abs().max(1.0);
        for j in 0..k {
            let mut lo = floor;
            let mut hi = upper;
            for _ in 0..400 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + 1e-300 {
                    break;
                }
            }
            let value = 0.5 * (lo + hi);
            out.push(value);
            floor = lo;
        }
        Ok(out)
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration, normalised
    /// to unit max-norm.
    pub fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let n = self.len();
        let shift = eigenvalue + 1e-10 * eigenvalue.abs().max(1e-8);
        let mut v = vec![1.0; n];
        for _ in 0..3 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if norm > 0.0 && norm.is_finite() {
                v.iter_mut().for_each(|x| *x /= norm);
            }
        }
        v
    }

    /// Thomas algorithm for (T − σI)x = b with tiny-pivot replacement.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * self.diag.iter().fold(1.0f64, |m, d| m.max(d.abs()));
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0] - sigma;
        if pivot.abs() < tiny {
            pivot = tiny;
        }
        if n > 1 {
            c[0] = self.off[0] / pivot;
        }
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            let e = self.off[i - 1];
            pivot = self.diag[i] - sigma - e * c[i - 1];
            if pivot.abs() < tiny {
                pivot = tiny;
            }
            if i + 1 < n {
                c[i] = self.off[i] / pivot;
            }
            d[i] = (rhs[i] - e * d[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// tridiag(-1, 2, -1) of size n has eigenvalues 2 − 2cos(kπ/(n+1)).
    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn matches_closed_form_laplacian_spectrum() {
        let n = 200;
        let ev = laplacian(n).lowest_eigenvalues(6).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (PI * (k as f64 + 1.0) / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-14, "k = {k}: {v} vs {exact}");
        }
    }

    #[test]
    fn counts_are_monotone() {
        let t = laplacian(50);
        let mut last = 0;
        for i in 0..=40 {
            let c = t.count_below(i as f64 * 0.1);
            assert!(c >= last);
            last = c;
        }
        assert_eq!(t.count_below(5.0), 50);
    }

    #[test]
    fn eigenvector_of_lowest_mode_is_a_sine() {
        let n = 99;
        let t = laplacian(n);
        let lambda = t.lowest_eigenvalues(1).unwrap()[0];
        let v = t.eigenvector(lambda);
        let mid = v[n / 2].abs();
        for (i, x) in v.iter().enumerate() {
            let s = (PI * (i as f64 + 1.0) / (n as f64 + 1.0)).sin();
            assert!((x.abs() / mid - s).abs() < 1e-8);
        }
    }

    #[test]
    fn too_many_eigenvalues_is_a_config_error() {
        assert!(matches!(laplacian(3).lowest_eigenvalues(4), Err(LabError::InvalidConfig(_))));
    }
}
