//! Gauss-Legendre quadrature, including the sqrt substitution that the
//! nonlinear module needs for integrands with a t^{-1/2} endpoint singularity.

use crate::{Error, Result};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre polynomial; nodes come out in
    /// ascending order and are strictly interior, so integrands never get
    /// evaluated at interval endpoints.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::QuadratureFailure(format!(
                "Gauss-Legendre rule needs at least 2 nodes, got {n}"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Tricomi initial guess for the i-th root (descending order).
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_deriv(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_deriv(n, x);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Ok(GaussLegendre { nodes, weights })
    }

    /// Integral of f over [a, b] by the affine map of the reference rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Integral over [0, 1] of an integrand that may blow up like s^{-1/2} at
    /// s = 0. The substitution s = sigma^2 turns the singular factor into a
    /// bounded one on the whole interval; panels split at the image of each
    /// breakpoint (a kernel kink, the configured epsilon) keep every piece
    /// smooth for the rule.
    pub fn integrate_sqrt_scaled(&self, breakpoints: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut cuts = vec![0.0, 1.0];
        for &b in breakpoints {
            if b > 1e-14 && b < 1.0 - 1e-14 {
                cuts.push(b.sqrt());
            }
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            acc += self.integrate(w[0], w[1], |sigma| 2.0 * sigma * f(sigma * sigma));
        }
        acc
    }

    /// Integral over [0, 1] of a regular integrand, split at the given
    /// breakpoints (used for kernel kinks at s = t).
    pub fn integrate_unit(&self, breakpoints: &[f64], mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut cuts = vec![0.0, 1.0];
        for &b in breakpoints {
            if b > 1e-14 && b < 1.0 - 1e-14 {
                cuts.push(b);
            }
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            acc += self.integrate(w[0], w[1], &mut f);
        }
        acc
    }
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_nodes_match_reference() {
        let gl = GaussLegendre::new(5).unwrap();
        let expect = 0.906179845938664;
        assert!((gl.nodes[4] - expect).abs() < 1e-14);
        assert!((gl.nodes[0] + expect).abs() < 1e-14);
        assert!((gl.nodes[2]).abs() < 1e-14);
        let wsum: f64 = gl.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let gl = GaussLegendre::new(5).unwrap();
        // int_0^1 x^9 dx = 0.1
        let v = gl.integrate(0.0, 1.0, |x| x.powi(9));
        assert!((v - 0.1).abs() < 1e-15);
    }

    #[test]
    fn sqrt_substitution_handles_endpoint_singularity() {
        let gl = GaussLegendre::new(64).unwrap();
        // int_0^1 1/sqrt(s) ds = 2
        let v = gl.integrate_sqrt_scaled(&[], |s| 1.0 / s.sqrt());
        assert!((v - 2.0).abs() < 1e-13, "got {v}");
        // int_0^1 cos(s)/sqrt(s) ds, reference via series evaluation.
        let reference = 1.809048475800544;
        let v = gl.integrate_sqrt_scaled(&[1e-4, 0.3], |s| s.cos() / s.sqrt());
        assert!((v - reference).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn panel_split_handles_kinks() {
        let gl = GaussLegendre::new(32).unwrap();
        // int_0^1 |s - 0.3| ds = (0.3^2 + 0.7^2)/2 = 0.29
        let v = gl.integrate_unit(&[0.3], |s| (s - 0.3).abs());
        assert!((v - 0.29).abs() < 1e-14);
    }
}
