//! Initial value problems for L[lambda]u = u'' + (a(t) + lambda)u = 0 and the
//! fundamental solution pair, the substrate every kernel is assembled from.
//!
//! Integration is classical RK4 on a uniform grid; between nodes both u and
//! u' are recovered by cubic Hermite interpolation, using u'' = -(a+lambda)u
//! from the equation itself for the slope data of u'. That keeps dense output
//! C^1, which is exactly the regularity the Green's-function partial
//! derivatives rely on.

use serde::{Deserialize, Serialize};

use crate::potential::Potential;
use crate::{Error, Result};

/// Uniform node set over [0,1]: n nodes, spacing 1/(n-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid { n });
        }
        Ok(GridSpec { n })
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        // The endpoints are exact; interior nodes are the usual i*h rounding.
        if i == self.n - 1 {
            1.0
        } else {
            i as f64 * self.h()
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n: 1001 }
    }
}

/// One integrated solution: node values of u, u', and u'' = -(a+lambda)u.
#[derive(Debug, Clone)]
pub struct Trajectory {
    h: f64,
    u: Vec<f64>,
    du: Vec<f64>,
    ddu: Vec<f64>,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec { n: self.u.len() }
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn du(&self) -> &[f64] {
        &self.du
    }

    /// (u, u') at node i.
    pub fn at_node(&self, i: usize) -> (f64, f64) {
        (self.u[i], self.du[i])
    }

    pub fn start(&self) -> (f64, f64) {
        self.at_node(0)
    }

    pub fn end(&self) -> (f64, f64) {
        self.at_node(self.n() - 1)
    }

    /// Dense (u, u') at any t in [0,1]. Node values are returned exactly.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if !(-1e-9..=1.0 + 1e-9).contains(&t) {
            return Err(Error::OutOfDomain { value: t });
        }
        Ok(self.eval_clamped(t))
    }

    /// Same as eval but assumes t is already known to lie in [0,1].
    pub(crate) fn eval_clamped(&self, t: f64) -> (f64, f64) {
        let t = t.clamp(0.0, 1.0);
        let n = self.n();
        let i = (((t / self.h) as usize).min(n - 2)).max(0);
        let theta = (t - i as f64 * self.h) / self.h;
        if theta == 0.0 {
            return (self.u[i], self.du[i]);
        }
        let u = hermite(
            theta,
            self.u[i],
            self.du[i] * self.h,
            self.u[i + 1],
            self.du[i + 1] * self.h,
        );
        let du = hermite(
            theta,
            self.du[i],
            self.ddu[i] * self.h,
            self.du[i + 1],
            self.ddu[i + 1] * self.h,
        );
        (u, du)
    }

    /// Pointwise alpha * self + beta * other, sharing the same grid.
    pub(crate) fn lin_comb(&self, alpha: f64, other: &Trajectory, beta: f64) -> Trajectory {
        debug_assert_eq!(self.n(), other.n());
        let comb = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| alpha * x + beta * y)
                .collect()
        };
        Trajectory {
            h: self.h,
            u: comb(&self.u, &other.u),
            du: comb(&self.du, &other.du),
            ddu: comb(&self.ddu, &other.ddu),
        }
    }
}

fn hermite(theta: f64, y0: f64, m0: f64, y1: f64, m1: f64) -> f64 {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + theta) * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * m1
}

/// Solve u'' + (a(t)+lambda)u = 0 with u(0) = y0.0, u'(0) = y0.1 by RK4 on
/// the grid nodes.
pub fn integrate_ivp(
    potential: &Potential,
    lambda: f64,
    y0: (f64, f64),
    grid: GridSpec,
) -> Result<Trajectory> {
    GridSpec::new(grid.n)?;
    let a = potential.evaluator()?;
    let n = grid.n;
    let h = grid.h();
    let mut u = Vec::with_capacity(n);
    let mut du = Vec::with_capacity(n);
    let (mut y, mut dy) = y0;
    u.push(y);
    du.push(dy);
    let f = |t: f64, y: f64, dy: f64| (dy, -(a.eval(t) + lambda) * y);
    for i in 0..n - 1 {
        let t = grid.node(i);
        let (k1u, k1v) = f(t, y, dy);
        let (k2u, k2v) = f(t + 0.5 * h, y + 0.5 * h * k1u, dy + 0.5 * h * k1v);
        let (k3u, k3v) = f(t + 0.5 * h, y + 0.5 * h * k2u, dy + 0.5 * h * k2v);
        let (k4u, k4v) = f(t + h, y + h * k3u, dy + h * k3v);
        y += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        dy += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        u.push(y);
        du.push(dy);
    }
    let ddu = (0..n)
        .map(|i| -(a.eval(grid.node(i)) + lambda) * u[i])
        .collect();
    Ok(Trajectory { h, u, du, ddu })
}

/// The two canonical solutions phi1 (1,0) and phi2 (0,1); every homogeneous
/// solution is alpha*phi1 + beta*phi2 with (alpha, beta) its initial data.
#[derive(Debug, Clone)]
pub struct FundamentalPair {
    pub phi1: Trajectory,
    pub phi2: Trajectory,
    pub lambda: f64,
    pub potential: Potential,
    /// max over nodes of |phi1 phi2' - phi1' phi2 - 1|; Abel's identity says
    /// the Wronskian is constant, so this measures integration quality.
    pub wronskian_deviation: f64,
}

pub fn fundamental_pair(
    potential: &Potential,
    lambda: f64,
    grid: GridSpec,
) -> Result<FundamentalPair> {
    let phi1 = integrate_ivp(potential, lambda, (1.0, 0.0), grid)?;
    let phi2 = integrate_ivp(potential, lambda, (0.0, 1.0), grid)?;
    let wronskian_deviation = (0..grid.n)
        .map(|i| {
            let (u1, du1) = phi1.at_node(i);
            let (u2, du2) = phi2.at_node(i);
            (u1 * du2 - du1 * u2 - 1.0).abs()
        })
        .fold(0.0, f64::max);
    Ok(FundamentalPair {
        phi1,
        phi2,
        lambda,
        potential: potential.clone(),
        wronskian_deviation,
    })
}

impl FundamentalPair {
    pub fn grid(&self) -> GridSpec {
        self.phi1.grid()
    }

    /// Boundary data (phi1(1), phi1'(1), phi2(1), phi2'(1)) that every
    /// boundary determinant is built from.
    pub fn end_values(&self) -> (f64, f64, f64, f64) {
        let (p1, dp1) = self.phi1.end();
        let (p2, dp2) = self.phi2.end();
        (p1, dp1, p2, dp2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    #[test]
    fn zero_potential_constant_solution() {
        let traj =
            integrate_ivp(&Potential::constant(0.0), 0.0, (1.0, 0.0), grid()).unwrap();
        for i in 0..traj.n() {
            let (u, du) = traj.at_node(i);
            assert_eq!(u, 1.0);
            assert_eq!(du, 0.0);
        }
    }

    #[test]
    fn hyperbolic_end_values() {
        let traj =
            integrate_ivp(&Potential::constant(-1.0), 0.0, (1.0, 0.0), grid()).unwrap();
        let (u, du) = traj.end();
        assert!((u - 1.0f64.cosh()).abs() < 1e-8);
        assert!((du - 1.0f64.sinh()).abs() < 1e-8);
    }

    #[test]
    fn lambda_shift_cancels_constant_potential() {
        // a = -4, lambda = 4: coefficient vanishes, phi2(t) = t.
        let traj = integrate_ivp(&Potential::constant(-4.0), 4.0, (0.0, 1.0), grid()).unwrap();
        for i in [0, 250, 500, 1000] {
            let (u, _) = traj.at_node(i);
            assert!((u - grid().node(i)).abs() < 1e-13);
        }
    }

    #[test]
    fn trig_end_value_at_pi_squared() {
        let lambda = std::f64::consts::PI.powi(2);
        let traj = integrate_ivp(&Potential::constant(0.0), lambda, (0.0, 1.0), grid()).unwrap();
        let (u, _) = traj.end();
        // u = sin(pi t)/pi vanishes at t = 1.
        assert!(u.abs() < 1e-8);
    }

    #[test]
    fn dense_output_matches_closed_form_between_nodes() {
        let traj = integrate_ivp(&Potential::constant(-1.0), 0.0, (0.0, 1.0), grid()).unwrap();
        for &t in &[0.0001, 0.123456, 0.5000005, 0.999999] {
            let (u, du) = traj.eval(t).unwrap();
            assert!((u - t.sinh()).abs() < 1e-10, "u at {t}");
            assert!((du - t.cosh()).abs() < 1e-10, "du at {t}");
        }
    }

    #[test]
    fn dense_output_exact_at_nodes() {
        let traj = integrate_ivp(&Potential::constant(-1.0), 0.0, (1.0, 0.0), grid()).unwrap();
        let g = grid();
        for i in [0, 1, 499, 1000] {
            let (u, du) = traj.eval(g.node(i)).unwrap();
            let (su, sdu) = traj.at_node(i);
            assert_eq!(u, su);
            assert_eq!(du, sdu);
        }
    }

    #[test]
    fn out_of_domain_rejected() {
        let traj = integrate_ivp(&Potential::constant(0.0), 0.0, (1.0, 0.0), grid()).unwrap();
        assert!(matches!(traj.eval(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(traj.eval(-0.1), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn wronskian_stays_near_one() {
        for a in [-9.0, -4.0, -1.0, 0.0, 3.0] {
            let pair = fundamental_pair(&Potential::constant(a), 0.0, grid()).unwrap();
            assert!(
                pair.wronskian_deviation < 1e-10,
                "a={a}: deviation {}",
                pair.wronskian_deviation
            );
        }
    }

    #[test]
    fn wronskian_deviation_shrinks_under_refinement() {
        let p = Potential::constant(-25.0);
        let coarse = fundamental_pair(&p, 0.0, GridSpec { n: 101 }).unwrap();
        let fine = fundamental_pair(&p, 0.0, GridSpec { n: 201 }).unwrap();
        assert!(fine.wronskian_deviation < coarse.wronskian_deviation);
    }

    #[test]
    fn linearity_of_initial_data() {
        let p = Potential::constant(-2.0);
        let pair = fundamental_pair(&p, 0.5, grid()).unwrap();
        let (alpha, beta) = (0.7, -1.3);
        let combo = integrate_ivp(&p, 0.5, (alpha, beta), grid()).unwrap();
        for i in [0, 137, 500, 1000] {
            let (u, du) = combo.at_node(i);
            let (u1, du1) = pair.phi1.at_node(i);
            let (u2, du2) = pair.phi2.at_node(i);
            let eu = alpha * u1 + beta * u2;
            let edu = alpha * du1 + beta * du2;
            assert!((u - eu).abs() <= 1e-10 * eu.abs().max(1.0));
            assert!((du - edu).abs() <= 1e-10 * edu.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_degenerate_grid() {
        let r = integrate_ivp(&Potential::constant(0.0), 0.0, (1.0, 0.0), GridSpec { n: 1 });
        assert!(matches!(r, Err(Error::InvalidGrid { n: 1 })));
    }
}
