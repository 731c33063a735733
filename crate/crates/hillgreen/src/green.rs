//! Green's functions for u'' + (a(t)+lambda)u under the five classical
//! boundary conditions on [0,1].
//!
//! Every kernel has the form
//!
//! ```text
//! G(t,s) = c1(s) phi1(t) + c2(s) phi2(t) + H(t-s) k(t,s),
//! k(t,s) = phi2(t) phi1(s) - phi1(t) phi2(s),
//! ```
//!
//! where H is the unit step. Attaching k for t >= s makes the diagonal jump
//! of dG/dt equal to the Wronskian, i.e. exactly 1, by construction; the
//! boundary conditions then determine c1, c2 through a 2x2 solve whose
//! determinant doubles as the resonance detector.

use std::fmt;
use std::io::{self, Write as IoWrite};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ode::{FundamentalPair, GridSpec};
use crate::{Error, Result};

/// The five boundary conditions the kernels are built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BcKind {
    /// u(0) = u(1), u'(0) = u'(1)
    Periodic,
    /// u'(0) = u'(1) = 0
    Neumann,
    /// u(0) = u(1) = 0
    Dirichlet,
    /// u'(0) = 0, u(1) = 0
    Mixed1,
    /// u(0) = 0, u'(1) = 0
    Mixed2,
}

impl BcKind {
    pub const ALL: [BcKind; 5] = [
        BcKind::Periodic,
        BcKind::Neumann,
        BcKind::Dirichlet,
        BcKind::Mixed1,
        BcKind::Mixed2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BcKind::Periodic => "periodic",
            BcKind::Neumann => "neumann",
            BcKind::Dirichlet => "dirichlet",
            BcKind::Mixed1 => "mixed1",
            BcKind::Mixed2 => "mixed2",
        }
    }

    /// The pair (B, C) expressing the boundary conditions as
    /// B (u(0), u'(0))^T + C (u(1), u'(1))^T = 0.
    pub fn boundary_matrices(&self) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
        match self {
            BcKind::Periodic => ([[1.0, 0.0], [0.0, 1.0]], [[-1.0, 0.0], [0.0, -1.0]]),
            BcKind::Neumann => ([[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]),
            BcKind::Dirichlet => ([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]),
            BcKind::Mixed1 => ([[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]),
            BcKind::Mixed2 => ([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]),
        }
    }
}

impl fmt::Display for BcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BcKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" | "p" => Ok(BcKind::Periodic),
            "neumann" | "n" => Ok(BcKind::Neumann),
            "dirichlet" | "d" => Ok(BcKind::Dirichlet),
            "mixed1" | "m1" => Ok(BcKind::Mixed1),
            "mixed2" | "m2" => Ok(BcKind::Mixed2),
            other => Err(Error::Parse(format!(
                "unknown boundary condition '{other}' (expected periodic, neumann, dirichlet, mixed1, mixed2)"
            ))),
        }
    }
}

/// Lateral limit selector at the diagonal. The kernel is continuous there but
/// its first derivatives are not; Upper includes the step term k(t,s), Lower
/// omits it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The t < s branch (no step term).
    Lower,
    /// The t >= s branch (step term attached).
    Upper,
}

impl Side {
    /// Branch for a one-dimensional trace s -> G(t0, s) along a fixed row
    /// t0 in {0, 1}: the branch valid on the row's interior, extended
    /// continuously into the corners.
    pub fn for_s_trace(t_fixed: f64) -> Side {
        if t_fixed >= 0.5 {
            Side::Upper
        } else {
            Side::Lower
        }
    }

    /// Branch for a trace t -> G(t, s0) along a fixed column s0 in {0, 1}.
    pub fn for_t_trace(s_fixed: f64) -> Side {
        if s_fixed >= 0.5 {
            Side::Lower
        } else {
            Side::Upper
        }
    }
}

/// First partial derivatives of the kernel at a point, all taken on the same
/// lateral side unless obtained through the default diagonal convention.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Partials {
    pub dg_dt: f64,
    pub dg_ds: f64,
    pub d2g_dtds: f64,
}

/// Assembled Green's function: boundary coefficients on top of a fundamental
/// pair. Immutable; evaluation is pure.
#[derive(Debug, Clone)]
pub struct GreenKernel<'a> {
    bc: BcKind,
    pair: &'a FundamentalPair,
    /// c_i(s) = w[i][0] phi1(s) + w[i][1] phi2(s).
    w: [[f64; 2]; 2],
    /// Signed boundary determinant the coefficients were solved against.
    det: f64,
}

/// Impose the boundary conditions on the jump representation and solve for
/// c1, c2 in closed form.
pub fn build_green(bc: BcKind, pair: &FundamentalPair) -> Result<GreenKernel<'_>> {
    let (p1, dp1, p2, dp2) = pair.end_values();
    let scale = 1.0 + p1.abs().max(dp1.abs()).max(p2.abs()).max(dp2.abs());
    let threshold = 1e-9 * scale;
    // Wronskian at t=1; identically 1 in exact arithmetic, kept numerical so
    // the representation stays internally consistent with the integrator.
    let wr = p1 * dp2 - p2 * dp1;
    let (det, w) = match bc {
        BcKind::Dirichlet => {
            let det = p2;
            (det, [[0.0, 0.0], [-p2 / det, p1 / det]])
        }
        BcKind::Neumann => {
            let det = dp1;
            (det, [[-dp2 / det, dp1 / det], [0.0, 0.0]])
        }
        BcKind::Mixed1 => {
            let det = p1;
            (det, [[-p2 / det, p1 / det], [0.0, 0.0]])
        }
        BcKind::Mixed2 => {
            let det = dp2;
            (det, [[0.0, 0.0], [-dp2 / det, dp1 / det]])
        }
        BcKind::Periodic => {
            let det = (1.0 - p1) * (1.0 - dp2) - p2 * dp1;
            (
                det,
                [
                    [p2 / det, (wr - p1) / det],
                    [(dp2 - wr) / det, -dp1 / det],
                ],
            )
        }
    };
    if det.abs() < threshold {
        return Err(Error::Resonant { bc, det, threshold });
    }
    Ok(GreenKernel { bc, pair, w, det })
}

/// The four kernel quantities split into their continuous part and the step
/// term that switches on for t >= s. Order: value, dG/dt, dG/ds, d2G/dtds.
struct Pieces {
    cont: [f64; 4],
    jump: [f64; 4],
}

impl<'a> GreenKernel<'a> {
    pub fn bc(&self) -> BcKind {
        self.bc
    }

    pub fn pair(&self) -> &'a FundamentalPair {
        self.pair
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn w_matrix(&self) -> [[f64; 2]; 2] {
        self.w
    }

    fn pieces(&self, t: f64, s: f64) -> Result<Pieces> {
        let (f1t, df1t) = self.pair.phi1.eval(t)?;
        let (f2t, df2t) = self.pair.phi2.eval(t)?;
        let (f1s, df1s) = self.pair.phi1.eval(s)?;
        let (f2s, df2s) = self.pair.phi2.eval(s)?;
        let c1 = self.w[0][0] * f1s + self.w[0][1] * f2s;
        let c2 = self.w[1][0] * f1s + self.w[1][1] * f2s;
        let dc1 = self.w[0][0] * df1s + self.w[0][1] * df2s;
        let dc2 = self.w[1][0] * df1s + self.w[1][1] * df2s;
        Ok(Pieces {
            cont: [
                c1 * f1t + c2 * f2t,
                c1 * df1t + c2 * df2t,
                dc1 * f1t + dc2 * f2t,
                dc1 * df1t + dc2 * df2t,
            ],
            jump: [
                f2t * f1s - f1t * f2s,
                df2t * f1s - df1t * f2s,
                f2t * df1s - f1t * df2s,
                df2t * df1s - df1t * df2s,
            ],
        })
    }

    fn side_value(p: &Pieces, idx: usize, side: Side) -> f64 {
        match side {
            Side::Lower => p.cont[idx],
            Side::Upper => p.cont[idx] + p.jump[idx],
        }
    }

    /// G(t,s); on the diagonal the two branches coincide.
    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        let side = if t > s { Side::Upper } else { Side::Lower };
        self.eval_side(t, s, side)
    }

    pub fn eval_side(&self, t: f64, s: f64, side: Side) -> Result<f64> {
        let p = self.pieces(t, s)?;
        Ok(Self::side_value(&p, 0, side))
    }

    /// Partial derivatives with the default diagonal convention: off the
    /// diagonal, the branch containing (t,s); at t = s, dG/dt is the lateral
    /// limit from t < s, dG/ds the one from s < t, and the mixed partial is
    /// continuous so either branch serves.
    pub fn partials(&self, t: f64, s: f64) -> Result<Partials> {
        if t > s {
            self.partials_side(t, s, Side::Upper)
        } else if t < s {
            self.partials_side(t, s, Side::Lower)
        } else {
            let p = self.pieces(t, s)?;
            Ok(Partials {
                dg_dt: Self::side_value(&p, 1, Side::Lower),
                dg_ds: Self::side_value(&p, 2, Side::Upper),
                d2g_dtds: Self::side_value(&p, 3, Side::Upper),
            })
        }
    }

    pub fn partials_side(&self, t: f64, s: f64, side: Side) -> Result<Partials> {
        let p = self.pieces(t, s)?;
        Ok(Partials {
            dg_dt: Self::side_value(&p, 1, side),
            dg_ds: Self::side_value(&p, 2, side),
            d2g_dtds: Self::side_value(&p, 3, side),
        })
    }

    /// The 2x2 first-order-system kernel
    /// g(t,s) = [[-dG/ds, G], [-d2G/dtds, dG/dt]], all entries on one side.
    pub fn matrix_form_side(&self, t: f64, s: f64, side: Side) -> Result<[[f64; 2]; 2]> {
        let p = self.pieces(t, s)?;
        let g = Self::side_value(&p, 0, side);
        let dt = Self::side_value(&p, 1, side);
        let ds = Self::side_value(&p, 2, side);
        let dtds = Self::side_value(&p, 3, side);
        Ok([[-ds, g], [-dtds, dt]])
    }

    /// Verify the defining properties on a grid: ODE residual off the
    /// diagonal (central second difference in t), boundary-condition rows,
    /// derivative jump across the diagonal, and symmetry.
    pub fn check_green_definition(&self, grid: GridSpec) -> Result<DefinitionReport> {
        GridSpec::new(grid.n)?;
        let a = self.pair.potential.evaluator()?;
        let lambda = self.pair.lambda;
        let nodes: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();

        // (i) ODE residual: d2G/dt2 + (a+lambda)G = 0 away from the diagonal.
        // h is large enough that the second difference is not noise-dominated
        // and small enough that truncation stays near desk scale.
        let h = 1e-4;
        let mut ode_residual: f64 = 0.0;
        for &t in &nodes {
            if t < 2.0 * h || t > 1.0 - 2.0 * h {
                continue;
            }
            for &s in &nodes {
                if (t - s).abs() <= 0.02 {
                    continue;
                }
                let gm = self.eval(t - h, s)?;
                let g0 = self.eval(t, s)?;
                let gp = self.eval(t + h, s)?;
                let second = (gp - 2.0 * g0 + gm) / (h * h);
                ode_residual = ode_residual.max((second + (a.eval(t) + lambda) * g0).abs());
            }
        }

        // (ii) boundary rows B v(0) + C v(1) with v = (G, dG/dt)^T; the t=0
        // trace lives on the lower branch, the t=1 trace on the upper one.
        let (b, c) = self.bc.boundary_matrices();
        let mut boundary_residual: f64 = 0.0;
        for &s in &nodes {
            let v0 = (
                self.eval_side(0.0, s, Side::Lower)?,
                self.partials_side(0.0, s, Side::Lower)?.dg_dt,
            );
            let v1 = (
                self.eval_side(1.0, s, Side::Upper)?,
                self.partials_side(1.0, s, Side::Upper)?.dg_dt,
            );
            for row in 0..2 {
                let r = b[row][0] * v0.0 + b[row][1] * v0.1 + c[row][0] * v1.0 + c[row][1] * v1.1;
                boundary_residual = boundary_residual.max(r.abs());
            }
        }

        // (iii) diagonal jump of dG/dt equals the Wronskian, nominally 1.
        let mut jump_residual: f64 = 0.0;
        for &s in &nodes[1..nodes.len() - 1] {
            let up = self.partials_side(s, s, Side::Upper)?.dg_dt;
            let lo = self.partials_side(s, s, Side::Lower)?.dg_dt;
            jump_residual = jump_residual.max((up - lo - 1.0).abs());
        }

        // (iv) symmetry of the full kernel.
        let mut symmetry_residual: f64 = 0.0;
        for (i, &t) in nodes.iter().enumerate() {
            for &s in &nodes[..i] {
                let d = (self.eval(t, s)? - self.eval(s, t)?).abs();
                symmetry_residual = symmetry_residual.max(d);
            }
        }

        Ok(DefinitionReport {
            bc: self.bc,
            grid_n: grid.n,
            ode_residual,
            boundary_residual,
            jump_residual,
            symmetry_residual,
        })
    }

    /// Dump the kernel over grid x grid as CSV, row-major in t.
    pub fn write_table(&self, grid: GridSpec, out: &mut dyn IoWrite) -> io::Result<()> {
        let to_io = |e: Error| io::Error::new(io::ErrorKind::InvalidInput, e.to_string());
        GridSpec::new(grid.n).map_err(to_io)?;
        writeln!(out, "t,s,G,dGdt,dGds")?;
        for i in 0..grid.n {
            let t = grid.node(i);
            for j in 0..grid.n {
                let s = grid.node(j);
                let g = self.eval(t, s).map_err(to_io)?;
                let p = self.partials(t, s).map_err(to_io)?;
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    t, s, g, p.dg_dt, p.dg_ds
                )?;
            }
        }
        Ok(())
    }
}

/// Residuals of the four defining properties. All should sit at integrator
/// scale for a correct kernel.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DefinitionReport {
    pub bc: BcKind,
    pub grid_n: usize,
    pub ode_residual: f64,
    pub boundary_residual: f64,
    pub jump_residual: f64,
    pub symmetry_residual: f64,
}

impl DefinitionReport {
    pub fn max_residual(&self) -> f64 {
        self.ode_residual
            .max(self.boundary_residual)
            .max(self.jump_residual)
            .max(self.symmetry_residual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::fundamental_pair;
    use crate::potential::Potential;

    fn pair(a: f64, lambda: f64) -> FundamentalPair {
        fundamental_pair(&Potential::constant(a), lambda, GridSpec::default()).unwrap()
    }

    #[test]
    fn bc_names_round_trip() {
        for bc in BcKind::ALL {
            assert_eq!(bc.name().parse::<BcKind>().unwrap(), bc);
        }
        assert!("robin".parse::<BcKind>().is_err());
    }

    #[test]
    fn dirichlet_zero_potential_is_triangle_kernel() {
        let p = pair(0.0, 0.0);
        let k = build_green(BcKind::Dirichlet, &p).unwrap();
        assert!((k.eval(0.5, 0.5).unwrap() + 0.25).abs() < 1e-12);
        assert!(k.eval(0.0, 0.3).unwrap().abs() < 1e-12);
        // closed form -(1-max)(min)
        let points: [(f64, f64); 5] = [(0.7, 0.2), (0.2, 0.7), (0.31, 0.31), (1.0, 0.4), (0.4, 0.0)];
        for &(t, s) in &points {
            let exact = -(1.0 - t.max(s)) * t.min(s);
            assert!((k.eval(t, s).unwrap() - exact).abs() < 1e-12, "at ({t},{s})");
        }
        let d = k.partials(0.7, 0.2).unwrap();
        assert!((d.dg_dt - 0.2).abs() < 1e-10);
        assert!((d.dg_ds + 0.3).abs() < 1e-10);
    }

    #[test]
    fn periodic_exponential_corner_values() {
        let p = pair(-1.0, 0.0);
        let k = build_green(BcKind::Periodic, &p).unwrap();
        let e = std::f64::consts::E;
        let corner = (1.0 + e) / (2.0 * (1.0 - e));
        assert!((k.eval(1.0, 0.0).unwrap() - corner).abs() < 1e-9);
        assert!((k.eval(0.0, 0.0).unwrap() - corner).abs() < 1e-9);
    }

    #[test]
    fn dirichlet_hyperbolic_closed_form() {
        let p = pair(-1.0, 0.0);
        let k = build_green(BcKind::Dirichlet, &p).unwrap();
        let sinh1 = 1.0f64.sinh();
        let points: [(f64, f64); 4] = [(0.8, 0.3), (0.3, 0.8), (0.5, 0.5), (0.05, 0.95)];
        for &(t, s) in &points {
            let (lo, hi) = (t.min(s), t.max(s));
            let exact = -lo.sinh() * (1.0 - hi).sinh() / sinh1;
            assert!((k.eval(t, s).unwrap() - exact).abs() < 1e-10, "at ({t},{s})");
        }
    }

    #[test]
    fn periodic_resonant_at_zero_potential() {
        let p = pair(0.0, 0.0);
        match build_green(BcKind::Periodic, &p) {
            Err(Error::Resonant { bc, det, .. }) => {
                assert_eq!(bc, BcKind::Periodic);
                assert!(det.abs() < 1e-9);
            }
            other => panic!("expected Resonant, got {other:?}"),
        }
    }

    #[test]
    fn diagonal_jump_is_wronskian() {
        let p = pair(-1.0, 0.0);
        for bc in BcKind::ALL {
            let k = build_green(bc, &p).unwrap();
            let up = k.partials_side(0.3, 0.3, Side::Upper).unwrap().dg_dt;
            let lo = k.partials_side(0.3, 0.3, Side::Lower).unwrap().dg_dt;
            assert!((up - lo - 1.0).abs() < 1e-10, "{bc}");
        }
    }

    #[test]
    fn diagonal_default_sides() {
        let p = pair(-1.0, 0.0);
        let k = build_green(BcKind::Neumann, &p).unwrap();
        let d = k.partials(0.4, 0.4).unwrap();
        let lo = k.partials_side(0.4, 0.4, Side::Lower).unwrap();
        let up = k.partials_side(0.4, 0.4, Side::Upper).unwrap();
        assert_eq!(d.dg_dt, lo.dg_dt);
        assert_eq!(d.dg_ds, up.dg_ds);
        assert!((up.d2g_dtds - lo.d2g_dtds).abs() < 1e-9);
    }

    #[test]
    fn definition_report_all_bcs() {
        let p = pair(-1.0, 0.0);
        for bc in BcKind::ALL {
            let k = build_green(bc, &p).unwrap();
            let r = k.check_green_definition(GridSpec { n: 41 }).unwrap();
            assert!(r.max_residual() < 1e-6, "{bc}: {r:?}");
        }
    }

    #[test]
    fn trace_side_helpers() {
        assert_eq!(Side::for_s_trace(0.0), Side::Lower);
        assert_eq!(Side::for_s_trace(1.0), Side::Upper);
        assert_eq!(Side::for_t_trace(0.0), Side::Upper);
        assert_eq!(Side::for_t_trace(1.0), Side::Lower);
    }

    #[test]
    fn csv_table_shape() {
        let p = pair(0.0, 0.0);
        let k = build_green(BcKind::Dirichlet, &p).unwrap();
        let mut buf = Vec::new();
        k.write_table(GridSpec { n: 3 }, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,s,G,dGdt,dGds");
        assert_eq!(lines.len(), 1 + 9);
        assert!(lines[1].split(',').count() == 5);
    }

    #[test]
    fn out_of_domain_propagates() {
        let p = pair(0.0, 0.0);
        let k = build_green(BcKind::Dirichlet, &p).unwrap();
        assert!(matches!(k.eval(1.2, 0.5), Err(Error::OutOfDomain { .. })));
    }
}
