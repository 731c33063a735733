//! The ten basis solutions r1..r10 of L[lambda]u = 0, each pinned down by
//! unit/zero boundary data, and the identities expressing every one of them
//! as a boundary trace of some Green's function.
//!
//! These are the rank-one ingredients of all decomposition identities: each
//! correction term there is r_i(t) times a boundary trace in s.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::green::{build_green, BcKind, GreenKernel, Side};
use crate::ode::{FundamentalPair, GridSpec, Trajectory};
use crate::{Error, Result};

/// Which basis solution. The boundary data pins each one down:
///
/// | kind | data                       | needs            |
/// |------|----------------------------|------------------|
/// | r1   | u(0)=1, u(1)=0             | phi2(1) != 0     |
/// | r2   | u(0)=0, u(1)=1             | phi2(1) != 0     |
/// | r3   | u(0)-u(1)=1, u'(0)-u'(1)=0 | periodic det != 0|
/// | r4   | u(0)-u(1)=0, u'(0)-u'(1)=1 | periodic det != 0|
/// | r5   | u'(0)=1, u'(1)=0           | phi1'(1) != 0    |
/// | r6   | u'(0)=0, u'(1)=1           | phi1'(1) != 0    |
/// | r7   | u(0)=1, u'(1)=0            | phi2'(1) != 0    |
/// | r8   | u(0)=0, u'(1)=1            | phi2'(1) != 0    |
/// | r9   | u'(0)=1, u(1)=0            | phi1(1) != 0     |
/// | r10  | u'(0)=0, u(1)=1            | phi1(1) != 0     |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
}

impl BasisKind {
    pub const ALL: [BasisKind; 10] = [
        BasisKind::R1,
        BasisKind::R2,
        BasisKind::R3,
        BasisKind::R4,
        BasisKind::R5,
        BasisKind::R6,
        BasisKind::R7,
        BasisKind::R8,
        BasisKind::R9,
        BasisKind::R10,
    ];

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|k| k == self).unwrap() + 1
    }

    /// The boundary condition whose determinant the defining system solves
    /// against; resonance of that problem is resonance of this basis function.
    pub fn governing_bc(&self) -> BcKind {
        use BasisKind::*;
        match self {
            R1 | R2 => BcKind::Dirichlet,
            R3 | R4 => BcKind::Periodic,
            R5 | R6 => BcKind::Neumann,
            R7 | R8 => BcKind::Mixed2,
            R9 | R10 => BcKind::Mixed1,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.index())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        BasisKind::ALL
            .iter()
            .copied()
            .find(|k| k.to_string() == t)
            .ok_or_else(|| Error::Parse(format!("unknown basis function '{s}' (expected r1..r10)")))
    }
}

/// Solve the defining 2x2 boundary system for (alpha, beta) with
/// r = alpha phi1 + beta phi2.
pub fn basis_coefficients(kind: BasisKind, pair: &FundamentalPair) -> Result<(f64, f64)> {
    let (p1, dp1, p2, dp2) = pair.end_values();
    let scale = 1.0 + p1.abs().max(dp1.abs()).max(p2.abs()).max(dp2.abs());
    let threshold = 1e-9 * scale;
    let check = |det: f64| -> Result<f64> {
        if det.abs() < threshold {
            Err(Error::Resonant {
                bc: kind.governing_bc(),
                det,
                threshold,
            })
        } else {
            Ok(det)
        }
    };
    use BasisKind::*;
    Ok(match kind {
        R1 => {
            let det = check(p2)?;
            (1.0, -p1 / det)
        }
        R2 => {
            let det = check(p2)?;
            (0.0, 1.0 / det)
        }
        R3 | R4 => {
            // [[1-p1, -p2], [-dp1, 1-dp2]] (alpha, beta)^T = e_1 or e_2
            let det = check((1.0 - p1) * (1.0 - dp2) - p2 * dp1)?;
            if kind == R3 {
                ((1.0 - dp2) / det, dp1 / det)
            } else {
                (p2 / det, (1.0 - p1) / det)
            }
        }
        R5 => {
            let det = check(dp1)?;
            (-dp2 / det, 1.0)
        }
        R6 => {
            let det = check(dp1)?;
            (1.0 / det, 0.0)
        }
        R7 => {
            let det = check(dp2)?;
            (1.0, -dp1 / det)
        }
        R8 => {
            let det = check(dp2)?;
            (0.0, 1.0 / det)
        }
        R9 => {
            let det = check(p1)?;
            (-p2 / det, 1.0)
        }
        R10 => {
            let det = check(p1)?;
            (1.0 / det, 0.0)
        }
    })
}

/// The basis solution itself, on the pair's grid.
pub fn basis_solution(kind: BasisKind, pair: &FundamentalPair) -> Result<Trajectory> {
    let (alpha, beta) = basis_coefficients(kind, pair)?;
    Ok(pair.phi1.lin_comb(alpha, &pair.phi2, beta))
}

/// Sup-norm deviation of each trace identity on the grid:
///
/// ```text
/// r1 = -dG_D/ds(.,0)   r2 = dG_D/ds(.,1)    r3 = -dG_P/ds(.,0)
/// r4 = G_P(.,0)        r5 = G_N(.,0)        r6 = -G_N(.,1)
/// r7 = -dG_M2/ds(.,0)  r8 = -G_M2(.,1)      r9 = G_M1(.,0)
/// r10 = dG_M1/ds(.,1)
/// ```
///
/// Traces at s=0 take the t >= s branch, traces at s=1 the t <= s branch:
/// the branch covering the trace's interior, extended to the corners. The
/// sign on r10 is forced by that branch: on t < 1 the kernel's s-derivative
/// at s=1 carries the boundary datum u(1)=1 with a plus sign, which the
/// continuous extension keeps at t=1.
pub fn basis_green_identity_check(
    pair: &FundamentalPair,
    grid: GridSpec,
) -> Result<Vec<(BasisKind, Result<f64>)>> {
    GridSpec::new(grid.n)?;
    let nodes: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();

    enum Trace {
        Value { sign: f64, s: f64 },
        DsDeriv { sign: f64, s: f64 },
    }
    use BasisKind::*;
    let spec: [(BasisKind, BcKind, Trace); 10] = [
        (R1, BcKind::Dirichlet, Trace::DsDeriv { sign: -1.0, s: 0.0 }),
        (R2, BcKind::Dirichlet, Trace::DsDeriv { sign: 1.0, s: 1.0 }),
        (R3, BcKind::Periodic, Trace::DsDeriv { sign: -1.0, s: 0.0 }),
        (R4, BcKind::Periodic, Trace::Value { sign: 1.0, s: 0.0 }),
        (R5, BcKind::Neumann, Trace::Value { sign: 1.0, s: 0.0 }),
        (R6, BcKind::Neumann, Trace::Value { sign: -1.0, s: 1.0 }),
        (R7, BcKind::Mixed2, Trace::DsDeriv { sign: -1.0, s: 0.0 }),
        (R8, BcKind::Mixed2, Trace::Value { sign: -1.0, s: 1.0 }),
        (R9, BcKind::Mixed1, Trace::Value { sign: 1.0, s: 0.0 }),
        (R10, BcKind::Mixed1, Trace::DsDeriv { sign: 1.0, s: 1.0 }),
    ];

    let mut out = Vec::with_capacity(10);
    for (kind, bc, trace) in spec {
        let entry = (|| -> Result<f64> {
            let r = basis_solution(kind, pair)?;
            let kernel: GreenKernel = build_green(bc, pair)?;
            let mut worst: f64 = 0.0;
            for &t in &nodes {
                let (rv, _) = r.eval(t)?;
                let tv = match trace {
                    Trace::Value { sign, s } => {
                        sign * kernel.eval_side(t, s, Side::for_t_trace(s))?
                    }
                    Trace::DsDeriv { sign, s } => {
                        sign * kernel.partials_side(t, s, Side::for_t_trace(s))?.dg_ds
                    }
                };
                worst = worst.max((rv - tv).abs());
            }
            Ok(worst)
        })();
        out.push((kind, entry));
    }
    Ok(out)
}
