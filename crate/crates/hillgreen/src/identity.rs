//! The 36 decomposition identities between the five Green's functions, the
//! first-order-system boundary identities, the sign-comparison theorems, and
//! the two remark identities.
//!
//! Every decomposition has the shape
//!
//! ```text
//! G_target(t,s) = G_base(t,s) + sum_k  c_k(t) * w_k(s)
//! ```
//!
//! with each c_k a combination of basis solutions r_i and each w_k a boundary
//! trace of one of the two kernels: the plain form traces the target kernel,
//! the `_alt` form re-expresses those traces through the base kernel at the
//! cost of a nondegeneracy divisor. Residuals are sup norms on grid x grid,
//! which matches the pointwise "for all (t,s)" shape of the statements.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::basis::{basis_solution, BasisKind};
use crate::green::{build_green, BcKind, GreenKernel, Side};
use crate::ode::{FundamentalPair, GridSpec};
use crate::{Error, Result};

/// One identity: target kernel, base kernel, plain or alternate form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[allow(clippy::enum_variant_names)]
pub enum IdentityId {
    PFromD,
    DFromP,
    NFromD,
    DFromN,
    M1FromD,
    M2FromD,
    DFromM2,
    DFromM1,
    M2FromN,
    M1FromN,
    NFromM2,
    NFromM1,
    PFromN,
    NFromP,
    M1FromP,
    M2FromP,
    PFromM2,
    PFromM1,
    M2FromDAlt,
    M1FromDAlt,
    DFromM2Alt,
    DFromM1Alt,
    NFromDAlt,
    DFromNAlt,
    PFromDAlt,
    DFromPAlt,
    M2FromNAlt,
    M1FromNAlt,
    NFromM1Alt,
    NFromM2Alt,
    NFromPAlt,
    PFromNAlt,
    M1FromPAlt,
    M2FromPAlt,
    PFromM2Alt,
    PFromM1Alt,
}

impl IdentityId {
    pub const ALL: [IdentityId; 36] = {
        use IdentityId::*;
        [
            PFromD, DFromP, NFromD, DFromN, M1FromD, M2FromD, DFromM2, DFromM1, M2FromN,
            M1FromN, NFromM2, NFromM1, PFromN, NFromP, M1FromP, M2FromP, PFromM2, PFromM1,
            M2FromDAlt, M1FromDAlt, DFromM2Alt, DFromM1Alt, NFromDAlt, DFromNAlt, PFromDAlt,
            DFromPAlt, M2FromNAlt, M1FromNAlt, NFromM1Alt, NFromM2Alt, NFromPAlt, PFromNAlt,
            M1FromPAlt, M2FromPAlt, PFromM2Alt, PFromM1Alt,
        ]
    };

    /// (target, base, alternate-form?)
    pub fn parts(&self) -> (BcKind, BcKind, bool) {
        use BcKind::*;
        use IdentityId::*;
        match self {
            PFromD => (Periodic, Dirichlet, false),
            DFromP => (Dirichlet, Periodic, false),
            NFromD => (Neumann, Dirichlet, false),
            DFromN => (Dirichlet, Neumann, false),
            M1FromD => (Mixed1, Dirichlet, false),
            M2FromD => (Mixed2, Dirichlet, false),
            DFromM2 => (Dirichlet, Mixed2, false),
            DFromM1 => (Dirichlet, Mixed1, false),
            M2FromN => (Mixed2, Neumann, false),
            M1FromN => (Mixed1, Neumann, false),
            NFromM2 => (Neumann, Mixed2, false),
            NFromM1 => (Neumann, Mixed1, false),
            PFromN => (Periodic, Neumann, false),
            NFromP => (Neumann, Periodic, false),
            M1FromP => (Mixed1, Periodic, false),
            M2FromP => (Mixed2, Periodic, false),
            PFromM2 => (Periodic, Mixed2, false),
            PFromM1 => (Periodic, Mixed1, false),
            M2FromDAlt => (Mixed2, Dirichlet, true),
            M1FromDAlt => (Mixed1, Dirichlet, true),
            DFromM2Alt => (Dirichlet, Mixed2, true),
            DFromM1Alt => (Dirichlet, Mixed1, true),
            NFromDAlt => (Neumann, Dirichlet, true),
            DFromNAlt => (Dirichlet, Neumann, true),
            PFromDAlt => (Periodic, Dirichlet, true),
            DFromPAlt => (Dirichlet, Periodic, true),
            M2FromNAlt => (Mixed2, Neumann, true),
            M1FromNAlt => (Mixed1, Neumann, true),
            NFromM1Alt => (Neumann, Mixed1, true),
            NFromM2Alt => (Neumann, Mixed2, true),
            NFromPAlt => (Neumann, Periodic, true),
            PFromNAlt => (Periodic, Neumann, true),
            M1FromPAlt => (Mixed1, Periodic, true),
            M2FromPAlt => (Mixed2, Periodic, true),
            PFromM2Alt => (Periodic, Mixed2, true),
            PFromM1Alt => (Periodic, Mixed1, true),
        }
    }

    fn short(bc: BcKind) -> &'static str {
        match bc {
            BcKind::Periodic => "P",
            BcKind::Neumann => "N",
            BcKind::Dirichlet => "D",
            BcKind::Mixed1 => "M1",
            BcKind::Mixed2 => "M2",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (t, b, alt) = self.parts();
        write!(
            f,
            "{}_from_{}{}",
            Self::short(t),
            Self::short(b),
            if alt { "_alt" } else { "" }
        )
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::Parse(format!("unknown identity '{s}'")))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Sup-norm residual of one identity on grid x grid.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub identity: IdentityId,
    pub grid: GridSpec,
    pub max_abs_residual: f64,
    pub argmax: (f64, f64),
    /// For plain identities: the smaller (in magnitude, kept signed) of the
    /// two boundary determinants. For `_alt` identities: the divisor.
    pub nondegeneracy_value: f64,
}

/// Basis solution sampled on the nodes along with its boundary data.
struct RFun {
    vals: Vec<f64>,
    v0: f64,
    d0: f64,
    v1: f64,
    d1: f64,
}

fn r_fun(pair: &FundamentalPair, nodes: &[f64], kind: BasisKind) -> Result<RFun> {
    let traj = basis_solution(kind, pair)?;
    let vals = nodes
        .iter()
        .map(|&t| traj.eval(t).map(|p| p.0))
        .collect::<Result<Vec<_>>>()?;
    let (v0, d0) = traj.start();
    let (v1, d1) = traj.end();
    Ok(RFun { vals, v0, d0, v1, d1 })
}

/// s -> G(c, s) on the branch covering the trace's interior.
fn value_trace(k: &GreenKernel, nodes: &[f64], c: f64) -> Result<Vec<f64>> {
    let side = Side::for_s_trace(c);
    nodes.iter().map(|&s| k.eval_side(c, s, side)).collect()
}

/// s -> dG/dt(c, s), same branch rule.
fn dt_trace(k: &GreenKernel, nodes: &[f64], c: f64) -> Result<Vec<f64>> {
    let side = Side::for_s_trace(c);
    nodes
        .iter()
        .map(|&s| k.partials_side(c, s, side).map(|p| p.dg_dt))
        .collect()
}

fn vec_scale(v: &[f64], c: f64) -> Vec<f64> {
    v.iter().map(|x| c * x).collect()
}

fn vec_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// ca*a + cb*b
fn vec_comb2(a: &[f64], ca: f64, b: &[f64], cb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}

/// Verify one identity: assemble the right side from the base kernel plus the
/// rank-one corrections and compare against the target kernel pointwise.
pub fn decomposition_residual(
    id: IdentityId,
    pair: &FundamentalPair,
    grid: GridSpec,
) -> Result<ResidualReport> {
    GridSpec::new(grid.n)?;
    let nodes: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();
    let (target_bc, base_bc, alt) = id.parts();
    let target = build_green(target_bc, pair)?;
    let base = build_green(base_bc, pair)?;

    // Divisor guard for the alternate forms: degeneracy relative to the
    // magnitude of the scalars the divisor is built from.
    let guard = |d: f64, ingredients: &[f64]| -> Result<f64> {
        let scale = 1.0 + ingredients.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if d.abs() < 1e-9 * scale {
            Err(Error::DegenerateIdentity {
                id: id.to_string(),
                value: d,
            })
        } else {
            Ok(d)
        }
    };

    let r = |kind: BasisKind| r_fun(pair, &nodes, kind);
    // Plain identities trace the target kernel, alternate ones the base.
    let tv = |c: f64| value_trace(if alt { &base } else { &target }, &nodes, c);
    let tt = |c: f64| dt_trace(if alt { &base } else { &target }, &nodes, c);

    let mut terms: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    let mut nondeg = if target.det().abs() <= base.det().abs() {
        target.det()
    } else {
        base.det()
    };

    use BasisKind::*;
    use IdentityId::*;
    match id {
        PFromD => terms.push((vec_add(&r(R1)?.vals, &r(R2)?.vals), tv(1.0)?)),
        DFromP => terms.push((r(R4)?.vals, vec_sub(&tt(0.0)?, &tt(1.0)?))),
        NFromD => {
            terms.push((r(R1)?.vals, tv(0.0)?));
            terms.push((r(R2)?.vals, tv(1.0)?));
        }
        DFromN => {
            terms.push((r(R5)?.vals, tt(0.0)?));
            terms.push((r(R6)?.vals, tt(1.0)?));
        }
        M1FromD => terms.push((r(R1)?.vals, tv(0.0)?)),
        M2FromD => terms.push((r(R2)?.vals, tv(1.0)?)),
        DFromM2 => terms.push((r(R8)?.vals, tt(1.0)?)),
        DFromM1 => terms.push((r(R9)?.vals, tt(0.0)?)),
        M2FromN => terms.push((r(R5)?.vals, tt(0.0)?)),
        M1FromN => terms.push((r(R6)?.vals, tt(1.0)?)),
        NFromM2 => terms.push((r(R7)?.vals, tv(0.0)?)),
        NFromM1 => terms.push((r(R10)?.vals, tv(1.0)?)),
        PFromN => terms.push((vec_add(&r(R5)?.vals, &r(R6)?.vals), tt(0.0)?)),
        NFromP => terms.push((r(R3)?.vals, vec_sub(&tv(0.0)?, &tv(1.0)?))),
        M1FromP => {
            terms.push((r(R3)?.vals, tv(0.0)?));
            terms.push((vec_scale(&r(R4)?.vals, -1.0), tt(1.0)?));
        }
        M2FromP => {
            terms.push((vec_scale(&r(R3)?.vals, -1.0), tv(1.0)?));
            terms.push((r(R4)?.vals, tt(0.0)?));
        }
        PFromM2 => {
            terms.push((r(R7)?.vals, tv(1.0)?));
            terms.push((r(R8)?.vals, tt(0.0)?));
        }
        PFromM1 => {
            terms.push((r(R9)?.vals, tt(1.0)?));
            terms.push((r(R10)?.vals, tv(0.0)?));
        }
        M2FromDAlt => {
            let r2 = r(R2)?;
            let d = guard(r2.d1, &[r2.d0, r2.v1])?;
            nondeg = d;
            terms.push((vec_scale(&r2.vals, -1.0 / d), tt(1.0)?));
        }
        M1FromDAlt => {
            let r1 = r(R1)?;
            let d = guard(r1.d0, &[r1.d1, r1.v0])?;
            nondeg = d;
            terms.push((vec_scale(&r1.vals, -1.0 / d), tt(0.0)?));
        }
        DFromM2Alt => {
            let r8 = r(R8)?;
            let d = guard(r8.v1, &[r8.v0, r8.d1])?;
            nondeg = d;
            terms.push((vec_scale(&r8.vals, -1.0 / d), tv(1.0)?));
        }
        DFromM1Alt => {
            let r9 = r(R9)?;
            let d = guard(r9.v0, &[r9.v1, r9.d0])?;
            nondeg = d;
            terms.push((vec_scale(&r9.vals, -1.0 / d), tv(0.0)?));
        }
        NFromDAlt => {
            let (r1, r2) = (r(R1)?, r(R2)?);
            let d = guard(
                r1.d0 * r2.d1 - r2.d0 * r1.d1,
                &[r1.d0 * r2.d1, r2.d0 * r1.d1],
            )?;
            nondeg = d;
            terms.push((vec_comb2(&r1.vals, -r2.d1 / d, &r2.vals, r1.d1 / d), tt(0.0)?));
            terms.push((vec_comb2(&r1.vals, r2.d0 / d, &r2.vals, -r1.d0 / d), tt(1.0)?));
        }
        DFromNAlt => {
            let (r5, r6) = (r(R5)?, r(R6)?);
            let d = guard(
                r5.v0 * r6.v1 - r6.v0 * r5.v1,
                &[r5.v0 * r6.v1, r6.v0 * r5.v1],
            )?;
            nondeg = d;
            terms.push((vec_comb2(&r5.vals, -r6.v1 / d, &r6.vals, r5.v1 / d), tv(0.0)?));
            terms.push((vec_comb2(&r5.vals, r6.v0 / d, &r6.vals, -r5.v0 / d), tv(1.0)?));
        }
        PFromDAlt => {
            let (r1, r2) = (r(R1)?, r(R2)?);
            let d = guard(2.0 * r1.d1 + r2.d1 - r1.d0, &[r1.d1, r2.d1, r1.d0])?;
            nondeg = d;
            terms.push((
                vec_scale(&vec_add(&r1.vals, &r2.vals), 1.0 / d),
                vec_sub(&tt(0.0)?, &tt(1.0)?),
            ));
        }
        DFromPAlt => {
            let r4 = r(R4)?;
            let d = guard(r4.v1, &[r4.v0, r4.d1])?;
            nondeg = d;
            terms.push((vec_scale(&r4.vals, -1.0 / d), tv(1.0)?));
        }
        M2FromNAlt => {
            let r5 = r(R5)?;
            let d = guard(r5.v0, &[r5.v1, r5.d0])?;
            nondeg = d;
            terms.push((vec_scale(&r5.vals, -1.0 / d), tv(0.0)?));
        }
        M1FromNAlt => {
            let r6 = r(R6)?;
            let d = guard(r6.v1, &[r6.v0, r6.d1])?;
            nondeg = d;
            terms.push((vec_scale(&r6.vals, -1.0 / d), tv(1.0)?));
        }
        NFromM1Alt => {
            let r10 = r(R10)?;
            let d = guard(r10.d1, &[r10.d0, r10.v1])?;
            nondeg = d;
            terms.push((vec_scale(&r10.vals, -1.0 / d), tt(1.0)?));
        }
        NFromM2Alt => {
            // The divisor is r7'(0), reached through the value-anchored r7;
            // r7(0) = 1 identically, so only the derivative can degenerate.
            let r7 = r(R7)?;
            let d = guard(r7.d0, &[r7.v0, r7.d1])?;
            nondeg = d;
            terms.push((vec_scale(&r7.vals, -1.0 / d), tt(0.0)?));
        }
        NFromPAlt => {
            let r3 = r(R3)?;
            let d = guard(r3.d1, &[r3.d0, r3.v1])?;
            nondeg = d;
            terms.push((vec_scale(&r3.vals, -1.0 / d), tt(1.0)?));
        }
        PFromNAlt => {
            let (r5, r6) = (r(R5)?, r(R6)?);
            let d = guard(r5.v1 - r5.v0 + r6.v1 - r6.v0, &[r5.v0, r5.v1, r6.v0, r6.v1])?;
            nondeg = d;
            terms.push((
                vec_scale(&vec_add(&r5.vals, &r6.vals), 1.0 / d),
                vec_sub(&tv(0.0)?, &tv(1.0)?),
            ));
        }
        M1FromPAlt => {
            let (r3, r4) = (r(R3)?, r(R4)?);
            let d = guard(
                (1.0 - r3.v0) * (1.0 + r4.d1) + r4.v0 * r3.d1,
                &[r3.v0, r4.d1, r4.v0, r3.d1],
            )?;
            nondeg = d;
            terms.push((
                vec_comb2(&r3.vals, (1.0 + r4.d1) / d, &r4.vals, -r3.d1 / d),
                tv(0.0)?,
            ));
            terms.push((
                vec_comb2(&r3.vals, -r4.v0 / d, &r4.vals, -(1.0 - r3.v0) / d),
                tt(1.0)?,
            ));
        }
        M2FromPAlt => {
            let (r3, r4) = (r(R3)?, r(R4)?);
            let d = guard(
                (1.0 + r3.v1) * (1.0 - r4.d0) + r3.d0 * r4.v1,
                &[r3.v1, r4.d0, r3.d0, r4.v1],
            )?;
            nondeg = d;
            terms.push((
                vec_comb2(&r3.vals, -(1.0 - r4.d0) / d, &r4.vals, -r3.d0 / d),
                tv(1.0)?,
            ));
            terms.push((
                vec_comb2(&r3.vals, -r4.v1 / d, &r4.vals, (1.0 + r3.v1) / d),
                tt(0.0)?,
            ));
        }
        PFromM2Alt => {
            let (r7, r8) = (r(R7)?, r(R8)?);
            let d = guard(
                (1.0 - r7.v1) * (1.0 - r8.d0) - r8.v1 * r7.d0,
                &[r7.v1, r8.d0, r8.v1, r7.d0],
            )?;
            nondeg = d;
            terms.push((
                vec_comb2(&r7.vals, (1.0 - r8.d0) / d, &r8.vals, r7.d0 / d),
                tv(1.0)?,
            ));
            terms.push((
                vec_comb2(&r7.vals, r8.v1 / d, &r8.vals, (1.0 - r7.v1) / d),
                tt(0.0)?,
            ));
        }
        PFromM1Alt => {
            let (r9, r10) = (r(R9)?, r(R10)?);
            let d = guard(
                (1.0 - r9.d1) * (1.0 - r10.v0) - r9.v0 * r10.d1,
                &[r9.d1, r10.v0, r9.v0, r10.d1],
            )?;
            nondeg = d;
            terms.push((
                vec_comb2(&r9.vals, (1.0 - r10.v0) / d, &r10.vals, r9.v0 / d),
                tt(1.0)?,
            ));
            terms.push((
                vec_comb2(&r9.vals, r10.d1 / d, &r10.vals, (1.0 - r9.d1) / d),
                tv(0.0)?,
            ));
        }
    }

    let mut worst = 0.0f64;
    let mut arg = (0.0, 0.0);
    for (i, &t) in nodes.iter().enumerate() {
        for (j, &s) in nodes.iter().enumerate() {
            let mut rhs = base.eval(t, s)?;
            for (tvec, svec) in &terms {
                rhs += tvec[i] * svec[j];
            }
            let res = (target.eval(t, s)? - rhs).abs();
            if res > worst {
                worst = res;
                arg = (t, s);
            }
        }
    }

    Ok(ResidualReport {
        identity: id,
        grid,
        max_abs_residual: worst,
        argmax: arg,
        nondegeneracy_value: nondeg,
    })
}

fn matmul2(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Corner identities of the first-order-system kernel
/// g(t,s) = [[-dG/ds, G], [-d2G/dtds, dG/dt]]:
///
/// ```text
/// B g(0,0) + C g(1,0) = B     (s=0 column, t >= s branch everywhere)
/// B g(0,1) + C g(1,1) = -C    (s=1 column, t <= s branch everywhere)
/// ```
///
/// Returns the max entrywise deviation over both.
pub fn matrix_green_boundary_check(kernel: &GreenKernel) -> Result<f64> {
    let (b, c) = kernel.bc().boundary_matrices();
    let g00 = kernel.matrix_form_side(0.0, 0.0, Side::Upper)?;
    let g10 = kernel.matrix_form_side(1.0, 0.0, Side::Upper)?;
    let g01 = kernel.matrix_form_side(0.0, 1.0, Side::Lower)?;
    let g11 = kernel.matrix_form_side(1.0, 1.0, Side::Lower)?;
    let lhs1 = matmul2(b, g00);
    let lhs1b = matmul2(c, g10);
    let lhs2 = matmul2(b, g01);
    let lhs2b = matmul2(c, g11);
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((lhs1[i][j] + lhs1b[i][j] - b[i][j]).abs());
            worst = worst.max((lhs2[i][j] + lhs2b[i][j] + c[i][j]).abs());
        }
    }
    Ok(worst)
}

/// Outcome of one claimed strict ordering G_lower < G_upper < 0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SignOutcome {
    pub holds: bool,
    /// min over the domain of min(G_upper - G_lower, -G_upper); positive iff
    /// both strict inequalities hold everywhere tested.
    pub worst_margin: f64,
    pub argmin: (f64, f64),
}

/// One comparison chain and where it is claimed.
#[derive(Debug)]
pub struct OrderingReport {
    pub label: &'static str,
    pub below: BcKind,
    pub above: BcKind,
    pub outcome: Result<SignOutcome>,
}

/// Which part of the closed grid a chain is claimed on.
#[derive(Clone, Copy)]
enum Domain {
    Interior,
    /// (0,1] x (0,1]
    NoZero,
    /// [0,1) x [0,1)
    NoOne,
}

/// Evaluate the six sign-comparison chains at one lambda. Each chain gets its
/// own result so one resonant kernel does not suppress the others.
pub fn sign_comparison_report(pair: &FundamentalPair, grid: GridSpec) -> Result<Vec<OrderingReport>> {
    GridSpec::new(grid.n)?;
    let nodes: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();
    let chains: [(&'static str, BcKind, BcKind, Domain); 6] = [
        ("G_P < G_D < 0", BcKind::Periodic, BcKind::Dirichlet, Domain::Interior),
        ("G_N < G_D < 0", BcKind::Neumann, BcKind::Dirichlet, Domain::Interior),
        ("G_M1 < G_D < 0", BcKind::Mixed1, BcKind::Dirichlet, Domain::Interior),
        ("G_M2 < G_D < 0", BcKind::Mixed2, BcKind::Dirichlet, Domain::Interior),
        ("G_N < G_M2 < 0", BcKind::Neumann, BcKind::Mixed2, Domain::NoZero),
        ("G_N < G_M1 < 0", BcKind::Neumann, BcKind::Mixed1, Domain::NoOne),
    ];
    let mut out = Vec::with_capacity(6);
    for (label, below, above, domain) in chains {
        let outcome = (|| -> Result<SignOutcome> {
            let kb = build_green(below, pair)?;
            let ka = build_green(above, pair)?;
            let range: Vec<f64> = match domain {
                Domain::Interior => nodes[1..nodes.len() - 1].to_vec(),
                Domain::NoZero => nodes[1..].to_vec(),
                Domain::NoOne => nodes[..nodes.len() - 1].to_vec(),
            };
            let mut worst = f64::INFINITY;
            let mut arg = (0.0, 0.0);
            for &t in &range {
                for &s in &range {
                    let gb = kb.eval(t, s)?;
                    let ga = ka.eval(t, s)?;
                    let margin = (ga - gb).min(-ga);
                    if margin < worst {
                        worst = margin;
                        arg = (t, s);
                    }
                }
            }
            Ok(SignOutcome {
                holds: worst > 0.0,
                worst_margin: worst,
                argmin: arg,
            })
        })();
        out.push(OrderingReport {
            label,
            below,
            above,
            outcome,
        });
    }
    Ok(out)
}

/// Extrema of G_a - G_b over the closed grid; two opposite-sign values
/// certify incomparability, a one-signed range certifies an ordering.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DifferenceExtrema {
    pub min: f64,
    pub argmin: (f64, f64),
    pub max: f64,
    pub argmax: (f64, f64),
}

pub fn kernel_difference_extrema(
    pair: &FundamentalPair,
    a: BcKind,
    b: BcKind,
    grid: GridSpec,
) -> Result<DifferenceExtrema> {
    GridSpec::new(grid.n)?;
    let ka = build_green(a, pair)?;
    let kb = build_green(b, pair)?;
    let nodes: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut argmin = (0.0, 0.0);
    let mut argmax = (0.0, 0.0);
    for &t in &nodes {
        for &s in &nodes {
            let d = ka.eval(t, s)? - kb.eval(t, s)?;
            if d < min {
                min = d;
                argmin = (t, s);
            }
            if d > max {
                max = d;
                argmax = (t, s);
            }
        }
    }
    Ok(DifferenceExtrema {
        min,
        argmin,
        max,
        argmax,
    })
}

/// max over grid x grid of
/// | d/ds (G_D - G_P)(t,s) * G_P(1,s) - (G_D - G_P)(t,s) * dG_P/ds(1,s) |.
///
/// The s-derivative of the difference is branch-independent (the step parts
/// of the two kernels are identical and cancel), so both kernels use the
/// default convention; the t=1 traces live on the t >= s branch.
pub fn remark_product_identity(pair: &FundamentalPair, grid: GridSpec) -> Result<f64> {
    GridSpec::new(grid.n)?;
    let kd = build_green(BcKind::Dirichlet, pair)?;
    let kp = build_green(BcKind::Periodic, pair)?;
    let nodes: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();
    let side1 = Side::for_s_trace(1.0);
    let trace_v: Vec<f64> = nodes
        .iter()
        .map(|&s| kp.eval_side(1.0, s, side1))
        .collect::<Result<_>>()?;
    let trace_ds: Vec<f64> = nodes
        .iter()
        .map(|&s| kp.partials_side(1.0, s, side1).map(|p| p.dg_ds))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for &t in &nodes {
        for (j, &s) in nodes.iter().enumerate() {
            let diff = kd.eval(t, s)? - kp.eval(t, s)?;
            let ddiff = kd.partials(t, s)?.dg_ds - kp.partials(t, s)?.dg_ds;
            worst = worst.max((ddiff * trace_v[j] - diff * trace_ds[j]).abs());
        }
    }
    Ok(worst)
}

/// Symmetry defect of q(t,s) = (G_N(t,0) - G_N(t,1)) * dG_P/dt(0,s):
/// max |q(t,s) - q(s,t)| over grid x grid.
pub fn remark_q_symmetry(pair: &FundamentalPair, grid: GridSpec) -> Result<f64> {
    GridSpec::new(grid.n)?;
    let kn = build_green(BcKind::Neumann, pair)?;
    let kp = build_green(BcKind::Periodic, pair)?;
    let nodes: Vec<f64> = (0..grid.n).map(|i| grid.node(i)).collect();
    let n_diff: Vec<f64> = nodes
        .iter()
        .map(|&t| {
            Ok(kn.eval_side(t, 0.0, Side::for_t_trace(0.0))?
                - kn.eval_side(t, 1.0, Side::for_t_trace(1.0))?)
        })
        .collect::<Result<_>>()?;
    let p_dt: Vec<f64> = nodes
        .iter()
        .map(|&s| {
            kp.partials_side(0.0, s, Side::for_s_trace(0.0))
                .map(|p| p.dg_dt)
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for i in 0..nodes.len() {
        for j in 0..nodes.len() {
            let q_ij = n_diff[i] * p_dt[j];
            let q_ji = n_diff[j] * p_dt[i];
            worst = worst.max((q_ij - q_ji).abs());
        }
    }
    Ok(worst)
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
    fn names_round_trip_and_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for id in IdentityId::ALL {
            let name = id.to_string();
            assert!(seen.insert(name.clone()), "duplicate {name}");
            assert_eq!(name.parse::<IdentityId>().unwrap(), id);
        }
        assert_eq!(seen.len(), 36);
        assert!("D_from_Q".parse::<IdentityId>().is_err());
    }

    #[test]
    fn p_from_d_small_residual() {
        let p = pair(-1.0, 0.0);
        let r = decomposition_residual(IdentityId::PFromD, &p, GridSpec { n: 41 }).unwrap();
        assert!(r.max_abs_residual < 1e-8, "{:e}", r.max_abs_residual);
    }

    #[test]
    fn all_36_hold_at_desk_scale() {
        let p = pair(-1.0, 0.0);
        for id in IdentityId::ALL {
            let r = decomposition_residual(id, &p, GridSpec { n: 21 }).unwrap();
            assert!(r.max_abs_residual < 1e-7, "{id}: {:e}", r.max_abs_residual);
        }
    }

    #[test]
    fn plain_and_alt_reconstruct_consistently() {
        // Both routes target G_P from G_D; their right sides must agree.
        let p = pair(-1.0, 0.0);
        let a = decomposition_residual(IdentityId::PFromD, &p, GridSpec { n: 31 }).unwrap();
        let b = decomposition_residual(IdentityId::PFromDAlt, &p, GridSpec { n: 31 }).unwrap();
        assert!(a.max_abs_residual + b.max_abs_residual < 2e-6);
    }

    #[test]
    fn resonant_base_reported() {
        // lambda = pi^2 is the first Dirichlet eigenvalue for a = 0.
        let p = pair(0.0, std::f64::consts::PI.powi(2));
        match decomposition_residual(IdentityId::PFromD, &p, GridSpec { n: 11 }) {
            Err(Error::Resonant { bc, .. }) => assert_eq!(bc, BcKind::Dirichlet),
            other => panic!("expected Resonant, got {other:?}"),
        }
    }

    #[test]
    fn matrix_corner_identities() {
        let p0 = pair(0.0, 0.0);
        let k = build_green(BcKind::Dirichlet, &p0).unwrap();
        assert!(matrix_green_boundary_check(&k).unwrap() < 1e-10);
        let p1 = pair(-1.0, 0.0);
        for bc in BcKind::ALL {
            let k = build_green(bc, &p1).unwrap();
            let dev = matrix_green_boundary_check(&k).unwrap();
            assert!(dev < 1e-8, "{bc}: {dev:e}");
        }
    }

    #[test]
    fn six_orderings_hold_below_first_neumann_eigenvalue() {
        let p = pair(-1.0, 0.0);
        for report in sign_comparison_report(&p, GridSpec { n: 41 }).unwrap() {
            let o = report.outcome.unwrap();
            assert!(o.holds, "{}: margin {:e} at {:?}", report.label, o.worst_margin, o.argmin);
        }
    }

    #[test]
    fn comparable_and_incomparable_difference() {
        // a = -1: G_P stays below G_M1; a = -4: the difference changes sign.
        let p1 = pair(-1.0, 0.0);
        let e1 = kernel_difference_extrema(&p1, BcKind::Periodic, BcKind::Mixed1, GridSpec { n: 41 })
            .unwrap();
        assert!(e1.max < 0.0, "{e1:?}");
        let p4 = pair(-4.0, 0.0);
        let e4 = kernel_difference_extrema(&p4, BcKind::Periodic, BcKind::Mixed1, GridSpec { n: 41 })
            .unwrap();
        assert!(e4.min < 0.0 && e4.max > 0.0, "{e4:?}");
    }

    #[test]
    fn remark_identities_hold() {
        let p = pair(-1.0, 0.0);
        assert!(remark_product_identity(&p, GridSpec { n: 41 }).unwrap() < 1e-8);
        assert!(remark_q_symmetry(&p, GridSpec { n: 41 }).unwrap() < 1e-8);
    }

    #[test]
    fn report_serializes_with_identity_name() {
        let p = pair(-1.0, 0.0);
        let r = decomposition_residual(IdentityId::DFromPAlt, &p, GridSpec { n: 11 }).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"identity\":\"D_from_P_alt\""), "{json}");
    }
}
