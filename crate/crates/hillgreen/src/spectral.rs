//! Characteristic values, first eigenvalues, oscillation counts, and the
//! slope-sign corollaries.
//!
//! Each boundary problem becomes resonant exactly where a scalar function of
//! the fundamental pair's endpoint data vanishes; the first eigenvalue is the
//! smallest such root. Roots are located by an ascending scan for a sign
//! change followed by bisection; a periodic tangency (the discriminant
//! touching 2 without crossing) is caught by golden-section minimization of
//! the characteristic's magnitude.

use serde::{Deserialize, Serialize};

use crate::basis::{basis_solution, BasisKind};
use crate::green::BcKind;
use crate::ode::{fundamental_pair, FundamentalPair, GridSpec, Trajectory};
use crate::potential::Potential;
use crate::{Error, Result};

/// Search window and tolerances for eigenvalue location.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EigenSearchConfig {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub scan_step: f64,
    pub bisection_tol: f64,
}

impl Default for EigenSearchConfig {
    fn default() -> Self {
        EigenSearchConfig {
            lambda_min: -100.0,
            lambda_max: 150.0,
            scan_step: 0.25,
            bisection_tol: 1e-9,
        }
    }
}

impl EigenSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_min < self.lambda_max)
            || !(self.scan_step > 0.0)
            || self.scan_step >= self.lambda_max - self.lambda_min
            || !(self.bisection_tol > 0.0)
        {
            return Err(Error::Parse(format!(
                "invalid eigenvalue search window [{}, {}] step {} tol {}",
                self.lambda_min, self.lambda_max, self.scan_step, self.bisection_tol
            )));
        }
        Ok(())
    }
}

/// The scalar whose zeros are the eigenvalues of bc.
pub fn characteristic_from_pair(bc: BcKind, pair: &FundamentalPair) -> f64 {
    let (p1, dp1, p2, dp2) = pair.end_values();
    match bc {
        BcKind::Dirichlet => p2,
        BcKind::Neumann => dp1,
        BcKind::Mixed1 => p1,
        BcKind::Mixed2 => dp2,
        // discriminant minus 2; vanishes at the periodic eigenvalues
        BcKind::Periodic => p1 + dp2 - 2.0,
    }
}

pub fn characteristic_value(
    bc: BcKind,
    potential: &Potential,
    lambda: f64,
    grid: GridSpec,
) -> Result<f64> {
    Ok(characteristic_from_pair(
        bc,
        &fundamental_pair(potential, lambda, grid)?,
    ))
}

/// Golden-section minimization of |f| on [a, b] down to bracket width tol.
fn golden_min_abs(
    mut a: f64,
    mut b: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?.abs();
    let mut f2 = f(x2)?.abs();
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?.abs();
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?.abs();
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)?))
}

fn bisect(
    mut lo: f64,
    mut flo: f64,
    mut hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

// A refined characteristic magnitude below this is a root (integrator noise
// scale); above it, the window's minimum was a genuine nonzero dip.
const TANGENCY_RESIDUAL: f64 = 1e-7;

/// Smallest root of the characteristic in the window: ascending scan for a
/// sign change, bisection to bisection_tol; if the characteristic only
/// touches zero (periodic tangency), golden-section refinement of the
/// magnitude around the scan minimum.
pub fn first_eigenvalue(
    bc: BcKind,
    potential: &Potential,
    cfg: &EigenSearchConfig,
    grid: GridSpec,
) -> Result<f64> {
    cfg.validate()?;
    let mut eval = |lambda: f64| characteristic_value(bc, potential, lambda, grid);
    let step = cfg.scan_step;
    let mut lam = cfg.lambda_min;
    let mut prev = eval(lam)?;
    let mut best = (prev.abs(), lam);
    loop {
        let next = (lam + step).min(cfg.lambda_max);
        if next <= lam {
            break;
        }
        let f = eval(next)?;
        if f.abs() < best.0 {
            best = (f.abs(), next);
        }
        if f == 0.0 {
            // root lands on a scan node; localize the magnitude minimum
            let (x, _) = golden_min_abs(
                (next - step).max(cfg.lambda_min),
                (next + step).min(cfg.lambda_max),
                cfg.bisection_tol,
                &mut eval,
            )?;
            return Ok(x);
        }
        if prev * f < 0.0 {
            return bisect(lam, prev, next, cfg.bisection_tol, &mut eval);
        }
        lam = next;
        prev = f;
    }
    // no crossing anywhere: tangency fallback around the smallest magnitude
    let (x, fx) = golden_min_abs(
        (best.1 - step).max(cfg.lambda_min),
        (best.1 + step).min(cfg.lambda_max),
        cfg.bisection_tol,
        &mut eval,
    )?;
    if fx.abs() <= TANGENCY_RESIDUAL {
        Ok(x)
    } else {
        Err(Error::NotFound(format!(
            "no root of the {bc} characteristic in [{}, {}] (smallest magnitude {:.3e} at {:.6})",
            cfg.lambda_min, cfg.lambda_max, fx, x
        )))
    }
}

/// Zeros of u in the open interval (0,1): sign changes over interior nodes,
/// a node-exact zero counted once (and the flip it sits on not recounted).
pub fn count_zeros(traj: &Trajectory) -> usize {
    let u = traj.u();
    let interior = &u[1..u.len() - 1];
    let mut count = 0;
    let mut prev: Option<bool> = None; // sign of last nonzero value
    let mut at_zero = false;
    for &v in interior {
        if v == 0.0 {
            count += 1;
            at_zero = true;
            continue;
        }
        let s = v > 0.0;
        if let Some(p) = prev {
            if s != p && !at_zero {
                count += 1;
            }
        }
        prev = Some(s);
        at_zero = false;
    }
    count
}

/// First eigenvalue of every problem from one shared scan, plus the ordering
/// flags the comparison theorems rest on.
#[derive(Debug)]
pub struct OrderingCheckReport {
    /// in BcKind::ALL order
    pub lambda0: Vec<(BcKind, Result<f64>)>,
    /// lambda0_N <= lambda0_P < lambda0_D
    pub ordering_n_p_d: bool,
    /// lambda0_N < lambda0_M1 < lambda0_D
    pub ordering_n_m1_d: bool,
    /// lambda0_N < lambda0_M2 < lambda0_D
    pub ordering_n_m2_d: bool,
}

impl OrderingCheckReport {
    pub fn lambda(&self, bc: BcKind) -> Option<f64> {
        self.lambda0
            .iter()
            .find(|(b, _)| *b == bc)
            .and_then(|(_, r)| r.as_ref().ok().copied())
    }
}

/// One ascending scan of the shared fundamental pair brackets all five
/// characteristics at once; each problem is then bisected separately.
pub fn ordering_check(
    potential: &Potential,
    cfg: &EigenSearchConfig,
    grid: GridSpec,
) -> Result<OrderingCheckReport> {
    cfg.validate()?;
    let chars =
        |lambda: f64| -> Result<[f64; 5]> {
            let pair = fundamental_pair(potential, lambda, grid)?;
            Ok([
                characteristic_from_pair(BcKind::Periodic, &pair),
                characteristic_from_pair(BcKind::Neumann, &pair),
                characteristic_from_pair(BcKind::Dirichlet, &pair),
                characteristic_from_pair(BcKind::Mixed1, &pair),
                characteristic_from_pair(BcKind::Mixed2, &pair),
            ])
        };
    // bracket[i] = Some((lo, flo, hi)) once the i-th characteristic changed
    // sign; an exact zero is stored as a degenerate bracket.
    let mut bracket: [Option<(f64, f64, f64)>; 5] = [None; 5];
    let step = cfg.scan_step;
    let mut lam = cfg.lambda_min;
    let mut prev = chars(lam)?;
    while bracket.iter().any(Option::is_none) {
        let next = (lam + step).min(cfg.lambda_max);
        if next <= lam {
            break;
        }
        let f = chars(next)?;
        for i in 0..5 {
            if bracket[i].is_none() && (f[i] == 0.0 || prev[i] * f[i] < 0.0) {
                bracket[i] = Some((lam, prev[i], next));
            }
        }
        lam = next;
        prev = f;
    }

    let order = BcKind::ALL;
    let mut lambda0 = Vec::with_capacity(5);
    for (i, bc) in order.into_iter().enumerate() {
        let entry = match bracket[i] {
            None => Err(Error::NotFound(format!(
                "no root of the {bc} characteristic in [{}, {}]",
                cfg.lambda_min, cfg.lambda_max
            ))),
            Some((lo, flo, hi)) => {
                let eval = |lambda: f64| characteristic_value(bc, potential, lambda, grid);
                if flo == 0.0 || eval(hi)? == 0.0 {
                    golden_min_abs(lo, (hi + step).min(cfg.lambda_max), cfg.bisection_tol, eval)
                        .map(|(x, _)| x)
                } else {
                    bisect(lo, flo, hi, cfg.bisection_tol, eval)
                }
            }
        };
        lambda0.push((bc, entry));
    }

    let get = |bc: BcKind| -> Option<f64> {
        lambda0
            .iter()
            .find(|(b, _)| *b == bc)
            .and_then(|(_, r)| r.as_ref().ok().copied())
    };
    let band = 2.0 * cfg.bisection_tol;
    let lt = |a: f64, b: f64| b - a > band;
    let le = |a: f64, b: f64| a <= b + band;
    let (n, p, d, m1, m2) = (
        get(BcKind::Neumann),
        get(BcKind::Periodic),
        get(BcKind::Dirichlet),
        get(BcKind::Mixed1),
        get(BcKind::Mixed2),
    );
    let flag3 = |a: Option<f64>, b: Option<f64>, c: Option<f64>, first_strict: bool| match (a, b, c)
    {
        (Some(a), Some(b), Some(c)) => (if first_strict { lt(a, b) } else { le(a, b) }) && lt(b, c),
        _ => false,
    };
    Ok(OrderingCheckReport {
        ordering_n_p_d: flag3(n, p, d, false),
        ordering_n_m1_d: flag3(n, m1, d, true),
        ordering_n_m2_d: flag3(n, m2, d, true),
        lambda0,
    })
}

/// The slope corollaries: r2'(1) > 0 (for lambda below the first Mixed2
/// eigenvalue) and r1'(0) < 0 (below the first Mixed1 eigenvalue). The
/// hypothesis on lambda is the caller's; this reports the values and signs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlopeSignReport {
    pub r2_slope_at_1: f64,
    pub r1_slope_at_0: f64,
    pub r2_positive: bool,
    pub r1_negative: bool,
}

pub fn slope_sign_check(pair: &FundamentalPair) -> Result<SlopeSignReport> {
    let r1 = basis_solution(BasisKind::R1, pair)?;
    let r2 = basis_solution(BasisKind::R2, pair)?;
    let r2_slope_at_1 = r2.end().1;
    let r1_slope_at_0 = r1.start().1;
    Ok(SlopeSignReport {
        r2_slope_at_1,
        r1_slope_at_0,
        r2_positive: r2_slope_at_1 > 0.0,
        r1_negative: r1_slope_at_0 < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::default()
    }

    fn narrow(lo: f64, hi: f64) -> EigenSearchConfig {
        EigenSearchConfig {
            lambda_min: lo,
            lambda_max: hi,
            ..EigenSearchConfig::default()
        }
    }

    #[test]
    fn characteristic_examples() {
        let pi2 = std::f64::consts::PI.powi(2);
        let zero = Potential::constant(0.0);
        let c = characteristic_value(BcKind::Dirichlet, &zero, pi2, grid()).unwrap();
        assert!(c.abs() < 1e-6, "{c:e}");
        let c = characteristic_value(BcKind::Periodic, &zero, 0.0, grid()).unwrap();
        assert!(c.abs() < 1e-12, "{c:e}");
        let c = characteristic_value(BcKind::Neumann, &Potential::constant(-1.0), 0.0, grid())
            .unwrap();
        assert!((c - 1.0f64.sinh()).abs() < 1e-9);
    }

    #[test]
    fn first_eigenvalues_constant_potentials() {
        let pi2 = std::f64::consts::PI.powi(2);
        let zero = Potential::constant(0.0);
        let cfg = narrow(-5.0, 15.0);
        let cases = [
            (BcKind::Dirichlet, &zero, pi2),
            (BcKind::Neumann, &zero, 0.0),
            (BcKind::Periodic, &zero, 0.0),
            (BcKind::Mixed1, &zero, pi2 / 4.0),
            (BcKind::Mixed2, &zero, pi2 / 4.0),
        ];
        for (bc, p, expect) in cases {
            let l = first_eigenvalue(bc, p, &cfg, grid()).unwrap();
            assert!((l - expect).abs() < 1e-6, "{bc}: {l} vs {expect}");
        }
        let m2 = Potential::constant(-4.0);
        let l = first_eigenvalue(BcKind::Neumann, &m2, &narrow(-5.0, 15.0), grid()).unwrap();
        assert!((l - 4.0).abs() < 1e-6);
    }

    #[test]
    fn eigenvalue_shift_covariance() {
        let cfg = narrow(-5.0, 20.0);
        let base = first_eigenvalue(BcKind::Dirichlet, &Potential::constant(0.0), &cfg, grid())
            .unwrap();
        let shifted =
            first_eigenvalue(BcKind::Dirichlet, &Potential::constant(-2.0), &cfg, grid()).unwrap();
        assert!((shifted - base - 2.0).abs() < 2.0 * cfg.bisection_tol + 1e-9);
    }

    #[test]
    fn not_found_outside_window() {
        let r = first_eigenvalue(
            BcKind::Dirichlet,
            &Potential::constant(0.0),
            &narrow(5.0, 8.0),
            grid(),
        );
        assert!(matches!(r, Err(Error::NotFound(_))), "{r:?}");
    }

    #[test]
    fn zero_counts_in_dirichlet_gaps() {
        let pi2 = std::f64::consts::PI.powi(2);
        let zero = Potential::constant(0.0);
        for (lambda, expect) in [(5.0, 0), (2.0 * pi2, 1), (5.0 * pi2, 2)] {
            let pair = fundamental_pair(&zero, lambda, grid()).unwrap();
            for kind in [BasisKind::R1, BasisKind::R2] {
                let r = basis_solution(kind, &pair).unwrap();
                assert_eq!(count_zeros(&r), expect, "{kind} at lambda={lambda}");
            }
        }
    }

    #[test]
    fn oscillation_slope_sign_alternates() {
        // sign of r1'(1) is (-1)^(n+1) in the n-th Dirichlet gap
        let pi2 = std::f64::consts::PI.powi(2);
        let zero = Potential::constant(0.0);
        for (lambda, positive) in [(5.0, false), (2.0 * pi2, true), (5.0 * pi2, false)] {
            let pair = fundamental_pair(&zero, lambda, grid()).unwrap();
            let r1 = basis_solution(BasisKind::R1, &pair).unwrap();
            assert_eq!(r1.end().1 > 0.0, positive, "lambda={lambda}");
        }
    }

    #[test]
    fn ordering_report_zero_potential() {
        let pi2 = std::f64::consts::PI.powi(2);
        let report =
            ordering_check(&Potential::constant(0.0), &narrow(-5.0, 15.0), grid()).unwrap();
        let expect = [
            (BcKind::Periodic, 0.0),
            (BcKind::Neumann, 0.0),
            (BcKind::Dirichlet, pi2),
            (BcKind::Mixed1, pi2 / 4.0),
            (BcKind::Mixed2, pi2 / 4.0),
        ];
        for (bc, want) in expect {
            let got = report.lambda(bc).unwrap();
            assert!((got - want).abs() < 1e-6, "{bc}: {got} vs {want}");
        }
        assert!(report.ordering_n_p_d);
        assert!(report.ordering_n_m1_d);
        assert!(report.ordering_n_m2_d);
    }

    #[test]
    fn resonant_kernel_at_computed_eigenvalue() {
        let zero = Potential::constant(0.0);
        let l = first_eigenvalue(BcKind::Dirichlet, &zero, &narrow(5.0, 15.0), grid()).unwrap();
        let pair = fundamental_pair(&zero, l, grid()).unwrap();
        assert!(matches!(
            crate::green::build_green(BcKind::Dirichlet, &pair),
            Err(Error::Resonant { .. })
        ));
    }

    #[test]
    fn slope_signs() {
        let q = 1.0f64.cosh() / 1.0f64.sinh();
        let pair = fundamental_pair(&Potential::constant(-1.0), 0.0, grid()).unwrap();
        let s = slope_sign_check(&pair).unwrap();
        assert!((s.r2_slope_at_1 - q).abs() < 1e-9);
        assert!((s.r1_slope_at_0 + q).abs() < 1e-9);
        assert!(s.r2_positive && s.r1_negative);

        let pair = fundamental_pair(&Potential::constant(0.0), 1.0, grid()).unwrap();
        let s = slope_sign_check(&pair).unwrap();
        assert!((s.r2_slope_at_1 - 1.0f64.cos() / 1.0f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_window() {
        let cfg = narrow(3.0, 1.0);
        assert!(first_eigenvalue(BcKind::Dirichlet, &Potential::constant(0.0), &cfg, grid())
            .is_err());
    }
}
