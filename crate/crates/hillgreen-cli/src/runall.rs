//! The one-shot battery behind `reproduce-all`: kernel definition checks,
//! every decomposition identity, sign comparisons, eigenvalue orderings,
//! and the worked-example table, one pass/fail line per check. Inputs are
//! pinned (this command ignores --potential and the grid flags) so the run
//! is the same everywhere.

use hillgreen::basis::{basis_green_identity_check, basis_solution, BasisKind};
use hillgreen::green::{build_green, BcKind};
use hillgreen::identity::{
    decomposition_residual, kernel_difference_extrema, matrix_green_boundary_check,
    remark_product_identity, remark_q_symmetry, sign_comparison_report, IdentityId,
};
use hillgreen::nonlinear::{
    distance_bound_check, picard_solve, reproduce_paper_example, NonlinearSpec, PicardConfig,
};
use hillgreen::ode::{fundamental_pair, FundamentalPair, GridSpec};
use hillgreen::potential::{Interp, Potential};
use hillgreen::spectral::{count_zeros, ordering_check, EigenSearchConfig};

use crate::Failure;

struct Runner {
    out: String,
    passed: usize,
    failed: usize,
}

impl Runner {
    fn check(&mut self, label: &str, pass: bool, detail: String) {
        let tag = if pass { "[PASS]" } else { "[FAIL]" };
        self.out.push_str(&format!("{tag} {label} ({detail})\n"));
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

fn pair(a: f64, lambda: f64) -> Result<FundamentalPair, Failure> {
    Ok(fundamental_pair(
        &Potential::constant(a),
        lambda,
        GridSpec::default(),
    )?)
}

fn worst_identity(
    p: &FundamentalPair,
    grid: GridSpec,
) -> Result<(f64, IdentityId), Failure> {
    let mut worst = (0.0f64, IdentityId::ALL[0]);
    for id in IdentityId::ALL {
        let r = decomposition_residual(id, p, grid)?;
        if r.max_abs_residual > worst.0 {
            worst = (r.max_abs_residual, id);
        }
    }
    Ok(worst)
}

pub fn run() -> Result<(String, u8), Failure> {
    let mut r = Runner {
        out: String::new(),
        passed: 0,
        failed: 0,
    };
    let grid = GridSpec::new(101)?;
    let p1 = pair(-1.0, 0.0)?;

    // Defining properties and the first-order-system boundary identity.
    for bc in BcKind::ALL {
        let kernel = build_green(bc, &p1)?;
        let d = kernel.check_green_definition(grid)?;
        r.check(
            &format!("{bc} kernel definition"),
            d.max_residual() <= 1e-6,
            format!(
                "ode {:.2e}, boundary {:.2e}, jump {:.2e}, symmetry {:.2e}",
                d.ode_residual, d.boundary_residual, d.jump_residual, d.symmetry_residual
            ),
        );
        let m = matrix_green_boundary_check(&kernel)?;
        r.check(
            &format!("{bc} matrix boundary identity"),
            m <= 1e-6,
            format!("{m:.2e}"),
        );
    }

    // Boundary traces of the ten basis solutions.
    let mut worst_basis = (0.0f64, BasisKind::R1);
    for (basis, outcome) in basis_green_identity_check(&p1, grid)? {
        let residual = outcome?;
        if residual > worst_basis.0 {
            worst_basis = (residual, basis);
        }
    }
    r.check(
        "basis trace identities",
        worst_basis.0 <= 1e-6,
        format!("worst {:.2e} at {}", worst_basis.0, worst_basis.1),
    );

    // All 36 decomposition identities on three potentials.
    for a in [-1.0, -4.0] {
        let p = pair(a, 0.0)?;
        let (residual, id) = worst_identity(&p, grid)?;
        r.check(
            &format!("36 identities at a = {a}"),
            residual <= 1e-6,
            format!("worst {residual:.2e} ({id})"),
        );
    }
    let samples: Vec<[f64; 2]> = (0..=100)
        .map(|i| {
            let t = i as f64 / 100.0;
            [t, -2.0 - (2.0 * std::f64::consts::PI * t).sin()]
        })
        .collect();
    let sampled = Potential::Sampled {
        interp: Interp::Cubic,
        samples,
    };
    let ps = fundamental_pair(&sampled, 0.0, GridSpec::default())?;
    let (residual, id) = worst_identity(&ps, grid)?;
    r.check(
        "36 identities for the sampled potential",
        residual <= 1e-5,
        format!("worst {residual:.2e} ({id})"),
    );

    // Sign comparison chains.
    for report in sign_comparison_report(&p1, grid)? {
        let o = report.outcome?;
        r.check(
            report.label,
            o.holds,
            format!("worst margin {:.3e} at {:?}", o.worst_margin, o.argmin),
        );
    }

    // Comparability of G_P against the mixed kernels flips past the first
    // mixed eigenvalue: ordered at m = 1, sign change at m = 2 resp. 3.
    for (a, other, expect_ordered) in [
        (-1.0, BcKind::Mixed1, true),
        (-1.0, BcKind::Mixed2, true),
        (-4.0, BcKind::Mixed1, false),
        (-9.0, BcKind::Mixed2, false),
    ] {
        let pm = pair(a, 0.0)?;
        let e = kernel_difference_extrema(&pm, BcKind::Periodic, other, grid)?;
        let pass = if expect_ordered {
            e.max < 0.0
        } else {
            e.min < 0.0 && e.max > 0.0
        };
        r.check(
            &format!("periodic vs {other} comparability at a = {a}"),
            pass,
            format!("difference range [{:.3e}, {:.3e}]", e.min, e.max),
        );
    }

    // First eigenvalues against the analytic spectrum of a = -m^2, plus the
    // ordering theorems.
    let pi2 = std::f64::consts::PI.powi(2);
    let cfg = EigenSearchConfig::default();
    for m in [0.0f64, 1.0, 2.0] {
        let shift = m * m;
        let report = ordering_check(&Potential::constant(-shift), &cfg, GridSpec::default())?;
        let expect = [
            (BcKind::Dirichlet, shift + pi2),
            (BcKind::Neumann, shift),
            (BcKind::Periodic, shift),
            (BcKind::Mixed1, shift + pi2 / 4.0),
            (BcKind::Mixed2, shift + pi2 / 4.0),
        ];
        let mut worst = 0.0f64;
        let mut located = true;
        for (bc, want) in expect {
            match report.lambda(bc) {
                Some(got) => worst = worst.max((got - want).abs()),
                None => located = false,
            }
        }
        r.check(
            &format!("analytic first eigenvalues at m = {m}"),
            located && worst <= 1e-6,
            format!("worst deviation {worst:.2e}"),
        );
        r.check(
            &format!("eigenvalue orderings at m = {m}"),
            report.ordering_n_p_d && report.ordering_n_m1_d && report.ordering_n_m2_d,
            format!(
                "N<=P<D {}, N<M1<D {}, N<M2<D {}",
                report.ordering_n_p_d, report.ordering_n_m1_d, report.ordering_n_m2_d
            ),
        );
    }

    // Oscillation counts of r1, r2 between consecutive Dirichlet eigenvalues.
    let zero = Potential::constant(0.0);
    for (lambda, expect) in [(5.0, 0usize), (2.0 * pi2, 1), (5.0 * pi2, 2)] {
        let p = fundamental_pair(&zero, lambda, GridSpec::default())?;
        let z1 = count_zeros(&basis_solution(BasisKind::R1, &p)?);
        let z2 = count_zeros(&basis_solution(BasisKind::R2, &p)?);
        r.check(
            &format!("Sturm count in gap {expect}"),
            z1 == expect && z2 == expect,
            format!("r1 {z1}, r2 {z2} at lambda = {lambda:.3}"),
        );
    }

    // The two remark-level identities.
    let product = remark_product_identity(&p1, grid)?;
    let symmetry = remark_q_symmetry(&p1, grid)?;
    r.check(
        "product and symmetry remarks",
        product <= 1e-5 && symmetry <= 1e-5,
        format!("product {product:.2e}, symmetry {symmetry:.2e}"),
    );

    // The worked-example table. The published P_dirichlet value does not
    // follow from the P definition applied to the Dirichlet kernel; that row
    // is reported as the comparison failure it is, and the computed value is
    // pinned against its definition instead.
    let picard = PicardConfig::default();
    let table = reproduce_paper_example(&picard, GridSpec::default())?;
    for row in &table.rows {
        let detail = format!(
            "computed {:.6} vs published {:.6}, rel {:.2e}",
            row.computed, row.paper, row.rel_err
        );
        r.check(&format!("example table {}", row.quantity), row.pass, detail);
        if row.quantity == "P_dirichlet" {
            r.check(
                "example table P_dirichlet matches its definition",
                (row.computed - 0.153525).abs() < 2e-4,
                format!("computed {:.6}, definition-checked 0.153525", row.computed),
            );
        }
    }

    // The fixed-point program at c = 0.3: contraction rates and the distance
    // bound between the Dirichlet and periodic solutions.
    let dirichlet = build_green(BcKind::Dirichlet, &p1)?;
    let periodic = build_green(BcKind::Periodic, &p1)?;
    let spec = NonlinearSpec::paper_example(0.3);
    for (kernel, name) in [(&dirichlet, "dirichlet"), (&periodic, "periodic")] {
        let solved = picard_solve(kernel, &spec, &picard)?;
        r.check(
            &format!("{name} Picard rate bounded by P"),
            solved.rate <= solved.p + picard.tol,
            format!(
                "rate {:.4} vs P {:.4} in {} iterations",
                solved.rate, solved.p, solved.iterations
            ),
        );
    }
    let d = distance_bound_check(&dirichlet, &periodic, &spec, &picard)?;
    r.check(
        "measured distance within bound",
        d.distance_within_bound,
        format!("{:.6} <= {:.6}", d.measured_distance, d.distance_bound),
    );
    r.check(
        "corollary brackets the periodic norm",
        d.corollary_brackets,
        format!(
            "{:.6} <= {:.6} <= {:.6}",
            d.corollary_lower, d.sup_b, d.corollary_upper
        ),
    );

    let exit = u8::from(r.failed > 0);
    r.out
        .push_str(&format!("{} checks passed, {} failed\n", r.passed, r.failed));
    Ok((r.out, exit))
}
