//! End-to-end checks of the nonlinear program on the worked example:
//! a = -1, lambda = 0, f(t,u) = c e^{-u^2}/sqrt(t), problem A Dirichlet,
//! problem B periodic. Reference numbers were computed with an independent
//! implementation (dense grids, separate quadrature) and are pinned here to
//! the digits both implementations share.

use hillgreen::green::{build_green, BcKind, GreenKernel};
use hillgreen::nonlinear::{
    bound_constants, distance_bound_check, picard_solve, reproduce_paper_example, NonlinearSpec,
    PicardConfig,
};
use hillgreen::ode::{fundamental_pair, FundamentalPair, GridSpec};
use hillgreen::potential::Potential;
use hillgreen::Error;

fn example_pair() -> FundamentalPair {
    fundamental_pair(&Potential::constant(-1.0), 0.0, GridSpec::default()).unwrap()
}

fn kernels(pair: &FundamentalPair) -> (GreenKernel<'_>, GreenKernel<'_>) {
    (
        build_green(BcKind::Dirichlet, pair).unwrap(),
        build_green(BcKind::Periodic, pair).unwrap(),
    )
}

#[test]
fn per_unit_constants_match_reference() {
    let pair = example_pair();
    let (dirichlet, periodic) = kernels(&pair);
    let c = bound_constants(
        &dirichlet,
        &periodic,
        &NonlinearSpec::paper_example(1.0),
        &PicardConfig::default(),
    )
    .unwrap();
    let anchors = [
        (c.k1, 1.747163, "K1"),
        (c.k2, 1.743566, "K2"),
        (c.k3, 2.032688, "K3"),
        (c.p, 0.153525, "P_dirichlet"),
        (c.q, 0.178983, "Q_dirichlet"),
    ];
    for (got, want, name) in anchors {
        assert!((got - want).abs() < 2e-5, "{name}: {got} vs {want}");
    }
    assert!(c.k1_argmax > 0.03 && c.k1_argmax < 0.06, "{}", c.k1_argmax);
    // P and Q of one problem differ only by the constant factor sqrt(2/e)
    // between the Lipschitz weight and |f(.,0)|.
    let factor = (2.0 / std::f64::consts::E).sqrt();
    assert!((c.p - factor * c.q).abs() < 1e-12);
}

#[test]
fn subcritical_solves_match_reference() {
    let pair = example_pair();
    let (dirichlet, periodic) = kernels(&pair);
    let cfg = PicardConfig::default();

    let spec = NonlinearSpec::paper_example(0.3);
    let ud = picard_solve(&dirichlet, &spec, &cfg).unwrap();
    assert!((ud.sup_norm - 0.05358350).abs() < 2e-6, "{}", ud.sup_norm);
    assert!((5..=8).contains(&ud.iterations), "{}", ud.iterations);
    assert!(ud.rate <= ud.p + 1e-9, "rate {} vs p {}", ud.rate, ud.p);

    let up = picard_solve(&periodic, &spec, &cfg).unwrap();
    assert!((up.sup_norm - 0.48549971).abs() < 2e-6, "{}", up.sup_norm);
    // the exact count depends on how the last 1e-12-size increments round
    assert!((33..=43).contains(&up.iterations), "{}", up.iterations);
    assert!(up.rate <= up.p + 1e-9, "rate {} vs p {}", up.rate, up.p);
    assert!(up.rate > 0.4, "{}", up.rate);
    assert!(up.sup_norm <= up.apriori_bound + 1e-9);

    // both solutions are negative and pinned at known sample values
    let n = cfg.sup_grid - 1;
    let samples_d = [
        (0.1, -0.02544719),
        (0.25, -0.04576704),
        (0.5, -0.05285729),
        (0.75, -0.03623512),
        (0.9, -0.01674870),
    ];
    let samples_p = [
        (0.1, -0.48475512),
        (0.25, -0.47966586),
        (0.5, -0.47191817),
        (0.75, -0.47214458),
        (0.9, -0.47789211),
    ];
    for (t, want) in samples_d {
        let i = (t * n as f64).round() as usize;
        assert!((ud.u[i] - want).abs() < 1e-6, "u_D({t}): {} vs {want}", ud.u[i]);
    }
    for (t, want) in samples_p {
        let i = (t * n as f64).round() as usize;
        assert!((up.u[i] - want).abs() < 1e-6, "u_P({t}): {} vs {want}", up.u[i]);
    }
}

#[test]
fn distance_report_at_c_03() {
    let pair = example_pair();
    let (dirichlet, periodic) = kernels(&pair);
    let r = distance_bound_check(
        &dirichlet,
        &periodic,
        &NonlinearSpec::paper_example(0.3),
        &PicardConfig::default(),
    )
    .unwrap();
    assert!((r.measured_distance - 0.48450877).abs() < 2e-6, "{}", r.measured_distance);
    assert!((r.distance_bound - 1.340407).abs() < 1e-5, "{}", r.distance_bound);
    assert!(r.distance_within_bound);
    assert!(r.corollary_brackets);
    assert!(r.corollary_lower <= r.sup_b && r.sup_b <= r.corollary_upper);
}

#[test]
fn distance_report_at_c_05() {
    let pair = example_pair();
    let (dirichlet, periodic) = kernels(&pair);
    let r = distance_bound_check(
        &dirichlet,
        &periodic,
        &NonlinearSpec::paper_example(0.5),
        &PicardConfig::default(),
    )
    .unwrap();
    assert!((r.sup_a - 0.08898085).abs() < 2e-6, "{}", r.sup_a);
    assert!((r.sup_b - 0.66307367).abs() < 2e-6, "{}", r.sup_b);
    assert!((r.measured_distance - 0.66173041).abs() < 2e-6, "{}", r.measured_distance);
    assert!(r.iterations_b <= 200, "{}", r.iterations_b);
    assert!(r.distance_within_bound);
    assert!(r.corollary_brackets);
}

#[test]
fn supercritical_c_rejected_at_distance_level() {
    // c = 0.6 pushes K1 past 1, so the distance estimate's hypothesis fails.
    let pair = example_pair();
    let (dirichlet, periodic) = kernels(&pair);
    let r = distance_bound_check(
        &dirichlet,
        &periodic,
        &NonlinearSpec::paper_example(0.6),
        &PicardConfig::default(),
    );
    assert!(matches!(r, Err(Error::HypothesisViolated(_))), "{r:?}");
}

#[test]
fn example_table_reproduces_published_values() {
    let report = reproduce_paper_example(&PicardConfig::default(), GridSpec::default()).unwrap();
    assert_eq!(report.rows.len(), 17);

    let row = |name: &str| {
        report
            .rows
            .iter()
            .find(|r| r.quantity == name)
            .unwrap_or_else(|| panic!("missing row {name}"))
    };

    // every published value is reproduced at 2e-3 relative except the
    // Dirichlet contraction constant, whose printed reference does not match
    // what its own definition yields; that row fails and stays failing.
    for r in &report.rows {
        if r.quantity == "P_dirichlet" {
            assert!(!r.pass, "P_dirichlet unexpectedly matches its reference");
            assert!((r.computed - 0.153525).abs() < 2e-4, "{}", r.computed);
        } else {
            assert!(r.pass, "{}: computed {} vs {} (rel {:.2e})", r.quantity, r.computed, r.paper, r.rel_err);
        }
    }
    assert!(!report.all_pass);

    // threshold only sees the larger contraction slope, so it still matches
    assert!((row("threshold").computed - 0.572356).abs() < 2e-5);

    // the envelopes cross between c = 0.1 and c = 0.5
    assert_eq!(row("sign_psi_minus_gamma(0.1)").computed, -1.0);
    assert_eq!(row("sign_psi_minus_gamma(0.5)").computed, 1.0);
    assert!(row("psi_minus_gamma(0.2878)").computed.abs() <= 5e-3);

    let csv = report.to_csv();
    assert!(csv.starts_with("quantity,computed,paper,rel_err\n"));
    assert_eq!(csv.lines().count(), 18);
}
