//! Command line front end. Every library operation is reachable with
//! reproducible flags and machine-readable output; `reproduce-all` runs the
//! whole verification battery in one shot.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 resonant problem,
//! 3 hypothesis violated (non-contraction, degenerate identity), 4 nothing
//! found within budget (search window, iteration cap, quadrature), 5 I/O,
//! 64 usage.

mod fmt;
mod runall;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hillgreen::basis::{basis_green_identity_check, basis_solution, BasisKind};
use hillgreen::green::{build_green, BcKind, GreenKernel, Side};
use hillgreen::identity::{
    decomposition_residual, matrix_green_boundary_check, sign_comparison_report, IdentityId,
};
use hillgreen::nonlinear::{
    bound_constants, distance_bound_check, picard_solve, reproduce_paper_example, NonlinearSpec,
    PicardConfig,
};
use hillgreen::ode::{fundamental_pair, FundamentalPair, GridSpec};
use hillgreen::potential::Potential;
use hillgreen::spectral::{characteristic_value, count_zeros, first_eigenvalue, EigenSearchConfig};
use hillgreen::Error;

#[derive(Parser)]
#[command(
    name = "hillgreen",
    version,
    about = "Green's functions of u'' + (a(t)+lambda)u on [0,1]: kernels, \
             decomposition identities, eigenvalues, and the nonlinear fixed-point program"
)]
struct Cli {
    /// a(t): inline:constant:<v>, inline:sin:<c0>:<amp>:<freq>, or a JSON file
    #[arg(long, global = true, default_value = "inline:constant:-1")]
    potential: String,

    /// spectral parameter lambda
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda: f64,

    /// nodes per axis for kernel evaluation grids
    #[arg(long, global = true, default_value_t = 101)]
    grid: usize,

    /// nodes for the fundamental-pair integration
    #[arg(long, global = true, default_value_t = 1001)]
    ode_grid: usize,

    /// output format
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,

    /// residual threshold for verify commands, stopping tolerance for
    /// nonlinear iteration (defaults 1e-6 and 1e-12 respectively)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// write output to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the fundamental pair and report its endpoint data
    Fundamental,
    /// Build and evaluate Green's functions
    Green {
        #[command(subcommand)]
        op: GreenCmd,
    },
    /// Check identities the kernels must satisfy
    Verify {
        #[command(subcommand)]
        op: VerifyCmd,
    },
    /// Locate the first eigenvalue of a boundary condition
    Eigen {
        /// periodic | neumann | dirichlet | mixed1 | mixed2
        #[arg(long)]
        bc: String,
        /// lower end of the search window
        #[arg(long, allow_negative_numbers = true)]
        lambda_min: Option<f64>,
        /// upper end of the search window
        #[arg(long, allow_negative_numbers = true)]
        lambda_max: Option<f64>,
        /// scan step used to bracket sign changes
        #[arg(long)]
        scan_step: Option<f64>,
        /// bisection half-width at which the search stops
        #[arg(long)]
        bisection_tol: Option<f64>,
    },
    /// Count interior zeros of a basis solution at the given lambda
    Zeros {
        /// r1 .. r10
        #[arg(long)]
        basis: String,
    },
    /// Bound constants, Picard iteration, and distance estimates for the
    /// worked nonlinearity f(t,u) = c exp(-u^2) / sqrt(t)
    Nonlinear {
        #[command(subcommand)]
        op: NonlinearCmd,
    },
    /// Run the full verification battery and print one pass/fail line each
    ReproduceAll,
}

#[derive(Subcommand)]
enum GreenCmd {
    /// Solve the boundary system and report the coefficient matrix
    Build {
        #[arg(long)]
        bc: String,
    },
    /// Evaluate G and its partials at one point
    Eval {
        #[arg(long)]
        bc: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        s: f64,
        /// lateral side at the diagonal: lower | upper (default: the
        /// one-sided convention of the definitions)
        #[arg(long)]
        side: Option<String>,
    },
    /// Dump G, dG/dt, dG/ds over the grid as a table
    Table {
        #[arg(long)]
        bc: String,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Residuals of the cross-boundary-condition decomposition identities
    Identity {
        /// one identity by name, e.g. P_from_D or N_from_M1_alt
        #[arg(long, conflicts_with = "all")]
        id: Option<String>,
        /// all 36
        #[arg(long)]
        all: bool,
    },
    /// First-order-system boundary identity B G(0,s) + C G(1,s) = 0
    Matrix,
    /// Sign comparison chains G_lower < G_upper < 0
    Signs,
    /// Boundary traces of the ten basis solutions against kernel slices
    Basis,
}

#[derive(Subcommand)]
enum NonlinearCmd {
    /// K1, K2, K3 for the pair (A, B) plus P, Q for A
    Constants {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value = "dirichlet")]
        bc_a: String,
        #[arg(long, default_value = "periodic")]
        bc_b: String,
        #[arg(long)]
        quad_nodes: Option<usize>,
    },
    /// Picard-iterate u = integral of G(t,s) f(s,u(s)) ds to its fixed point
    Solve {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value = "dirichlet")]
        bc: String,
        #[arg(long)]
        quad_nodes: Option<usize>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// iterate even when the contraction estimate P is >= 1
        #[arg(long)]
        force: bool,
    },
    /// Solve under both conditions and test the distance bound and corollary
    Distance {
        #[arg(long)]
        c: f64,
        #[arg(long, default_value = "dirichlet")]
        bc_a: String,
        #[arg(long, default_value = "periodic")]
        bc_b: String,
        #[arg(long)]
        quad_nodes: Option<usize>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Reproduce the worked-example table of constants and envelopes
    Example {
        #[arg(long)]
        quad_nodes: Option<usize>,
    },
}

/// Anything a handler can fail with, mapped onto the exit-code contract.
enum Failure {
    Lib(Error),
    Io(std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e {
                Error::Resonant { .. } => 2,
                Error::DegenerateIdentity { .. }
                | Error::NotContractive { .. }
                | Error::HypothesisViolated(_) => 3,
                Error::NotFound(_)
                | Error::MaxIterExceeded { .. }
                | Error::QuadratureFailure(_) => 4,
                Error::Parse(_)
                | Error::InvalidGrid { .. }
                | Error::OutOfDomain { .. }
                | Error::PotentialDomain(_) => 64,
            },
            Failure::Io(_) => 5,
            Failure::Usage(_) => 64,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
        }
    }
}

/// Flags resolved into the objects handlers consume.
struct Ctx {
    potential: Potential,
    lambda: f64,
    grid: GridSpec,
    ode_grid: GridSpec,
    tol: Option<f64>,
    out: OutFormat,
}

impl Ctx {
    fn resolve(cli: &Cli) -> Result<Ctx, Failure> {
        Ok(Ctx {
            potential: parse_potential(&cli.potential)?,
            lambda: cli.lambda,
            grid: GridSpec::new(cli.grid)?,
            ode_grid: GridSpec::new(cli.ode_grid)?,
            tol: cli.tol,
            out: cli.out,
        })
    }

    fn pair(&self) -> Result<FundamentalPair, Failure> {
        Ok(fundamental_pair(&self.potential, self.lambda, self.ode_grid)?)
    }

    fn verify_tol(&self) -> f64 {
        self.tol.unwrap_or(1e-6)
    }
}

fn parse_potential(text: &str) -> Result<Potential, Failure> {
    if let Some(rest) = text.strip_prefix("inline:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let num = |s: &str| -> Result<f64, Failure> {
            s.parse()
                .map_err(|_| Failure::Usage(format!("bad number '{s}' in --potential")))
        };
        return match parts.as_slice() {
            ["constant", v] => Ok(Potential::constant(num(v)?)),
            ["sin", c0, amp, freq] => Ok(Potential::Sine {
                c0: num(c0)?,
                amp: num(amp)?,
                freq: num(freq)?,
            }),
            _ => Err(Failure::Usage(format!(
                "unknown inline potential '{text}' (expected inline:constant:<v> or \
                 inline:sin:<c0>:<amp>:<freq>)"
            ))),
        };
    }
    let body = fs::read_to_string(text)?;
    Ok(Potential::from_json_str(&body)?)
}

fn parse_side(text: &str) -> Result<Side, Failure> {
    match text.to_ascii_lowercase().as_str() {
        "lower" => Ok(Side::Lower),
        "upper" => Ok(Side::Upper),
        other => Err(Failure::Usage(format!(
            "unknown side '{other}' (expected lower or upper)"
        ))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match run(&cli) {
        Ok((body, exit)) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &body),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("hillgreen: {e}");
                return ExitCode::from(5);
            }
            ExitCode::from(exit)
        }
        Err(f) => {
            eprintln!("hillgreen: {}", f.message());
            ExitCode::from(f.exit())
        }
    }
}

/// Dispatch to the handler; each returns the rendered body and its exit code
/// (0 unless some check it performed failed).
fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let ctx = Ctx::resolve(cli)?;
    match &cli.command {
        Command::Fundamental => cmd_fundamental(&ctx),
        Command::Green { op } => match op {
            GreenCmd::Build { bc } => cmd_green_build(&ctx, bc),
            GreenCmd::Eval { bc, t, s, side } => cmd_green_eval(&ctx, bc, *t, *s, side.as_deref()),
            GreenCmd::Table { bc } => cmd_green_table(&ctx, bc),
        },
        Command::Verify { op } => match op {
            VerifyCmd::Identity { id, all } => cmd_verify_identity(&ctx, id.as_deref(), *all),
            VerifyCmd::Matrix => cmd_verify_matrix(&ctx),
            VerifyCmd::Signs => cmd_verify_signs(&ctx),
            VerifyCmd::Basis => cmd_verify_basis(&ctx),
        },
        Command::Eigen {
            bc,
            lambda_min,
            lambda_max,
            scan_step,
            bisection_tol,
        } => cmd_eigen(&ctx, bc, *lambda_min, *lambda_max, *scan_step, *bisection_tol),
        Command::Zeros { basis } => cmd_zeros(&ctx, basis),
        Command::Nonlinear { op } => cmd_nonlinear(&ctx, op),
        Command::ReproduceAll => runall::run(),
    }
}

fn bc_of(text: &str) -> Result<BcKind, Failure> {
    Ok(BcKind::from_str(text)?)
}

fn render(ctx: &Ctx, v: &Value) -> String {
    match ctx.out {
        OutFormat::Json => fmt::json(v),
        OutFormat::Csv => fmt::kv_csv(v),
    }
}

fn cmd_fundamental(ctx: &Ctx) -> Result<(String, u8), Failure> {
    let pair = ctx.pair()?;
    let (p1, dp1, p2, dp2) = pair.end_values();
    let v = json!({
        "potential": serde_json::to_value(&ctx.potential).unwrap(),
        "lambda": ctx.lambda,
        "ode_grid_n": ctx.ode_grid.n,
        "p1": p1,
        "dp1": dp1,
        "p2": p2,
        "dp2": dp2,
        "wronskian_deviation": pair.wronskian_deviation,
    });
    Ok((render(ctx, &v), 0))
}

fn cmd_green_build(ctx: &Ctx, bc: &str) -> Result<(String, u8), Failure> {
    let bc = bc_of(bc)?;
    let pair = ctx.pair()?;
    let kernel = build_green(bc, &pair)?;
    let w = kernel.w_matrix();
    let v = json!({
        "bc": bc,
        "lambda": ctx.lambda,
        "det": kernel.det(),
        "w": [[w[0][0], w[0][1]], [w[1][0], w[1][1]]],
    });
    Ok((render(ctx, &v), 0))
}

fn cmd_green_eval(
    ctx: &Ctx,
    bc: &str,
    t: f64,
    s: f64,
    side: Option<&str>,
) -> Result<(String, u8), Failure> {
    let bc = bc_of(bc)?;
    let pair = ctx.pair()?;
    let kernel = build_green(bc, &pair)?;
    let (g, partials, side_name) = match side {
        Some(text) => {
            let side = parse_side(text)?;
            (
                kernel.eval_side(t, s, side)?,
                kernel.partials_side(t, s, side)?,
                text.to_ascii_lowercase(),
            )
        }
        None => (kernel.eval(t, s)?, kernel.partials(t, s)?, "auto".into()),
    };
    let v = json!({
        "bc": bc,
        "t": t,
        "s": s,
        "side": side_name,
        "g": g,
        "dg_dt": partials.dg_dt,
        "dg_ds": partials.dg_ds,
        "d2g_dtds": partials.d2g_dtds,
    });
    let body = match ctx.out {
        OutFormat::Json => fmt::json(&v),
        OutFormat::Csv => format!(
            "t,s,G,dGdt,dGds\n{},{},{},{},{}\n",
            fmt::float(t),
            fmt::float(s),
            fmt::float(g),
            fmt::float(partials.dg_dt),
            fmt::float(partials.dg_ds),
        ),
    };
    Ok((body, 0))
}

fn cmd_green_table(ctx: &Ctx, bc: &str) -> Result<(String, u8), Failure> {
    let bc = bc_of(bc)?;
    let pair = ctx.pair()?;
    let kernel = build_green(bc, &pair)?;
    let body = match ctx.out {
        OutFormat::Csv => {
            let mut buf = Vec::new();
            kernel.write_table(ctx.grid, &mut buf)?;
            String::from_utf8(buf).expect("table output is ASCII")
        }
        OutFormat::Json => {
            let mut rows = Vec::with_capacity(ctx.grid.n * ctx.grid.n);
            for i in 0..ctx.grid.n {
                let t = ctx.grid.node(i);
                for j in 0..ctx.grid.n {
                    let s = ctx.grid.node(j);
                    let g = kernel.eval(t, s)?;
                    let p = kernel.partials(t, s)?;
                    rows.push(json!([t, s, g, p.dg_dt, p.dg_ds]));
                }
            }
            fmt::json(&json!({
                "bc": bc,
                "grid_n": ctx.grid.n,
                "columns": ["t", "s", "G", "dGdt", "dGds"],
                "rows": rows,
            }))
        }
    };
    Ok((body, 0))
}

/// Per-entry verification outcome; resonance and degeneracy are reported in
/// the row rather than aborting a batch.
struct Entry {
    value: Value,
    csv_row: String,
    status: EntryStatus,
}

#[derive(PartialEq)]
enum EntryStatus {
    Pass,
    Fail,
    Resonant,
    Degenerate,
}

/// Exit code for a batch of check entries: any resonance wins, then
/// degeneracy, then plain failure.
fn batch_exit(entries: &[Entry]) -> u8 {
    let any = |s: EntryStatus| entries.iter().any(|e| e.status == s);
    if any(EntryStatus::Resonant) {
        2
    } else if any(EntryStatus::Degenerate) {
        3
    } else if any(EntryStatus::Fail) {
        1
    } else {
        0
    }
}

fn render_entries(ctx: &Ctx, header: &str, entries: &[Entry]) -> (String, u8) {
    let exit = batch_exit(entries);
    let body = match ctx.out {
        OutFormat::Json => {
            if entries.len() == 1 {
                fmt::json(&entries[0].value)
            } else {
                fmt::json(&Value::Array(entries.iter().map(|e| e.value.clone()).collect()))
            }
        }
        OutFormat::Csv => {
            let mut out = String::from(header);
            out.push('\n');
            for e in entries {
                out.push_str(&e.csv_row);
                out.push('\n');
            }
            out
        }
    };
    (body, exit)
}

fn identity_entry(id: IdentityId, pair: &FundamentalPair, grid: GridSpec, tol: f64) -> Result<Entry, Failure> {
    match decomposition_residual(id, pair, grid) {
        Ok(r) => {
            let pass = r.max_abs_residual <= tol;
            Ok(Entry {
                value: json!({
                    "identity": id.to_string(),
                    "residual": r.max_abs_residual,
                    "argmax": [r.argmax.0, r.argmax.1],
                    "nondegeneracy": r.nondegeneracy_value,
                    "status": "ok",
                    "pass": pass,
                }),
                csv_row: format!(
                    "{},{},{},{},{},ok,{}",
                    id,
                    fmt::float(r.max_abs_residual),
                    fmt::float(r.argmax.0),
                    fmt::float(r.argmax.1),
                    fmt::float(r.nondegeneracy_value),
                    pass
                ),
                status: if pass { EntryStatus::Pass } else { EntryStatus::Fail },
            })
        }
        Err(e @ Error::Resonant { .. }) => Ok(Entry {
            value: json!({
                "identity": id.to_string(),
                "status": "resonant",
                "detail": e.to_string(),
                "pass": false,
            }),
            csv_row: format!("{id},,,,,resonant,false"),
            status: EntryStatus::Resonant,
        }),
        Err(e @ Error::DegenerateIdentity { .. }) => Ok(Entry {
            value: json!({
                "identity": id.to_string(),
                "status": "degenerate",
                "detail": e.to_string(),
                "pass": false,
            }),
            csv_row: format!("{id},,,,,degenerate,false"),
            status: EntryStatus::Degenerate,
        }),
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify_identity(ctx: &Ctx, id: Option<&str>, all: bool) -> Result<(String, u8), Failure> {
    let ids: Vec<IdentityId> = if all {
        IdentityId::ALL.to_vec()
    } else if let Some(name) = id {
        vec![IdentityId::from_str(name)?]
    } else {
        return Err(Failure::Usage(
            "pass --id <name> or --all (names like P_from_D, N_from_M1_alt)".into(),
        ));
    };
    let pair = ctx.pair()?;
    let tol = ctx.verify_tol();
    let entries: Vec<Entry> = ids
        .into_iter()
        .map(|id| identity_entry(id, &pair, ctx.grid, tol))
        .collect::<Result<_, _>>()?;
    Ok(render_entries(
        ctx,
        "identity,residual,argmax_t,argmax_s,nondegeneracy,status,pass",
        &entries,
    ))
}

fn cmd_verify_matrix(ctx: &Ctx) -> Result<(String, u8), Failure> {
    let pair = ctx.pair()?;
    let tol = ctx.verify_tol();
    let mut entries = Vec::new();
    for bc in BcKind::ALL {
        let entry = match build_green(bc, &pair).and_then(|k| matrix_green_boundary_check(&k)) {
            Ok(residual) => {
                let pass = residual <= tol;
                Entry {
                    value: json!({
                        "bc": bc,
                        "residual": residual,
                        "status": "ok",
                        "pass": pass,
                    }),
                    csv_row: format!("{},{},ok,{}", bc, fmt::float(residual), pass),
                    status: if pass { EntryStatus::Pass } else { EntryStatus::Fail },
                }
            }
            Err(e @ Error::Resonant { .. }) => Entry {
                value: json!({
                    "bc": bc,
                    "status": "resonant",
                    "detail": e.to_string(),
                    "pass": false,
                }),
                csv_row: format!("{bc},,resonant,false"),
                status: EntryStatus::Resonant,
            },
            Err(e) => return Err(e.into()),
        };
        entries.push(entry);
    }
    Ok(render_entries(ctx, "bc,residual,status,pass", &entries))
}

fn cmd_verify_signs(ctx: &Ctx) -> Result<(String, u8), Failure> {
    let pair = ctx.pair()?;
    let mut entries = Vec::new();
    for report in sign_comparison_report(&pair, ctx.grid)? {
        let entry = match report.outcome {
            Ok(o) => Entry {
                value: json!({
                    "label": report.label,
                    "below": report.below,
                    "above": report.above,
                    "holds": o.holds,
                    "worst_margin": o.worst_margin,
                    "argmin": [o.argmin.0, o.argmin.1],
                    "status": "ok",
                    "pass": o.holds,
                }),
                csv_row: format!(
                    "{},{},{},{},{},{},{},ok",
                    report.label,
                    report.below,
                    report.above,
                    o.holds,
                    fmt::float(o.worst_margin),
                    fmt::float(o.argmin.0),
                    fmt::float(o.argmin.1),
                ),
                status: if o.holds { EntryStatus::Pass } else { EntryStatus::Fail },
            },
            Err(e @ Error::Resonant { .. }) => Entry {
                value: json!({
                    "label": report.label,
                    "below": report.below,
                    "above": report.above,
                    "status": "resonant",
                    "detail": e.to_string(),
                    "pass": false,
                }),
                csv_row: format!(
                    "{},{},{},,,,,resonant",
                    report.label, report.below, report.above
                ),
                status: EntryStatus::Resonant,
            },
            Err(e) => return Err(e.into()),
        };
        entries.push(entry);
    }
    Ok(render_entries(
        ctx,
        "label,below,above,holds,worst_margin,argmin_t,argmin_s,status",
        &entries,
    ))
}

fn cmd_verify_basis(ctx: &Ctx) -> Result<(String, u8), Failure> {
    let pair = ctx.pair()?;
    let tol = ctx.verify_tol();
    let mut entries = Vec::new();
    for (basis, outcome) in basis_green_identity_check(&pair, ctx.grid)? {
        let entry = match outcome {
            Ok(residual) => {
                let pass = residual <= tol;
                Entry {
                    value: json!({
                        "basis": basis.to_string(),
                        "bc": basis.governing_bc(),
                        "residual": residual,
                        "status": "ok",
                        "pass": pass,
                    }),
                    csv_row: format!(
                        "{},{},{},ok,{}",
                        basis,
                        basis.governing_bc(),
                        fmt::float(residual),
                        pass
                    ),
                    status: if pass { EntryStatus::Pass } else { EntryStatus::Fail },
                }
            }
            Err(e @ Error::Resonant { .. }) => Entry {
                value: json!({
                    "basis": basis.to_string(),
                    "bc": basis.governing_bc(),
                    "status": "resonant",
                    "detail": e.to_string(),
                    "pass": false,
                }),
                csv_row: format!("{},{},,resonant,false", basis, basis.governing_bc()),
                status: EntryStatus::Resonant,
            },
            Err(e) => return Err(e.into()),
        };
        entries.push(entry);
    }
    Ok(render_entries(ctx, "basis,bc,residual,status,pass", &entries))
}

fn cmd_eigen(
    ctx: &Ctx,
    bc: &str,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    scan_step: Option<f64>,
    bisection_tol: Option<f64>,
) -> Result<(String, u8), Failure> {
    let bc = bc_of(bc)?;
    let mut cfg = EigenSearchConfig::default();
    if let Some(v) = lambda_min {
        cfg.lambda_min = v;
    }
    if let Some(v) = lambda_max {
        cfg.lambda_max = v;
    }
    if let Some(v) = scan_step {
        cfg.scan_step = v;
    }
    if let Some(v) = bisection_tol {
        cfg.bisection_tol = v;
    }
    let lambda0 = first_eigenvalue(bc, &ctx.potential, &cfg, ctx.ode_grid)?;
    let char_residual = characteristic_value(bc, &ctx.potential, lambda0, ctx.ode_grid)?.abs();
    let v = json!({
        "bc": bc,
        "lambda0": lambda0,
        "char_residual": char_residual,
    });
    let body = match ctx.out {
        OutFormat::Json => fmt::json(&v),
        OutFormat::Csv => format!(
            "bc,lambda0,char_residual\n{},{},{}\n",
            bc,
            fmt::float(lambda0),
            fmt::float(char_residual)
        ),
    };
    Ok((body, 0))
}

fn cmd_zeros(ctx: &Ctx, basis: &str) -> Result<(String, u8), Failure> {
    let basis = BasisKind::from_str(basis)?;
    let pair = ctx.pair()?;
    let traj = basis_solution(basis, &pair)?;
    let zeros = count_zeros(&traj);
    let v = json!({
        "basis": basis.to_string(),
        "bc": basis.governing_bc(),
        "lambda": ctx.lambda,
        "zeros": zeros,
    });
    let body = match ctx.out {
        OutFormat::Json => fmt::json(&v),
        OutFormat::Csv => format!(
            "basis,bc,lambda,zeros\n{},{},{},{}\n",
            basis,
            basis.governing_bc(),
            fmt::float(ctx.lambda),
            zeros
        ),
    };
    Ok((body, 0))
}

fn picard_config(
    ctx: &Ctx,
    quad_nodes: Option<usize>,
    max_iter: Option<usize>,
    force: bool,
) -> PicardConfig {
    let mut cfg = PicardConfig::default();
    if let Some(n) = quad_nodes {
        cfg.quad_nodes = n;
    }
    if let Some(n) = max_iter {
        cfg.max_iter = n;
    }
    if let Some(tol) = ctx.tol {
        cfg.tol = tol;
    }
    cfg.force = force;
    cfg
}

fn kernel_for<'a>(bc: BcKind, pair: &'a FundamentalPair) -> Result<GreenKernel<'a>, Failure> {
    Ok(build_green(bc, pair)?)
}

fn cmd_nonlinear(ctx: &Ctx, op: &NonlinearCmd) -> Result<(String, u8), Failure> {
    match op {
        NonlinearCmd::Constants {
            c,
            bc_a,
            bc_b,
            quad_nodes,
        } => {
            let (bc_a, bc_b) = (bc_of(bc_a)?, bc_of(bc_b)?);
            let pair = ctx.pair()?;
            let ka = kernel_for(bc_a, &pair)?;
            let kb = kernel_for(bc_b, &pair)?;
            let cfg = picard_config(ctx, *quad_nodes, None, false);
            let constants = bound_constants(&ka, &kb, &NonlinearSpec::paper_example(*c), &cfg)?;
            let mut v = serde_json::to_value(constants).unwrap();
            let obj = v.as_object_mut().unwrap();
            obj.insert("c".into(), json!(*c));
            obj.insert("bc_a".into(), json!(bc_a));
            obj.insert("bc_b".into(), json!(bc_b));
            Ok((render(ctx, &v), 0))
        }
        NonlinearCmd::Solve {
            c,
            bc,
            quad_nodes,
            max_iter,
            force,
        } => {
            let bc = bc_of(bc)?;
            let pair = ctx.pair()?;
            let kernel = kernel_for(bc, &pair)?;
            let cfg = picard_config(ctx, *quad_nodes, *max_iter, *force);
            let result = picard_solve(&kernel, &NonlinearSpec::paper_example(*c), &cfg)?;
            let body = match ctx.out {
                OutFormat::Json => {
                    let mut v = serde_json::to_value(&result).unwrap();
                    v.as_object_mut().unwrap().insert("c".into(), json!(*c));
                    fmt::json(&v)
                }
                OutFormat::Csv => {
                    let mut out = String::from("t,u\n");
                    for i in 0..result.sup_grid_n {
                        let (t, u) = result.node(i);
                        out.push_str(&format!("{},{}\n", fmt::float(t), fmt::float(u)));
                    }
                    out
                }
            };
            Ok((body, 0))
        }
        NonlinearCmd::Distance {
            c,
            bc_a,
            bc_b,
            quad_nodes,
            max_iter,
        } => {
            let (bc_a, bc_b) = (bc_of(bc_a)?, bc_of(bc_b)?);
            let pair = ctx.pair()?;
            let ka = kernel_for(bc_a, &pair)?;
            let kb = kernel_for(bc_b, &pair)?;
            let cfg = picard_config(ctx, *quad_nodes, *max_iter, false);
            let report = distance_bound_check(&ka, &kb, &NonlinearSpec::paper_example(*c), &cfg)?;
            let pass = report.distance_within_bound && report.corollary_brackets;
            let mut v = serde_json::to_value(&report).unwrap();
            v.as_object_mut().unwrap().insert("c".into(), json!(*c));
            Ok((render(ctx, &v), if pass { 0 } else { 1 }))
        }
        NonlinearCmd::Example { quad_nodes } => {
            let cfg = picard_config(ctx, *quad_nodes, None, false);
            let report = reproduce_paper_example(&cfg, ctx.ode_grid)?;
            let exit = u8::from(!report.all_pass);
            let body = match ctx.out {
                OutFormat::Json => fmt::json(&serde_json::to_value(&report).unwrap()),
                OutFormat::Csv => report.to_csv(),
            };
            Ok((body, exit))
        }
    }
}
