//! landau1d: tables, coefficient dumps, solves, ionization scans, and
//! no-binding certificates for effective 1D models of atoms in strong
//! magnetic fields.
//!
//! Conventions:
//! - CSV outputs start with `#` comment lines recording version, the full
//!   invocation, and the seed; bodies carry 15 significant digits and are
//!   byte-identical across runs of the same invocation (timestamps only
//!   behind `--timestamps`).
//! - structured reports are JSON with the same provenance fields inline;
//! - field strengths accept power-law expressions in Z such as `Z^4` or
//!   `2.5*Z^3`, since the interesting regimes scale that way;
//! - runtime failures print `{"error": ..., "kind": ...}` on stderr and
//!   exit 2; a false certificate verdict or failed verification exits 1.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use landau1d_core::certificates::{
    no_binding_certificate_with_delta, partition_check, theorem_thresholds, BoundParams,
};
use landau1d_core::interactions::{
    det_coefficients, eval_w, oracle_w_direct, oracle_w_slater_pair, pair_coefficients,
    slater_pair_coefficients, CoefficientVector,
};
use landau1d_core::models::{parse_model, ModelSpec};
use landau1d_core::potentials::vm_table;
use landau1d_core::spectral::{
    exact_two_electron, fold_scan, hartree_energy, scan_energy, Grid1D, ScfOptions,
    DEFAULT_BINDING_TOL_REL,
};
use landau1d_core::{CoreError, QuadratureSpec};
use output::{format_sig, OutputTarget};

#[derive(Parser)]
#[command(name = "landau1d", version, about)]
struct Cli {
    /// Seed recorded in output headers; drives sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Add a timestamp line to file headers (off keeps outputs reproducible).
    #[arg(long, global = true)]
    timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regularized-potential tables.
    Potentials {
        #[command(subcommand)]
        cmd: PotentialsCmd,
    },
    /// Effective-interaction coefficients and oracle verification.
    Interactions {
        #[command(subcommand)]
        cmd: InteractionsCmd,
    },
    /// Ground-state solve for N electrons.
    Solve(SolveArgs),
    /// Parameter sweeps.
    Scan {
        #[command(subcommand)]
        cmd: ScanCmd,
    },
    /// No-binding certificate; exit 0 iff the verdict is positive.
    Certify(CertifyArgs),
    /// Closed-form ionization thresholds.
    Thresholds(ThresholdArgs),
    /// Localization-partition diagnostics.
    Partition {
        #[command(subcommand)]
        cmd: PartitionCmd,
    },
    /// Re-emit a CSV produced by this tool (normalizes formatting).
    Replot(ReplotArgs),
    /// Numerically compare two CSV files; exit 1 if they differ.
    Diff(DiffArgs),
}

#[derive(Subcommand)]
enum PotentialsCmd {
    /// Tabulate V_m over a uniform grid: header x,V_0,... one row per node.
    Table(TableArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Comma-separated Landau indices, e.g. 0,1,2.
    #[arg(long, value_delimiter = ',')]
    m: Vec<u32>,
    #[arg(long, default_value_t = 0.0)]
    xmin: f64,
    #[arg(long, default_value_t = 10.0)]
    xmax: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long, default_value_t = 64)]
    quad_nodes: usize,
    #[arg(long, default_value_t = 1e-11)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-13)]
    abs_tol: f64,
    #[arg(long, default_value_t = 6)]
    max_refinements: u32,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            node_count: self.quad_nodes,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_refinements: self.max_refinements,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum CoeffKind {
    Product,
    Slater,
    Det,
}

#[derive(Subcommand)]
enum InteractionsCmd {
    /// Print index,weight pairs of a convex decomposition as CSV.
    Coeffs {
        #[arg(long, value_enum)]
        kind: CoeffKind,
        /// Indices: two for product/slater, the full orbital list for det.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check coefficient reconstructions against quadrature oracles.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_m: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum SolverArg {
    Hartree,
    Exact2,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, default_value = "m0")]
    model: String,
    #[arg(long = "Z", short = 'Z')]
    z: f64,
    /// Field strength; accepts expressions in Z like `Z^4` or `2*Z^3`.
    #[arg(long = "B", short = 'B')]
    b: String,
    #[arg(long = "N", short = 'N', default_value_t = 1)]
    n: u32,
    #[arg(long, value_enum, default_value = "hartree")]
    solver: SolverArg,
    /// Grid specification `L=40,n=4001`.
    #[arg(long, default_value = "L=40,n=4001")]
    grid: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ScanCmd {
    /// Scan N upward and report the last electron count that binds.
    Nmax(NmaxArgs),
}

#[derive(Args)]
struct NmaxArgs {
    #[arg(long, default_value = "m0")]
    model: String,
    #[arg(long = "Z", short = 'Z')]
    z: f64,
    #[arg(long = "B", short = 'B')]
    b: String,
    #[arg(long, default_value_t = 8)]
    cap: u32,
    #[arg(long, default_value = "L=40,n=2001")]
    grid: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_BINDING_TOL_REL)]
    binding_tol: f64,
    /// Worker threads; per-N solves share nothing and results merge in N order.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    model: String,
    #[arg(long = "Z", short = 'Z')]
    z: f64,
    #[arg(long = "B", short = 'B')]
    b: String,
    #[arg(long = "N", short = 'N')]
    n: u32,
    /// Constants file (JSON); LANDAU1D_PARAMS overrides the default path.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Localization width δ of the partition.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, default_value = "m0")]
    model: String,
    #[arg(long = "Z", short = 'Z')]
    z: f64,
    #[arg(long = "B", short = 'B')]
    b: String,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Estimate the gradient constant λ and its (log N)² scaling.
    Check {
        #[arg(long, value_delimiter = ',', default_value = "4,16,64")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ReplotArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiffArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Maximum tolerated absolute difference per numeric cell.
    #[arg(long, default_value_t = 0.0)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let kind = error_kind(&e);
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.to_string(), "kind": kind })
            );
            ExitCode::from(2)
        }
    }
}

fn error_kind(e: &CliError) -> &'static str {
    match e {
        CliError::Core(CoreError::Accuracy { .. }) => "accuracy",
        CliError::Core(CoreError::InvalidInput(_)) => "invalid-input",
        CliError::Core(CoreError::NonConvergence { .. }) => "non-convergence",
        CliError::Core(CoreError::DomainTooSmall { .. }) => "domain-too-small",
        CliError::Core(CoreError::SizeLimit(_)) => "size-limit",
        CliError::Core(CoreError::NearSingularLog(_)) => "near-singular-log",
        CliError::Core(CoreError::EnvelopeViolation { .. }) => "envelope-violation",
        CliError::Core(CoreError::Sampling(_)) => "sampling",
        CliError::Core(CoreError::Io(_)) | CliError::Io(_) => "io",
        CliError::Core(CoreError::Json(_)) | CliError::Json(_) => "json",
        CliError::Usage(_) => "usage",
    }
}

#[derive(Debug)]
enum CliError {
    Core(CoreError),
    Io(std::io::Error),
    Json(serde_json::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}
impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses a field-strength expression: a float literal, `Z`, `Z^p`, or
/// `a*Z^p`.
fn parse_b_expr(expr: &str, z: f64) -> CliResult<f64> {
    let s = expr.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (coef, rest) = match s.split_once('*') {
        Some((c, r)) => (
            c.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad coefficient in field expression {s:?}")))?,
            r.trim(),
        ),
        None => (1.0, s),
    };
    let rest = rest
        .strip_prefix(['Z', 'z'])
        .ok_or_else(|| CliError::Usage(format!("cannot parse field expression {s:?}")))?;
    let power = match rest.strip_prefix('^') {
        Some(p) => p
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad exponent in field expression {s:?}")))?,
        None if rest.is_empty() => 1.0,
        None => return Err(CliError::Usage(format!("cannot parse field expression {s:?}"))),
    };
    Ok(coef * z.powf(power))
}

/// Parses `L=40,n=4001`.
fn parse_grid(spec: &str) -> CliResult<Grid1D> {
    let mut half_extent = None;
    let mut points = None;
    for part in spec.split(',') {
        match part.trim().split_once('=') {
            Some(("L", v)) | Some(("l", v)) => {
                half_extent = Some(v.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!("bad grid half extent in {spec:?}"))
                })?)
            }
            Some(("n", v)) | Some(("N", v)) => {
                points = Some(v.parse::<usize>().map_err(|_| {
                    CliError::Usage(format!("bad grid point count in {spec:?}"))
                })?)
            }
            _ => return Err(CliError::Usage(format!("bad grid component {part:?}"))),
        }
    }
    let (l, n) = match (half_extent, points) {
        (Some(l), Some(n)) => (l, n),
        _ => return Err(CliError::Usage(format!("grid {spec:?} needs L= and n="))),
    };
    Ok(Grid1D::new(l, n)?)
}

fn load_params(path: &Option<PathBuf>) -> CliResult<BoundParams> {
    let resolved = match path {
        Some(p) => Some(p.clone()),
        None => std::env::var_os("LANDAU1D_PARAMS").map(PathBuf::from),
    };
    match resolved {
        Some(p) => {
            let raw = std::fs::read_to_string(&p)?;
            Ok(serde_json::from_str(&raw)?)
        }
        None => Ok(BoundParams::default()),
    }
}

fn load_model(selector: &str) -> CliResult<ModelSpec> {
    Ok(parse_model(selector)?)
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::Potentials {
            cmd: PotentialsCmd::Table(args),
        } => run_table(cli, args),
        Command::Interactions { cmd } => match cmd {
            InteractionsCmd::Coeffs { kind, m, out } => run_coeffs(cli, *kind, m, out),
            InteractionsCmd::Verify { max_m, tol } => run_verify(*max_m, *tol),
        },
        Command::Solve(args) => run_solve(cli, args),
        Command::Scan {
            cmd: ScanCmd::Nmax(args),
        } => run_scan(cli, args),
        Command::Certify(args) => run_certify(cli, args),
        Command::Thresholds(args) => run_thresholds(cli, args),
        Command::Partition {
            cmd:
                PartitionCmd::Check {
                    n_list,
                    delta,
                    rho,
                    samples,
                    out,
                },
        } => run_partition_check(cli, n_list, *delta, *rho, *samples, out),
        Command::Replot(args) => run_replot(cli, args),
        Command::Diff(args) => run_diff(args),
    }
}

fn run_table(cli: &Cli, args: &TableArgs) -> CliResult<ExitCode> {
    if args.points < 1 {
        return Err(CliError::Usage("table needs at least one point".into()));
    }
    if !(args.xmax >= args.xmin) {
        return Err(CliError::Usage("xmax must be >= xmin".into()));
    }
    let xs: Vec<f64> = if args.points == 1 {
        vec![args.xmin]
    } else {
        let h = (args.xmax - args.xmin) / (args.points - 1) as f64;
        (0..args.points).map(|i| args.xmin + i as f64 * h).collect()
    };
    let table = vm_table(&args.m, &xs, &args.quad.spec())?;
    let mut target = OutputTarget::create(&args.out, cli.seed, cli.timestamps)?;
    let header: Vec<String> = std::iter::once("x".to_string())
        .chain(table.ms.iter().map(|m| format!("V_{m}")))
        .collect();
    target.write_line(&header.join(","))?;
    for (xi, x) in table.xs.iter().enumerate() {
        let mut row = vec![format_sig(*x)];
        for mi in 0..table.ms.len() {
            row.push(format_sig(table.values[mi][xi]));
        }
        target.write_line(&row.join(","))?;
    }
    target.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn coefficients_for(kind: CoeffKind, m: &[u32]) -> CliResult<CoefficientVector> {
    match kind {
        CoeffKind::Product => {
            if m.len() != 2 {
                return Err(CliError::Usage(
                    "product coefficients need exactly two indices, e.g. --m 3,5".into(),
                ));
            }
            Ok(pair_coefficients(m[0], m[1])?)
        }
        CoeffKind::Slater => {
            if m.len() != 2 {
                return Err(CliError::Usage(
                    "slater coefficients need exactly two indices".into(),
                ));
            }
            Ok(slater_pair_coefficients(m[0], m[1])?)
        }
        CoeffKind::Det => Ok(det_coefficients(m)?),
    }
}

fn run_coeffs(
    cli: &Cli,
    kind: CoeffKind,
    m: &[u32],
    out: &Option<PathBuf>,
) -> CliResult<ExitCode> {
    let coeffs = coefficients_for(kind, m)?;
    let mut target = OutputTarget::create(out, cli.seed, cli.timestamps)?;
    target.write_line("index,weight")?;
    for (idx, w) in coeffs.weights().iter().enumerate() {
        target.write_line(&format!("{idx},{}", format_sig(*w)))?;
    }
    target.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(max_m: u32, tol: f64) -> CliResult<ExitCode> {
    let quad = QuadratureSpec::default();
    let xs = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    writeln!(w, "kind,m1,m2,max_rel_diff").map_err(CliError::Io)?;
    for m1 in 0..=max_m {
        for m2 in m1..=max_m {
            let coeffs = pair_coefficients(m1, m2)?;
            let mut max_rel = 0.0f64;
            for &x in &xs {
                let a = eval_w(&coeffs, x, &quad)?;
                let b = oracle_w_direct(m1, m2, x, &quad)?;
                max_rel = max_rel.max((a - b).abs() / b.abs());
            }
            writeln!(w, "product,{m1},{m2},{}", format_sig(max_rel)).map_err(CliError::Io)?;
            worst = worst.max(max_rel);
            if max_rel > tol {
                failures += 1;
            }
        }
    }
    for j in 0..=max_m {
        for k in (j + 1)..=max_m {
            let coeffs = slater_pair_coefficients(j, k)?;
            let mut max_rel = 0.0f64;
            for &x in &xs {
                let a = eval_w(&coeffs, x, &quad)?;
                let b = oracle_w_slater_pair(j, k, x, &quad)?;
                max_rel = max_rel.max((a - b).abs() / b.abs());
            }
            writeln!(w, "slater,{j},{k},{}", format_sig(max_rel)).map_err(CliError::Io)?;
            worst = worst.max(max_rel);
            if max_rel > tol {
                failures += 1;
            }
        }
    }
    writeln!(
        w,
        "# verify {}: worst {} against tolerance {}",
        if failures == 0 { "PASS" } else { "FAIL" },
        format_sig(worst),
        format_sig(tol)
    )
    .map_err(CliError::Io)?;
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_solve(cli: &Cli, args: &SolveArgs) -> CliResult<ExitCode> {
    let model = load_model(&args.model)?;
    let b = parse_b_expr(&args.b, args.z)?;
    let grid = parse_grid(&args.grid)?;
    let opts = ScfOptions {
        energy_tol: args.tol,
        ..Default::default()
    };
    let (energy, iterations, residual) = match args.solver {
        SolverArg::Hartree => {
            let r = hartree_energy(args.n, args.z, b, &model, grid, &opts)?;
            (r.energy, r.iterations, r.residual)
        }
        SolverArg::Exact2 => {
            if args.n > 2 {
                return Err(CliError::Usage("exact2 solver handles N <= 2 only".into()));
            }
            let e = if args.n == 2 {
                exact_two_electron(args.z, b, &model, grid, args.tol)?
            } else {
                hartree_energy(args.n, args.z, b, &model, grid, &opts)?.energy
            };
            (e, 0, 0.0)
        }
    };
    let report = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": output::invocation(),
        "seed": cli.seed,
        "command": "solve",
        "model": model.name(),
        "z": args.z,
        "b": b,
        "n": args.n,
        "grid": { "half_extent": grid.half_extent(), "points": grid.points() },
        "energy": energy,
        "iterations": iterations,
        "residual": residual,
    });
    output::emit_json(&args.out, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn run_scan(cli: &Cli, args: &NmaxArgs) -> CliResult<ExitCode> {
    if args.cap < 1 {
        return Err(CliError::Usage("scan cap must be >= 1".into()));
    }
    let model = load_model(&args.model)?;
    let b = parse_b_expr(&args.b, args.z)?;
    let grid = parse_grid(&args.grid)?;
    let opts = ScfOptions {
        energy_tol: args.tol,
        ..Default::default()
    };
    let workers = args.workers.max(1).min(args.cap as usize);
    // shared-nothing workers over disjoint N ranges; the merge is by N, so
    // the output is identical to a sequential scan
    let mut outcomes: Vec<(u32, landau1d_core::Result<(f64, usize, f64)>)> =
        Vec::with_capacity(args.cap as usize);
    if workers <= 1 {
        for n in 1..=args.cap {
            outcomes.push((n, scan_energy(n, args.z, b, &model, grid, &opts)));
        }
    } else {
        let chunks: Vec<Vec<u32>> = (0..workers)
            .map(|w| {
                (1..=args.cap)
                    .filter(|n| (*n as usize - 1) % workers == w)
                    .collect()
            })
            .collect();
        let mut partials: Vec<Vec<(u32, landau1d_core::Result<(f64, usize, f64)>)>> =
            Vec::with_capacity(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|ns| {
                    let model = &model;
                    let opts = &opts;
                    scope.spawn(move || {
                        ns.iter()
                            .map(|&n| (n, scan_energy(n, args.z, b, model, grid, opts)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                partials.push(h.join().expect("scan worker panicked"));
            }
        });
        for p in partials {
            outcomes.extend(p);
        }
        outcomes.sort_by_key(|(n, _)| *n);
    }
    let scan = fold_scan(outcomes, args.binding_tol);
    let mut target = OutputTarget::create(&args.out, cli.seed, cli.timestamps)?;
    target.write_line(&format!(
        "# n_max: {}  truncated: {}",
        scan.n_max, scan.truncated
    ))?;
    target.write_line("N,energy,bound_flag,iterations,residual")?;
    for row in &scan.rows {
        let energy = row.energy.map_or_else(|| "nan".into(), format_sig);
        let residual = if row.residual.is_nan() {
            "nan".to_string()
        } else {
            format_sig(row.residual)
        };
        target.write_line(&format!(
            "{},{},{},{},{}{}",
            row.n,
            energy,
            if row.bound { 1 } else { 0 },
            row.iterations,
            residual,
            row.error
                .as_ref()
                .map_or(String::new(), |e| format!(" # {e}"))
        ))?;
    }
    target.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn run_certify(cli: &Cli, args: &CertifyArgs) -> CliResult<ExitCode> {
    let model = load_model(&args.model)?;
    let b = parse_b_expr(&args.b, args.z)?;
    let params = load_params(&args.params)?;
    let report = no_binding_certificate_with_delta(args.n, args.z, b, &model, &params, args.delta)?;
    let verdict = report.verdict;
    let mut doc = serde_json::to_value(&report)?;
    if let serde_json::Value::Object(map) = &mut doc {
        map.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        map.insert("config".into(), output::invocation().into());
        map.insert("seed".into(), cli.seed.into());
        map.insert("model".into(), model.name().into());
        map.insert("z".into(), args.z.into());
        map.insert("b".into(), b.into());
        map.insert("n".into(), args.n.into());
    }
    output::emit_json(&args.out, &doc)?;
    Ok(if verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_thresholds(cli: &Cli, args: &ThresholdArgs) -> CliResult<ExitCode> {
    let model = load_model(&args.model)?;
    let b = parse_b_expr(&args.b, args.z)?;
    let params = load_params(&args.params)?;
    let rows = theorem_thresholds(args.z, b, &model, &params)?;
    let mut target = OutputTarget::create(&args.out, cli.seed, cli.timestamps)?;
    target.write_line("name,n_threshold,applicable")?;
    for row in rows {
        target.write_line(&format!(
            "{},{},{}",
            row.name,
            format_sig(row.n_threshold),
            if row.applicable { 1 } else { 0 }
        ))?;
    }
    target.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn run_partition_check(
    cli: &Cli,
    n_list: &[usize],
    delta: f64,
    rho: f64,
    samples: usize,
    out: &Option<PathBuf>,
) -> CliResult<ExitCode> {
    let report = partition_check(n_list, rho, delta, samples, cli.seed)?;
    let mut doc = serde_json::to_value(&report)?;
    if let serde_json::Value::Object(map) = &mut doc {
        map.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        map.insert("config".into(), output::invocation().into());
        map.insert("seed".into(), cli.seed.into());
    }
    output::emit_json(out, &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn run_replot(cli: &Cli, args: &ReplotArgs) -> CliResult<ExitCode> {
    let rows = output::read_csv(&args.input)?;
    let mut target = OutputTarget::create(&args.out, cli.seed, cli.timestamps)?;
    for row in rows {
        let cells: Vec<String> = row
            .into_iter()
            .map(|cell| match cell.parse::<f64>() {
                Ok(v) => format_sig(v),
                Err(_) => cell,
            })
            .collect();
        target.write_line(&cells.join(","))?;
    }
    target.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn run_diff(args: &DiffArgs) -> CliResult<ExitCode> {
    let a = output::read_csv(&args.a)?;
    let b = output::read_csv(&args.b)?;
    if a.len() != b.len() {
        println!("row count differs: {} vs {}", a.len(), b.len());
        return Ok(ExitCode::from(1));
    }
    let mut worst = 0.0f64;
    for (ra, rb) in a.iter().zip(&b) {
        if ra.len() != rb.len() {
            println!("column count differs");
            return Ok(ExitCode::from(1));
        }
        for (ca, cb) in ra.iter().zip(rb) {
            match (ca.parse::<f64>(), cb.parse::<f64>()) {
                (Ok(va), Ok(vb)) => worst = worst.max((va - vb).abs()),
                _ if ca == cb => {}
                _ => {
                    println!("non-numeric cell mismatch: {ca:?} vs {cb:?}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
    }
    println!("max absolute difference: {}", format_sig(worst));
    Ok(if worst <= args.tol {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
