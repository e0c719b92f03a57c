//! Command-line front end: load a periodic-complex document, run the
//! Betti/density/determinant pipelines, and write deterministic CSV tables
//! plus JSON verdict summaries.
//!
//! Exit codes: 0 success, 1 assertion or inequality failure, 2 usage or
//! parse error.

mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use amena::analysis;
use amena::oracle;
use amena::spectra::{assemble, BoundaryCondition, SpectraConfig};
use amena::{build_piece, FolnerBox, PeriodicComplex};

use output::{fmt_sig, CsvTable, Summary};

#[derive(Parser)]
#[command(name = "amena", version, about = "L2 invariants of Z^d-periodic cell complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a document, verify the chain condition, print its constants.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Normalized finite Betti numbers vs the oracle L^2 Betti number.
    Betti(RunArgs),
    /// Spectral density tables F_m(lambda) with the oracle column and the
    /// gap sequence.
    Density(RunArgs),
    /// Determinant-class ledger and Fuglede-Kadison determinant.
    Determinant(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    input: PathBuf,
    /// Degrees: a single degree `1`, a comma list `0,2`, an inclusive range
    /// `0..2`, or `all`.
    #[arg(long, default_value = "all")]
    j: String,
    /// Boundary condition: absolute, relative, or both.
    #[arg(long, default_value = "absolute")]
    bc: String,
    /// Folner box sides, strictly increasing comma list.
    #[arg(long, default_value = "2,4,8,16")]
    m: String,
    /// Threshold grid: comma list or `logspace:a:b:n`.
    #[arg(long, default_value = "logspace:1e-4:0.9:25")]
    lambdas: String,
    /// Quadrature grid points per torus dimension (even).
    #[arg(long, default_value_t = 64)]
    oracle_grid: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Tolerance overrides, NAME=VALUE (known: betti).
    #[arg(long)]
    tol: Vec<String>,
}

/// Usage/parse failures exit 2; violated assertions exit 1.
enum Failure {
    Usage(String),
    Assertion(String),
}

impl From<amena::Error> for Failure {
    fn from(e: amena::Error) -> Self {
        match e {
            amena::Error::Invalid(msg) => Failure::Assertion(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("io error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { input } => cmd_validate(&input),
        Command::Betti(args) => cmd_betti(&args),
        Command::Density(args) => cmd_density(&args),
        Command::Determinant(args) => cmd_determinant(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(input: &PathBuf) -> Result<PeriodicComplex, Failure> {
    PeriodicComplex::load_path(input).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_m(s: &str) -> Result<Vec<usize>, Failure> {
    let list: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("bad m list `{s}`: {e}")))?;
    if list.is_empty() || list.contains(&0) {
        return Err(Failure::Usage("m list must be nonempty and positive".into()));
    }
    if !list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Failure::Usage("m list must be strictly increasing".into()));
    }
    Ok(list)
}

fn parse_j(s: &str, top: usize) -> Result<Vec<usize>, Failure> {
    if s == "all" {
        return Ok((0..=top).collect());
    }
    let list: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.parse().map_err(|_| Failure::Usage(format!("bad j range `{s}`")))?;
        let b: usize = b.parse().map_err(|_| Failure::Usage(format!("bad j range `{s}`")))?;
        if a > b {
            return Err(Failure::Usage(format!("bad j range `{s}`")));
        }
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Usage(format!("bad j list `{s}`: {e}")))?
    };
    if let Some(&j) = list.iter().find(|&&j| j > top) {
        return Err(Failure::Usage(format!(
            "degree {j} exceeds top dimension {top}"
        )));
    }
    Ok(list)
}

fn parse_bc(s: &str) -> Result<Vec<BoundaryCondition>, Failure> {
    match s {
        "absolute" => Ok(vec![BoundaryCondition::Absolute]),
        "relative" => Ok(vec![BoundaryCondition::Relative]),
        "both" => Ok(vec![BoundaryCondition::Absolute, BoundaryCondition::Relative]),
        other => Err(Failure::Usage(format!(
            "bad bc `{other}`: expected absolute, relative or both"
        ))),
    }
}

fn parse_lambdas(s: &str) -> Result<Vec<f64>, Failure> {
    if let Some(rest) = s.strip_prefix("logspace:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(Failure::Usage(format!("bad lambdas spec `{s}`")));
        }
        let a: f64 = parts[0].parse().map_err(|_| Failure::Usage(format!("bad lambdas spec `{s}`")))?;
        let b: f64 = parts[1].parse().map_err(|_| Failure::Usage(format!("bad lambdas spec `{s}`")))?;
        let n: usize = parts[2].parse().map_err(|_| Failure::Usage(format!("bad lambdas spec `{s}`")))?;
        if !(a > 0.0 && b > a && n >= 2) {
            return Err(Failure::Usage(format!(
                "bad lambdas spec `{s}`: need 0 < a < b and n >= 2"
            )));
        }
        Ok(analysis::logspace(a, b, n))
    } else {
        let list: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Usage(format!("bad lambdas list `{s}`: {e}")))?;
        if list.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Failure::Usage("lambdas must be finite and nonnegative".into()));
        }
        Ok(list)
    }
}

fn parse_tols(specs: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    let mut out = BTreeMap::new();
    for spec in specs {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("bad tolerance `{spec}`: expected NAME=VALUE")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| Failure::Usage(format!("bad tolerance value in `{spec}`")))?;
        if v <= 0.0 {
            return Err(Failure::Usage(format!("tolerance `{name}` must be positive")));
        }
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

fn check_grid(grid: usize) -> Result<(), Failure> {
    if grid == 0 || !grid.is_multiple_of(2) {
        return Err(Failure::Usage(format!(
            "oracle grid must be a positive even number, got {grid}"
        )));
    }
    Ok(())
}

fn cmd_validate(input: &PathBuf) -> Result<(), Failure> {
    let x = load(input)?;
    let fam = x.laplacians()?;
    println!("dims: {:?}", x.dims());
    println!("deck rank: {}", x.deck_rank());
    for deg in &fam.degrees {
        println!(
            "j={}: K^2={}, C={}, b={}",
            deg.j, deg.k_sq, deg.c_max, deg.b_local
        );
    }
    // Load already verified the composite boundary; say so explicitly.
    println!("chain complex OK");
    Ok(())
}

fn cmd_betti(args: &RunArgs) -> Result<(), Failure> {
    let x = load(&args.input)?;
    check_grid(args.oracle_grid)?;
    let m_list = parse_m(&args.m)?;
    let degrees = parse_j(&args.j, x.top_dim())?;
    let bcs = parse_bc(&args.bc)?;
    let tols = parse_tols(&args.tol)?;
    let betti_tol = tols.get("betti").copied().unwrap_or(0.05);
    std::fs::create_dir_all(&args.out)?;

    let mut summary = Summary::new("betti", &args.input);
    let mut all_pass = true;
    for &j in &degrees {
        for &bc in &bcs {
            let report = analysis::betti_convergence(&x, j, bc, &m_list, args.oracle_grid)?;
            let mut table = CsvTable::new(&["m", "n_m", "betti", "f0", "residual"]);
            for row in &report.rows {
                table.row(&[
                    row.m.to_string(),
                    row.n_m.to_string(),
                    row.betti.to_string(),
                    fmt_sig(row.f0),
                    fmt_sig(row.residual),
                ]);
            }
            table.write(&args.out.join(format!("betti_j{j}_{bc}.csv")))?;
            let pass = report.final_residual() <= betti_tol;
            all_pass &= pass;
            summary.report(serde_json::json!({
                "j": j,
                "bc": bc.to_string(),
                "target_b2": report.target_b2,
                "oracle_error": report.oracle_error,
                "final_residual": report.final_residual(),
                "tolerance": betti_tol,
                "verdict": if pass { "PASS" } else { "FAIL" },
            }));
        }
    }
    summary.write(&args.out.join("betti_summary.json"))?;
    if !all_pass {
        return Err(Failure::Assertion(
            "betti convergence residual above tolerance".into(),
        ));
    }
    Ok(())
}

fn cmd_density(args: &RunArgs) -> Result<(), Failure> {
    let x = load(&args.input)?;
    check_grid(args.oracle_grid)?;
    let m_list = parse_m(&args.m)?;
    let degrees = parse_j(&args.j, x.top_dim())?;
    let bcs = parse_bc(&args.bc)?;
    let lambdas = parse_lambdas(&args.lambdas)?;
    std::fs::create_dir_all(&args.out)?;
    let cfg = SpectraConfig::default();
    let fam = x.laplacians()?;

    let mut summary = Summary::new("density", &args.input);
    for &j in &degrees {
        let d = oracle::density(
            &fam.degree(j).laplacian,
            &lambdas,
            args.oracle_grid,
            oracle::KERNEL_TOL,
        )?;
        for &bc in &bcs {
            let mut header = vec!["lambda".to_string(), "f_oracle".to_string()];
            for &m in &m_list {
                header.push(format!("f_m{m}"));
            }
            for &m in &m_list {
                header.push(format!("g_m{m}"));
            }
            let mut table = CsvTable::new_owned(header);
            let mut laps = Vec::new();
            for &m in &m_list {
                let piece = build_piece(&x, &FolnerBox::new(m, x.deck_rank()))?;
                let n_m = piece.n_m();
                laps.push((assemble(&x, &piece, j, bc)?, n_m));
            }
            for (i, &lambda) in lambdas.iter().enumerate() {
                let mut cells = vec![fmt_sig(lambda), fmt_sig(d.values[i].1)];
                let mut gaps = Vec::new();
                for (lap, n_m) in &laps {
                    let e = lap.count_leq(lambda, &cfg)?;
                    cells.push(fmt_sig(e as f64 / *n_m as f64));
                    gaps.push(fmt_sig((e - lap.kernel_dim()) as f64 / *n_m as f64));
                }
                cells.extend(gaps);
                table.row_owned(cells);
            }
            table.write(&args.out.join(format!("density_j{j}_{bc}.csv")))?;
            summary.report(serde_json::json!({
                "j": j,
                "bc": bc.to_string(),
                "b2": d.b2,
                "oracle_error": d.error_estimate,
                "m_list": m_list,
                "lambda_count": lambdas.len(),
            }));
        }
    }
    summary.write(&args.out.join("density_summary.json"))?;
    Ok(())
}

fn cmd_determinant(args: &RunArgs) -> Result<(), Failure> {
    let x = load(&args.input)?;
    check_grid(args.oracle_grid)?;
    let m_list = parse_m(&args.m)?;
    let degrees = parse_j(&args.j, x.top_dim())?;
    let bcs = parse_bc(&args.bc)?;
    std::fs::create_dir_all(&args.out)?;

    let mut summary = Summary::new("determinant", &args.input);
    for &j in &degrees {
        for &bc in &bcs {
            let report = analysis::det_class_report(&x, j, bc, &m_list, args.oracle_grid)?;
            let mut table = CsvTable::new(&[
                "m",
                "n_m",
                "dim",
                "kernel_dim",
                "det_prime_exact",
                "normalized_log_det_prime",
                "i_m",
                "i_m_stieltjes",
                "eq_six_slack",
            ]);
            for row in &report.rows {
                table.row(&[
                    row.m.to_string(),
                    row.n_m.to_string(),
                    row.dim.to_string(),
                    row.kernel_dim.to_string(),
                    row.det_prime_exact
                        .as_ref()
                        .map(|d| d.to_string())
                        .unwrap_or_default(),
                    fmt_sig(row.normalized_log_det_prime),
                    fmt_sig(row.i_m),
                    fmt_sig(row.i_m_stieltjes),
                    fmt_sig(row.eq_six_slack),
                ]);
            }
            table.write(&args.out.join(format!("determinant_j{j}_{bc}.csv")))?;
            summary.report(serde_json::json!({
                "j": j,
                "bc": bc.to_string(),
                "k_sq": report.k_sq,
                "oracle_log_det": report.oracle_log_det,
                "oracle_error": report.oracle_error,
                "oracle_i": report.oracle_i,
                "lower_cutoff": report.lower_cutoff,
                "verdict": "PASS",
            }));
        }
    }
    summary.write(&args.out.join("determinant_summary.json"))?;
    Ok(())
}
