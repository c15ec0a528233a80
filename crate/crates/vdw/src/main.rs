//! Command-line interface: orbit tracing, critical points, meshes, scans,
//! raw root solving, and algebraic-vs-oracle verification.
//!
//! Exit codes: 0 success, 1 domain error, 2 argument error, 3 verification
//! outside tolerance.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use vdw_orbits::levelset::{self, OrbitResult};
use vdw_orbits::potential::{self, SystemConfig};
use vdw_orbits::{critical, export, oracle, roots, Error};

const EXIT_DOMAIN: i32 = 1;
const EXIT_ARGS: i32 = 2;
const EXIT_VERIFY: i32 = 3;

/// Level sets and critical points of a two-center Van der Waals potential,
/// solved in closed form by radicals.
///
/// Defaults: samples 1000, theta-steps 64, format svg, x-max adaptive.
/// An optional `vdw.toml` in the working directory may provide the same keys
/// (flag names with dashes replaced by underscores); explicit flags win.
#[derive(Parser)]
#[command(name = "vdw", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the level set B2(x, y) = G and write it as SVG, CSV or JSON.
    Orbit(OrbitArgs),
    /// List the critical points for a separation, with classification.
    Critical(CriticalArgs),
    /// Sweep the level set into a 3-D surface of revolution (Wavefront OBJ).
    Mesh(MeshArgs),
    /// Compare the radical solve against bisection; exit 3 when outside
    /// tolerance.
    Verify(VerifyArgs),
    /// Solve a polynomial of degree <= 4 by radicals; roots as JSON.
    Roots(RootsArgs),
    /// Topology table over a range of level values.
    Scan(ScanArgs),
}

#[derive(Args)]
struct OrbitArgs {
    /// Separation of the fixed particles (> 0).
    #[arg(long, allow_hyphen_values = true)]
    l: Option<f64>,
    /// Level value G.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Scan extent in x [default: adaptive].
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    /// Columns across [0, x-max] [default: 1000].
    #[arg(long)]
    samples: Option<usize>,
    /// Output format [default: svg].
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CriticalArgs {
    /// Separation of the fixed particles (> 0).
    #[arg(long, allow_hyphen_values = true)]
    l: Option<f64>,
    /// Emit JSON instead of the human-readable table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MeshArgs {
    /// Separation of the fixed particles (> 0).
    #[arg(long, allow_hyphen_values = true)]
    l: Option<f64>,
    /// Level value G.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Rotation steps around the particle axis [default: 64].
    #[arg(long)]
    theta_steps: Option<usize>,
    /// Scan extent in x [default: adaptive].
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    /// Columns across [0, x-max] [default: 1000].
    #[arg(long)]
    samples: Option<usize>,
    /// Output OBJ path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Separation of the fixed particles (> 0).
    #[arg(long, allow_hyphen_values = true)]
    l: Option<f64>,
    /// Level value G.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Scan extent in x [default: adaptive].
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    /// Columns compared [default: 200].
    #[arg(long)]
    columns: Option<usize>,
    /// Bisection grid resolution [default: 2000].
    #[arg(long)]
    grid_n: Option<usize>,
    /// Maximum |u_algebraic - u_bisection| accepted [default: 1e-6].
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct RootsArgs {
    /// Ascending coefficients a0,a1,...,an (degree n <= 4).
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    coeffs: Vec<f64>,
}

#[derive(Args)]
struct ScanArgs {
    /// Separation of the fixed particles (> 0).
    #[arg(long, allow_hyphen_values = true)]
    l: Option<f64>,
    /// Lowest level value.
    #[arg(long, allow_hyphen_values = true)]
    g_min: f64,
    /// Highest level value.
    #[arg(long, allow_hyphen_values = true)]
    g_max: f64,
    /// Number of levels, endpoints included [default: 9].
    #[arg(long)]
    steps: Option<usize>,
    /// Scan extent in x, shared by all levels [default: adaptive per level].
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    /// Columns across [0, x-max] [default: 1000].
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Csv,
    Json,
}

/// Optional `vdw.toml` in the working directory; keys mirror the flag names
/// with dashes replaced by underscores. Flags take precedence.
#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    l: Option<f64>,
    g: Option<f64>,
    x_max: Option<f64>,
    samples: Option<usize>,
    theta_steps: Option<usize>,
    format: Option<String>,
}

fn load_file_config() -> Result<FileConfig, String> {
    let path = Path::new("vdw.toml");
    if !path.exists() {
        return Ok(FileConfig::default());
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read vdw.toml: {e}"))?;
    toml::from_str(&text).map_err(|e| format!("invalid vdw.toml: {e}"))
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    let config = match load_file_config() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_ARGS;
        }
    };
    let outcome = match cli.command {
        Command::Orbit(args) => cmd_orbit(args, &config),
        Command::Critical(args) => cmd_critical(args, &config),
        Command::Mesh(args) => cmd_mesh(args, &config),
        Command::Verify(args) => cmd_verify(args, &config),
        Command::Roots(args) => cmd_roots(args),
        Command::Scan(args) => cmd_scan(args, &config),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Args(msg)) => {
            eprintln!("error: {msg}");
            EXIT_ARGS
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            EXIT_DOMAIN
        }
    }
}

enum CliError {
    Args(String),
    Domain(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CmdResult = Result<i32, CliError>;

fn require_l(flag: Option<f64>, config: &FileConfig) -> Result<SystemConfig, CliError> {
    let l = flag
        .or(config.l)
        .ok_or_else(|| CliError::Args("missing --l (or `l` in vdw.toml)".into()))?;
    SystemConfig::new(l).map_err(CliError::Domain)
}

fn require_g(flag: Option<f64>, config: &FileConfig) -> Result<f64, CliError> {
    flag.or(config.g)
        .ok_or_else(|| CliError::Args("missing --g (or `g` in vdw.toml)".into()))
}

fn resolve_x_max(flag: Option<f64>, config: &FileConfig, cfg: &SystemConfig, g: f64) -> f64 {
    flag.or(config.x_max)
        .unwrap_or_else(|| levelset::default_x_max(cfg, g))
}

fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .map_err(|e| CliError::Io(format!("cannot write stdout: {e}")))
        }
    }
}

fn trace(cfg: &SystemConfig, g: f64, x_max: f64, samples: usize) -> Result<OrbitResult, CliError> {
    levelset::trace_orbit(cfg, g, x_max, samples).map_err(CliError::Domain)
}

fn cmd_orbit(args: OrbitArgs, config: &FileConfig) -> CmdResult {
    let cfg = require_l(args.l, config)?;
    let g = require_g(args.g, config)?;
    let samples = args.samples.or(config.samples).unwrap_or(1000);
    let x_max = resolve_x_max(args.x_max, config, &cfg, g);
    let format = match (args.format, config.format.as_deref()) {
        (Some(f), _) => Some(f),
        (None, Some("svg")) => Some(Format::Svg),
        (None, Some("csv")) => Some(Format::Csv),
        (None, Some("json")) => Some(Format::Json),
        (None, Some(other)) => {
            return Err(CliError::Args(format!(
                "unknown format {other:?} in vdw.toml (svg, csv or json)"
            )))
        }
        (None, None) => None,
    };

    let orbit = trace(&cfg, g, x_max, samples)?;
    let bytes = match format.unwrap_or(Format::Svg) {
        Format::Svg => export::to_svg(&orbit, &cfg, &export::SvgStyle::default()),
        Format::Csv => export::to_csv(&orbit),
        Format::Json => export::to_json(&orbit),
    };
    write_output(args.out.as_ref(), &bytes)?;
    Ok(0)
}

#[derive(Serialize)]
struct CriticalReport {
    l: f64,
    m_l: f64,
    minimum_provenance: &'static str,
    points: Vec<critical::CriticalPoint>,
}

fn cmd_critical(args: CriticalArgs, config: &FileConfig) -> CmdResult {
    let cfg = require_l(args.l, config)?;
    let points = critical::critical_points(&cfg);
    let minimum = potential::global_minimum(&cfg);

    if args.json {
        let report = CriticalReport {
            l: cfg.separation(),
            m_l: minimum.value,
            minimum_provenance: match minimum.provenance {
                potential::MinimumProvenance::ClosedForm => "ClosedForm",
                potential::MinimumProvenance::GridSearch => "GridSearch",
            },
            points,
        };
        let mut bytes = serde_json::to_vec_pretty(&report).expect("serializable");
        bytes.push(b'\n');
        write_output(None, &bytes)?;
    } else {
        println!(
            "l = {}, m_l = {} ({:?})",
            cfg.separation(),
            minimum.value,
            minimum.provenance
        );
        for p in &points {
            println!(
                "{:?} at ({}, {}): {:?}, hess_det = {}, {:?}",
                p.kind, p.x, p.y, p.classification, p.hess_det, p.provenance
            );
        }
    }
    Ok(0)
}

fn cmd_mesh(args: MeshArgs, config: &FileConfig) -> CmdResult {
    let cfg = require_l(args.l, config)?;
    let g = require_g(args.g, config)?;
    let samples = args.samples.or(config.samples).unwrap_or(1000);
    let theta_steps = args.theta_steps.or(config.theta_steps).unwrap_or(64);
    let x_max = resolve_x_max(args.x_max, config, &cfg, g);

    let orbit = trace(&cfg, g, x_max, samples)?;
    let bytes = export::to_mesh(&orbit, theta_steps)?;
    write_output(Some(&args.out), &bytes)?;
    eprintln!(
        "wrote {} ({} vertices, topology {})",
        args.out.display(),
        export::obj_vertex_count(&bytes),
        orbit.topology
    );
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, config: &FileConfig) -> CmdResult {
    let cfg = require_l(args.l, config)?;
    let g = require_g(args.g, config)?;
    let columns = args.columns.unwrap_or(200);
    let grid_n = args.grid_n.unwrap_or(oracle::DEFAULT_GRID_N);
    let tolerance = args.tolerance.unwrap_or(1e-6);
    let x_max = resolve_x_max(args.x_max, config, &cfg, g);

    let report = oracle::verify_levelset(&cfg, g, x_max, columns, grid_n)?;
    println!(
        "columns={} algebraic_roots={} count_mismatches={} max_u_discrepancy={:e}",
        report.columns, report.algebraic_roots, report.count_mismatches, report.max_u_discrepancy
    );
    if report.within(tolerance) {
        Ok(0)
    } else {
        eprintln!("verification outside tolerance {tolerance:e}");
        Ok(EXIT_VERIFY)
    }
}

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct RootSetJson {
    degree: usize,
    roots: Vec<ComplexJson>,
    real_roots: Vec<f64>,
    positive_real_roots: Vec<f64>,
}

fn cmd_roots(args: RootsArgs) -> CmdResult {
    let c = &args.coeffs;
    if c.len() < 2 {
        return Err(CliError::Args(
            "--coeffs needs at least two values (a0,a1,...)".into(),
        ));
    }
    if c.len() > 5 {
        return Err(CliError::Args(format!(
            "degree {} not supported; radicals stop at degree 4",
            c.len() - 1
        )));
    }
    let rs = match c.len() {
        2 => {
            // Linear: solve through the power-composed path (inner degree 1).
            let poly = roots::Polynomial::new(c.clone()).map_err(CliError::Domain)?;
            roots::solve_power_composed(&poly, 1)?
        }
        3 => roots::solve_quadratic(c[2], c[1], c[0])?,
        4 => roots::solve_cubic(c[3], c[2], c[1], c[0])?,
        5 => roots::solve_quartic(c[4], c[3], c[2], c[1], c[0])?,
        _ => unreachable!(),
    };
    let degree = c.len() - 1;
    print_root_set(degree, &rs);
    Ok(0)
}

fn print_root_set(degree: usize, rs: &roots::RootSet) {
    let report = RootSetJson {
        degree,
        roots: rs
            .roots
            .iter()
            .map(|z| ComplexJson { re: z.re, im: z.im })
            .collect(),
        real_roots: rs.real_roots.clone(),
        positive_real_roots: rs.positive_real_roots.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&report).expect("serializable");
    bytes.push(b'\n');
    let _ = std::io::stdout().lock().write_all(&bytes);
}

fn cmd_scan(args: ScanArgs, config: &FileConfig) -> CmdResult {
    let cfg = require_l(args.l, config)?;
    let steps = args.steps.unwrap_or(9);
    if steps < 1 {
        return Err(CliError::Args("--steps must be >= 1".into()));
    }
    if !args.g_min.is_finite() || !args.g_max.is_finite() || args.g_max < args.g_min {
        return Err(CliError::Args("need finite --g-min <= --g-max".into()));
    }
    let samples = args.samples.or(config.samples).unwrap_or(1000);
    let g_values: Vec<f64> = if steps == 1 {
        vec![args.g_min]
    } else {
        (0..steps)
            .map(|i| args.g_min + (args.g_max - args.g_min) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let x_max = args.x_max.or(config.x_max);
    let table = levelset::topology_scan(&cfg, &g_values, x_max, samples)?;
    println!("{:>16}  topology", "G");
    for (g, topo) in table {
        println!("{g:>16}  {topo}");
    }
    Ok(0)
}
