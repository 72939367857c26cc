//! Command-line surface. Every command resolves a [`RunConfig`] from an
//! optional JSON file overlaid with flags, validates it, runs, and writes its
//! outputs plus a manifest into the output directory.
//!
//! Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 a verified
//! inequality failed.

mod config;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{DomainConfig, DomainKind, RunConfig};
pub use verify::{run_verify, CheckRow, VerifyReport};

use crate::analytic::{disk_csv, disk_negative_spectrum, interval_csv, interval_negative_spectrum};
use crate::assembly::assemble;
use crate::asymptotics::{
    concentration, concentration_csv, interior_estimate, run_sweep, solve_sweep_points, sweep_csv, SweepDomain,
};
use crate::eigen::{solve, Shift, SolverOptions};
use crate::error::{Error, Result};
use crate::mesh::write_mesh;
use crate::report::{config_hash, read_config_hash, ReportWriter};
use crate::variational::{direction_search, ind_bound, make_probe, DeflationBasis};

/// Environment variable that overrides the output directory.
pub const OUT_ENV: &str = "ROBINLAB_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "robinlab", version, about = "Robin Laplacian eigenvalue laboratory")]
pub struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overridden by ROBINLAB_OUT).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate (or load and refine) a mesh and write it to a file.
    Mesh {
        #[command(flatten)]
        domain: DomainArgs,
        /// Mesh file to write (default: <out>/mesh.txt).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve for the lowest eigenpairs at one alpha.
    Solve {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        /// Also write one file of nodal values per eigenvector.
        #[arg(long)]
        eigenvectors: bool,
    },
    /// Eigenvalue ratios over a list of alphas.
    Sweep {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Interior and global Lebesgue norms of the eigenfunctions.
    Concentration {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Deflated upper bound on the next eigenvalue from an exponential probe.
    Bound {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        /// Number of equispaced search directions.
        #[arg(long)]
        m: Option<usize>,
        /// Success threshold for the summed squared overlaps.
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Closed-form negative eigenvalues of the disk or the interval.
    Analytic {
        #[arg(long, conflicts_with = "interval")]
        disk: bool,
        #[arg(long)]
        interval: bool,
        #[arg(long)]
        alpha: Option<f64>,
        /// Largest angular index to search (disk).
        #[arg(long)]
        m_max: Option<u32>,
    },
    /// Run the inequality suites and exit 4 if any check fails.
    Verify {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        margin: Option<f64>,
        /// Earlier reports that must share this run's configuration hash.
        #[arg(long, num_args = 1..)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Args, Default)]
pub struct DomainArgs {
    #[arg(long, value_enum)]
    pub domain: Option<DomainKind>,
    /// Mesh size (default: chosen from alpha by the resolution rule).
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub center: Option<[f64; 2]>,
    /// Disk boundary segment count.
    #[arg(long)]
    pub segments: Option<usize>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub min: Option<[f64; 2]>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub max: Option<[f64; 2]>,
    /// Polygon vertices as "x,y;x,y;...".
    #[arg(long, value_parser = parse_points, allow_hyphen_values = true)]
    pub vertices: Option<VertexList>,
    /// Load this mesh file instead of generating one.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Uniform refinements applied after generating or loading.
    #[arg(long)]
    pub refine: Option<u32>,
}

#[derive(Debug, Args, Default)]
pub struct SolverArgs {
    #[arg(long)]
    pub tol: Option<f64>,
    /// "auto" or a number below the wanted eigenvalues.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Option<String>,
    #[arg(long)]
    pub dense_threshold: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub base_h: Option<f64>,
    /// Resolution rule bound on alpha * h.
    #[arg(long)]
    pub alpha_h: Option<f64>,
    #[arg(long)]
    pub extra_levels: Option<u32>,
}

fn parse_point(s: &str) -> std::result::Result<[f64; 2], String> {
    let mut it = s.split(',').map(|t| t.trim().parse::<f64>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(x)), Some(Ok(y)), None) => Ok([x, y]),
        _ => Err(format!("expected \"x,y\", got {s:?}")),
    }
}

/// Polygon vertices given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexList(pub Vec<[f64; 2]>);

fn parse_points(s: &str) -> std::result::Result<VertexList, String> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(parse_point)
        .collect::<std::result::Result<_, _>>()
        .map(VertexList)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl DomainArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let d = &mut cfg.domain;
        set(&mut d.kind, self.domain);
        if self.h.is_some() {
            d.h = self.h;
        }
        set(&mut d.radius, self.radius);
        set(&mut d.center, self.center);
        if self.segments.is_some() {
            d.segments = self.segments;
        }
        set(&mut d.min, self.min);
        set(&mut d.max, self.max);
        set(&mut d.vertices, self.vertices.map(|v| v.0));
        if self.mesh.is_some() {
            cfg.mesh_file = self.mesh;
        }
        set(&mut cfg.refine, self.refine);
    }
}

impl SolverArgs {
    fn apply(self, cfg: &mut RunConfig) -> Result<()> {
        let s = &mut cfg.solver;
        set(&mut s.tolerance, self.tol);
        if let Some(shift) = self.shift {
            s.shift = match shift.as_str() {
                "auto" => Shift::Auto,
                v => Shift::Fixed(v.parse().map_err(|_| Error::Invalid(format!("bad shift {v:?}")))?),
            };
        }
        set(&mut s.dense_threshold, self.dense_threshold);
        set(&mut s.max_iterations, self.max_iterations);
        set(&mut s.seed, self.seed);
        Ok(())
    }
}

impl SweepArgs {
    fn apply(self, cfg: &mut RunConfig) {
        set(&mut cfg.alphas, self.alphas);
        set(&mut cfg.n, self.n);
        set(&mut cfg.base_h, self.base_h);
        set(&mut cfg.max_alpha_h, self.alpha_h);
        set(&mut cfg.extra_levels, self.extra_levels);
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// A parsed command line with its configuration resolved.
#[derive(Debug)]
pub struct Resolved {
    pub command: &'static str,
    pub config: RunConfig,
    /// Explicit mesh output file (`mesh`).
    pub mesh_output: Option<PathBuf>,
    /// Reports whose hashes must match (`verify`).
    pub inputs: Vec<PathBuf>,
}

/// Overlays the flags of `cli` on its configuration file (or the defaults).
pub fn resolve(cli: Cli) -> Result<Resolved> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_json_file(path)?,
        None => RunConfig::default(),
    };
    set(&mut cfg.out, cli.out);
    if let Some(env) = std::env::var_os(OUT_ENV) {
        cfg.out = PathBuf::from(env);
    }
    let mut mesh_output = None;
    let mut verify_inputs = Vec::new();
    let name = match cli.command {
        Command::Mesh { domain, output } => {
            domain.apply(&mut cfg);
            mesh_output = output;
            "mesh"
        }
        Command::Solve { domain, solver, alpha, n, eigenvectors } => {
            domain.apply(&mut cfg);
            solver.apply(&mut cfg)?;
            if alpha.is_some() {
                cfg.alpha = alpha;
            }
            set(&mut cfg.n, n);
            cfg.eigenvectors |= eigenvectors;
            "solve"
        }
        Command::Sweep { domain, solver, sweep } => {
            domain.apply(&mut cfg);
            solver.apply(&mut cfg)?;
            sweep.apply(&mut cfg);
            "sweep"
        }
        Command::Concentration { domain, solver, sweep, p, q, r, margin } => {
            domain.apply(&mut cfg);
            solver.apply(&mut cfg)?;
            sweep.apply(&mut cfg);
            set(&mut cfg.p, p);
            set(&mut cfg.q, q);
            set(&mut cfg.r, r);
            set(&mut cfg.margin, margin);
            "concentration"
        }
        Command::Bound { domain, solver, alpha, n, m, delta } => {
            domain.apply(&mut cfg);
            solver.apply(&mut cfg)?;
            if alpha.is_some() {
                cfg.alpha = alpha;
            }
            set(&mut cfg.n, n);
            set(&mut cfg.m, m);
            set(&mut cfg.delta, delta);
            "bound"
        }
        Command::Analytic { disk, interval, alpha, m_max } => {
            if disk {
                cfg.domain.kind = DomainKind::Disk;
            }
            if interval {
                cfg.domain.kind = DomainKind::Interval;
            }
            if alpha.is_some() {
                cfg.alpha = alpha;
            }
            if m_max.is_some() {
                cfg.m_max = m_max;
            }
            "analytic"
        }
        Command::Verify { domain, solver, sweep, m, delta, margin, inputs } => {
            domain.apply(&mut cfg);
            solver.apply(&mut cfg)?;
            sweep.apply(&mut cfg);
            set(&mut cfg.m, m);
            set(&mut cfg.delta, delta);
            set(&mut cfg.margin, margin);
            verify_inputs = inputs;
            "verify"
        }
    };
    Ok(Resolved { command: name, config: cfg, mesh_output, inputs: verify_inputs })
}

fn execute(cli: Cli) -> Result<i32> {
    let Resolved { command, config: cfg, mesh_output, inputs } = resolve(cli)?;
    cfg.validate(command)?;
    let hash = config_hash(&cfg.hashed())?;
    match command {
        "mesh" => cmd_mesh(&cfg, hash, mesh_output),
        "solve" => cmd_solve(&cfg, hash),
        "sweep" => cmd_sweep(&cfg, hash),
        "concentration" => cmd_concentration(&cfg, hash),
        "bound" => cmd_bound(&cfg, hash),
        "analytic" => cmd_analytic(&cfg, hash),
        "verify" => cmd_verify(&cfg, hash, &inputs),
        other => unreachable!("unknown command {other}"),
    }
}

pub fn cmd_mesh(cfg: &RunConfig, hash: String, output: Option<PathBuf>) -> Result<i32> {
    let h = cfg.domain.h.unwrap_or(0.05);
    let cfg_h = RunConfig { domain: DomainConfig { h: Some(h), ..cfg.domain.clone() }, ..cfg.clone() };
    let mesh = cfg_h.mesh_for(0.0)?;
    let mut w = ReportWriter::new(&cfg.out, hash)?;
    let text = write_mesh(&mesh);
    let path = match output {
        Some(p) => {
            std::fs::write(&p, &text)?;
            p
        }
        None => w.write_raw("mesh.txt", text)?,
    };
    println!(
        "vertices={} triangles={} boundary_edges={} area={} boundary_length={} max_diameter={} file={}",
        mesh.vertex_count(),
        mesh.triangles().len(),
        mesh.boundary_edges().len(),
        mesh.area(),
        mesh.boundary_length(),
        mesh.max_diameter(),
        path.display()
    );
    w.finish("mesh", &cfg.hashed(), "ok")?;
    Ok(EXIT_OK)
}

pub fn cmd_solve(cfg: &RunConfig, hash: String) -> Result<i32> {
    let alpha = cfg.require_alpha()?;
    let mesh = Arc::new(cfg.mesh_for(alpha)?);
    let forms = assemble(mesh, None)?;
    let opts = SolverOptions { count: cfg.n, ..cfg.solver.clone() };
    let spectrum = solve(&forms, alpha, &opts)?;
    let mut w = ReportWriter::new(&cfg.out, hash)?;
    let record: serde_json::Value = serde_json::from_str(&spectrum.to_json()?)?;
    w.write_json("spectrum.json", &record)?;
    if cfg.eigenvectors {
        for i in 0..spectrum.pairs.len() {
            let text = spectrum.eigenvector_text(i).expect("index in range");
            w.write_raw(&format!("eigenvector_{}.txt", i + 1), text)?;
        }
    }
    for (i, p) in spectrum.pairs.iter().enumerate() {
        println!("lambda_{} = {} (residual {:.1e})", i + 1, p.lambda, p.residual);
    }
    w.finish("solve", &cfg.hashed(), "ok")?;
    Ok(EXIT_OK)
}

pub fn cmd_sweep(cfg: &RunConfig, hash: String) -> Result<i32> {
    let domain = match cfg.domain.kind {
        DomainKind::Interval => SweepDomain::Interval,
        _ => SweepDomain::Planar(cfg.domain.spec(cfg.base_h)?),
    };
    let outcome = run_sweep(&cfg.sweep(cfg.n), &domain)?;
    let mut w = ReportWriter::new(&cfg.out, hash)?;
    w.write_csv("sweep.csv", &sweep_csv(&outcome.records))?;
    for f in &outcome.failures {
        eprintln!("alpha {}: {}", f.alpha, f.error);
    }
    let status = if outcome.failures.is_empty() { "ok" } else { "partial" };
    if !outcome.failures.is_empty() {
        w.write_json("sweep_failures.json", &outcome.failures)?;
    }
    print!("{}", sweep_csv(&outcome.records));
    w.finish("sweep", &cfg.hashed(), status)?;
    Ok(if outcome.failures.is_empty() { EXIT_OK } else { EXIT_SOLVER })
}

pub fn cmd_concentration(cfg: &RunConfig, hash: String) -> Result<i32> {
    let spec = cfg.domain.spec(cfg.base_h)?;
    let mut conc = Vec::new();
    let mut estimates = String::from("alpha,n,p,lambda,bound,denominator,vacuous\n");
    let mut failed = false;
    for (alpha, point) in solve_sweep_points(&cfg.sweep(cfg.n), &spec, None)? {
        let point = match point {
            Ok(p) => p,
            Err(e @ Error::NoConvergence { .. }) => {
                eprintln!("alpha {alpha}: {e}");
                failed = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut rows = concentration(&point.spectrum, &point.forms, cfg.p, cfg.q, cfg.r, cfg.margin)?;
        rows.truncate(cfg.n);
        conc.extend(rows);
        if cfg.p >= 2.0 {
            for e in interior_estimate(&point.spectrum, &point.forms, cfg.p, cfg.margin)?.into_iter().take(cfg.n) {
                let bound = e.bound.map_or(String::new(), |b| b.to_string());
                estimates.push_str(&format!(
                    "{alpha},{},{},{},{bound},{:e},{}\n",
                    e.n, e.p, e.lambda, e.denominator, e.vacuous
                ));
            }
        }
    }
    let mut w = ReportWriter::new(&cfg.out, hash)?;
    let csv = concentration_csv(&conc);
    w.write_csv("concentration.csv", &csv)?;
    w.write_csv("interior_estimate.csv", &estimates)?;
    print!("{csv}");
    w.finish("concentration", &cfg.hashed(), if failed { "partial" } else { "ok" })?;
    Ok(if failed { EXIT_SOLVER } else { EXIT_OK })
}

#[derive(Serialize)]
struct BoundReport {
    alpha: f64,
    n: usize,
    d: [f64; 2],
    overlaps: Vec<f64>,
    bound: f64,
    rayleigh_cross_check: f64,
    lambda_next: f64,
    margin: f64,
    numerator: f64,
    denominator: f64,
    exact_energy_bound: f64,
    discrete_bound: f64,
    interpolation_defect: f64,
    search_index: usize,
    search_overlap_sum: f64,
    search_success: bool,
    holds: bool,
}

pub fn cmd_bound(cfg: &RunConfig, hash: String) -> Result<i32> {
    let alpha = cfg.require_alpha()?;
    let mesh = Arc::new(cfg.mesh_for(alpha)?);
    let forms = assemble(mesh.clone(), None)?;
    let opts = SolverOptions { count: cfg.n + 1, ..cfg.solver.clone() };
    let spectrum = solve(&forms, alpha, &opts)?;
    let basis = DeflationBasis::from_spectrum(&spectrum, cfg.n, &forms)?;
    let search = direction_search(&forms, alpha, &basis, cfg.m, cfg.delta)?;
    if !search.success {
        eprintln!(
            "warning: no grid direction reached overlap <= {} (best {}); reporting the best direction",
            cfg.delta, search.overlap_sum
        );
    }
    let probe = make_probe(&mesh, alpha, search.d)?;
    let b = ind_bound(&probe, &basis, &forms)?.with_next(spectrum.pairs[cfg.n].lambda);
    let lambda_next = b.lambda_next.expect("set above");
    let tol = cfg.solver.tolerance * lambda_next.abs().max(1.0);
    let report = BoundReport {
        alpha,
        n: cfg.n,
        d: [search.d.x, search.d.y],
        overlaps: b.overlaps.clone(),
        bound: b.bound,
        rayleigh_cross_check: b.rayleigh_cross_check,
        lambda_next,
        margin: b.margin.expect("set above"),
        numerator: b.numerator,
        denominator: b.denominator,
        exact_energy_bound: b.exact_energy_bound,
        discrete_bound: b.discrete_bound,
        interpolation_defect: b.interpolation_defect,
        search_index: search.best_index,
        search_overlap_sum: search.overlap_sum,
        search_success: search.success,
        holds: b.bound >= lambda_next - tol,
    };
    let mut w = ReportWriter::new(&cfg.out, hash)?;
    w.write_json("bound.json", &report)?;
    println!("bound {} >= lambda_{} {} (margin {})", report.bound, cfg.n + 1, lambda_next, report.margin);
    w.finish("bound", &cfg.hashed(), if report.holds { "ok" } else { "violated" })?;
    Ok(if report.holds { EXIT_OK } else { EXIT_VERIFY })
}

pub fn cmd_analytic(cfg: &RunConfig, hash: String) -> Result<i32> {
    let alpha = cfg.require_alpha()?;
    let mut w = ReportWriter::new(&cfg.out, hash)?;
    let (csv, count) = match cfg.domain.kind {
        DomainKind::Interval => {
            let b = interval_negative_spectrum(alpha)?;
            (interval_csv(&b), b.len())
        }
        _ => {
            let m_max = cfg.m_max.unwrap_or(alpha.ceil() as u32 + 1);
            let b = disk_negative_spectrum(alpha, m_max)?;
            (disk_csv(&b), b.len())
        }
    };
    w.write_csv("analytic.csv", &csv)?;
    print!("{csv}");
    eprintln!("{count} negative branch(es)");
    w.finish("analytic", &cfg.hashed(), "ok")?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(cfg: &RunConfig, hash: String, inputs: &[PathBuf]) -> Result<i32> {
    for path in inputs {
        let other = read_config_hash(path)?;
        if other != hash {
            return Err(Error::Invalid(format!(
                "refusing mixed configuration hashes: {} has {other}, this run has {hash}",
                path.display()
            )));
        }
    }
    let report = run_verify(cfg)?;
    let mut w = ReportWriter::new(&cfg.out, hash)?;
    w.write_csv("verify.csv", &report.to_csv())?;
    print!("{}", report.table());
    let passed = report.passed();
    w.finish("verify", &cfg.hashed(), if passed { "pass" } else { "fail" })?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolved(args: &[&str]) -> Resolved {
        resolve(Cli::try_parse_from(args).unwrap()).unwrap()
    }

    #[test]
    fn points_parse_strictly() {
        assert_eq!(parse_point(" 1.5, -2").unwrap(), [1.5, -2.0]);
        assert!(parse_point("1").is_err());
        assert!(parse_point("1,2,3").is_err());
        assert!(parse_point("a,b").is_err());
        assert_eq!(parse_points("0,0;1,0;0,1;").unwrap().0.len(), 3);
        assert!(parse_points("0,0;1").is_err());
    }

    #[test]
    fn flags_land_in_the_config() {
        let r = resolved(&[
            "robinlab", "bound", "--domain", "disk", "--radius", "2", "--alpha", "7", "--n", "2", "--m", "32",
        ]);
        assert_eq!(r.command, "bound");
        assert_eq!(r.config.domain.kind, DomainKind::Disk);
        assert_eq!(r.config.domain.radius, 2.0);
        assert_eq!((r.config.alpha, r.config.n, r.config.m), (Some(7.0), 2, 32));
        r.config.validate("bound").unwrap();

        let s = resolved(&["robinlab", "sweep", "--alphas", "1,2,4", "--extra-levels", "1"]);
        assert_eq!(s.config.alphas, vec![1.0, 2.0, 4.0]);
        assert_eq!(s.config.extra_levels, 1);
    }

    #[test]
    fn validation_rejects_inconsistent_parameters() {
        let cfg = |args: &[&str]| resolved(args).config;
        assert!(cfg(&["robinlab", "bound", "--alpha", "0"]).validate("bound").is_err());
        assert!(cfg(&["robinlab", "bound", "--alpha", "3", "--delta", "1.5"]).validate("bound").is_err());
        assert!(cfg(&["robinlab", "concentration", "--p", "1"]).validate("concentration").is_err());
        assert!(cfg(&["robinlab", "solve"]).validate("solve").is_err());
        assert!(cfg(&["robinlab", "verify", "--domain", "interval"]).validate("verify").is_err());
    }

    #[test]
    fn hash_ignores_the_output_location() {
        let a = resolved(&["robinlab", "--out", "x", "sweep"]).config;
        let b = resolved(&["robinlab", "--out", "y", "sweep"]).config;
        assert_ne!(a, b);
        assert_eq!(a.hashed(), b.hashed());
    }
}
