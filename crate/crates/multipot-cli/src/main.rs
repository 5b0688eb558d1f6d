//! Command-line front end: solve a flow problem, sample fields, trace
//! streamlines, verify solution invariants and emit example configurations.
//!
//! Exit codes: 0 success, 1 configuration or usage error (and failed
//! `verify` checks), 2 geometry validation, 3 solver failure, 4 i/o.

mod archive;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use multipot::field::{
    auto_seeds, sample_field, trace_streamline, write_field, write_streamlines, FileFormat,
    GridSpec, Streamline,
};
use multipot::geometry::Rect;
use multipot::{config, solve_flow, Error, ProblemConfig};

use archive::SolutionArchive;

#[derive(Parser)]
#[command(
    name = "multipot",
    version,
    about = "Potential flow around multiple obstacles with prescribed circulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a flow problem and write a solution archive.
    Solve {
        /// Problem configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output archive path (JSON).
        #[arg(long)]
        output: PathBuf,
        /// Override the truncation order M.
        #[arg(long)]
        m: Option<usize>,
        /// Override the quadrature grid size N.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Sample velocity, speed and stream function on a grid.
    Field {
        /// Solution archive from `solve`.
        archive: PathBuf,
        /// Grid as `xmin,xmax,ymin,ymax,nx,ny`.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Output format: csv or json (never inferred from the file name).
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        output: PathBuf,
    },
    /// Trace streamlines and write them as polylines.
    Streamlines {
        /// Solution archive from `solve`.
        archive: PathBuf,
        /// Explicit seeds `x,y;x,y;...` (alternative to --auto-seeds).
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
        /// Seed this many streamlines on the upstream edge of the box.
        #[arg(long)]
        auto_seeds: Option<usize>,
        /// Tracing box `xmin,xmax,ymin,ymax,nx,ny` (node counts unused);
        /// defaults to the geometry bounding box padded by one diameter.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Output format: csv or json.
        #[arg(long, default_value = "json")]
        format: String,
        /// Arc-length step; defaults to diameter / 200.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 20000)]
        max_steps: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Re-check solution invariants; exits nonzero if any check fails.
    Verify {
        /// Solution archive from `solve`.
        archive: PathBuf,
    },
    /// Write a bundled example configuration file.
    Examples {
        /// Example name (see `examples list`).
        name: String,
        /// Directory the configuration is written into.
        #[arg(long, default_value = ".")]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let (code, kind) = classify(&e);
            eprintln!("error: {kind}: {e}");
            ExitCode::from(code)
        }
    }
}

#[cfg(feature = "parallel")]
fn init_threads() {
    if let Some(k) = std::env::var("MULTIPOT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn init_threads() {}

/// Map an error to (exit code, stream label).
fn classify(e: &Error) -> (u8, &'static str) {
    match e {
        Error::InvalidConfig(_) => (1, "config"),
        Error::ClockwiseOrientation { .. }
        | Error::SelfIntersecting { .. }
        | Error::ContoursIntersect { .. }
        | Error::NestedContours { .. }
        | Error::NoInteriorPoint { .. }
        | Error::PointOnBoundary { .. } => (2, "geometry"),
        Error::Io { .. } => (4, "io"),
        Error::Stage { source, .. } => classify(source),
        _ => (3, "solver"),
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Solve {
            config,
            output,
            m,
            n,
        } => cmd_solve(&config, &output, m, n),
        Command::Field {
            archive,
            grid,
            format,
            output,
        } => cmd_field(&archive, &grid, &format, &output),
        Command::Streamlines {
            archive,
            seeds,
            auto_seeds,
            grid,
            format,
            step,
            max_steps,
            output,
        } => cmd_streamlines(
            &archive, seeds, auto_seeds, grid, &format, step, max_steps, &output,
        ),
        Command::Verify { archive } => cmd_verify(&archive),
        Command::Examples { name, output } => cmd_examples(&name, &output),
    }
}

fn read_config(path: &Path) -> Result<ProblemConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ProblemConfig::from_json(&text)
}

fn cmd_solve(
    config_path: &Path,
    output: &Path,
    m: Option<usize>,
    n: Option<usize>,
) -> Result<ExitCode, Error> {
    let mut problem = read_config(config_path)?;
    if let Some(m) = m {
        problem.truncation_m = Some(m);
    }
    if let Some(n) = n {
        problem.quadrature_n = Some(n);
    }
    let (geom, flow) = problem.resolve()?;
    let solution = solve_flow(&flow, &geom)?;
    let archive = SolutionArchive::from_solution(problem, &geom, &solution);
    archive.save(output)?;
    println!(
        "solved {} contours at M={} N={}: residual {:.3e}, condition estimate {:.3e} -> {}",
        geom.len(),
        flow.truncation_m,
        flow.quadrature_n,
        solution.diagnostics.residual,
        solution.diagnostics.condition_estimate,
        output.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_field(
    archive_path: &Path,
    grid: &str,
    format: &str,
    output: &Path,
) -> Result<ExitCode, Error> {
    let archive = SolutionArchive::load(archive_path)?;
    let pot = archive.rebuild()?;
    let spec = GridSpec::from_str(grid)?;
    let format = FileFormat::from_str(format)?;
    let field = sample_field(&pot, &spec)?;
    write_field(&field, output, format)?;
    println!(
        "sampled {}x{} grid -> {}",
        spec.nx,
        spec.ny,
        output.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_seeds(text: &str) -> Result<Vec<Complex64>, Error> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::InvalidConfig(format!("bad seed {pair:?}")));
            }
            let x: f64 = parts[0]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad seed {pair:?}")))?;
            let y: f64 = parts[1]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad seed {pair:?}")))?;
            Ok(Complex64::new(x, y))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_streamlines(
    archive_path: &Path,
    seeds: Option<String>,
    auto: Option<usize>,
    grid: Option<String>,
    format: &str,
    step: Option<f64>,
    max_steps: usize,
    output: &Path,
) -> Result<ExitCode, Error> {
    let archive = SolutionArchive::load(archive_path)?;
    let pot = archive.rebuild()?;
    let format = FileFormat::from_str(format)?;

    let diam = pot.geometry().diameter();
    let bounds: Rect = match &grid {
        Some(g) => GridSpec::from_str(g)?.rect(),
        None => pot.geometry().bbox().padded(diam),
    };
    let seed_points = match (seeds, auto) {
        (Some(s), None) => parse_seeds(&s)?,
        (None, Some(k)) => auto_seeds(pot.config().velocity, bounds, k),
        _ => {
            return Err(Error::InvalidConfig(
                "pass exactly one of --seeds or --auto-seeds".into(),
            ))
        }
    };
    let step = step.unwrap_or(diam / 200.0);

    let mut lines: Vec<Streamline> = Vec::new();
    for seed in seed_points {
        match trace_streamline(&pot, seed, step, max_steps, bounds) {
            Ok((line, _)) => lines.push(line),
            Err(e) => eprintln!("warning: seed {seed} skipped: {e}"),
        }
    }
    write_streamlines(&lines, output, format)?;
    println!("traced {} streamlines -> {}", lines.len(), output.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(archive_path: &Path) -> Result<ExitCode, Error> {
    let archive = SolutionArchive::load(archive_path)?;
    let pot = archive.rebuild()?;
    let checks = verify::run_all(&pot);
    let mut all_pass = true;
    for check in &checks {
        println!("{}", check.report_line());
        all_pass &= check.pass;
    }
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_examples(name: &str, output_dir: &Path) -> Result<ExitCode, Error> {
    match config::example(name) {
        Some(cfg) => {
            let path = output_dir.join(format!("{name}.json"));
            std::fs::write(&path, cfg.to_json()).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            println!("{}", path.display());
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!(
                "error: config: unknown example {name:?}; available: {}",
                config::example_names().join(", ")
            );
            Ok(ExitCode::from(1))
        }
    }
}
