//! Benchmark and convergence-study driver.
//!
//! Exit status: 0 when every cell solved, 1 when a cell failed or an output
//! could not be written, 2 for usage and configuration errors. Failures are
//! also reported as a one-line JSON object on stderr.

mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tdc_shell::postprocess::{convergence_study, write_csv, write_vtk, Cell, StudyRow, StudySpec};
use tdc_shell::solver::write_matrix_market;

use config::{Plan, RunConfig};

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "TDC_SHELL_THREADS";

#[derive(Parser)]
#[command(name = "tdc-shell", version, about = "Reissner-Mindlin shells on NURBS patches")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a benchmark or a custom problem for every (p, n) pair.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Benchmark: scordelis_lo, hyperbolic_paraboloid or flower.
    #[arg(long)]
    case: Option<String>,
    /// Custom problem file (JSON, or TOML by extension).
    #[arg(long)]
    problem: Option<PathBuf>,
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<usize>,
    /// Knot spans per side, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// lagrange or penalty:<alpha>.
    #[arg(long)]
    constraint: Option<String>,
    /// Extra Gauss points per direction for the system integrals.
    #[arg(long, allow_negative_numbers = true)]
    qbump: Option<i32>,
    /// Output directory (default ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a VTK file per cell.
    #[arg(long)]
    vtk: bool,
    /// Sampling points per knot span for VTK output.
    #[arg(long)]
    vtk_samples: Option<usize>,
    /// Write matrix and right-hand side of every cell in MatrixMarket format.
    #[arg(long)]
    dump_system: bool,
}

impl RunArgs {
    fn flags(&self) -> RunConfig {
        RunConfig {
            case: self.case.clone(),
            problem: self.problem.clone(),
            p: self.p.clone(),
            n: self.n.clone(),
            constraint: self.constraint.clone(),
            qbump: self.qbump,
            out: self.out.clone(),
            vtk: self.vtk,
            vtk_samples: self.vtk_samples,
            dump_system: self.dump_system,
        }
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    case: &'a str,
    constraint: String,
    quadrature_bump: i32,
    threads: usize,
    wall_time_s: f64,
    warnings: &'a [String],
    rows: &'a [StudyRow],
}

fn report_error(kind: &str, err: &anyhow::Error) {
    let msg = format!("{err:#}");
    let line = serde_json::json!({ "error": kind, "message": msg });
    eprintln!("{line}");
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().with_context(|| format!("{THREADS_ENV}={v} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn plan(args: &RunArgs) -> Result<(Plan, Option<String>)> {
    configure_threads()?;
    let (file_cfg, raw) = match &args.config {
        Some(path) => (
            RunConfig::load(path)?,
            Some(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?),
        ),
        None => (RunConfig::default(), None),
    };
    let cfg = file_cfg.merged(args.flags());
    Ok((Plan::from_config(&cfg)?, raw))
}

fn cell_name(cell: &Cell) -> String {
    format!("p{}_n{}", cell.row.degree, cell.row.elements)
}

fn write_artifacts(plan: &Plan, cell: &Cell) -> Result<()> {
    if let Some(samples) = plan.vtk {
        let path = plan.out.join(format!("{}_{}.vtk", plan.label, cell_name(cell)));
        let mut f = std::io::BufWriter::new(fs::File::create(&path)?);
        write_vtk(&mut f, &cell.solution, samples)?;
        f.flush()?;
    }
    if plan.dump_system {
        let stem = format!("{}_{}", plan.label, cell_name(cell));
        write_matrix_market(
            &cell.system,
            &plan.out.join(format!("{stem}_matrix.mtx")),
            &plan.out.join(format!("{stem}_rhs.mtx")),
        )?;
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into())
}

fn print_summary(plan: &Plan, rows: &[StudyRow]) {
    println!("case {} ({} cells)", plan.label, rows.len());
    println!(
        "{:>2} {:>4} {:>7} {:>14} {:>10} {:>13} {:>13} {:>13} {:>7} {:>8}",
        "p", "n", "dofs", "qoi", "qoi/ref", "eps_force", "eps_moment", "energy", "order", "time_s"
    );
    for r in rows {
        if let Some(e) = &r.error {
            println!("{:>2} {:>4} failed: {e}", r.degree, r.elements);
            continue;
        }
        println!(
            "{:>2} {:>4} {:>7} {:>14} {:>10} {:>13} {:>13} {:>13} {:>7} {:>8.2}",
            r.degree,
            r.elements,
            r.dofs,
            fmt_opt(r.qoi),
            r.normalized.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into()),
            fmt_opt(r.eps_force_rel),
            fmt_opt(r.eps_moment_abs),
            fmt_opt(r.energy),
            r.order_eps_force.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into()),
            r.runtime_s
        );
    }
}

fn execute(plan: &Plan, raw_config: Option<&str>) -> Result<Vec<StudyRow>> {
    let start = Instant::now();
    fs::create_dir_all(&plan.out).with_context(|| format!("creating {}", plan.out.display()))?;
    if let Some(raw) = raw_config {
        fs::write(plan.out.join("config.toml"), raw)?;
    }
    for w in &plan.warnings {
        eprintln!("warning: {w}");
    }
    let spec = StudySpec {
        label: plan.label.clone(),
        problem: plan.problem.clone(),
        quantity: plan.case.map(|c| c.quantity()),
        degrees: plan.degrees.clone(),
        elements: plan.elements.clone(),
        preasymptotic_max_n: if plan.case == Some(tdc_shell::problem::Benchmark::Flower) { 4 } else { 0 },
    };
    let mut artifact_error = None;
    let rows = convergence_study(&spec, |cell| {
        if artifact_error.is_none() {
            artifact_error = write_artifacts(plan, cell).err();
        }
    });
    if let Some(e) = artifact_error {
        return Err(e.context("writing cell artifacts"));
    }
    let mut csv = Vec::new();
    write_csv(&mut csv, &rows)?;
    fs::write(plan.out.join("convergence.csv"), csv)?;
    let summary = Summary {
        case: &plan.label,
        constraint: plan.problem.constraint.to_string(),
        quadrature_bump: plan.problem.quadrature_bump,
        threads: rayon::current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
        warnings: &plan.warnings,
        rows: &rows,
    };
    fs::write(plan.out.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    print_summary(plan, &rows);
    Ok(rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run(args) = cli.command;
    let (plan, raw) = match plan(&args) {
        Ok(p) => p,
        Err(e) => {
            report_error("usage", &e);
            return ExitCode::from(2);
        }
    };
    match execute(&plan, raw.as_deref()) {
        Ok(rows) => {
            let failed: Vec<_> = rows.iter().filter(|r| r.error.is_some()).collect();
            if failed.is_empty() {
                ExitCode::SUCCESS
            } else {
                for r in failed {
                    let line = serde_json::json!({
                        "error": "solver",
                        "p": r.degree,
                        "n": r.elements,
                        "message": r.error,
                    });
                    eprintln!("{line}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            report_error("output", &e);
            ExitCode::from(1)
        }
    }
}
