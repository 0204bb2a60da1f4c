//! Convergence studies over degree and mesh size.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use super::{evaluate_solution, residual_norms, solve_problem, stored_energy, tangentiality_defect, ShellSolution};
use crate::assembly::SaddleSystem;
use crate::error::Result;
use crate::problem::{Benchmark, QuantityOfInterest, ShellProblem};

/// Column schema of the convergence CSV (layout version 1).
pub const CSV_HEADER: &str = "case,p,n,h,dofs,qoi,reference,normalized,eps_force_rel,eps_moment_abs,\
energy,tangentiality,solver_residual,order_eps_force,order_eps_moment,preasymptotic,status";

/// One `(p, n)` cell of a study.
#[derive(Clone, Debug, Serialize)]
pub struct StudyRow {
    pub case: String,
    pub degree: usize,
    pub elements: usize,
    /// Knot span size relative to the parameter domain, `1 / n`.
    pub h: f64,
    pub dofs: usize,
    pub qoi: Option<f64>,
    pub reference: Option<f64>,
    pub normalized: Option<f64>,
    pub eps_force_rel: Option<f64>,
    pub eps_moment_abs: Option<f64>,
    pub energy: Option<f64>,
    pub tangentiality: Option<f64>,
    pub solver_residual: Option<f64>,
    /// `log2(e_{n/2} / e_n)` against the row with half as many spans.
    pub order_eps_force: Option<f64>,
    pub order_eps_moment: Option<f64>,
    pub preasymptotic: bool,
    pub runtime_s: f64,
    pub error: Option<String>,
}

/// What to sweep.
#[derive(Clone, Debug)]
pub struct StudySpec {
    pub label: String,
    /// Template; its mesh is overwritten for every cell.
    pub problem: ShellProblem,
    pub quantity: Option<QuantityOfInterest>,
    pub degrees: Vec<usize>,
    pub elements: Vec<usize>,
    /// Rows with `n` at or below this are flagged pre-asymptotic.
    pub preasymptotic_max_n: usize,
}

impl StudySpec {
    pub fn benchmark(case: Benchmark, template: ShellProblem, degrees: Vec<usize>, elements: Vec<usize>) -> Self {
        Self {
            label: case.id().to_string(),
            problem: template,
            quantity: Some(case.quantity()),
            degrees,
            elements,
            preasymptotic_max_n: if case == Benchmark::Flower { 4 } else { 0 },
        }
    }
}

/// Solved cell: the row plus the solution and system it came from.
pub struct Cell {
    pub row: StudyRow,
    pub solution: ShellSolution,
    pub system: SaddleSystem,
}

pub fn quantity_value(sol: &ShellSolution, q: &QuantityOfInterest) -> Result<f64> {
    match *q {
        QuantityOfInterest::DisplacementZ { r, s, .. } => Ok(evaluate_solution(sol, r, s)?.state.u.z),
        QuantityOfInterest::Energy { .. } => Ok(stored_energy(sol)?.elastic_energy),
    }
}

fn empty_row(label: &str, p: usize, n: usize) -> StudyRow {
    StudyRow {
        case: label.to_string(),
        degree: p,
        elements: n,
        h: 1.0 / n as f64,
        dofs: 0,
        qoi: None,
        reference: None,
        normalized: None,
        eps_force_rel: None,
        eps_moment_abs: None,
        energy: None,
        tangentiality: None,
        solver_residual: None,
        order_eps_force: None,
        order_eps_moment: None,
        preasymptotic: false,
        runtime_s: 0.0,
        error: None,
    }
}

/// Solves and post-processes a single cell.
pub fn run_cell(label: &str, problem: &ShellProblem, quantity: Option<&QuantityOfInterest>) -> Result<Cell> {
    let start = Instant::now();
    let (p, n) = (problem.mesh.degree, problem.mesh.elements);
    let (solution, report, system) = solve_problem(problem)?;
    let mut row = empty_row(label, p, n);
    row.dofs = system.dim();
    if let Some(q) = quantity {
        let v = quantity_value(&solution, q)?;
        row.qoi = Some(v);
        row.reference = Some(q.reference());
        row.normalized = Some(v / q.reference());
    }
    let res = residual_norms(&solution)?;
    row.eps_force_rel = Some(res.eps_force_rel);
    row.eps_moment_abs = Some(res.eps_moment_abs);
    row.energy = Some(stored_energy(&solution)?.elastic_energy);
    row.tangentiality = Some(tangentiality_defect(&solution)?);
    row.solver_residual = Some(report.residual_norm_rel);
    row.runtime_s = start.elapsed().as_secs_f64();
    Ok(Cell { row, solution, system })
}

/// `log2(coarse / fine)`, or `None` when either value is unusable.
pub fn observed_order(coarse: Option<f64>, fine: Option<f64>) -> Option<f64> {
    match (coarse, fine) {
        (Some(c), Some(f)) if c > 0.0 && f > 0.0 && c.is_finite() && f.is_finite() => Some((c / f).log2()),
        _ => None,
    }
}

/// Runs every `(p, n)` cell; failures are recorded in the row and the study
/// continues. `on_cell` sees each solved cell (for artifact output) before it
/// is dropped.
pub fn convergence_study<F>(spec: &StudySpec, mut on_cell: F) -> Vec<StudyRow>
where
    F: FnMut(&Cell),
{
    let mut rows = Vec::new();
    for &p in &spec.degrees {
        for &n in &spec.elements {
            let problem = spec.problem.clone().with_mesh(p, n);
            let start = Instant::now();
            let mut row = match run_cell(&spec.label, &problem, spec.quantity.as_ref()) {
                Ok(cell) => {
                    on_cell(&cell);
                    cell.row
                }
                Err(e) => {
                    let mut r = empty_row(&spec.label, p, n);
                    r.error = Some(e.to_string());
                    r.runtime_s = start.elapsed().as_secs_f64();
                    r
                }
            };
            row.preasymptotic = n <= spec.preasymptotic_max_n;
            rows.push(row);
        }
    }
    fill_orders(&mut rows);
    rows
}

/// Observed orders against the row with the same degree and half the spans.
pub fn fill_orders(rows: &mut [StudyRow]) {
    for i in 0..rows.len() {
        let (p, n) = (rows[i].degree, rows[i].elements);
        if n % 2 != 0 {
            continue;
        }
        if let Some(c) = rows.iter().position(|r| r.degree == p && r.elements == n / 2) {
            rows[i].order_eps_force = observed_order(rows[c].eps_force_rel, rows[i].eps_force_rel);
            rows[i].order_eps_moment = observed_order(rows[c].eps_moment_abs, rows[i].eps_moment_abs);
        }
    }
}

fn num(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.10e}"),
        Some(x) if x.is_nan() => "nan".into(),
        Some(x) => format!("{x}"),
        None => String::new(),
    }
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\"").replace('\n', " "))
    } else {
        s.to_string()
    }
}

/// Writes the rows under [`CSV_HEADER`]. Runtime is left out so that identical
/// inputs give identical bytes.
pub fn write_csv<W: Write>(out: &mut W, rows: &[StudyRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let status = r.error.as_deref().map(field).unwrap_or_else(|| "ok".into());
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            field(&r.case),
            r.degree,
            r.elements,
            num(Some(r.h)),
            r.dofs,
            num(r.qoi),
            num(r.reference),
            num(r.normalized),
            num(r.eps_force_rel),
            num(r.eps_moment_abs),
            num(r.energy),
            num(r.tangentiality),
            num(r.solver_residual),
            num(r.order_eps_force),
            num(r.order_eps_moment),
            r.preasymptotic,
            status
        )?;
    }
    Ok(())
}
