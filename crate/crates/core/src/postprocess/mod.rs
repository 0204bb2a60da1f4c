//! Field reconstruction, stress resultants, energies, residual norms and
//! convergence studies.

mod residual;
mod study;
mod vtk;

use nalgebra::{Matrix3, Matrix3x2, Vector3};
use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{assemble, DofMap, SaddleSystem};
use crate::error::{Error, Result};
use crate::geometry::{frame_from_derivatives, surface_grad_vector_dir, SurfaceFrame};
use crate::mechanics::{
    energy_density_parts, resultants_from_strains, strains, FieldPointState, StrainState, StressResultants,
};
use crate::nurbs::{BasisEval, TensorBasis};
use crate::problem::ShellProblem;
use crate::quadrature::{gauss_on, points_per_direction};
use crate::solver::{solve, SolveReport};

pub use residual::{residual_at, residual_norms, PointResidual, ResidualNorms};
pub use study::{
    convergence_study, fill_orders, observed_order, quantity_value, run_cell, write_csv, Cell, StudyRow, StudySpec,
    CSV_HEADER,
};
pub use vtk::write_vtk;

/// Solved discrete fields together with what is needed to evaluate them.
#[derive(Clone, Debug)]
pub struct ShellSolution {
    pub problem: ShellProblem,
    pub basis: TensorBasis,
    pub dofs: DofMap,
    /// Full solution vector including multipliers.
    pub x: Vec<f64>,
}

impl ShellSolution {
    pub fn new(problem: ShellProblem, system: &SaddleSystem, x: Vec<f64>) -> Result<Self> {
        if x.len() != system.dim() {
            return Err(Error::InvalidArgument(format!(
                "solution has {} entries, system has {}",
                x.len(),
                system.dim()
            )));
        }
        Ok(Self {
            problem,
            basis: system.basis.clone(),
            dofs: system.dofs.clone(),
            x,
        })
    }

    /// A zero solution on the problem's discretization.
    pub fn zero(problem: ShellProblem) -> Result<Self> {
        let basis = problem.field_basis()?;
        let dofs = DofMap::new(&problem, &basis)?;
        let x = vec![0.0; dofs.total];
        Ok(Self {
            problem,
            basis,
            dofs,
            x,
        })
    }

    pub fn u_coeff(&self, a: usize) -> Vector3<f64> {
        Vector3::from_fn(|i, _| self.x[self.dofs.u(a, i)])
    }

    pub fn w_coeff(&self, a: usize) -> Vector3<f64> {
        Vector3::from_fn(|i, _| self.x[self.dofs.w(a, i)])
    }

    /// Sum of `coeff(a) * ders[k][a]` for every partial `k` in the evaluation.
    pub(crate) fn combine(&self, be: &BasisEval, w_field: bool) -> Vec<Vector3<f64>> {
        be.ders
            .iter()
            .map(|row| {
                be.ids.iter().zip(row).fold(Vector3::zeros(), |acc, (&a, &v)| {
                    acc + if w_field { self.w_coeff(a) } else { self.u_coeff(a) } * v
                })
            })
            .collect()
    }
}

/// Assembles and solves `problem`.
pub fn solve_problem(problem: &ShellProblem) -> Result<(ShellSolution, SolveReport, SaddleSystem)> {
    let system = assemble(problem)?;
    let report = solve(&system)?;
    let sol = ShellSolution::new(problem.clone(), &system, report.solution.clone())?;
    Ok((sol, report, system))
}

/// Fields, strains and resultants at one point.
#[derive(Clone, Debug)]
pub struct PointEvaluation {
    pub frame: SurfaceFrame,
    pub state: FieldPointState,
    pub strains: StrainState,
    pub resultants: StressResultants,
}

pub(crate) fn state_at(sol: &ShellSolution, frame: &SurfaceFrame, be: &BasisEval) -> FieldPointState {
    let u = sol.combine(be, false);
    let w = sol.combine(be, true);
    FieldPointState {
        u: u[0],
        w: w[0],
        grad_u: surface_grad_vector_dir(frame, &Matrix3x2::from_columns(&[u[1], u[2]])),
        grad_w: surface_grad_vector_dir(frame, &Matrix3x2::from_columns(&[w[1], w[2]])),
    }
}

pub fn evaluate_solution(sol: &ShellSolution, r: f64, s: f64) -> Result<PointEvaluation> {
    let frame = frame_from_derivatives(&sol.problem.geometry.derivatives(r, s, 2)?, (r, s))?;
    let be = sol.basis.eval(r, s, 1)?;
    let state = state_at(sol, &frame, &be);
    let eps = strains(&frame, &state);
    let resultants = resultants_from_strains(&frame, &sol.problem.material, &eps);
    Ok(PointEvaluation {
        frame,
        state,
        strains: eps,
        resultants,
    })
}

/// Calls `f(frame, basis evaluation, dA)` at every Gauss point of every knot
/// span and sums the results; spans are processed in parallel, the sum is
/// taken in span order.
pub(crate) fn integrate<const K: usize, F>(
    sol: &ShellSolution,
    bump: i32,
    max_deriv: usize,
    need_third: bool,
    f: F,
) -> Result<[f64; K]>
where
    F: Fn(&[Vector3<f64>], &BasisEval, f64, (f64, f64)) -> Result<[f64; K]> + Sync,
{
    let (pr, ps) = sol.basis.degrees();
    let gr = gauss_on(points_per_direction(pr, bump)?, 0.0, 1.0);
    let gs = gauss_on(points_per_direction(ps, bump)?, 0.0, 1.0);
    let order = if need_third { 3 } else { 2 };
    let parts: Vec<[f64; K]> = sol
        .basis
        .elements()
        .par_iter()
        .map(|el| {
            let (hr, hs) = (el.r.1 - el.r.0, el.s.1 - el.s.0);
            let mut acc = [0.0; K];
            for &(xr, wr) in &gr {
                for &(xs, ws) in &gs {
                    let (r, s) = (el.r.0 + hr * xr, el.s.0 + hs * xs);
                    let d = sol.problem.geometry.derivatives(r, s, order)?;
                    let be = sol.basis.eval(r, s, max_deriv)?;
                    let v = f(&d, &be, wr * ws * hr * hs, (r, s))?;
                    acc.iter_mut().zip(v).for_each(|(a, b)| *a += b);
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = [0.0; K];
    for p in parts {
        total.iter_mut().zip(p).for_each(|(a, b)| *a += b);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyReport {
    pub elastic_energy: f64,
    pub membrane: f64,
    pub bending: f64,
    pub shear: f64,
}

/// `1/2 int (e_m : n_eff + e_b : m + e_s : q) dA` with the system quadrature.
pub fn stored_energy(sol: &ShellSolution) -> Result<EnergyReport> {
    let mat = sol.problem.material;
    let [membrane, bending, shear] = integrate(sol, sol.problem.quadrature_bump, 1, false, |d, be, w, at| {
        let frame = frame_from_derivatives(d, at)?;
        let st = state_at(sol, &frame, be);
        let eps = strains(&frame, &st);
        let parts = energy_density_parts(&eps, &resultants_from_strains(&frame, &mat, &eps));
        Ok(parts.map(|p| p * w * frame.area))
    })?;
    Ok(EnergyReport {
        elastic_energy: membrane + bending + shear,
        membrane,
        bending,
        shear,
    })
}

/// `1/2 x^T K x` over the displacement and difference-vector unknowns.
pub fn bilinear_energy(system: &SaddleSystem, x: &[f64]) -> f64 {
    system.physical_energy(x)
}

/// `1/2 b^T x` over the displacement and difference-vector unknowns.
pub fn external_work(system: &SaddleSystem, x: &[f64]) -> f64 {
    let np = system.dofs.num_physical();
    0.5 * system.rhs[..np].iter().zip(&x[..np]).map(|(b, v)| b * v).sum::<f64>()
}

/// `int (w . n)^2 dA / int |w|^2 dA`.
pub fn tangentiality_defect(sol: &ShellSolution) -> Result<f64> {
    let [wn, ww] = integrate(sol, sol.problem.quadrature_bump, 0, false, |d, be, w, at| {
        let frame = frame_from_derivatives(d, at)?;
        let wv = sol.combine(be, true)[0];
        let da = w * frame.area;
        Ok([wv.dot(&frame.n).powi(2) * da, wv.norm_squared() * da])
    })?;
    Ok(if ww > 0.0 { wn / ww } else { 0.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrincipalMoments {
    /// Non-zero eigenvalues of the moment tensor, larger magnitude first.
    pub m1: f64,
    pub m2: f64,
    /// Eigenvalue along the normal direction, expected to vanish.
    pub zero: f64,
    /// Whether `|zero| < 1e-8 max(|m1|, |m2|)`.
    pub consistent: bool,
}

pub fn principal_moments(res: &StressResultants) -> PrincipalMoments {
    let m: Matrix3<f64> = (res.m + res.m.transpose()) * 0.5;
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let scale = ev[2].abs();
    PrincipalMoments {
        m1: ev[2],
        m2: ev[1],
        zero: ev[0],
        consistent: ev[0].abs() <= 1e-8 * scale || scale == 0.0,
    }
}
