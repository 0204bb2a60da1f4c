//! Direct solution of the saddle-point system.

use std::io::Write;
use std::path::Path;

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::LuError;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use nalgebra::DMatrix;
use serde::Serialize;

use crate::assembly::{csc_matvec, SaddleSystem};
use crate::error::{Error, Result};

/// Relative residual above which a solve is treated as failed.
const FAIL_RESIDUAL: f64 = 1e-6;
/// Largest system for which a dense SVD is run to estimate the null space of a
/// singular matrix.
const MAX_DENSE_DIAGNOSTIC: usize = 3000;
const REFINEMENT_STEPS: usize = 3;
const EQUILIBRATION_SWEEPS: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: Vec<f64>,
    /// `|M x - b| / |b|` after iterative refinement.
    pub residual_norm_rel: f64,
    pub factorization_kind: &'static str,
    /// Pivots replaced during factorization (partial pivoting never does).
    pub pivot_perturbations: usize,
    pub refinement_steps: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn residual(m: &SparseColMat<usize, f64>, x: &[f64], b: &[f64]) -> Vec<f64> {
    let mx = csc_matvec(m, x);
    b.iter().zip(mx).map(|(bi, yi)| bi - yi).collect()
}

/// Solves `M x = b` with a sparse LU factorization (row pivoting), followed by
/// a few steps of iterative refinement.
pub fn solve_matrix(matrix: &SparseColMat<usize, f64>, rhs: &[f64]) -> Result<SolveReport> {
    let n = rhs.len();
    if matrix.nrows() != n || matrix.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{} but the right-hand side has {n} entries",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    let d = equilibrate(matrix);
    let scaled = scale_symmetric(matrix, &d)?;
    let lu = match scaled.sp_lu() {
        Ok(lu) => lu,
        Err(LuError::SymbolicSingular { index }) => {
            return Err(Error::Singular {
                reason: format!("structurally singular (no pivot at step {index})"),
                null_dim: null_space_estimate(matrix),
            })
        }
        Err(e) => return Err(Error::Matrix(format!("sparse LU failed: {e:?}"))),
    };
    // M^-1 v = D (D M D)^-1 D v
    let lu_solve = |v: &[f64]| -> Vec<f64> {
        let mut col = Mat::<f64>::from_fn(n, 1, |i, _| d[i] * v[i]);
        lu.solve_in_place(&mut col);
        (0..n).map(|i| d[i] * col[(i, 0)]).collect()
    };
    let bnorm = norm(rhs);
    let scale = if bnorm > 0.0 { bnorm } else { 1.0 };
    let mut x = lu_solve(rhs);
    let mut r = residual(matrix, &x, rhs);
    let mut rel = norm(&r) / scale;
    let mut steps = 0;
    while steps < REFINEMENT_STEPS && rel.is_finite() && rel > 1e-14 {
        let dx = lu_solve(&r);
        let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let rt = residual(matrix, &trial, rhs);
        let relt = norm(&rt) / scale;
        steps += 1;
        if !(relt < rel) {
            break;
        }
        x = trial;
        r = rt;
        rel = relt;
    }
    if !rel.is_finite() || rel > FAIL_RESIDUAL || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular {
            reason: format!("numerically singular (relative residual {rel:.3e})"),
            null_dim: null_space_estimate(matrix),
        });
    }
    Ok(SolveReport {
        solution: x,
        residual_norm_rel: rel,
        factorization_kind: "sparse LU, partial pivoting",
        pivot_perturbations: 0,
        refinement_steps: steps,
    })
}

/// Diagonal `d` such that `diag(d) M diag(d)` has rows and columns of unit
/// max-norm (a few sweeps of symmetric Ruiz scaling).
fn equilibrate(matrix: &SparseColMat<usize, f64>) -> Vec<f64> {
    let m = matrix.as_ref();
    let (cp, ri, v) = (m.col_ptr(), m.row_idx(), m.val());
    let n = m.ncols();
    let mut d = vec![1.0; n];
    for _ in 0..EQUILIBRATION_SWEEPS {
        let mut colmax = vec![0.0f64; n];
        for j in 0..n {
            for k in cp[j]..cp[j + 1] {
                let a = (d[ri[k]] * v[k] * d[j]).abs();
                colmax[j] = colmax[j].max(a);
                colmax[ri[k]] = colmax[ri[k]].max(a);
            }
        }
        for (di, c) in d.iter_mut().zip(colmax) {
            if c > 0.0 {
                *di /= c.sqrt();
            }
        }
    }
    d
}

fn scale_symmetric(matrix: &SparseColMat<usize, f64>, d: &[f64]) -> Result<SparseColMat<usize, f64>> {
    let m = matrix.as_ref();
    let (cp, ri, v) = (m.col_ptr(), m.row_idx(), m.val());
    let mut t = Vec::with_capacity(v.len());
    for j in 0..m.ncols() {
        for k in cp[j]..cp[j + 1] {
            t.push(Triplet::new(ri[k], j, d[ri[k]] * v[k] * d[j]));
        }
    }
    SparseColMat::try_new_from_triplets(m.nrows(), m.ncols(), &t).map_err(|e| Error::Matrix(format!("{e:?}")))
}

pub fn solve(system: &SaddleSystem) -> Result<SolveReport> {
    solve_matrix(&system.matrix, &system.rhs)
}

/// Number of negligible singular values of the symmetrically equilibrated
/// matrix, or `None` when the matrix is too large for a dense SVD.
pub fn null_space_estimate(matrix: &SparseColMat<usize, f64>) -> Option<usize> {
    let n = matrix.nrows();
    if n > MAX_DENSE_DIAGNOSTIC || n != matrix.ncols() {
        return None;
    }
    let m = matrix.as_ref();
    let (cp, ri, v) = (m.col_ptr(), m.row_idx(), m.val());
    let mut dense = DMatrix::<f64>::zeros(n, n);
    let mut colmax = vec![0.0f64; n];
    for j in 0..n {
        for k in cp[j]..cp[j + 1] {
            dense[(ri[k], j)] += v[k];
            colmax[j] = colmax[j].max(v[k].abs());
        }
    }
    let d: Vec<f64> = colmax.iter().map(|&c| if c > 0.0 { 1.0 / c.sqrt() } else { 1.0 }).collect();
    for j in 0..n {
        for i in 0..n {
            dense[(i, j)] *= d[i] * d[j];
        }
    }
    let sv = dense.singular_values();
    let smax = sv.max();
    Some(sv.iter().filter(|&&s| s <= 1e-10 * smax).count())
}

/// Writes the matrix (coordinate, general) and right-hand side (array) in
/// MatrixMarket format.
pub fn write_matrix_market(system: &SaddleSystem, matrix_path: &Path, rhs_path: &Path) -> Result<()> {
    let trip = system.triplets();
    let mut f = std::io::BufWriter::new(std::fs::File::create(matrix_path)?);
    writeln!(f, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(f, "{} {} {}", system.dim(), system.dim(), trip.len())?;
    for (i, j, v) in trip {
        writeln!(f, "{} {} {:.17e}", i + 1, j + 1, v)?;
    }
    f.flush()?;
    let mut g = std::io::BufWriter::new(std::fs::File::create(rhs_path)?);
    writeln!(g, "%%MatrixMarket matrix array real general")?;
    writeln!(g, "{} 1", system.dim())?;
    for v in &system.rhs {
        writeln!(g, "{v:.17e}")?;
    }
    g.flush()?;
    Ok(())
}
