//! Strong-form equilibrium residuals of a discrete solution.

use nalgebra::{Matrix3, Matrix3x2, Vector3};
use serde::Serialize;

use super::{integrate, ShellSolution};
use crate::error::Result;
use crate::geometry::{frame_values, jet_frame_from_derivatives, surface_grad_vector_dir, SurfaceFrame};
use crate::mechanics::{stress_resultants, FieldPointState, StressResultants};
use crate::scalar::{jet_vec, values33, Jet};

/// Pointwise residuals of the force and moment equilibrium.
#[derive(Clone, Debug)]
pub struct PointResidual {
    pub x: Vector3<f64>,
    /// `div n_real + Q div q + H (q n) + f`.
    pub force: Vector3<f64>,
    /// Same residual with `div (H m)` expanded into `H div m` and the
    /// gradient-of-curvature term.
    pub force_expanded: Vector3<f64>,
    /// `P div n_real + H (q n) + P f`.
    pub force_tangential: Vector3<f64>,
    /// `-H : n_real + n . div q + n . f`.
    pub force_normal: f64,
    /// `P div m - q n + c`.
    pub moment: Vector3<f64>,
    pub load: Vector3<f64>,
    pub n: Vector3<f64>,
}

impl PointResidual {
    /// `force - (force_tangential + force_normal n)`, zero up to roundoff.
    pub fn split_defect(&self) -> Vector3<f64> {
        self.force - self.force_tangential - self.n * self.force_normal
    }
}

/// Surface divergence of a tensor field, `(div A)_i = sum_k d_k A_ik`, where
/// `d_k` is the `k`-th tangential derivative.
fn div(frame: &SurfaceFrame, a: &Matrix3<Jet>) -> Vector3<f64> {
    let c = &frame.contra;
    Vector3::from_fn(|i, _| {
        (0..3)
            .map(|k| c[(k, 0)] * a[(i, k)].dr + c[(k, 1)] * a[(i, k)].ds)
            .sum()
    })
}

pub(crate) fn residual_from(
    sol: &ShellSolution,
    d: &[Vector3<f64>],
    be: &crate::nurbs::BasisEval,
    at: (f64, f64),
) -> Result<PointResidual> {
    let jf = jet_frame_from_derivatives(d, at)?;
    let frame = frame_values(&jf);
    let u = sol.combine(be, false);
    let w = sol.combine(be, true);
    // [value, r, s, rr, rs, ss] -> value and first derivatives as jets
    let jets = |v: &[Vector3<f64>]| {
        (
            jet_vec(&v[0], &v[1], &v[2]),
            jet_vec(&v[1], &v[3], &v[4]),
            jet_vec(&v[2], &v[4], &v[5]),
        )
    };
    let (u0, ur, us) = jets(&u);
    let (w0, wr, ws) = jets(&w);
    let state = FieldPointState {
        u: u0,
        w: w0,
        grad_u: surface_grad_vector_dir(&jf, &Matrix3x2::from_columns(&[ur, us])),
        grad_w: surface_grad_vector_dir(&jf, &Matrix3x2::from_columns(&[wr, ws])),
    };
    let res: StressResultants<Jet> = stress_resultants(&jf, &sol.problem.material, &state);
    let (m, q, n_real) = (values33(&res.m), values33(&res.q), values33(&res.n_real));

    let f = sol.problem.area_load.eval(&frame.x);
    let c = sol.problem.moment_load.eval(&frame.x);
    let (p, h, nn) = (frame.p, frame.h, frame.n);
    let qn = q * nn;
    let div_q = div(&frame, &res.q);
    let div_nreal = div(&frame, &res.n_real);
    let div_m = div(&frame, &res.m);
    let div_neff = div(&frame, &res.n_eff);

    let force = div_nreal + frame.q * div_q + h * qn + f;
    let dh = frame.dh.as_ref().expect("jet frames carry dH");
    let curvature_term = Vector3::from_fn(|j, _| {
        let mut acc = 0.0;
        for (i, dhi) in dh.iter().enumerate() {
            for k in 0..3 {
                acc += dhi[(j, k)] * m[(k, i)];
            }
        }
        acc
    });
    let force_expanded = div_neff + h * div_m + curvature_term + frame.q * div_q + h * qn + f;
    let force_tangential = p * div_nreal + h * qn + p * f;
    let force_normal = -h.component_mul(&n_real).sum() + nn.dot(&div_q) + nn.dot(&f);
    let moment = p * div_m - qn + c;
    Ok(PointResidual {
        x: frame.x,
        force,
        force_expanded,
        force_tangential,
        force_normal,
        moment,
        load: f,
        n: nn,
    })
}

/// Residuals at one parameter point.
pub fn residual_at(sol: &ShellSolution, r: f64, s: f64) -> Result<PointResidual> {
    let d = sol.problem.geometry.derivatives(r, s, 3)?;
    let be = sol.basis.eval(r, s, 2)?;
    residual_from(sol, &d, &be, (r, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualNorms {
    /// `sqrt(int |r_F|^2 / int |f|^2)`; NaN when the load vanishes.
    pub eps_force_rel: f64,
    /// `sqrt(int |r_M|^2)`.
    pub eps_moment_abs: f64,
    /// Relative force residual of the expanded form.
    pub eps_force_rel_expanded: f64,
    /// `sqrt(int |r_F - r_F,expanded|^2) / sqrt(int |r_F|^2)`.
    pub form_difference_rel: f64,
    /// Sum over the quadrature points of `|r_F - (r_t + r_n n)|`, an upper
    /// bound for the pointwise defect of the tangential/normal split.
    pub split_defect_bound: f64,
    /// `int |f|^2 dA`.
    pub load_norm_sq: f64,
    /// Set when the force norm is undefined because the load vanishes.
    pub zero_load: bool,
}

/// Residual norms with `(p + 1 + residual_bump)^2` Gauss points per span.
pub fn residual_norms(sol: &ShellSolution) -> Result<ResidualNorms> {
    let [rf, rfe, rm, ff, diff, split] = integrate(sol, sol.problem.residual_bump, 2, true, |d, be, w, at| {
        let pr = residual_from(sol, d, be, at)?;
        let da = w * frame_area(d);
        Ok([
            pr.force.norm_squared() * da,
            pr.force_expanded.norm_squared() * da,
            pr.moment.norm_squared() * da,
            pr.load.norm_squared() * da,
            (pr.force - pr.force_expanded).norm_squared() * da,
            pr.split_defect().norm(),
        ])
    })?;
    let zero_load = ff == 0.0;
    let eps_force_rel = if zero_load { f64::NAN } else { (rf / ff).sqrt() };
    Ok(ResidualNorms {
        eps_force_rel,
        eps_moment_abs: rm.sqrt(),
        eps_force_rel_expanded: if zero_load { f64::NAN } else { (rfe / ff).sqrt() },
        form_difference_rel: if rf > 0.0 { (diff / rf).sqrt() } else { diff.sqrt() },
        split_defect_bound: split,
        load_norm_sq: ff,
        zero_load,
    })
}

fn frame_area(d: &[Vector3<f64>]) -> f64 {
    d[1].cross(&d[2]).norm()
}
