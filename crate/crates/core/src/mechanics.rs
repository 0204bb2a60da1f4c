//! Kinematics, constitutive law and stress resultants of the linear
//! Reissner-Mindlin shell written with surface operators in Cartesian
//! coordinates.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SurfaceFrame;
use crate::scalar::Real;

/// Isotropic linear elastic shell material.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub young: f64,
    pub poisson: f64,
    /// Shear correction factor.
    #[serde(default = "default_alpha_s")]
    pub alpha_s: f64,
    pub thickness: f64,
}

fn default_alpha_s() -> f64 {
    1.0
}

impl Material {
    pub fn new(young: f64, poisson: f64, alpha_s: f64, thickness: f64) -> Result<Self> {
        let m = Self {
            young,
            poisson,
            alpha_s,
            thickness,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.young > 0.0 && self.thickness > 0.0 && self.alpha_s > 0.0) {
            return Err(Error::InvalidArgument(
                "Young's modulus, thickness and shear correction must be positive".into(),
            ));
        }
        if !(0.0..=0.5).contains(&self.poisson) {
            return Err(Error::InvalidArgument(format!(
                "Poisson ratio {} outside [0, 0.5]",
                self.poisson
            )));
        }
        Ok(())
    }

    pub fn mu(&self) -> f64 {
        self.young / (2.0 * (1.0 + self.poisson))
    }

    /// Plane-stress Lame constant `E nu / (1 - nu^2)`.
    pub fn lambda(&self) -> f64 {
        self.young * self.poisson / (1.0 - self.poisson * self.poisson)
    }

    pub fn bending_stiffness(&self) -> f64 {
        self.young * self.thickness.powi(3) / (12.0 * (1.0 - self.poisson * self.poisson))
    }

    pub fn membrane_stiffness(&self) -> f64 {
        self.young * self.thickness / (1.0 - self.poisson * self.poisson)
    }

    pub fn shear_stiffness(&self) -> f64 {
        self.alpha_s * self.young * self.thickness / (2.0 * (1.0 + self.poisson))
    }
}

/// Displacement `u`, difference vector `w` and their directional surface
/// gradients at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldPointState<T: Real = f64> {
    pub u: Vector3<T>,
    pub w: Vector3<T>,
    pub grad_u: Matrix3<T>,
    pub grad_w: Matrix3<T>,
}

impl<T: Real> FieldPointState<T> {
    pub fn zero() -> Self {
        Self {
            u: Vector3::zeros(),
            w: Vector3::zeros(),
            grad_u: Matrix3::zeros(),
            grad_w: Matrix3::zeros(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrainState<T: Real = f64> {
    pub membrane: Matrix3<T>,
    pub bending: Matrix3<T>,
    pub shear: Matrix3<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StressResultants<T: Real = f64> {
    /// Moment tensor.
    pub m: Matrix3<T>,
    /// Effective membrane force.
    pub n_eff: Matrix3<T>,
    /// Physical membrane force `n_eff + H m`.
    pub n_real: Matrix3<T>,
    /// Transverse shear force.
    pub q: Matrix3<T>,
}

fn sym<T: Real>(a: Matrix3<T>) -> Matrix3<T> {
    (a + a.transpose()) * T::cst(0.5)
}

pub fn strains<T: Real>(frame: &SurfaceFrame<T>, state: &FieldPointState<T>) -> StrainState<T> {
    let gu = &state.grad_u;
    let membrane = sym(frame.p * gu);
    let bending = sym(frame.h * gu + frame.p * state.grad_w);
    let shear = sym(frame.q * gu + frame.n * state.w.transpose());
    StrainState {
        membrane,
        bending,
        shear,
    }
}

/// In-plane Hooke law `2 mu e + lambda tr(e) P`.
fn hooke<T: Real>(frame: &SurfaceFrame<T>, mat: &Material, e: &Matrix3<T>) -> Matrix3<T> {
    *e * T::cst(2.0 * mat.mu()) + frame.p * (e.trace() * T::cst(mat.lambda()))
}

pub fn resultants_from_strains<T: Real>(
    frame: &SurfaceFrame<T>,
    mat: &Material,
    eps: &StrainState<T>,
) -> StressResultants<T> {
    let t = mat.thickness;
    let n_eff = hooke(frame, mat, &eps.membrane) * T::cst(t);
    let m = hooke(frame, mat, &eps.bending) * T::cst(t * t * t / 12.0);
    let q = eps.shear * T::cst(2.0 * mat.shear_stiffness());
    let n_real = n_eff + frame.h * m;
    StressResultants { m, n_eff, n_real, q }
}

pub fn stress_resultants<T: Real>(
    frame: &SurfaceFrame<T>,
    mat: &Material,
    state: &FieldPointState<T>,
) -> StressResultants<T> {
    resultants_from_strains(frame, mat, &strains(frame, state))
}

/// `gamma = w + grad_u^T n`.
pub fn shear_angle<T: Real>(frame: &SurfaceFrame<T>, state: &FieldPointState<T>) -> Vector3<T> {
    state.w + state.grad_u.transpose() * frame.n
}

/// Membrane, bending and shear parts of the strain energy density
/// `1/2 (e_m : n_eff + e_b : m + e_s : q)`.
pub fn energy_density_parts(eps: &StrainState, res: &StressResultants) -> [f64; 3] {
    [
        0.5 * eps.membrane.component_mul(&res.n_eff).sum(),
        0.5 * eps.bending.component_mul(&res.m).sum(),
        0.5 * eps.shear.component_mul(&res.q).sum(),
    ]
}

pub fn energy_density(frame: &SurfaceFrame, mat: &Material, state: &FieldPointState) -> f64 {
    let eps = strains(frame, state);
    energy_density_parts(&eps, &resultants_from_strains(frame, mat, &eps))
        .iter()
        .sum()
}
