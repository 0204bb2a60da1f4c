use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::knots::{Basis1d, KnotVector, Univariate};
use super::tensor::{eval_tensor, BasisEval, TensorBasis};
use crate::error::{Error, Result};
use crate::taylor::partials_up_to;

/// Single rectangular NURBS patch. Control points and weights are stored
/// row-major over the control grid (`index = i_r * n_s + i_s`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPatch", into = "RawPatch")]
pub struct NurbsPatch {
    kv_r: KnotVector,
    kv_s: KnotVector,
    control_points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPatch {
    kv_r: KnotVector,
    kv_s: KnotVector,
    control_points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl TryFrom<RawPatch> for NurbsPatch {
    type Error = Error;
    fn try_from(p: RawPatch) -> Result<Self> {
        NurbsPatch::new(p.kv_r, p.kv_s, p.control_points, p.weights)
    }
}

impl From<NurbsPatch> for RawPatch {
    fn from(p: NurbsPatch) -> Self {
        RawPatch {
            kv_r: p.kv_r,
            kv_s: p.kv_s,
            control_points: p.control_points,
            weights: p.weights,
        }
    }
}

impl NurbsPatch {
    pub fn new(kv_r: KnotVector, kv_s: KnotVector, control_points: Vec<[f64; 3]>, weights: Vec<f64>) -> Result<Self> {
        let n = kv_r.num_functions() * kv_s.num_functions();
        if control_points.len() != n || weights.len() != n {
            return Err(Error::InvalidPatch(format!(
                "expected {n} control points and weights for a {} x {} grid, got {} and {}",
                kv_r.num_functions(),
                kv_s.num_functions(),
                control_points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidPatch("all weights must be positive".into()));
        }
        if control_points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPatch("non-finite control point".into()));
        }
        Ok(Self {
            kv_r,
            kv_s,
            control_points,
            weights,
        })
    }

    pub fn kv_r(&self) -> &KnotVector {
        &self.kv_r
    }

    pub fn kv_s(&self) -> &KnotVector {
        &self.kv_s
    }

    pub fn control_points(&self) -> &[[f64; 3]] {
        &self.control_points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.kv_r.num_functions(), self.kv_s.num_functions())
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.kv_r.degree(), self.kv_s.degree())
    }

    pub fn domain(&self) -> ((f64, f64), (f64, f64)) {
        (self.kv_r.domain(), self.kv_s.domain())
    }

    /// The rational basis of this patch as a field space.
    pub fn basis(&self) -> TensorBasis {
        TensorBasis {
            r: Basis1d::Clamped(self.kv_r.clone()),
            s: Basis1d::Clamped(self.kv_s.clone()),
            weights: Some(self.weights.clone()),
        }
    }

    pub fn eval_basis(&self, r: f64, s: f64, max_deriv: usize) -> Result<BasisEval> {
        eval_tensor(&self.kv_r, &self.kv_s, Some(&self.weights), r, s, max_deriv)
    }

    /// Mapped point and its parametric partials up to `order`, in
    /// [`crate::taylor::PARTIALS`] order.
    pub fn map_derivatives(&self, r: f64, s: f64, order: usize) -> Result<Vec<Vector3<f64>>> {
        let e = self.eval_basis(r, s, order)?;
        let mut out = vec![Vector3::zeros(); partials_up_to(order)];
        for (k, row) in e.ders.iter().enumerate() {
            for (&id, &v) in e.ids.iter().zip(row) {
                let c = self.control_points[id];
                out[k] += Vector3::new(c[0], c[1], c[2]) * v;
            }
        }
        Ok(out)
    }

    pub fn point(&self, r: f64, s: f64) -> Result<Vector3<f64>> {
        Ok(self.map_derivatives(r, s, 0)?[0])
    }

    /// Homogeneous control net `(w x, w y, w z, w)`.
    pub(crate) fn homogeneous(&self) -> Vec<[f64; 4]> {
        self.control_points
            .iter()
            .zip(&self.weights)
            .map(|(c, &w)| [c[0] * w, c[1] * w, c[2] * w, w])
            .collect()
    }

    pub(crate) fn from_homogeneous(kv_r: KnotVector, kv_s: KnotVector, pw: &[[f64; 4]]) -> Result<Self> {
        let cps = pw.iter().map(|h| [h[0] / h[3], h[1] / h[3], h[2] / h[3]]).collect();
        let ws = pw.iter().map(|h| h[3]).collect();
        Self::new(kv_r, kv_s, cps, ws)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Quadratic patch of a cylindrical sector: axis along `y` over
    /// `[0, length]`, polar angle (measured from `+x` towards `+z`) from
    /// `angle_start` to `angle_end` (opening below 180 degrees). The first
    /// parameter runs along the axis, the second along the arc, so the
    /// cross-product normal points away from the axis.
    pub fn cylinder_sector(radius: f64, length: f64, angle_start: f64, angle_end: f64) -> Result<Self> {
        let half = 0.5 * (angle_end - angle_start);
        if !(half > 0.0 && half < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!(
                "arc opening {} rad must lie in (0, pi)",
                angle_end - angle_start
            )));
        }
        let mid = angle_start + half;
        let arc = [
            (radius * angle_start.cos(), radius * angle_start.sin(), 1.0),
            (radius / half.cos() * mid.cos(), radius / half.cos() * mid.sin(), half.cos()),
            (radius * angle_end.cos(), radius * angle_end.sin(), 1.0),
        ];
        let kv_r = KnotVector::uniform(1, 1, 0.0, length)?;
        let kv_s = KnotVector::uniform(2, 1, angle_start, angle_end)?;
        let mut cps = Vec::new();
        let mut ws = Vec::new();
        for y in [0.0, length] {
            for &(x, z, w) in &arc {
                cps.push([x, y, z]);
                ws.push(w);
            }
        }
        Self::new(kv_r, kv_s, cps, ws)
    }
}

/// Rational basis functions of `patch` at `(r, s)`.
pub fn eval_basis(patch: &NurbsPatch, r: f64, s: f64, max_deriv: usize) -> Result<BasisEval> {
    patch.eval_basis(r, s, max_deriv)
}
