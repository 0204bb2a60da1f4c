use nalgebra::{Matrix2, Matrix3, Matrix3x2, Vector2, Vector3};

use super::map::GeometryMap;
use crate::error::{Error, Result};
use crate::problem::Edge;
use crate::scalar::{jet_vec, Jet, Real};

/// Pointwise differential geometry of the middle surface.
///
/// `contra = J G^-1` maps parametric gradients to tangential gradients:
/// `grad_G u = contra * (u_r, u_s)`. `dh[i]` is the `i`-th Cartesian
/// component of the tangential gradient of `H` (only on frames built with
/// `need_dh`).
#[derive(Clone, Debug)]
pub struct SurfaceFrame<T: Real = f64> {
    pub x: Vector3<T>,
    pub jac: Matrix3x2<T>,
    pub metric: Matrix2<T>,
    /// `sqrt(det G)`, the area element per unit parameter area.
    pub area: T,
    pub contra: Matrix3x2<T>,
    pub n: Vector3<T>,
    pub p: Matrix3<T>,
    pub q: Matrix3<T>,
    pub h: Matrix3<T>,
    pub kappa: T,
    pub dh: Option<[Matrix3<T>; 3]>,
}

pub(crate) fn cross<T: Real>(a: &Vector3<T>, b: &Vector3<T>) -> Vector3<T> {
    Vector3::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

/// Frame from the first and second parametric derivatives of the map. Generic
/// so that the same code yields parametric derivatives of every quantity when
/// instantiated with [`Jet`].
pub fn frame_kernel<T: Real>(
    x: Vector3<T>,
    xr: Vector3<T>,
    xs: Vector3<T>,
    xrr: Vector3<T>,
    xrs: Vector3<T>,
    xss: Vector3<T>,
    at: (f64, f64),
) -> Result<SurfaceFrame<T>> {
    let a = cross(&xr, &xs);
    let a2 = a.dot(&a);
    let scale = xr.dot(&xr).re() * xs.dot(&xs).re();
    if !(a2.re() > 1e-24 * scale) || !a2.re().is_finite() {
        return Err(Error::DegenerateGeometry {
            r: at.0,
            s: at.1,
            what: "rank-deficient Jacobian",
        });
    }
    let area = a2.sqrt();
    let n = a / area;
    let jac = Matrix3x2::from_columns(&[xr, xs]);
    let (g11, g12, g22) = (xr.dot(&xr), xr.dot(&xs), xs.dot(&xs));
    let metric = Matrix2::new(g11, g12, g12, g22);
    let det = g11 * g22 - g12 * g12;
    let ginv = Matrix2::new(g22 / det, -g12 / det, -g12 / det, g11 / det);
    let contra = jac * ginv;
    let p = Matrix3::<T>::identity() - n * n.transpose();
    let q = n * n.transpose();
    let nr = p * (cross(&xrr, &xs) + cross(&xr, &xrs)) / area;
    let ns = p * (cross(&xrs, &xs) + cross(&xr, &xss)) / area;
    let h = nr * contra.column(0).transpose() + ns * contra.column(1).transpose();
    let kappa = h.trace();
    Ok(SurfaceFrame {
        x,
        jac,
        metric,
        area,
        contra,
        n,
        p,
        q,
        h,
        kappa,
        dh: None,
    })
}

/// Frame whose entries carry their derivatives along `r` and `s`. Needs the
/// map's third derivatives.
pub fn jet_frame(geom: &GeometryMap, r: f64, s: f64) -> Result<SurfaceFrame<Jet>> {
    let d = geom.derivatives(r, s, 3)?;
    jet_frame_from_derivatives(&d, (r, s))
}

pub(crate) fn jet_frame_from_derivatives(d: &[Vector3<f64>], at: (f64, f64)) -> Result<SurfaceFrame<Jet>> {
    frame_kernel(
        jet_vec(&d[0], &d[1], &d[2]),
        jet_vec(&d[1], &d[3], &d[4]),
        jet_vec(&d[2], &d[4], &d[5]),
        jet_vec(&d[3], &d[6], &d[7]),
        jet_vec(&d[4], &d[7], &d[8]),
        jet_vec(&d[5], &d[8], &d[9]),
        at,
    )
}

/// Value part of a jet frame, with `dh` filled from the jet derivatives of `H`.
pub fn frame_values(jf: &SurfaceFrame<Jet>) -> SurfaceFrame<f64> {
    let v3 = |v: &Vector3<Jet>| v.map(|j| j.v);
    let v33 = |m: &Matrix3<Jet>| m.map(|j| j.v);
    let contra = jf.contra.map(|j| j.v);
    let h_r = jf.h.map(|j| j.dr);
    let h_s = jf.h.map(|j| j.ds);
    let dh = [0, 1, 2].map(|i| h_r * contra[(i, 0)] + h_s * contra[(i, 1)]);
    SurfaceFrame {
        x: v3(&jf.x),
        jac: jf.jac.map(|j| j.v),
        metric: jf.metric.map(|j| j.v),
        area: jf.area.v,
        contra,
        n: v3(&jf.n),
        p: v33(&jf.p),
        q: v33(&jf.q),
        h: v33(&jf.h),
        kappa: jf.kappa.v,
        dh: Some(dh),
    }
}

pub(crate) fn frame_from_derivatives(d: &[Vector3<f64>], at: (f64, f64)) -> Result<SurfaceFrame<f64>> {
    frame_kernel(d[0], d[1], d[2], d[3], d[4], d[5], at)
}

/// Surface frame at `(r, s)`; `need_dh` additionally computes the tangential
/// gradient of the Weingarten map from third derivatives of the map.
pub fn frame_at(geom: &GeometryMap, r: f64, s: f64, need_dh: bool) -> Result<SurfaceFrame<f64>> {
    if need_dh {
        Ok(frame_values(&jet_frame(geom, r, s)?))
    } else {
        frame_from_derivatives(&geom.derivatives(r, s, 2)?, (r, s))
    }
}

/// Tangential gradient of a scalar field from its parametric gradient.
pub fn surface_grad_scalar<T: Real>(frame: &SurfaceFrame<T>, grad_param: &Vector2<T>) -> Vector3<T> {
    frame.contra * grad_param
}

/// Directional gradient of a vector field: row `i` is the tangential gradient
/// of component `i`, given the parametric gradients `[u_r u_s]` as columns.
pub fn surface_grad_vector_dir<T: Real>(frame: &SurfaceFrame<T>, grad_param_cols: &Matrix3x2<T>) -> Matrix3<T> {
    grad_param_cols * frame.contra.transpose()
}

/// Orthonormal triad at a point of the boundary: unit tangent `t`, outward
/// co-normal `co_normal = n x t` and the surface normal.
#[derive(Clone, Debug)]
pub struct BoundaryFrame {
    pub x: Vector3<f64>,
    pub t: Vector3<f64>,
    pub co_normal: Vector3<f64>,
    pub n: Vector3<f64>,
    /// Length of the edge image per unit parameter.
    pub ds_scale: f64,
}

impl Edge {
    /// Parameter point at edge coordinate `t` (the free parameter of the edge).
    pub fn point(self, geom: &GeometryMap, t: f64) -> (f64, f64) {
        let ((r0, r1), (s0, s1)) = geom.domain();
        match self {
            Edge::RMin => (r0, t),
            Edge::RMax => (r1, t),
            Edge::SMin => (t, s0),
            Edge::SMax => (t, s1),
        }
    }

    /// Range of the free parameter along the edge.
    pub fn range(self, geom: &GeometryMap) -> (f64, f64) {
        let (rd, sd) = geom.domain();
        match self {
            Edge::RMin | Edge::RMax => sd,
            Edge::SMin | Edge::SMax => rd,
        }
    }

    /// Outward direction in the parameter plane.
    pub fn outward_param(self) -> Vector2<f64> {
        match self {
            Edge::RMin => Vector2::new(-1.0, 0.0),
            Edge::RMax => Vector2::new(1.0, 0.0),
            Edge::SMin => Vector2::new(0.0, -1.0),
            Edge::SMax => Vector2::new(0.0, 1.0),
        }
    }
}

pub fn boundary_frame_from(frame: &SurfaceFrame<f64>, edge: Edge, at: (f64, f64)) -> Result<BoundaryFrame> {
    let along = match edge {
        Edge::RMin | Edge::RMax => frame.jac.column(1).into_owned(),
        Edge::SMin | Edge::SMax => frame.jac.column(0).into_owned(),
    };
    let ds_scale = along.norm();
    // The tangential gradient of the parameter that is constant on the edge is
    // perpendicular to it; its sign gives the outward side.
    let grad = frame.contra * edge.outward_param();
    let gn = grad.norm();
    if !(ds_scale > 0.0) || !(gn > 0.0) {
        return Err(Error::DegenerateGeometry {
            r: at.0,
            s: at.1,
            what: "degenerate boundary tangent",
        });
    }
    let co_normal = grad / gn;
    let t = cross(&co_normal, &frame.n);
    Ok(BoundaryFrame {
        x: frame.x,
        t,
        co_normal,
        n: frame.n,
        ds_scale,
    })
}

pub fn boundary_frame_at(geom: &GeometryMap, edge: Edge, param: f64) -> Result<BoundaryFrame> {
    let (lo, hi) = edge.range(geom);
    let tol = 1e-12 * (hi - lo).abs().max(1.0);
    if param < lo - tol || param > hi + tol {
        let (r, s) = edge.point(geom, param);
        let ((r0, r1), (s0, s1)) = geom.domain();
        return Err(Error::OutsideDomain {
            r,
            s,
            r0,
            r1,
            s0,
            s1,
        });
    }
    let at = edge.point(geom, param);
    let frame = frame_at(geom, at.0, at.1, false)?;
    boundary_frame_from(&frame, edge, at)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plate() -> GeometryMap {
        GeometryMap::Plane {
            r: (0.0, 1.0),
            s: (0.0, 1.0),
        }
    }

    #[test]
    fn flat_plate_frame() {
        let f = frame_at(&plate(), 0.3, 0.6, true).unwrap();
        assert_eq!(f.n, Vector3::new(0.0, 0.0, 1.0));
        assert!(f.h.norm() < 1e-15 && f.kappa.abs() < 1e-15);
        assert!(f.dh.unwrap().iter().all(|m| m.norm() < 1e-15));
    }

    #[test]
    fn cylinder_curvature() {
        let g = GeometryMap::Cylinder {
            radius: 25.0,
            length: 50.0,
            angle_start: 0.9,
            angle_end: 2.2,
        };
        let f = frame_at(&g, 10.0, 1.3, false).unwrap();
        assert!((f.kappa.abs() - 1.0 / 25.0).abs() < 1e-14);
        let mut ev: Vec<f64> = f.h.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(ev[0].abs() < 1e-14 && ev[1].abs() < 1e-14);
        assert!((ev[2].abs() - 1.0 / 25.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_weingarten_is_projector_over_radius() {
        let radius = 3.0;
        let g = GeometryMap::Sphere {
            radius,
            r: (0.0, 1.0),
            s: (-0.5, 0.5),
        };
        let f = frame_at(&g, 0.4, 0.2, true).unwrap();
        assert!((f.h - f.p / radius).norm() < 1e-14);
        assert!((f.kappa - 2.0 / radius).abs() < 1e-14);
    }

    #[test]
    fn gradients_of_coordinate_fields() {
        let f = frame_at(&plate(), 0.2, 0.7, false).unwrap();
        let g = surface_grad_scalar(&f, &Vector2::new(1.0, 0.0));
        assert!((g - Vector3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert_eq!(surface_grad_scalar(&f, &Vector2::zeros()), Vector3::zeros());
        let d = surface_grad_vector_dir(&f, &f.jac);
        assert!((d - f.p).norm() < 1e-15);

        let cyl = GeometryMap::Cylinder {
            radius: 25.0,
            length: 50.0,
            angle_start: 0.9,
            angle_end: 2.2,
        };
        let (r, s) = (12.0, 1.1);
        let f = frame_at(&cyl, r, s, false).unwrap();
        // u = z = R sin s
        let g = surface_grad_scalar(&f, &Vector2::new(0.0, 25.0 * s.cos()));
        assert!((g - f.p * Vector3::z()).norm() < 1e-14);
        // the directional gradient of the normal field is H
        let d = geom_normal_param_derivatives(&cyl, r, s);
        assert!((surface_grad_vector_dir(&f, &d) - f.h).norm() < 1e-12);
        assert!((surface_grad_vector_dir(&f, &d).trace() - f.kappa).abs() < 1e-14);
    }

    fn geom_normal_param_derivatives(g: &GeometryMap, r: f64, s: f64) -> Matrix3x2<f64> {
        let jf = jet_frame(g, r, s).unwrap();
        Matrix3x2::from_columns(&[jf.n.map(|j| j.dr), jf.n.map(|j| j.ds)])
    }

    #[test]
    fn boundary_frames() {
        let b = boundary_frame_at(&plate(), Edge::RMax, 0.5).unwrap();
        assert!((b.co_normal - Vector3::x()).norm() < 1e-15);
        let cyl = GeometryMap::Cylinder {
            radius: 25.0,
            length: 50.0,
            angle_start: 0.9,
            angle_end: 2.2,
        };
        let b0 = boundary_frame_at(&cyl, Edge::RMin, 1.5).unwrap();
        let b1 = boundary_frame_at(&cyl, Edge::RMax, 1.5).unwrap();
        assert!((b0.co_normal + Vector3::y()).norm() < 1e-14);
        assert!((b1.co_normal - Vector3::y()).norm() < 1e-14);
        assert!((b0.ds_scale - 25.0).abs() < 1e-12);
        assert!(boundary_frame_at(&cyl, Edge::SMin, 51.0).is_err());
    }

    #[test]
    fn degenerate_jacobian_is_reported() {
        let d = vec![Vector3::zeros(), Vector3::x(), Vector3::x() * 2.0, Vector3::zeros(), Vector3::zeros(), Vector3::zeros()];
        assert!(matches!(
            frame_from_derivatives(&d, (0.0, 0.0)),
            Err(Error::DegenerateGeometry { .. })
        ));
    }
}
