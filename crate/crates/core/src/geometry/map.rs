use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nurbs::NurbsPatch;
use crate::taylor::{partials_up_to, Taylor2};

/// Parametrization `x(r, s)` of the middle surface.
///
/// Analytic variants are evaluated in closed form (with exact derivatives up
/// to third order), `Nurbs` through its rational basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometryMap {
    /// `x = (r, s, 0)` over a rectangle.
    Plane { r: (f64, f64), s: (f64, f64) },
    /// `x = (R cos s, r, R sin s)` with `r` in `[0, length]` and the polar
    /// angle `s` in `[angle_start, angle_end]` (radians); the normal points
    /// away from the axis.
    Cylinder {
        radius: f64,
        length: f64,
        angle_start: f64,
        angle_end: f64,
    },
    /// `x = (r, s, r^2 - s^2)` on `[-h, h]^2`.
    HyperbolicParaboloid { half_width: f64 },
    /// Closed flower-shaped band: with `theta = pi (r + 1)` and
    /// `C = s (b + 0.3 cos 6 theta)`,
    /// `x = ((a - C) cos theta, (a - C) sin theta, 1 - s^2)` on `[-1, 1]^2`,
    /// periodic in `r`.
    Flower { a: f64, b: f64 },
    /// `x = R (cos s cos r, cos s sin r, sin s)`: longitude `r`, latitude `s`
    /// (keep `|s| < pi/2`). Outward normal.
    Sphere {
        radius: f64,
        r: (f64, f64),
        s: (f64, f64),
    },
    Nurbs { patch: NurbsPatch },
}

impl GeometryMap {
    pub fn domain(&self) -> ((f64, f64), (f64, f64)) {
        match self {
            GeometryMap::Plane { r, s } => (*r, *s),
            GeometryMap::Cylinder {
                length,
                angle_start,
                angle_end,
                ..
            } => ((0.0, *length), (*angle_start, *angle_end)),
            GeometryMap::HyperbolicParaboloid { half_width: h } => ((-h, *h), (-h, *h)),
            GeometryMap::Flower { .. } => ((-1.0, 1.0), (-1.0, 1.0)),
            GeometryMap::Sphere { r, s, .. } => (*r, *s),
            GeometryMap::Nurbs { patch } => patch.domain(),
        }
    }

    /// Whether the edges `r = r_min` and `r = r_max` coincide.
    pub fn periodic_r(&self) -> bool {
        matches!(self, GeometryMap::Flower { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        match self {
            GeometryMap::Plane { r, s } if !(r.1 > r.0 && s.1 > s.0) => bad("plane extents must be increasing"),
            GeometryMap::Cylinder {
                radius,
                length,
                angle_start,
                angle_end,
            } if !(*radius > 0.0 && *length > 0.0 && angle_end > angle_start) => {
                bad("cylinder needs positive radius and length and an increasing angle range")
            }
            GeometryMap::HyperbolicParaboloid { half_width } if !(*half_width > 0.0) => {
                bad("hyperbolic paraboloid half width must be positive")
            }
            GeometryMap::Flower { a, b } if !(*a > b.abs() + 0.3) => bad("flower shell needs a > |b| + 0.3"),
            GeometryMap::Sphere { radius, r, s }
                if !(*radius > 0.0
                    && r.1 > r.0
                    && s.1 > s.0
                    && s.0 > -std::f64::consts::FRAC_PI_2
                    && s.1 < std::f64::consts::FRAC_PI_2) =>
            {
                bad("sphere patch must avoid the poles and have increasing ranges")
            }
            _ => Ok(()),
        }
    }

    /// `x` and its partials of total order `<= order` (at most 3), in
    /// [`crate::taylor::PARTIALS`] order.
    pub fn derivatives(&self, r: f64, s: f64, order: usize) -> Result<Vec<Vector3<f64>>> {
        if order > 3 {
            return Err(Error::DerivativeOrder {
                requested: order,
                available: 3,
            });
        }
        if let GeometryMap::Nurbs { patch } = self {
            return patch.map_derivatives(r, s, order);
        }
        let ((r0, r1), (s0, s1)) = self.domain();
        let tol = 1e-12 * (r1 - r0).max(s1 - s0).max(1.0);
        if r < r0 - tol || r > r1 + tol || s < s0 - tol || s > s1 + tol {
            return Err(Error::OutsideDomain {
                r,
                s,
                r0,
                r1,
                s0,
                s1,
            });
        }
        let [x, y, z] = self.analytic(Taylor2::var_r(r), Taylor2::var_s(s));
        let (dx, dy, dz) = (x.derivatives(), y.derivatives(), z.derivatives());
        Ok((0..partials_up_to(order)).map(|k| Vector3::new(dx[k], dy[k], dz[k])).collect())
    }

    pub fn point(&self, r: f64, s: f64) -> Result<Vector3<f64>> {
        Ok(self.derivatives(r, s, 0)?[0])
    }

    fn analytic(&self, r: Taylor2, s: Taylor2) -> [Taylor2; 3] {
        let zero = Taylor2::constant(0.0);
        match self {
            GeometryMap::Plane { .. } => [r, s, zero],
            GeometryMap::Cylinder { radius, .. } => [s.cos().scale(*radius), r, s.sin().scale(*radius)],
            GeometryMap::HyperbolicParaboloid { .. } => [r, s, r * r - s * s],
            GeometryMap::Flower { a, b } => {
                let theta = (r + 1.0).scale(std::f64::consts::PI);
                let c = s * ((theta.scale(6.0)).cos().scale(0.3) + *b);
                let rad = *a - c;
                [rad * theta.cos(), rad * theta.sin(), 1.0 - s * s]
            }
            GeometryMap::Sphere { radius, .. } => {
                let cs = s.cos();
                [
                    (cs * r.cos()).scale(*radius),
                    (cs * r.sin()).scale(*radius),
                    s.sin().scale(*radius),
                ]
            }
            GeometryMap::Nurbs { .. } => unreachable!("NURBS maps are evaluated through their basis"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flower_is_closed_in_r() {
        let g = GeometryMap::Flower { a: 2.3, b: 0.8 };
        for s in [-1.0, -0.3, 0.4, 1.0] {
            let a = g.derivatives(-1.0, s, 3).unwrap();
            let b = g.derivatives(1.0, s, 3).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn analytic_and_nurbs_cylinder_agree_on_edges() {
        let (r, l) = (25.0, 50.0);
        let (a0, a1) = (50f64.to_radians(), 130f64.to_radians());
        let g = GeometryMap::Cylinder {
            radius: r,
            length: l,
            angle_start: a0,
            angle_end: a1,
        };
        let n = GeometryMap::Nurbs {
            patch: NurbsPatch::cylinder_sector(r, l, a0, a1).unwrap(),
        };
        for (p, q) in [(0.0, a0), (l, a1), (20.0, a0), (0.5 * l, 0.5 * (a0 + a1))] {
            assert!((g.point(p, q).unwrap() - n.point(p, q).unwrap()).norm() < 1e-12 * r);
        }
    }

    #[test]
    fn hyperbolic_paraboloid_derivatives() {
        let g = GeometryMap::HyperbolicParaboloid { half_width: 0.5 };
        let d = g.derivatives(0.2, -0.1, 3).unwrap();
        assert!((d[0] - Vector3::new(0.2, -0.1, 0.03)).norm() < 1e-15);
        assert!((d[1] - Vector3::new(1.0, 0.0, 0.4)).norm() < 1e-15);
        assert!((d[5] - Vector3::new(0.0, 0.0, -2.0)).norm() < 1e-15);
        assert!(d[6..].iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn out_of_domain_and_order_errors() {
        let g = GeometryMap::HyperbolicParaboloid { half_width: 0.5 };
        assert!(matches!(g.derivatives(0.7, 0.0, 1), Err(Error::OutsideDomain { .. })));
        assert!(matches!(g.derivatives(0.0, 0.0, 4), Err(Error::DerivativeOrder { .. })));
    }
}
