//! Problem definitions: boundary conditions, loads, discretization choices and
//! the three benchmark set-ups.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryFrame, GeometryMap};
use crate::mechanics::Material;
use crate::nurbs::{elevate_degree, refine_uniform, TensorBasis};

/// Side of the parameter square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edge {
    RMin,
    RMax,
    SMin,
    SMax,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::RMin, Edge::RMax, Edge::SMin, Edge::SMax];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    /// Mid-surface displacement.
    U,
    /// Difference vector.
    W,
}

/// Direction of a scalar boundary constraint. The last three follow the
/// boundary: unit tangent, outward co-normal, surface normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    X,
    Y,
    Z,
    CoNormal,
    Tangent,
    SurfaceNormal,
}

impl Direction {
    pub fn vector(self, bf: &BoundaryFrame) -> Vector3<f64> {
        match self {
            Direction::X => Vector3::x(),
            Direction::Y => Vector3::y(),
            Direction::Z => Vector3::z(),
            Direction::CoNormal => bf.co_normal,
            Direction::Tangent => bf.t,
            Direction::SurfaceNormal => bf.n,
        }
    }

    pub fn is_cartesian(self) -> bool {
        matches!(self, Direction::X | Direction::Y | Direction::Z)
    }
}

/// Scalar data given in physical coordinates: `c + g . x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarField {
    Constant(f64),
    Affine { constant: f64, gradient: [f64; 3] },
}

impl Default for ScalarField {
    fn default() -> Self {
        ScalarField::Constant(0.0)
    }
}

impl ScalarField {
    pub fn eval(&self, x: &Vector3<f64>) -> f64 {
        match self {
            ScalarField::Constant(c) => *c,
            ScalarField::Affine { constant, gradient } => constant + Vector3::from(*gradient).dot(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ScalarField::Constant(c) => *c == 0.0,
            ScalarField::Affine { constant, gradient } => *constant == 0.0 && gradient.iter().all(|g| *g == 0.0),
        }
    }
}

/// Vector data given in physical coordinates: `c + G x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorField {
    Constant([f64; 3]),
    Affine {
        constant: [f64; 3],
        /// Row-major `G`.
        gradient: [[f64; 3]; 3],
    },
}

impl Default for VectorField {
    fn default() -> Self {
        VectorField::Constant([0.0; 3])
    }
}

impl VectorField {
    pub fn eval(&self, x: &Vector3<f64>) -> Vector3<f64> {
        match self {
            VectorField::Constant(c) => Vector3::from(*c),
            VectorField::Affine { constant, gradient } => {
                Vector3::from(*constant) + Vector3::from_fn(|i, _| Vector3::from(gradient[i]).dot(x))
            }
        }
    }

    /// Cartesian gradient `G` (rows = components).
    pub fn gradient(&self) -> nalgebra::Matrix3<f64> {
        match self {
            VectorField::Constant(_) => nalgebra::Matrix3::zeros(),
            VectorField::Affine { gradient, .. } => nalgebra::Matrix3::from_fn(|i, j| gradient[i][j]),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            VectorField::Constant(c) => c.iter().all(|v| *v == 0.0),
            VectorField::Affine { constant, gradient } => {
                constant.iter().all(|v| *v == 0.0) && gradient.iter().flatten().all(|v| *v == 0.0)
            }
        }
    }
}

/// One prescribed scalar: `field . direction = value` along an edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirichletSpec {
    pub field: Field,
    pub direction: Direction,
    #[serde(default)]
    pub value: ScalarField,
}

/// Boundary condition on one side of the patch.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCondition {
    #[default]
    Free,
    /// `u = 0` and tangential `w = 0` (the normal part of `w` is already
    /// controlled by the tangentiality constraint).
    Clamped,
    /// `u = 0`, rotations free.
    SimplySupported,
    /// `u . n_b = 0` and `w . n_b = 0` with `n_b` the co-normal.
    Symmetry,
    Custom {
        #[serde(default)]
        dirichlet: Vec<DirichletSpec>,
        /// Prescribed force per unit length.
        #[serde(default)]
        traction: Option<VectorField>,
        /// Prescribed moment (difference-vector load) per unit length.
        #[serde(default)]
        moment: Option<VectorField>,
    },
}

impl EdgeCondition {
    pub fn dirichlet(&self) -> Vec<DirichletSpec> {
        let d = |field, direction| DirichletSpec {
            field,
            direction,
            value: ScalarField::Constant(0.0),
        };
        use Direction::*;
        use Field::*;
        match self {
            EdgeCondition::Free => vec![],
            EdgeCondition::Clamped => vec![d(U, X), d(U, Y), d(U, Z), d(W, Tangent), d(W, CoNormal)],
            EdgeCondition::SimplySupported => vec![d(U, X), d(U, Y), d(U, Z)],
            EdgeCondition::Symmetry => vec![d(U, CoNormal), d(W, CoNormal)],
            EdgeCondition::Custom { dirichlet, .. } => dirichlet.clone(),
        }
    }

    pub fn traction(&self) -> Option<&VectorField> {
        match self {
            EdgeCondition::Custom { traction, .. } => traction.as_ref(),
            _ => None,
        }
    }

    pub fn moment(&self) -> Option<&VectorField> {
        match self {
            EdgeCondition::Custom { moment, .. } => moment.as_ref(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct EdgeConditions {
    pub r_min: EdgeCondition,
    pub r_max: EdgeCondition,
    pub s_min: EdgeCondition,
    pub s_max: EdgeCondition,
}

impl EdgeConditions {
    pub fn all(c: EdgeCondition) -> Self {
        Self {
            r_min: c.clone(),
            r_max: c.clone(),
            s_min: c.clone(),
            s_max: c,
        }
    }

    pub fn get(&self, e: Edge) -> &EdgeCondition {
        match e {
            Edge::RMin => &self.r_min,
            Edge::RMax => &self.r_max,
            Edge::SMin => &self.s_min,
            Edge::SMax => &self.s_max,
        }
    }

    pub fn set(&mut self, e: Edge, c: EdgeCondition) {
        match e {
            Edge::RMin => self.r_min = c,
            Edge::RMax => self.r_max = c,
            Edge::SMin => self.s_min = c,
            Edge::SMax => self.s_max = c,
        }
    }
}

/// Scalar constraint at a single parameter point, used to remove rigid-body
/// motions that the edge conditions leave free.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConstraint {
    pub r: f64,
    pub s: f64,
    pub field: Field,
    /// Cartesian direction only.
    pub direction: Direction,
    #[serde(default)]
    pub value: f64,
}

/// How the tangentiality `w . n = 0` of the difference vector is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintMode {
    #[default]
    Lagrange,
    /// Adds `alpha int (w . n)(v . n) dA`; `alpha` is an absolute stiffness
    /// (force per unit length).
    Penalty { alpha: f64 },
}

impl FromStr for ConstraintMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("lagrange") {
            return Ok(ConstraintMode::Lagrange);
        }
        if let Some(a) = s.strip_prefix("penalty:") {
            let alpha: f64 = a
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad penalty parameter `{a}`")))?;
            return Ok(ConstraintMode::Penalty { alpha });
        }
        Err(Error::InvalidArgument(format!(
            "constraint mode `{s}` is neither `lagrange` nor `penalty:<alpha>`"
        )))
    }
}

impl fmt::Display for ConstraintMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintMode::Lagrange => write!(f, "lagrange"),
            ConstraintMode::Penalty { alpha } => write!(f, "penalty:{alpha:e}"),
        }
    }
}

/// Uniform discretization: degree `p` and `n` knot spans per side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub degree: usize,
    pub elements: usize,
}

fn default_residual_bump() -> i32 {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellProblem {
    pub geometry: GeometryMap,
    pub material: Material,
    /// Force per unit area.
    #[serde(default)]
    pub area_load: VectorField,
    /// Moment (difference-vector) load per unit area.
    #[serde(default)]
    pub moment_load: VectorField,
    #[serde(default)]
    pub edges: EdgeConditions,
    #[serde(default)]
    pub point_constraints: Vec<PointConstraint>,
    #[serde(default)]
    pub constraint: ConstraintMode,
    pub mesh: MeshSpec,
    /// Extra Gauss points per direction beyond `p + 1` for the system
    /// integrals.
    #[serde(default)]
    pub quadrature_bump: i32,
    /// Extra Gauss points per direction beyond `p + 1` for residual norms.
    #[serde(default = "default_residual_bump")]
    pub residual_bump: i32,
}

impl ShellProblem {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.material.validate()?;
        if self.mesh.degree == 0 || self.mesh.elements == 0 {
            return Err(Error::InvalidProblem("degree and element count must be at least 1".into()));
        }
        if let ConstraintMode::Penalty { alpha } = self.constraint {
            if !(1e6..=1e10).contains(&alpha) {
                return Err(Error::InvalidProblem(format!(
                    "penalty parameter {alpha:e} outside [1e6, 1e10]"
                )));
            }
        }
        if self.geometry.periodic_r() {
            for e in [Edge::RMin, Edge::RMax] {
                if *self.edges.get(e) != EdgeCondition::Free {
                    return Err(Error::InvalidProblem(format!(
                        "edge {e:?} is a periodic seam and cannot carry a boundary condition"
                    )));
                }
            }
        }
        for e in Edge::ALL {
            for d in self.edges.get(e).dirichlet() {
                if d.field == Field::W && d.direction == Direction::SurfaceNormal {
                    if let ConstraintMode::Lagrange = self.constraint {
                        return Err(Error::InvalidProblem(
                            "the normal part of w is fixed by the tangentiality constraint; \
                             prescribing it on an edge makes the system singular"
                                .into(),
                        ));
                    }
                }
            }
        }
        let ((r0, r1), (s0, s1)) = self.geometry.domain();
        for pc in &self.point_constraints {
            if !pc.direction.is_cartesian() {
                return Err(Error::InvalidProblem("point constraints need a Cartesian direction".into()));
            }
            if pc.r < r0 || pc.r > r1 || pc.s < s0 || pc.s > s1 {
                return Err(Error::InvalidProblem(format!(
                    "point constraint at ({}, {}) outside the parameter domain",
                    pc.r, pc.s
                )));
            }
        }
        Ok(())
    }

    /// Spline space carrying all fields: uniform B-splines over the parameter
    /// domain for analytic maps (periodic in `r` when the map is), and the
    /// degree-elevated, refined patch itself for NURBS maps.
    pub fn field_basis(&self) -> Result<TensorBasis> {
        let MeshSpec { degree, elements } = self.mesh;
        match &self.geometry {
            GeometryMap::Nurbs { patch } => {
                let (pr, ps) = patch.degrees();
                let elevated = elevate_degree(patch, degree.max(pr).max(ps))?;
                let refined = refine_uniform(&elevated, elements)?;
                if refined.degrees() != (degree, degree) {
                    return Err(Error::InvalidProblem(format!(
                        "requested degree {degree} is below the geometry degree ({pr}, {ps})"
                    )));
                }
                Ok(refined.basis())
            }
            g => {
                let (rd, sd) = g.domain();
                TensorBasis::uniform(degree, elements, rd, sd, g.periodic_r())
            }
        }
    }

    pub fn has_dirichlet(&self) -> bool {
        Edge::ALL.iter().any(|&e| !self.edges.get(e).dirichlet().is_empty()) || !self.point_constraints.is_empty()
    }

    pub fn with_mesh(mut self, degree: usize, elements: usize) -> Self {
        self.mesh = MeshSpec { degree, elements };
        self
    }

    pub fn with_constraint(mut self, c: ConstraintMode) -> Self {
        self.constraint = c;
        self
    }

    pub fn benchmark(case: Benchmark, degree: usize, elements: usize) -> Self {
        let base = ShellProblem {
            geometry: GeometryMap::Plane {
                r: (0.0, 1.0),
                s: (0.0, 1.0),
            },
            material: Material {
                young: 1.0,
                poisson: 0.0,
                alpha_s: 1.0,
                thickness: 1.0,
            },
            area_load: VectorField::default(),
            moment_load: VectorField::default(),
            edges: EdgeConditions::default(),
            point_constraints: vec![],
            constraint: ConstraintMode::Lagrange,
            mesh: MeshSpec { degree, elements },
            quadrature_bump: 0,
            residual_bump: default_residual_bump(),
        };
        apply_load_case(base, case)
    }
}

/// The three benchmark shells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    ScordelisLo,
    HyperbolicParaboloid,
    Flower,
}

impl Benchmark {
    pub const ALL: [Benchmark; 3] = [Benchmark::ScordelisLo, Benchmark::HyperbolicParaboloid, Benchmark::Flower];

    pub fn id(self) -> &'static str {
        match self {
            Benchmark::ScordelisLo => "scordelis_lo",
            Benchmark::HyperbolicParaboloid => "hyperbolic_paraboloid",
            Benchmark::Flower => "flower",
        }
    }

    /// Quantity of interest and its reference value.
    pub fn quantity(self) -> QuantityOfInterest {
        match self {
            // Midpoint of the free edge; the usual 0.3024 is the magnitude of
            // this downward displacement.
            Benchmark::ScordelisLo => QuantityOfInterest::DisplacementZ {
                r: 25.0,
                s: 50f64.to_radians(),
                reference: -0.3024,
            },
            Benchmark::HyperbolicParaboloid => QuantityOfInterest::DisplacementZ {
                r: 0.5,
                s: 0.0,
                reference: -9.3355e-5,
            },
            Benchmark::Flower => QuantityOfInterest::Energy {
                reference: 5.05297916e-04,
            },
        }
    }
}

impl FromStr for Benchmark {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.id() == s)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantityOfInterest {
    /// Vertical displacement at a parameter point.
    DisplacementZ { r: f64, s: f64, reference: f64 },
    /// Stored elastic energy.
    Energy { reference: f64 },
}

impl QuantityOfInterest {
    pub fn reference(&self) -> f64 {
        match self {
            QuantityOfInterest::DisplacementZ { reference, .. } | QuantityOfInterest::Energy { reference } => *reference,
        }
    }
}

/// Replaces geometry, material, loads and boundary conditions of `problem`
/// by those of a benchmark; mesh, constraint mode and quadrature settings are
/// kept.
pub fn apply_load_case(mut problem: ShellProblem, case: Benchmark) -> ShellProblem {
    use Direction::*;
    use Field::*;
    problem.moment_load = VectorField::default();
    problem.point_constraints.clear();
    problem.edges = EdgeConditions::default();
    match case {
        Benchmark::ScordelisLo => {
            let (radius, length) = (25.0, 50.0);
            problem.geometry = GeometryMap::Cylinder {
                radius,
                length,
                angle_start: 50f64.to_radians(),
                angle_end: 130f64.to_radians(),
            };
            problem.material = Material {
                young: 4.32e8,
                poisson: 0.0,
                alpha_s: 1.0,
                thickness: 0.25,
            };
            problem.area_load = VectorField::Constant([0.0, 0.0, -90.0]);
            // Rigid diaphragms: no displacement in the plane of the end
            // sections, free along the axis.
            let diaphragm = EdgeCondition::Custom {
                dirichlet: [X, Z]
                    .map(|direction| DirichletSpec {
                        field: U,
                        direction,
                        value: ScalarField::Constant(0.0),
                    })
                    .to_vec(),
                traction: None,
                moment: None,
            };
            problem.edges.r_min = diaphragm.clone();
            problem.edges.r_max = diaphragm;
            // The diaphragms leave the axial translation free. The symmetric
            // solution has u_y = 0 on the mid-section, so pinning it there removes
            // the rigid mode without changing the solution.
            problem.point_constraints.push(PointConstraint {
                r: 0.5 * length,
                s: 90f64.to_radians(),
                field: U,
                direction: Y,
                value: 0.0,
            });
        }
        Benchmark::HyperbolicParaboloid => {
            problem.geometry = GeometryMap::HyperbolicParaboloid { half_width: 0.5 };
            let t = 0.01;
            problem.material = Material {
                young: 2.0e11,
                poisson: 0.3,
                alpha_s: 1.0,
                thickness: t,
            };
            problem.area_load = VectorField::Constant([0.0, 0.0, -8000.0 * t]);
            problem.edges.r_min = EdgeCondition::Clamped;
        }
        Benchmark::Flower => {
            problem.geometry = GeometryMap::Flower { a: 2.3, b: 0.8 };
            let t: f64 = 0.1;
            problem.material = Material {
                young: 10.0,
                poisson: 0.3,
                alpha_s: 1.0,
                thickness: t,
            };
            let t3 = t.powi(3);
            problem.area_load = VectorField::Constant([-t3, -2.0 * t3, -3.0 * t3]);
            problem.edges.s_min = EdgeCondition::Clamped;
            problem.edges.s_max = EdgeCondition::Clamped;
        }
    }
    problem
}
