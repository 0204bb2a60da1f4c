#![allow(dead_code)]

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tdc_shell::assembly::assemble;
use tdc_shell::geometry::{boundary_frame_at, frame_at, GeometryMap, SurfaceFrame};
use tdc_shell::mechanics::{FieldPointState, Material};
use tdc_shell::postprocess::{evaluate_solution, solve_problem};
use tdc_shell::problem::{
    Benchmark, Direction, DirichletSpec, Edge, EdgeCondition, EdgeConditions, Field, ScalarField, ShellProblem,
    VectorField,
};
use tdc_shell::quadrature::gauss_on;

/// The three benchmark middle surfaces.
pub fn benchmark_geometries() -> Vec<(&'static str, GeometryMap)> {
    Benchmark::ALL
        .iter()
        .map(|&b| (b.id(), ShellProblem::benchmark(b, 2, 1).geometry))
        .collect()
}

/// `int_Gamma f dA` with `q` Gauss points per direction on `cells^2` cells.
pub fn surface_integral<F>(g: &GeometryMap, cells: usize, q: usize, f: F) -> f64
where
    F: Fn(&SurfaceFrame) -> f64,
{
    let ((r0, r1), (s0, s1)) = g.domain();
    let gp = gauss_on(q, 0.0, 1.0);
    let (hr, hs) = ((r1 - r0) / cells as f64, (s1 - s0) / cells as f64);
    let mut acc = 0.0;
    for i in 0..cells {
        for j in 0..cells {
            for &(a, wa) in &gp {
                for &(b, wb) in &gp {
                    let r = r0 + hr * (i as f64 + a);
                    let s = s0 + hs * (j as f64 + b);
                    let fr = frame_at(g, r, s, true).unwrap();
                    acc += f(&fr) * fr.area * wa * wb * hr * hs;
                }
            }
        }
    }
    acc
}

/// `sum over edges of int v . co_normal ds`.
pub fn boundary_flux<F>(g: &GeometryMap, edges: &[Edge], cells: usize, q: usize, v: F) -> f64
where
    F: Fn(&Vector3<f64>) -> Vector3<f64>,
{
    let gp = gauss_on(q, 0.0, 1.0);
    let mut acc = 0.0;
    for &e in edges {
        let (lo, hi) = e.range(g);
        let h = (hi - lo) / cells as f64;
        for i in 0..cells {
            for &(a, w) in &gp {
                let bf = boundary_frame_at(g, e, lo + h * (i as f64 + a)).unwrap();
                acc += v(&bf.x).dot(&bf.co_normal) * bf.ds_scale * w * h;
            }
        }
    }
    acc
}

pub fn random_state(rng: &mut ChaCha8Rng, f: &SurfaceFrame) -> FieldPointState {
    let v = |rng: &mut ChaCha8Rng| Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
    let mat = |rng: &mut ChaCha8Rng| Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0));
    FieldPointState {
        u: v(rng),
        w: f.p * v(rng),
        // directional gradients are tangential from the right
        grad_u: mat(rng) * f.p,
        grad_w: mat(rng) * f.p,
    }
}

/// Moment, membrane force and shear force written out entry by entry in
/// Cartesian components.
pub fn component_resultants(
    f: &SurfaceFrame,
    mat: &Material,
    st: &FieldPointState,
) -> (Matrix3<f64>, Matrix3<f64>, Matrix3<f64>) {
    let nu = mat.poisson;
    let db = mat.bending_stiffness();
    let dm = mat.membrane_stiffness();
    let ds = mat.shear_stiffness();
    let hu = f.h * st.grad_u;
    let qu = f.q * st.grad_u;
    let gu = &st.grad_u;
    let gw = &st.grad_w;
    let mut m_dir = Matrix3::zeros();
    let mut n_dir = Matrix3::zeros();
    let mut q = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                let others: f64 = (0..3).filter(|&k| k != i).map(|k| gw[(k, k)] + hu[(k, k)]).sum();
                m_dir[(i, i)] = db * (gw[(i, i)] + hu[(i, i)] + nu * others);
                let others_u: f64 = (0..3).filter(|&k| k != i).map(|k| gu[(k, k)]).sum();
                n_dir[(i, i)] = dm * (gu[(i, i)] + nu * others_u);
                q[(i, i)] = 2.0 * ds * (f.n[i] * st.w[i] + qu[(i, i)]);
            } else {
                m_dir[(i, j)] = db * (1.0 - nu) / 2.0 * (gw[(i, j)] + gw[(j, i)] + hu[(i, j)] + hu[(j, i)]);
                n_dir[(i, j)] = dm * (1.0 - nu) / 2.0 * (gu[(i, j)] + gu[(j, i)]);
                q[(i, j)] = ds * (f.n[i] * st.w[j] + f.n[j] * st.w[i] + qu[(i, j)] + qu[(j, i)]);
            }
        }
    }
    (f.p * m_dir * f.p, f.p * n_dir * f.p, q)
}

/// Largest `|M_ij - M_ji|` of the assembled matrix and the largest `|M_ij|`.
pub fn max_asymmetry(p: &ShellProblem) -> (f64, f64) {
    let sys = assemble(p).unwrap();
    let n = sys.dim();
    let mut dense = vec![0.0; n * n];
    for (i, j, v) in sys.triplets() {
        dense[i * n + j] += v;
    }
    let scale = dense.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((dense[i * n + j] - dense[j * n + i]).abs());
        }
    }
    (worst, scale)
}

/// Flat plate with the affine in-plane displacement `u = G x` prescribed on
/// every edge and no loads. Returns the largest pointwise deviation from the
/// affine field over `u`, `w`, `m` and `q`.
pub fn membrane_patch_error(degree: usize, elements: usize) -> f64 {
    let g = [[0.01, -0.02, 0.0], [0.03, 0.015, 0.0], [0.0, 0.0, 0.0]];
    let bc = |direction, gradient: [f64; 3]| DirichletSpec {
        field: Field::U,
        direction,
        value: ScalarField::Affine {
            constant: 0.0,
            gradient,
        },
    };
    let w0 = |direction| DirichletSpec {
        field: Field::W,
        direction,
        value: ScalarField::Constant(0.0),
    };
    let edge = EdgeCondition::Custom {
        dirichlet: vec![
            bc(Direction::X, g[0]),
            bc(Direction::Y, g[1]),
            bc(Direction::Z, g[2]),
            w0(Direction::Tangent),
            w0(Direction::CoNormal),
        ],
        traction: None,
        moment: None,
    };
    let mut p = ShellProblem::benchmark(Benchmark::ScordelisLo, degree, elements);
    p.geometry = GeometryMap::Plane {
        r: (0.0, 2.0),
        s: (-1.0, 0.5),
    };
    p.material = Material::new(1000.0, 0.3, 1.0, 0.1).unwrap();
    p.area_load = VectorField::default();
    p.point_constraints.clear();
    p.edges = EdgeConditions::all(edge);
    let (sol, _, _) = solve_problem(&p).unwrap();
    let mut worst = 0.0f64;
    for &(r, s) in &[(0.3, -0.7), (1.1, 0.2), (1.9, -0.05), (0.0, 0.5), (2.0, -1.0)] {
        let e = evaluate_solution(&sol, r, s).unwrap();
        let x = e.frame.x;
        for i in 0..3 {
            let exact: f64 = (0..3).map(|j| g[i][j] * x[j]).sum();
            worst = worst.max((e.state.u[i] - exact).abs());
        }
        // constant membrane force, nothing else; moments scaled by the
        // membrane-to-bending stiffness ratio
        let ratio = p.material.thickness.powi(2);
        worst = worst.max(e.state.w.norm());
        worst = worst.max(e.resultants.m.norm() / (ratio * e.resultants.n_eff.norm()));
        worst = worst.max(e.resultants.q.norm() / e.resultants.n_eff.norm());
    }
    worst
}
