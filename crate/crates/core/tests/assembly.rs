mod common;

use tdc_shell::assembly::assemble;
use tdc_shell::error::Error;
use tdc_shell::geometry::GeometryMap;
use tdc_shell::postprocess::{evaluate_solution, solve_problem};
use tdc_shell::problem::{Benchmark, ConstraintMode, EdgeCondition, EdgeConditions, ShellProblem, VectorField};
use tdc_shell::solver::solve;

#[test]
fn system_matrix_is_symmetric() {
    for case in Benchmark::ALL {
        for mode in [ConstraintMode::Lagrange, ConstraintMode::Penalty { alpha: 1e6 }] {
            let p = ShellProblem::benchmark(case, 3, 2).with_constraint(mode);
            let (asym, scale) = common::max_asymmetry(&p);
            assert!(asym <= 1e-12 * scale, "{case:?} {mode}: {asym} vs {scale}");
        }
    }
}

fn plate(degree: usize, elements: usize) -> ShellProblem {
    let mut p = ShellProblem::benchmark(Benchmark::ScordelisLo, degree, elements);
    p.geometry = GeometryMap::Plane {
        r: (0.0, 2.0),
        s: (-1.0, 0.5),
    };
    p.material.young = 1000.0;
    p.material.poisson = 0.3;
    p.material.thickness = 0.1;
    p.area_load = VectorField::default();
    p.point_constraints.clear();
    p
}

#[test]
fn membrane_patch_test_reproduces_affine_displacement() {
    for (deg, n) in [(2, 3), (4, 2)] {
        let err = common::membrane_patch_error(deg, n);
        assert!(err < 1e-10, "p{deg} n{n}: {err}");
    }
}

#[test]
fn zero_load_gives_zero_solution() {
    let mut p = ShellProblem::benchmark(Benchmark::ScordelisLo, 3, 4);
    p.area_load = VectorField::default();
    let (sol, _, _) = solve_problem(&p).unwrap();
    assert!(sol.x.iter().all(|v| *v == 0.0));
}

#[test]
fn unsupported_plate_is_singular() {
    let mut p = plate(2, 2);
    p.edges = EdgeConditions::all(EdgeCondition::Free);
    p.area_load = VectorField::Constant([0.0, 0.0, 1.0]);
    let sys = assemble(&p).unwrap();
    match solve(&sys) {
        Err(Error::Singular { .. }) => {}
        other => panic!("expected a singular system, got {other:?}"),
    }
}

#[test]
fn load_vector_partitions_total_force() {
    // the u-basis sums to one, so the z-entries add up to the resultant load
    let p = ShellProblem::benchmark(Benchmark::ScordelisLo, 3, 4);
    let sys = assemble(&p).unwrap();
    let nb = sys.basis.num_functions();
    let total: f64 = (0..nb).map(|a| sys.rhs[sys.dofs.u(a, 2)]).sum();
    let area = 50.0 * 25.0 * 80f64.to_radians();
    assert!((total - (-90.0 * area)).abs() < 1e-9 * 90.0 * area, "{total}");
    let tx: f64 = (0..nb).map(|a| sys.rhs[sys.dofs.u(a, 0)]).sum();
    assert!(tx.abs() < 1e-9 * 90.0 * area);
}

#[test]
fn clamped_plate_deflects_along_the_load() {
    let mut p = plate(3, 4);
    p.edges = EdgeConditions::all(EdgeCondition::Clamped);
    p.area_load = VectorField::Constant([0.0, 0.0, -1.0]);
    let (sol, report, sys) = solve_problem(&p).unwrap();
    assert!(report.residual_norm_rel < 1e-10);
    let mid = evaluate_solution(&sol, 1.0, -0.25).unwrap();
    assert!(mid.state.u.z < 0.0);
    assert!(mid.state.u.x.abs() < 1e-12 && mid.state.u.y.abs() < 1e-12);
    assert!(sys.physical_energy(&sol.x) > 0.0);
}
