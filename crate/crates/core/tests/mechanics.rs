mod common;

use nalgebra::{Matrix3, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdc_shell::geometry::frame_at;
use tdc_shell::mechanics::{energy_density, stress_resultants, FieldPointState, Material, StressResultants};
use tdc_shell::postprocess::principal_moments;

use common::{benchmark_geometries, component_resultants, random_state};

#[test]
fn component_and_tensor_resultants_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mats = [
        Material::new(4.32e8, 0.0, 1.0, 0.25).unwrap(),
        Material::new(10.0, 0.3, 1.0, 0.1).unwrap(),
        Material::new(2.0e11, 0.3, 5.0 / 6.0, 0.01).unwrap(),
    ];
    for (k, (name, g)) in benchmark_geometries().into_iter().enumerate() {
        let mat = mats[k];
        let ((r0, r1), (s0, s1)) = g.domain();
        for _ in 0..200 {
            let f = frame_at(&g, rng.random_range(r0..=r1), rng.random_range(s0..=s1), false).unwrap();
            let st = random_state(&mut rng, &f);
            let res: StressResultants = stress_resultants(&f, &mat, &st);
            let (m, n, q) = component_resultants(&f, &mat, &st);
            let close = |a: &Matrix3<f64>, b: &Matrix3<f64>| (a - b).norm() <= 1e-12 * b.norm().max(f64::MIN_POSITIVE);
            assert!(close(&res.m, &m), "{name}: moment");
            assert!(close(&res.n_eff, &n), "{name}: membrane force");
            assert!(close(&res.q, &q), "{name}: shear force");
            assert!((res.n_real - (n + f.h * m)).norm() <= 1e-12 * n.norm().max(1e-300) + 1e-12 * (f.h * m).norm());
            // both in-plane tensors are symmetric and annihilate the normal
            assert!((res.m * f.n).norm() <= 1e-12 * res.m.norm());
            assert!((res.n_real * f.n).norm() <= 1e-12 * res.n_real.norm());
        }
    }
}

/// Eigenvalues of a symmetric 3x3 matrix by the trigonometric closed form.
fn closed_form_eigenvalues(a: &Matrix3<f64>) -> [f64; 3] {
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = (a - Matrix3::identity() * q) / p;
    let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

#[test]
fn principal_moments_of_isotropic_and_random_states() {
    let g = &benchmark_geometries()[2].1;
    let f = frame_at(g, 0.3, 0.4, false).unwrap();
    let mut res = StressResultants {
        m: f.p * 2.5,
        n_eff: Matrix3::zeros(),
        n_real: Matrix3::zeros(),
        q: Matrix3::zeros(),
    };
    let pm = principal_moments(&res);
    assert!((pm.m1 - 2.5).abs() < 1e-14 && (pm.m2 - 2.5).abs() < 1e-14 && pm.consistent);
    res.m = Matrix3::zeros();
    let pm = principal_moments(&res);
    assert_eq!((pm.m1, pm.m2), (0.0, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mat = Material::new(10.0, 0.3, 1.0, 0.1).unwrap();
    for _ in 0..100 {
        let st = random_state(&mut rng, &f);
        let r = stress_resultants(&f, &mat, &st);
        let pm = principal_moments(&r);
        assert!(pm.consistent);
        let mut ev = closed_form_eigenvalues(&r.m);
        ev.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        let scale = ev[0].abs();
        assert!((pm.m1 - ev[0]).abs() < 1e-10 * scale);
        assert!((pm.m2 - ev[1]).abs() < 1e-10 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strain_energy_density_is_nonnegative(seed in any::<u64>(), which in 0usize..3, nu in 0.0..0.5f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, g) = &benchmark_geometries()[which];
        let ((r0, r1), (s0, s1)) = g.domain();
        let f = frame_at(g, rng.random_range(r0..=r1), rng.random_range(s0..=s1), false).unwrap();
        let st = random_state(&mut rng, &f);
        let mat = Material::new(1.0, nu, 1.0, 0.1).unwrap();
        prop_assert!(energy_density(&f, &mat, &st) >= -1e-15);
    }

    #[test]
    fn rigid_translation_and_rotation_are_strain_free(seed in any::<u64>(), which in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, g) = &benchmark_geometries()[which];
        let ((r0, r1), (s0, s1)) = g.domain();
        let f = frame_at(g, rng.random_range(r0..=r1), rng.random_range(s0..=s1), false).unwrap();
        // u = c + theta x x, w = theta x n
        let theta = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let skew = theta.cross_matrix();
        let st = FieldPointState {
            u: Vector3::new(0.3, -0.2, 0.1) + theta.cross(&f.x),
            w: theta.cross(&f.n),
            grad_u: skew * f.p,
            grad_w: skew * f.h,
        };
        let mat = Material::new(1.0, 0.3, 1.0, 0.1).unwrap();
        prop_assert!(energy_density(&f, &mat, &st).abs() < 1e-14);
    }
}
