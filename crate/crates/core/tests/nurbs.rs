use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdc_shell::nurbs::{elevate_degree, refine_uniform, KnotVector, NurbsPatch, TensorBasis, Univariate};

fn cylinder() -> NurbsPatch {
    NurbsPatch::cylinder_sector(25.0, 50.0, 50f64.to_radians(), 130f64.to_radians()).unwrap()
}

/// A bumpy bicubic patch with non-uniform weights.
fn wavy() -> NurbsPatch {
    let kv = KnotVector::new(2, vec![0.0, 0.0, 0.0, 0.4, 1.0, 1.0, 1.0]).unwrap();
    let mut cps = Vec::new();
    let mut ws = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let (x, y) = (i as f64 / 3.0, j as f64 / 3.0);
            cps.push([x, y, 0.2 * ((i * j) % 3) as f64 - 0.1 * i as f64]);
            ws.push(1.0 + 0.3 * ((i + 2 * j) % 3) as f64);
        }
    }
    NurbsPatch::new(kv.clone(), kv, cps, ws).unwrap()
}

fn random_points(n: usize, seed: u64, dom: ((f64, f64), (f64, f64))) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            (
                rng.random_range(dom.0 .0..=dom.0 .1),
                rng.random_range(dom.1 .0..=dom.1 .1),
            )
        })
        .collect()
}

fn max_point_gap(a: &NurbsPatch, b: &NurbsPatch, pts: &[(f64, f64)]) -> f64 {
    pts.iter()
        .map(|&(r, s)| (a.point(r, s).unwrap() - b.point(r, s).unwrap()).norm())
        .fold(0.0, f64::max)
}

#[test]
fn quarter_circle_weights_reproduce_the_circle() {
    let p = cylinder();
    let dom = p.domain();
    for (r, s) in random_points(200, 1, dom) {
        let x = p.point(r, s).unwrap();
        assert!(((x.x * x.x + x.z * x.z).sqrt() - 25.0).abs() < 1e-12);
        assert!((x.y - r).abs() < 1e-12);
    }
}

#[test]
fn degree_elevation_two_to_four_keeps_the_surface() {
    let p = wavy();
    let e = elevate_degree(&p, 4).unwrap();
    assert_eq!(e.degrees(), (4, 4));
    let pts = random_points(100, 2, p.domain());
    assert!(max_point_gap(&p, &e, &pts) < 1e-12);
    let c = elevate_degree(&cylinder(), 4).unwrap();
    let cpts = random_points(100, 4, c.domain());
    assert!(max_point_gap(&cylinder(), &c, &cpts) < 1e-11);
}

#[test]
fn refinement_and_elevation_commute_geometrically() {
    let p = wavy();
    let a = refine_uniform(&elevate_degree(&p, 3).unwrap(), 4).unwrap();
    let b = elevate_degree(&refine_uniform(&p, 4).unwrap(), 3).unwrap();
    let pts = random_points(100, 3, p.domain());
    assert!(max_point_gap(&a, &p, &pts) < 1e-12);
    assert!(max_point_gap(&a, &b, &pts) < 1e-12);
}

#[test]
fn uniform_refinement_span_counts() {
    for n in [2, 4, 8] {
        let r = refine_uniform(&cylinder(), n).unwrap();
        assert_eq!(r.kv_r().breakpoints().len(), n + 1);
        assert_eq!(r.kv_s().breakpoints().len(), n + 1);
        assert_eq!(r.basis().elements().len(), n * n);
    }
}

#[test]
fn periodic_basis_is_smooth_across_the_seam() {
    let b = TensorBasis::uniform(4, 6, (-1.0, 1.0), (0.0, 1.0), true).unwrap();
    assert_eq!(b.r.num_functions(), 6);
    let eps = 1e-9;
    let lo = b.eval(-1.0 + eps, 0.3, 3).unwrap();
    let hi = b.eval(1.0 - eps, 0.3, 3).unwrap();
    for k in 0..10 {
        let total = |e: &tdc_shell::nurbs::BasisEval, id: usize| {
            e.ids.iter().position(|&i| i == id).map(|j| e.ders[k][j]).unwrap_or(0.0)
        };
        for id in 0..b.num_functions() {
            let (x, y) = (total(&lo, id), total(&hi, id));
            assert!((x - y).abs() < 1e-5 * (1.0 + x.abs()), "partial {k} of function {id}: {x} vs {y}");
        }
    }
}

fn fd_check(b: &TensorBasis, r: f64, s: f64) {
    let h = 1e-6;
    let e = b.eval(r, s, 2).unwrap();
    let er = [b.eval(r + h, s, 1).unwrap(), b.eval(r - h, s, 1).unwrap()];
    let es = [b.eval(r, s + h, 1).unwrap(), b.eval(r, s - h, 1).unwrap()];
    let get = |ev: &tdc_shell::nurbs::BasisEval, k: usize, id: usize| {
        ev.ids.iter().position(|&i| i == id).map(|j| ev.ders[k][j]).unwrap_or(0.0)
    };
    for &id in &e.ids {
        // first derivatives from values, second from first derivatives
        let fr = (get(&er[0], 0, id) - get(&er[1], 0, id)) / (2.0 * h);
        let fs = (get(&es[0], 0, id) - get(&es[1], 0, id)) / (2.0 * h);
        let frr = (get(&er[0], 1, id) - get(&er[1], 1, id)) / (2.0 * h);
        let frs = (get(&es[0], 1, id) - get(&es[1], 1, id)) / (2.0 * h);
        let fss = (get(&es[0], 2, id) - get(&es[1], 2, id)) / (2.0 * h);
        let scale = 1.0 + get(&e, 3, id).abs() + get(&e, 5, id).abs();
        assert!((get(&e, 1, id) - fr).abs() < 1e-6 * scale);
        assert!((get(&e, 2, id) - fs).abs() < 1e-6 * scale);
        assert!((get(&e, 3, id) - frr).abs() < 1e-5 * scale);
        assert!((get(&e, 4, id) - frs).abs() < 1e-5 * scale);
        assert!((get(&e, 5, id) - fss).abs() < 1e-5 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_basis_partitions_unity(r in 0.0..1.0f64, s in 0.0..1.0f64) {
        let p = refine_uniform(&wavy(), 3).unwrap();
        let e = p.eval_basis(r, s, 2).unwrap();
        prop_assert!((e.ders[0].iter().sum::<f64>() - 1.0).abs() < 1e-13);
        for k in 1..6 {
            prop_assert!(e.ders[k].iter().sum::<f64>().abs() < 1e-10);
        }
        prop_assert!(e.ders[0].iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn periodic_basis_partitions_unity(p in 2usize..=6, n in 3usize..=9, r in -1.0..1.0f64, s in 0.0..1.0f64) {
        let b = TensorBasis::uniform(p, n, (-1.0, 1.0), (0.0, 1.0), true).unwrap();
        let e = b.eval(r, s, 3).unwrap();
        prop_assert_eq!(e.len(), (p + 1) * (p + 1));
        prop_assert!((e.values().iter().sum::<f64>() - 1.0).abs() < 1e-13);
        prop_assert!(e.ders[9].iter().sum::<f64>().abs() < 1e-8);
    }

    #[test]
    fn derivatives_match_finite_differences(r in 0.05..0.95f64, s in 0.05..0.95f64) {
        let p = refine_uniform(&elevate_degree(&wavy(), 3).unwrap(), 2).unwrap();
        fd_check(&p.basis(), r, s);
        fd_check(&TensorBasis::uniform(3, 5, (0.0, 1.0), (0.0, 1.0), true).unwrap(), r, s);
    }

    #[test]
    fn knot_insertion_keeps_points(n in 1usize..6, r in 0.0..1.0f64, s in 0.0..1.0f64) {
        let p = wavy();
        let q = refine_uniform(&p, n).unwrap();
        prop_assert!((p.point(r, s).unwrap() - q.point(r, s).unwrap()).norm() < 1e-12);
    }
}
