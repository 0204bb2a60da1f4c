//! Knot insertion and degree elevation. Both operate on the homogeneous
//! control net one parametric direction at a time and leave the mapped
//! surface unchanged.

use nalgebra::{DMatrix, DVector};

use super::knots::{ders_basis_funs, KnotVector, Univariate};
use super::patch::NurbsPatch;
use crate::error::{Error, Result};

type Homog = [f64; 4];

/// Boehm insertion of a single knot into a curve (Piegl & Tiller A5.1, r = 1).
fn insert_knot(kv: &KnotVector, pts: &[Homog], u: f64) -> Result<(KnotVector, Vec<Homog>)> {
    let p = kv.degree();
    let knots = kv.knots();
    let k = kv.find_span(u);
    let s = kv.multiplicity(u);
    let mut new_pts = Vec::with_capacity(pts.len() + 1);
    new_pts.extend_from_slice(&pts[..=k - p]);
    for i in k - p + 1..=k - s {
        let alpha = (u - knots[i]) / (knots[i + p] - knots[i]);
        let mut q = [0.0; 4];
        for c in 0..4 {
            q[c] = alpha * pts[i][c] + (1.0 - alpha) * pts[i - 1][c];
        }
        new_pts.push(q);
    }
    new_pts.extend_from_slice(&pts[k - s..]);
    let mut new_knots = knots.to_vec();
    new_knots.insert(k + 1, u);
    Ok((KnotVector::new(p, new_knots)?, new_pts))
}

fn greville(kv: &KnotVector) -> Vec<f64> {
    let p = kv.degree();
    let u = kv.knots();
    (0..kv.num_functions())
        .map(|i| u[i + 1..=i + p].iter().sum::<f64>() / p as f64)
        .collect()
}

fn curve_point(kv: &KnotVector, pts: &[Homog], t: f64) -> Homog {
    let p = kv.degree();
    let span = kv.find_span(t);
    let n = ders_basis_funs(kv.knots(), p, span, t, 0);
    let mut out = [0.0; 4];
    for j in 0..=p {
        for c in 0..4 {
            out[c] += n[0][j] * pts[span - p + j][c];
        }
    }
    out
}

/// Raises the degree of a curve by `t`. Every distinct knot gains
/// multiplicity `t`, so the elevated space contains the original one and the
/// curve is recovered exactly by interpolation at the Greville abscissae.
fn elevate_curve(kv: &KnotVector, pts: &[Homog], t: usize) -> Result<(KnotVector, Vec<Homog>)> {
    if t == 0 {
        return Ok((kv.clone(), pts.to_vec()));
    }
    let p = kv.degree();
    let q = p + t;
    let mut knots = Vec::new();
    for b in kv.breakpoints() {
        let m = kv.multiplicity(b) + t;
        knots.extend(std::iter::repeat_n(b, m));
    }
    let new_kv = KnotVector::new(q, knots)?;
    let xi = greville(&new_kv);
    let n = new_kv.num_functions();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (row, &x) in xi.iter().enumerate() {
        let span = new_kv.find_span(x);
        let vals = ders_basis_funs(new_kv.knots(), q, span, x, 0);
        for j in 0..=q {
            a[(row, span - q + j)] = vals[0][j];
        }
    }
    let lu = a.lu();
    let mut new_pts = vec![[0.0; 4]; n];
    for c in 0..4 {
        let rhs = DVector::from_iterator(n, xi.iter().map(|&x| curve_point(kv, pts, x)[c]));
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidPatch("singular collocation matrix in degree elevation".into()))?;
        for i in 0..n {
            new_pts[i][c] = sol[i];
        }
    }
    Ok((new_kv, new_pts))
}

/// Applies a curve operation to every row (`along_r == false`) or column of the
/// control grid.
fn map_direction<F>(patch: &NurbsPatch, along_r: bool, op: F) -> Result<NurbsPatch>
where
    F: Fn(&KnotVector, &[Homog]) -> Result<(KnotVector, Vec<Homog>)>,
{
    let (nr, ns) = patch.grid();
    let pw = patch.homogeneous();
    // Operations that leave the knot vector alone leave the net alone too;
    // skip them so that the control points are not perturbed by roundoff.
    let (kv_in, first): (_, Vec<Homog>) = if along_r {
        (patch.kv_r(), (0..nr).map(|ir| pw[ir * ns]).collect())
    } else {
        (patch.kv_s(), pw[..ns].to_vec())
    };
    if op(kv_in, &first)?.0 == *kv_in {
        return Ok(patch.clone());
    }
    if along_r {
        let mut cols = Vec::with_capacity(ns);
        let mut kv_new = None;
        for is in 0..ns {
            let curve: Vec<Homog> = (0..nr).map(|ir| pw[ir * ns + is]).collect();
            let (kv, c) = op(patch.kv_r(), &curve)?;
            kv_new = Some(kv);
            cols.push(c);
        }
        let kv_r = kv_new.expect("patch has at least one column");
        let nr_new = kv_r.num_functions();
        let mut out = vec![[0.0; 4]; nr_new * ns];
        for (is, c) in cols.iter().enumerate() {
            for ir in 0..nr_new {
                out[ir * ns + is] = c[ir];
            }
        }
        NurbsPatch::from_homogeneous(kv_r, patch.kv_s().clone(), &out)
    } else {
        let mut out = Vec::new();
        let mut kv_new = None;
        for ir in 0..nr {
            let (kv, c) = op(patch.kv_s(), &pw[ir * ns..(ir + 1) * ns])?;
            kv_new = Some(kv);
            out.extend(c);
        }
        NurbsPatch::from_homogeneous(patch.kv_r().clone(), kv_new.expect("patch has at least one row"), &out)
    }
}

fn refine_curve(kv: &KnotVector, pts: &[Homog], n: usize) -> Result<(KnotVector, Vec<Homog>)> {
    let (a, b) = kv.domain();
    let tol = 1e-12 * (b - a);
    let mut kv = kv.clone();
    let mut pts = pts.to_vec();
    for k in 1..n {
        let u = a + (b - a) * k as f64 / n as f64;
        if kv.knots().iter().any(|&x| (x - u).abs() <= tol) {
            continue;
        }
        let (kv2, p2) = insert_knot(&kv, &pts, u)?;
        kv = kv2;
        pts = p2;
    }
    Ok((kv, pts))
}

/// Inserts the breakpoints of a uniform `n_per_side` subdivision in both
/// directions. Breakpoints that already exist are kept as they are.
pub fn refine_uniform(patch: &NurbsPatch, n_per_side: usize) -> Result<NurbsPatch> {
    if n_per_side == 0 {
        return Err(Error::InvalidArgument("n_per_side must be at least 1".into()));
    }
    let p = map_direction(patch, true, |kv, c| refine_curve(kv, c, n_per_side))?;
    map_direction(&p, false, |kv, c| refine_curve(kv, c, n_per_side))
}

/// Elevates both directions to degree `target_p`.
pub fn elevate_degree(patch: &NurbsPatch, target_p: usize) -> Result<NurbsPatch> {
    let (pr, ps) = patch.degrees();
    if target_p < pr || target_p < ps {
        return Err(Error::InvalidArgument(format!(
            "target degree {target_p} is below the current degrees ({pr}, {ps})"
        )));
    }
    let p = map_direction(patch, true, |kv, c| elevate_curve(kv, c, target_p - pr))?;
    map_direction(&p, false, |kv, c| elevate_curve(kv, c, target_p - ps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc() -> NurbsPatch {
        NurbsPatch::cylinder_sector(25.0, 50.0, 50f64.to_radians(), 130f64.to_radians()).unwrap()
    }

    #[test]
    fn refine_to_one_span_is_identity() {
        let p = arc();
        assert_eq!(refine_uniform(&p, 1).unwrap(), p);
    }

    #[test]
    fn elevate_to_same_degree_is_identity_on_quadratic() {
        let p = elevate_degree(&arc(), 2).unwrap();
        let q = elevate_degree(&p, 2).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn elevation_below_current_degree_fails() {
        assert!(matches!(elevate_degree(&arc(), 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn knot_insertion_preserves_interior_points() {
        let p = arc();
        let q = refine_uniform(&p, 3).unwrap();
        assert_eq!(q.kv_s().spans().len(), 3);
        for &(r, s) in &[(10.0, 1.0), (33.0, 1.9), (49.0, 2.2)] {
            assert!((p.point(r, s).unwrap() - q.point(r, s).unwrap()).norm() < 1e-12 * 25.0);
        }
    }
}
