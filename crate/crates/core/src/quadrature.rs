//! Gauss-Legendre rules.

use crate::error::{Error, Result};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess followed by Newton on P_n.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `P_n(z)` and `P_n'(z)`.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Gauss points mapped to `[a, b]`.
pub fn gauss_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    x.iter().zip(&w).map(|(&xi, &wi)| (a + h * (xi + 1.0), h * wi)).collect()
}

/// Tensor Gauss rule on the reference span `[0, 1]^2` with
/// `p + 1 + order_bump` points per direction.
pub fn quadrature_rule(p_r: usize, p_s: usize, order_bump: i32) -> Result<Vec<([f64; 2], f64)>> {
    let nr = p_r as i64 + 1 + order_bump as i64;
    let ns = p_s as i64 + 1 + order_bump as i64;
    if p_r == 0 || p_s == 0 || nr < 1 || ns < 1 {
        return Err(Error::InvalidArgument(format!(
            "quadrature needs degrees >= 1 and at least one point per direction (p = ({p_r}, {p_s}), bump {order_bump})"
        )));
    }
    let gr = gauss_on(nr as usize, 0.0, 1.0);
    let gs = gauss_on(ns as usize, 0.0, 1.0);
    let mut out = Vec::with_capacity(gr.len() * gs.len());
    for &(r, wr) in &gr {
        for &(s, ws) in &gs {
            out.push(([r, s], wr * ws));
        }
    }
    Ok(out)
}

/// Points per direction used for a span of degree `p` with the given bump.
pub fn points_per_direction(p: usize, order_bump: i32) -> Result<usize> {
    let n = p as i64 + 1 + order_bump as i64;
    if n < 1 {
        return Err(Error::InvalidArgument(format!("quadrature bump {order_bump} leaves no points for degree {p}")));
    }
    Ok(n as usize)
}
