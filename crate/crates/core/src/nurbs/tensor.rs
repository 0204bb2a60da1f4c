use serde::{Deserialize, Serialize};

use super::knots::{Basis1d, KnotVector, PeriodicKnots, Univariate};
use crate::error::{Error, Result};
use crate::taylor::{partial_index, partials_up_to, PARTIALS};

/// Highest parametric derivative order supported by the evaluators.
pub const MAX_DERIV: usize = 3;

/// Active basis functions at one parameter point.
///
/// `ders[k][j]` is the partial derivative number `k` (see
/// [`crate::taylor::PARTIALS`]) of the active function `ids[j]`.
#[derive(Clone, Debug)]
pub struct BasisEval {
    pub ids: Vec<usize>,
    pub ders: Vec<Vec<f64>>,
    pub max_deriv: usize,
}

impl BasisEval {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.ders[0]
    }

    /// Derivative `d^(i+j) / dr^i ds^j` of every active function.
    pub fn partial(&self, i: usize, j: usize) -> &[f64] {
        &self.ders[partial_index(i, j)]
    }
}

/// One knot span of the tensor-product patch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Element {
    pub index: (usize, usize),
    pub r: (f64, f64),
    pub s: (f64, f64),
}

impl Element {
    pub fn area(&self) -> f64 {
        (self.r.1 - self.r.0) * (self.s.1 - self.s.0)
    }

    pub fn midpoint(&self) -> (f64, f64) {
        (0.5 * (self.r.0 + self.r.1), 0.5 * (self.s.0 + self.s.1))
    }
}

/// Tensor-product (optionally rational) spline space used for the physical
/// fields. Global function ids are row-major over the control grid:
/// `id = i_r * n_s + i_s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorBasis {
    pub r: Basis1d,
    pub s: Basis1d,
    pub weights: Option<Vec<f64>>,
}

impl TensorBasis {
    pub fn new(r: Basis1d, s: Basis1d, weights: Option<Vec<f64>>) -> Result<Self> {
        if let Some(w) = &weights {
            if w.len() != r.num_functions() * s.num_functions() {
                return Err(Error::InvalidPatch(format!(
                    "{} weights for {} x {} functions",
                    w.len(),
                    r.num_functions(),
                    s.num_functions()
                )));
            }
            if w.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidPatch("weights must be positive".into()));
            }
        }
        Ok(Self { r, s, weights })
    }

    /// Polynomial B-spline space of degree `p` with `n` equal spans per
    /// direction; the `r` direction is periodic when requested.
    pub fn uniform(p: usize, n: usize, r_dom: (f64, f64), s_dom: (f64, f64), periodic_r: bool) -> Result<Self> {
        let r = if periodic_r {
            Basis1d::Periodic(PeriodicKnots::new(p, n, r_dom.0, r_dom.1)?)
        } else {
            Basis1d::Clamped(KnotVector::uniform(p, n, r_dom.0, r_dom.1)?)
        };
        let s = Basis1d::Clamped(KnotVector::uniform(p, n, s_dom.0, s_dom.1)?);
        Self::new(r, s, None)
    }

    pub fn num_functions(&self) -> usize {
        self.r.num_functions() * self.s.num_functions()
    }

    pub fn grid(&self) -> (usize, usize) {
        (self.r.num_functions(), self.s.num_functions())
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.r.degree(), self.s.degree())
    }

    pub fn domain(&self) -> ((f64, f64), (f64, f64)) {
        (self.r.domain(), self.s.domain())
    }

    pub fn id(&self, ir: usize, is: usize) -> usize {
        ir * self.s.num_functions() + is
    }

    pub fn elements(&self) -> Vec<Element> {
        let rs = self.r.spans();
        let ss = self.s.spans();
        let mut out = Vec::with_capacity(rs.len() * ss.len());
        for (er, &r) in rs.iter().enumerate() {
            for (es, &s) in ss.iter().enumerate() {
                out.push(Element {
                    index: (er, es),
                    r,
                    s,
                });
            }
        }
        out
    }

    pub fn eval(&self, r: f64, s: f64, max_deriv: usize) -> Result<BasisEval> {
        eval_tensor(&self.r, &self.s, self.weights.as_deref(), r, s, max_deriv)
    }

    /// Ids of the functions whose trace on the given side of the parameter
    /// square is not identically zero.
    pub fn edge_functions(&self, edge: crate::problem::Edge) -> Vec<usize> {
        use crate::problem::Edge;
        let (nr, ns) = self.grid();
        let mut ids = Vec::new();
        match edge {
            Edge::RMin | Edge::RMax => {
                for ir in self.r.end_functions(edge == Edge::RMax) {
                    ids.extend((0..ns).map(|is| self.id(ir, is)));
                }
            }
            Edge::SMin | Edge::SMax => {
                for is in self.s.end_functions(edge == Edge::SMax) {
                    ids.extend((0..nr).map(|ir| self.id(ir, is)));
                }
            }
        }
        ids
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Evaluates the tensor-product basis (rational when `weights` is given) at
/// `(r, s)` with all mixed partials of total order `<= max_deriv`.
pub fn eval_tensor<R: Univariate, S: Univariate>(
    rb: &R,
    sb: &S,
    weights: Option<&[f64]>,
    r: f64,
    s: f64,
    max_deriv: usize,
) -> Result<BasisEval> {
    if max_deriv > MAX_DERIV {
        return Err(Error::DerivativeOrder {
            requested: max_deriv,
            available: MAX_DERIV,
        });
    }
    let (rd, sd) = (rb.domain(), sb.domain());
    let inside = |t: f64, (a, b): (f64, f64)| {
        let tol = 1e-12 * (b - a).abs().max(1.0);
        t >= a - tol && t <= b + tol
    };
    if !inside(r, rd) || !inside(s, sd) {
        return Err(Error::OutsideDomain {
            r,
            s,
            r0: rd.0,
            r1: rd.1,
            s0: sd.0,
            s1: sd.1,
        });
    }
    let (ir, dr) = rb.eval(r, max_deriv)?;
    let (is, ds) = sb.eval(s, max_deriv)?;
    let ns = sb.num_functions();
    let npart = partials_up_to(max_deriv);
    let nloc = ir.len() * is.len();

    let mut ids = Vec::with_capacity(nloc);
    for &a in &ir {
        for &b in &is {
            ids.push(a * ns + b);
        }
    }
    let mut ders = vec![vec![0.0; nloc]; npart];
    for (k, &(i, j)) in PARTIALS.iter().take(npart).enumerate() {
        let row = &mut ders[k];
        let mut loc = 0;
        for a in 0..ir.len() {
            for b in 0..is.len() {
                row[loc] = dr[i][a] * ds[j][b];
                loc += 1;
            }
        }
    }

    if let Some(w) = weights {
        // Numerators A = w N and the weight function W with its derivatives.
        for row in ders.iter_mut() {
            for (v, &id) in row.iter_mut().zip(&ids) {
                *v *= w[id];
            }
        }
        let wsum: Vec<f64> = ders.iter().map(|row| row.iter().sum()).collect();
        let mut rat = vec![vec![0.0; nloc]; npart];
        for (k, &(i, j)) in PARTIALS.iter().take(npart).enumerate() {
            for loc in 0..nloc {
                let mut v = ders[k][loc];
                for a in 0..=i {
                    for b in 0..=j {
                        if a == 0 && b == 0 {
                            continue;
                        }
                        v -= binom(i, a) * binom(j, b) * wsum[partial_index(a, b)] * rat[partial_index(i - a, j - b)][loc];
                    }
                }
                rat[k][loc] = v / wsum[0];
            }
        }
        ders = rat;
    }

    Ok(BasisEval { ids, ders, max_deriv })
}
