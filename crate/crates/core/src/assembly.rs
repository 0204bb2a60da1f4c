//! Discrete saddle-point system.
//!
//! Unknowns are ordered in blocks `[u, w, lambda_n, lambda_u, lambda_w, pins]`:
//! three Cartesian components of `u` and of `w` per basis function, one
//! tangentiality multiplier per basis function (Lagrange mode only), one
//! multiplier per basis function with support on a constrained edge for every
//! constrained (field, direction) pair, and one multiplier per point
//! constraint.

use std::collections::BTreeMap;
use std::ops::Range;

use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{boundary_frame_from, cross, frame_from_derivatives, SurfaceFrame};
use crate::nurbs::{TensorBasis, Univariate};
use crate::problem::{ConstraintMode, Direction, Edge, Field, ScalarField, ShellProblem};
use crate::quadrature::{gauss_on, points_per_direction};

/// Unknowns attached to one basis function: `u_x, u_y, u_z, w_x, w_y, w_z,
/// lambda_n`.
const BLOCK: usize = 7;

/// Multipliers for one constrained (field, direction) pair. The multiplier
/// space is the restriction of the field basis to the union of the edges on
/// which the pair is prescribed.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierGroup {
    pub field: Field,
    pub direction: Direction,
    /// Edges carrying this constraint with the prescribed value on each.
    pub edges: Vec<(Edge, ScalarField)>,
    /// Sorted basis function ids.
    pub functions: Vec<usize>,
    pub offset: usize,
}

impl MultiplierGroup {
    pub fn dof(&self, function: usize) -> Option<usize> {
        self.functions.binary_search(&function).ok().map(|k| self.offset + k)
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DofMap {
    pub num_functions: usize,
    pub normal_multiplier: bool,
    pub groups: Vec<MultiplierGroup>,
    pub point_offset: usize,
    pub num_points: usize,
    pub total: usize,
}

/// Index ranges of the blocks of the saddle-point system.
#[derive(Clone, Debug, PartialEq)]
pub struct Blocks {
    pub u: Range<usize>,
    pub w: Range<usize>,
    pub lambda_n: Range<usize>,
    pub lambda_u: Range<usize>,
    pub lambda_w: Range<usize>,
    pub points: Range<usize>,
}

impl DofMap {
    pub fn new(problem: &ShellProblem, basis: &TensorBasis) -> Result<Self> {
        let n = basis.num_functions();
        let normal_multiplier = matches!(problem.constraint, ConstraintMode::Lagrange);
        let mut by_key: BTreeMap<(Field, Direction), Vec<(Edge, ScalarField)>> = BTreeMap::new();
        for e in Edge::ALL {
            for d in problem.edges.get(e).dirichlet() {
                let list = by_key.entry((d.field, d.direction)).or_default();
                if list.iter().any(|(prev, _)| *prev == e) {
                    return Err(Error::InvalidProblem(format!(
                        "{:?}.{:?} prescribed twice on edge {e:?}",
                        d.field, d.direction
                    )));
                }
                list.push((e, d.value));
            }
        }
        let mut offset = if normal_multiplier { 7 * n } else { 6 * n };
        let mut groups = Vec::new();
        for ((field, direction), edges) in by_key {
            let mut functions: Vec<usize> = edges.iter().flat_map(|(e, _)| basis.edge_functions(*e)).collect();
            functions.sort_unstable();
            functions.dedup();
            if functions.is_empty() {
                continue;
            }
            let len = functions.len();
            groups.push(MultiplierGroup {
                field,
                direction,
                edges,
                functions,
                offset,
            });
            offset += len;
        }
        let num_points = problem.point_constraints.len();
        Ok(Self {
            num_functions: n,
            normal_multiplier,
            groups,
            point_offset: offset,
            num_points,
            total: offset + num_points,
        })
    }

    pub fn u(&self, a: usize, i: usize) -> usize {
        3 * a + i
    }

    pub fn w(&self, a: usize, i: usize) -> usize {
        3 * self.num_functions + 3 * a + i
    }

    pub fn field(&self, f: Field, a: usize, i: usize) -> usize {
        match f {
            Field::U => self.u(a, i),
            Field::W => self.w(a, i),
        }
    }

    pub fn lambda_n(&self, a: usize) -> Option<usize> {
        self.normal_multiplier.then_some(6 * self.num_functions + a)
    }

    /// Number of displacement and difference-vector unknowns.
    pub fn num_physical(&self) -> usize {
        6 * self.num_functions
    }

    pub fn blocks(&self) -> Blocks {
        let n = self.num_functions;
        let ln_end = if self.normal_multiplier { 7 * n } else { 6 * n };
        let lu_end = self
            .groups
            .iter()
            .filter(|g| g.field == Field::U)
            .map(|g| g.offset + g.len())
            .max()
            .unwrap_or(ln_end);
        Blocks {
            u: 0..3 * n,
            w: 3 * n..6 * n,
            lambda_n: 6 * n..ln_end,
            lambda_u: ln_end..lu_end,
            lambda_w: lu_end..self.point_offset,
            points: self.point_offset..self.total,
        }
    }
}

/// Assembled system `M x = b`.
#[derive(Clone, Debug)]
pub struct SaddleSystem {
    pub matrix: SparseColMat<usize, f64>,
    pub rhs: Vec<f64>,
    pub dofs: DofMap,
    pub basis: TensorBasis,
    pub warnings: Vec<String>,
}

impl SaddleSystem {
    pub fn dim(&self) -> usize {
        self.dofs.total
    }

    /// Stored entries as `(row, col, value)`, column by column.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let m = self.matrix.as_ref();
        let (cp, ri, v) = (m.col_ptr(), m.row_idx(), m.val());
        let mut out = Vec::with_capacity(v.len());
        for j in 0..self.dim() {
            for k in cp[j]..cp[j + 1] {
                out.push((ri[k], j, v[k]));
            }
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        csc_matvec(&self.matrix, x)
    }

    /// `1/2 x^T K x` over the displacement and difference-vector blocks.
    pub fn physical_energy(&self, x: &[f64]) -> f64 {
        let np = self.dofs.num_physical();
        let m = self.matrix.as_ref();
        let (cp, ri, v) = (m.col_ptr(), m.row_idx(), m.val());
        let mut e = 0.0;
        for j in 0..np {
            for k in cp[j]..cp[j + 1] {
                if ri[k] < np {
                    e += x[ri[k]] * v[k] * x[j];
                }
            }
        }
        0.5 * e
    }
}

pub(crate) fn csc_matvec(m: &SparseColMat<usize, f64>, x: &[f64]) -> Vec<f64> {
    let m = m.as_ref();
    let (cp, ri, v) = (m.col_ptr(), m.row_idx(), m.val());
    let mut y = vec![0.0; m.nrows()];
    for j in 0..m.ncols() {
        let xj = x[j];
        for k in cp[j]..cp[j + 1] {
            y[ri[k]] += v[k] * xj;
        }
    }
    y
}

/// Contribution of one knot span.
struct ElementTerms {
    ids: Vec<usize>,
    /// `6m x 6m`, local unknown `6 a + c`.
    k: Mat<f64>,
    /// `lambda_n` coupling `c[(a, 3 b + i)] = int N_a N_b n_i`.
    c: Vec<f64>,
    f: Vec<f64>,
}

struct Coefficients {
    membrane: (f64, f64),
    bending: (f64, f64),
    shear: f64,
    penalty: Option<f64>,
}

impl Coefficients {
    /// Square roots of the stiffness factors of each strain row.
    fn new(problem: &ShellProblem) -> Self {
        let m = &problem.material;
        let t = m.thickness;
        let (mu, lambda) = (m.mu(), m.lambda());
        Self {
            membrane: ((2.0 * mu * t).sqrt(), (lambda * t).sqrt()),
            bending: ((2.0 * mu * t.powi(3) / 12.0).sqrt(), (lambda * t.powi(3) / 12.0).sqrt()),
            shear: (2.0 * m.shear_stiffness()).sqrt(),
            penalty: match problem.constraint {
                ConstraintMode::Penalty { alpha } => Some(alpha.sqrt()),
                ConstraintMode::Lagrange => None,
            },
        }
    }

    fn rows(&self) -> usize {
        let mut r = 3 + 3 + 3;
        if self.membrane.1 > 0.0 {
            r += 2;
        }
        if self.penalty.is_some() {
            r += 1;
        }
        r
    }
}

/// Writes the strain rows of one quadrature point into `b` starting at row
/// `row0`, already scaled so that `b^T b` is the stiffness contribution.
///
/// Strains are expressed in the orthonormal frame `(t1, t2, n)`. With `g` the
/// tangential gradient of a basis function `N`:
/// - `u = N e_i`: membrane `sym(P e_i g^T)`, bending `sym(H e_i g^T)`,
///   shear `sym(n_i n g^T)`;
/// - `w = N e_i`: bending `sym(P e_i g^T)`, shear `sym(N n e_i^T)`.
#[allow(clippy::too_many_arguments)]
fn strain_rows(
    b: &mut Mat<f64>,
    row0: usize,
    co: &Coefficients,
    frame: &SurfaceFrame,
    t: &[Vector3<f64>; 2],
    vals: &[f64],
    grads: &[Vector3<f64>],
    sqrt_da: f64,
) {
    let n = frame.n;
    let ht = [frame.h.tr_mul(&t[0]), frame.h.tr_mul(&t[1])];
    let (cm, cml) = (co.membrane.0 * sqrt_da, co.membrane.1 * sqrt_da);
    let (cb, cbl) = (co.bending.0 * sqrt_da, co.bending.1 * sqrt_da);
    let cs = co.shear * sqrt_da;
    let has_lambda = co.membrane.1 > 0.0;
    let r2 = std::f64::consts::SQRT_2;
    for (a, (&nv, g)) in vals.iter().zip(grads).enumerate() {
        let gt = [g.dot(&t[0]), g.dot(&t[1])];
        for i in 0..3 {
            // in-plane tensor sym(v g^T) with v . t_alpha given
            let inplane = |v: [f64; 2]| [v[0] * gt[0], v[1] * gt[1], r2 * 0.5 * (v[0] * gt[1] + v[1] * gt[0])];
            let pe = [t[0][i], t[1][i]];
            let he = [ht[0][i], ht[1][i]];
            let em = inplane(pe);
            let eb = inplane(he);
            let cu = 6 * a + i;
            let cw = 6 * a + 3 + i;
            let mut r = row0;
            for k in 0..3 {
                b[(r + k, cu)] = cm * em[k];
                b[(r + 3 + k, cu)] = cb * eb[k];
                b[(r + 3 + k, cw)] = cb * em[k];
            }
            r += 6;
            // shear (n, t_alpha) components scaled by sqrt 2, then (n, n)
            for al in 0..2 {
                b[(r + al, cu)] = cs * r2 * 0.5 * n[i] * gt[al];
                b[(r + al, cw)] = cs * r2 * 0.5 * nv * t[al][i];
            }
            b[(r + 2, cw)] = cs * nv * n[i];
            r += 3;
            if has_lambda {
                b[(r, cu)] = cml * (em[0] + em[1]);
                b[(r + 1, cu)] = cbl * (eb[0] + eb[1]);
                b[(r + 1, cw)] = cbl * (em[0] + em[1]);
                r += 2;
            }
            if let Some(cp) = co.penalty {
                b[(r, cw)] = cp * sqrt_da * nv * n[i];
            }
        }
    }
}

fn element_terms(
    problem: &ShellProblem,
    basis: &TensorBasis,
    co: &Coefficients,
    el: &crate::nurbs::Element,
    rule: &(Vec<(f64, f64)>, Vec<(f64, f64)>),
) -> Result<ElementTerms> {
    let (pr, ps) = basis.degrees();
    let m = (pr + 1) * (ps + 1);
    let rows_per_qp = co.rows();
    let (gr, gs) = rule;
    let nqp = gr.len() * gs.len();
    let mut b = Mat::<f64>::zeros(rows_per_qp * nqp, 6 * m);
    let mut c = vec![0.0; m * 3 * m];
    let mut f = vec![0.0; 6 * m];
    let mut ids = Vec::new();
    let (hr, hs) = (el.r.1 - el.r.0, el.s.1 - el.s.0);
    let mut q = 0;
    let mut grads = vec![Vector3::zeros(); m];
    for &(xr, wr) in gr {
        for &(xs, ws) in gs {
            let (r, s) = (el.r.0 + hr * xr, el.s.0 + hs * xs);
            let d = problem.geometry.derivatives(r, s, 2)?;
            let frame = frame_from_derivatives(&d, (r, s))?;
            let be = basis.eval(r, s, 1)?;
            if ids.is_empty() {
                ids = be.ids.clone();
            }
            debug_assert_eq!(ids, be.ids);
            let da = frame.area * wr * ws * hr * hs;
            let (nr, ns) = (be.partial(1, 0), be.partial(0, 1));
            for a in 0..m {
                grads[a] = frame.contra.column(0) * nr[a] + frame.contra.column(1) * ns[a];
            }
            let t1 = frame.jac.column(0).normalize();
            let t = [t1, cross(&frame.n, &t1)];
            strain_rows(&mut b, q * rows_per_qp, co, &frame, &t, be.values(), &grads, da.sqrt());
            let fv = problem.area_load.eval(&frame.x);
            let cv = problem.moment_load.eval(&frame.x);
            let vals = be.values();
            for a in 0..m {
                for i in 0..3 {
                    f[6 * a + i] += vals[a] * fv[i] * da;
                    f[6 * a + 3 + i] += vals[a] * cv[i] * da;
                }
            }
            if co.penalty.is_none() {
                for a in 0..m {
                    for bb in 0..m {
                        let v = vals[a] * vals[bb] * da;
                        for i in 0..3 {
                            c[a * 3 * m + 3 * bb + i] += v * frame.n[i];
                        }
                    }
                }
            }
            q += 1;
        }
    }
    let k = b.transpose() * &b;
    Ok(ElementTerms { ids, k, c, f })
}

/// Block-sparse storage of the 7x7 blocks coupling pairs of basis functions.
struct BlockMatrix {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<[f64; BLOCK * BLOCK]>,
}

impl BlockMatrix {
    fn new(n: usize, elements: &[Vec<usize>]) -> Self {
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for ids in elements {
            for &a in ids {
                nbrs[a].extend_from_slice(ids);
            }
        }
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        for mut list in nbrs {
            list.sort_unstable();
            list.dedup();
            cols.extend(list);
            row_ptr.push(cols.len());
        }
        let vals = vec![[0.0; BLOCK * BLOCK]; cols.len()];
        Self { row_ptr, cols, vals }
    }

    fn block(&mut self, a: usize, b: usize) -> &mut [f64; BLOCK * BLOCK] {
        let row = &self.cols[self.row_ptr[a]..self.row_ptr[a + 1]];
        let k = row.binary_search(&b).expect("pair outside the sparsity pattern");
        &mut self.vals[self.row_ptr[a] + k]
    }
}

/// Element local function ids for every knot span (without evaluating the
/// geometry), used for the sparsity pattern.
fn element_ids(basis: &TensorBasis, elements: &[crate::nurbs::Element]) -> Result<Vec<Vec<usize>>> {
    elements
        .iter()
        .map(|el| {
            let (r, s) = el.midpoint();
            Ok(basis.eval(r, s, 0)?.ids)
        })
        .collect()
}

/// Number of elements whose dense terms are held in memory at once.
const CHUNK: usize = 64;

pub fn assemble(problem: &ShellProblem) -> Result<SaddleSystem> {
    problem.validate()?;
    let basis = problem.field_basis()?;
    let dofs = DofMap::new(problem, &basis)?;
    let n = basis.num_functions();
    let (pr, ps) = basis.degrees();
    let rule = (
        gauss_on(points_per_direction(pr, problem.quadrature_bump)?, 0.0, 1.0),
        gauss_on(points_per_direction(ps, problem.quadrature_bump)?, 0.0, 1.0),
    );
    let co = Coefficients::new(problem);
    let elements = basis.elements();
    let mut blocks = BlockMatrix::new(n, &element_ids(&basis, &elements)?);
    let mut rhs = vec![0.0; dofs.total];
    let m = (pr + 1) * (ps + 1);

    for chunk in elements.chunks(CHUNK) {
        let terms: Vec<ElementTerms> = chunk
            .par_iter()
            .map(|el| element_terms(problem, &basis, &co, el, &rule))
            .collect::<Result<_>>()?;
        for et in &terms {
            for (a, &ga) in et.ids.iter().enumerate() {
                for i in 0..3 {
                    rhs[dofs.u(ga, i)] += et.f[6 * a + i];
                    rhs[dofs.w(ga, i)] += et.f[6 * a + 3 + i];
                }
                for (bl, &gb) in et.ids.iter().enumerate() {
                    let blk = blocks.block(ga, gb);
                    for p in 0..6 {
                        for q in 0..6 {
                            blk[p * BLOCK + q] += et.k[(6 * a + p, 6 * bl + q)];
                        }
                    }
                    if dofs.normal_multiplier {
                        for i in 0..3 {
                            blk[6 * BLOCK + 3 + i] += et.c[a * 3 * m + 3 * bl + i];
                            blk[(3 + i) * BLOCK + 6] += et.c[bl * 3 * m + 3 * a + i];
                        }
                    }
                }
            }
        }
    }

    let mut entries: Vec<Triplet<usize, usize, f64>> = Vec::new();
    let local = |a: usize, p: usize| -> usize {
        match p {
            0..=2 => dofs.u(a, p),
            3..=5 => dofs.w(a, p - 3),
            _ => 6 * n + a,
        }
    };
    let nb = if dofs.normal_multiplier { BLOCK } else { 6 };
    for a in 0..n {
        for k in blocks.row_ptr[a]..blocks.row_ptr[a + 1] {
            let b = blocks.cols[k];
            let blk = &blocks.vals[k];
            for p in 0..nb {
                for q in 0..nb {
                    if p == 6 && q == 6 {
                        continue;
                    }
                    entries.push(Triplet::new(local(a, p), local(b, q), blk[p * BLOCK + q]));
                }
            }
        }
    }
    drop(blocks);

    let mut constraints: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    boundary_terms(problem, &basis, &dofs, &mut constraints, &mut rhs)?;
    point_terms(problem, &basis, &dofs, &mut constraints, &mut rhs)?;
    for (&(row, col), &v) in &constraints {
        entries.push(Triplet::new(row, col, v));
        entries.push(Triplet::new(col, row, v));
    }

    let matrix = SparseColMat::try_new_from_triplets(dofs.total, dofs.total, &entries)
        .map_err(|e| Error::Matrix(format!("{e:?}")))?;
    let mut warnings = Vec::new();
    if !problem.has_dirichlet() {
        warnings.push(
            "no Dirichlet conditions: rigid-body motions are unconstrained and the system is singular".to_string(),
        );
    }
    Ok(SaddleSystem {
        matrix,
        rhs,
        dofs,
        basis,
        warnings,
    })
}

/// Spans of the free parameter along an edge.
fn edge_spans(basis: &TensorBasis, edge: Edge) -> Vec<(f64, f64)> {
    match edge {
        Edge::RMin | Edge::RMax => basis.s.spans(),
        Edge::SMin | Edge::SMax => basis.r.spans(),
    }
}

fn edge_degree(basis: &TensorBasis, edge: Edge) -> usize {
    match edge {
        Edge::RMin | Edge::RMax => basis.s.degree(),
        Edge::SMin | Edge::SMax => basis.r.degree(),
    }
}

/// Calls `f(x, boundary frame, basis evaluation, ds)` at the Gauss points of
/// an edge.
fn for_edge_points<F>(problem: &ShellProblem, basis: &TensorBasis, edge: Edge, mut f: F) -> Result<()>
where
    F: FnMut(&crate::geometry::BoundaryFrame, &crate::nurbs::BasisEval, f64),
{
    let npts = points_per_direction(edge_degree(basis, edge) + 1, problem.quadrature_bump)?;
    for (a, b) in edge_spans(basis, edge) {
        for (t, w) in gauss_on(npts, a, b) {
            let (r, s) = edge.point(&problem.geometry, t);
            let frame = frame_from_derivatives(&problem.geometry.derivatives(r, s, 2)?, (r, s))?;
            let bf = boundary_frame_from(&frame, edge, (r, s))?;
            let be = basis.eval(r, s, 0)?;
            f(&bf, &be, w * bf.ds_scale);
        }
    }
    Ok(())
}

fn boundary_terms(
    problem: &ShellProblem,
    basis: &TensorBasis,
    dofs: &DofMap,
    constraints: &mut BTreeMap<(usize, usize), f64>,
    rhs: &mut [f64],
) -> Result<()> {
    for group in &dofs.groups {
        for &(edge, value) in &group.edges {
            for_edge_points(problem, basis, edge, |bf, be, ds| {
                let d = group.direction.vector(bf);
                let g = value.eval(&bf.x);
                let vals = be.values();
                for (&c, &nc) in be.ids.iter().zip(vals) {
                    let Some(row) = group.dof(c) else { continue };
                    if nc == 0.0 {
                        continue;
                    }
                    rhs[row] += nc * g * ds;
                    for (&a, &na) in be.ids.iter().zip(vals) {
                        for i in 0..3 {
                            let v = nc * na * d[i] * ds;
                            if v != 0.0 {
                                *constraints.entry((row, dofs.field(group.field, a, i))).or_insert(0.0) += v;
                            }
                        }
                    }
                }
            })?;
        }
    }
    for edge in Edge::ALL {
        let cond = problem.edges.get(edge);
        for (field, data) in [(Field::U, cond.traction()), (Field::W, cond.moment())] {
            let Some(data) = data else { continue };
            for_edge_points(problem, basis, edge, |bf, be, ds| {
                let p = data.eval(&bf.x);
                for (&a, &na) in be.ids.iter().zip(be.values()) {
                    for i in 0..3 {
                        rhs[dofs.field(field, a, i)] += na * p[i] * ds;
                    }
                }
            })?;
        }
    }
    Ok(())
}

fn point_terms(
    problem: &ShellProblem,
    basis: &TensorBasis,
    dofs: &DofMap,
    constraints: &mut BTreeMap<(usize, usize), f64>,
    rhs: &mut [f64],
) -> Result<()> {
    for (k, pc) in problem.point_constraints.iter().enumerate() {
        let row = dofs.point_offset + k;
        let i = match pc.direction {
            Direction::X => 0,
            Direction::Y => 1,
            Direction::Z => 2,
            _ => return Err(Error::InvalidProblem("point constraints need a Cartesian direction".into())),
        };
        let be = basis.eval(pc.r, pc.s, 0)?;
        for (&a, &na) in be.ids.iter().zip(be.values()) {
            if na != 0.0 {
                *constraints.entry((row, dofs.field(pc.field, a, i))).or_insert(0.0) += na;
            }
        }
        rhs[row] += pc.value;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Benchmark, EdgeCondition, EdgeConditions};

    #[test]
    fn dof_blocks_are_contiguous() {
        let p = ShellProblem::benchmark(Benchmark::HyperbolicParaboloid, 2, 2);
        let basis = p.field_basis().unwrap();
        let d = DofMap::new(&p, &basis).unwrap();
        let b = d.blocks();
        assert_eq!(b.u, 0..48);
        assert_eq!(b.w, 48..96);
        assert_eq!(b.lambda_n, 96..112);
        // clamped edge: 3 u directions + 2 w directions, 4 functions each
        assert_eq!(b.lambda_u.len(), 12);
        assert_eq!(b.lambda_w.len(), 8);
        assert_eq!(b.points.len(), 0);
        assert_eq!(d.total, 132);
    }

    #[test]
    fn corner_functions_are_shared_by_adjacent_edges() {
        let mut p = ShellProblem::benchmark(Benchmark::HyperbolicParaboloid, 2, 2);
        p.edges = EdgeConditions::all(EdgeCondition::SimplySupported);
        let basis = p.field_basis().unwrap();
        let d = DofMap::new(&p, &basis).unwrap();
        // 16 functions, 12 of them on the boundary ring
        assert!(d.groups.iter().all(|g| g.len() == 12));
    }
}
