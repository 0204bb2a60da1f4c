use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack when deciding whether a parameter lies inside a domain.
const DOMAIN_TOL: f64 = 1e-12;

/// A univariate B-spline basis as seen by the tensor-product evaluator.
pub trait Univariate {
    fn degree(&self) -> usize;

    /// Number of distinct (global) basis functions.
    fn num_functions(&self) -> usize;

    fn domain(&self) -> (f64, f64);

    /// Non-empty knot spans, in increasing order.
    fn spans(&self) -> Vec<(f64, f64)>;

    /// Evaluates the `degree + 1` functions that are active at `t` together with
    /// their derivatives up to `nder`. Returns the global ids of the active
    /// functions and `ders[k][j]`, the `k`-th derivative of the `j`-th of them.
    fn eval(&self, t: f64, nder: usize) -> Result<(Vec<usize>, Vec<Vec<f64>>)>;

    /// Functions that do not vanish at the lower (`at_max == false`) or upper end
    /// of the domain. Empty for periodic bases, which have no ends.
    fn end_functions(&self, at_max: bool) -> Vec<usize>;

    fn is_periodic(&self) -> bool {
        false
    }
}

/// Clamped (open) knot vector: the end knots are repeated `degree + 1` times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKnots", into = "RawKnots")]
pub struct KnotVector {
    degree: usize,
    knots: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawKnots {
    degree: usize,
    knots: Vec<f64>,
}

impl TryFrom<RawKnots> for KnotVector {
    type Error = Error;
    fn try_from(raw: RawKnots) -> Result<Self> {
        KnotVector::new(raw.degree, raw.knots)
    }
}

impl From<KnotVector> for RawKnots {
    fn from(kv: KnotVector) -> Self {
        RawKnots {
            degree: kv.degree,
            knots: kv.knots,
        }
    }
}

impl KnotVector {
    pub fn new(degree: usize, knots: Vec<f64>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidKnots("degree must be at least 1".into()));
        }
        if knots.len() < 2 * (degree + 1) {
            return Err(Error::InvalidKnots(format!(
                "{} knots are too few for degree {degree}",
                knots.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::InvalidKnots("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidKnots("knots must be nondecreasing".into()));
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if !(last > first) {
            return Err(Error::InvalidKnots("empty parameter range".into()));
        }
        let lead = knots.iter().take_while(|&&k| k == first).count();
        let tail = knots.iter().rev().take_while(|&&k| k == last).count();
        if lead != degree + 1 || tail != degree + 1 {
            return Err(Error::InvalidKnots(format!(
                "end knots must repeat exactly {} times (found {lead} and {tail})",
                degree + 1
            )));
        }
        let p = degree;
        for w in knots[1..knots.len() - 1].chunk_by(|a, b| a == b) {
            if w.len() > p {
                return Err(Error::InvalidKnots(format!(
                    "interior knot {} has multiplicity {} > degree {p}",
                    w[0],
                    w.len()
                )));
            }
        }
        Ok(Self { degree, knots })
    }

    /// Clamped knot vector with `n_spans` equal spans on `[a, b]`.
    pub fn uniform(degree: usize, n_spans: usize, a: f64, b: f64) -> Result<Self> {
        if n_spans == 0 {
            return Err(Error::InvalidKnots("at least one span is required".into()));
        }
        let mut knots = vec![a; degree + 1];
        for k in 1..n_spans {
            knots.push(a + (b - a) * k as f64 / n_spans as f64);
        }
        knots.extend(std::iter::repeat_n(b, degree + 1));
        Self::new(degree, knots)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Distinct knot values in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &k in &self.knots {
            if out.last() != Some(&k) {
                out.push(k);
            }
        }
        out
    }

    pub fn multiplicity(&self, value: f64) -> usize {
        self.knots.iter().filter(|&&k| k == value).count()
    }

    /// Index `i` with `knots[i] <= t < knots[i + 1]`, the last non-empty span for `t == b`.
    pub fn find_span(&self, t: f64) -> usize {
        let n = self.knots.len() - self.degree - 1;
        if t >= self.knots[n] {
            return n - 1;
        }
        if t <= self.knots[self.degree] {
            return self.degree;
        }
        let mut lo = self.degree;
        let mut hi = n;
        let mut mid = (lo + hi) / 2;
        while t < self.knots[mid] || t >= self.knots[mid + 1] {
            if t < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
            mid = (lo + hi) / 2;
        }
        mid
    }
}

fn check_inside(t: f64, (a, b): (f64, f64)) -> Result<f64> {
    let tol = DOMAIN_TOL * (b - a).abs().max(1.0);
    if !(t >= a - tol && t <= b + tol) {
        return Err(Error::OutsideDomain {
            r: t,
            s: f64::NAN,
            r0: a,
            r1: b,
            s0: f64::NAN,
            s1: f64::NAN,
        });
    }
    Ok(t.clamp(a, b))
}

impl Univariate for KnotVector {
    fn degree(&self) -> usize {
        self.degree
    }

    fn num_functions(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    fn spans(&self) -> Vec<(f64, f64)> {
        self.breakpoints().windows(2).map(|w| (w[0], w[1])).collect()
    }

    fn eval(&self, t: f64, nder: usize) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
        let t = check_inside(t, self.domain())?;
        let span = self.find_span(t);
        let ders = ders_basis_funs(&self.knots, self.degree, span, t, nder);
        let ids = (span - self.degree..=span).collect();
        Ok((ids, ders))
    }

    fn end_functions(&self, at_max: bool) -> Vec<usize> {
        if at_max {
            vec![self.num_functions() - 1]
        } else {
            vec![0]
        }
    }
}

/// Uniform periodic B-spline basis: `n_spans` equal spans on `[a, b]` with the
/// two ends identified, giving `C^(p-1)` continuity across the seam.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicKnots {
    degree: usize,
    n_spans: usize,
    a: f64,
    b: f64,
}

impl PeriodicKnots {
    pub fn new(degree: usize, n_spans: usize, a: f64, b: f64) -> Result<Self> {
        if degree == 0 || n_spans == 0 || !(b > a) {
            return Err(Error::InvalidKnots(format!(
                "periodic basis needs degree >= 1, n >= 1 and a < b (got p={degree}, n={n_spans}, [{a}, {b}])"
            )));
        }
        Ok(Self {
            degree,
            n_spans,
            a,
            b,
        })
    }

    fn extended_knots(&self) -> Vec<f64> {
        let h = (self.b - self.a) / self.n_spans as f64;
        (0..self.n_spans + 2 * self.degree + 1)
            .map(|j| self.a + (j as f64 - self.degree as f64) * h)
            .collect()
    }
}

impl Univariate for PeriodicKnots {
    fn degree(&self) -> usize {
        self.degree
    }

    fn num_functions(&self) -> usize {
        self.n_spans
    }

    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn spans(&self) -> Vec<(f64, f64)> {
        let h = (self.b - self.a) / self.n_spans as f64;
        (0..self.n_spans)
            .map(|e| {
                let lo = self.a + e as f64 * h;
                let hi = if e + 1 == self.n_spans { self.b } else { self.a + (e + 1) as f64 * h };
                (lo, hi)
            })
            .collect()
    }

    fn eval(&self, t: f64, nder: usize) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
        let t = check_inside(t, self.domain())?;
        let h = (self.b - self.a) / self.n_spans as f64;
        let e = (((t - self.a) / h).floor() as isize).clamp(0, self.n_spans as isize - 1) as usize;
        let span = e + self.degree;
        let knots = self.extended_knots();
        let ders = ders_basis_funs(&knots, self.degree, span, t, nder);
        let ids = (e..=e + self.degree).map(|j| j % self.n_spans).collect();
        Ok((ids, ders))
    }

    fn end_functions(&self, _at_max: bool) -> Vec<usize> {
        Vec::new()
    }

    fn is_periodic(&self) -> bool {
        true
    }
}

/// Either kind of univariate basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Basis1d {
    Clamped(KnotVector),
    Periodic(PeriodicKnots),
}

impl Univariate for Basis1d {
    fn degree(&self) -> usize {
        match self {
            Basis1d::Clamped(k) => k.degree(),
            Basis1d::Periodic(k) => k.degree(),
        }
    }
    fn num_functions(&self) -> usize {
        match self {
            Basis1d::Clamped(k) => k.num_functions(),
            Basis1d::Periodic(k) => k.num_functions(),
        }
    }
    fn domain(&self) -> (f64, f64) {
        match self {
            Basis1d::Clamped(k) => k.domain(),
            Basis1d::Periodic(k) => k.domain(),
        }
    }
    fn spans(&self) -> Vec<(f64, f64)> {
        match self {
            Basis1d::Clamped(k) => k.spans(),
            Basis1d::Periodic(k) => k.spans(),
        }
    }
    fn eval(&self, t: f64, nder: usize) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
        match self {
            Basis1d::Clamped(k) => k.eval(t, nder),
            Basis1d::Periodic(k) => k.eval(t, nder),
        }
    }
    fn end_functions(&self, at_max: bool) -> Vec<usize> {
        match self {
            Basis1d::Clamped(k) => k.end_functions(at_max),
            Basis1d::Periodic(k) => k.end_functions(at_max),
        }
    }
    fn is_periodic(&self) -> bool {
        matches!(self, Basis1d::Periodic(_))
    }
}

/// Cox-de Boor evaluation of the nonzero basis functions on `span` and their
/// derivatives (Piegl & Tiller, algorithm A2.3). Derivatives above the degree
/// are returned as zeros.
pub fn ders_basis_funs(knots: &[f64], p: usize, span: usize, t: f64, nder: usize) -> Vec<Vec<f64>> {
    let n = nder.min(p);
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = vec![vec![0.0; p + 1]; nder + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let mut a = [vec![0.0; p + 1], vec![0.0; p + 1]];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for k in 1..=n {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = p - k;
            if r >= k {
                let rk = rk as usize;
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            let j1: usize = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2: usize = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut fac = p as f64;
    for k in 1..=n {
        for v in ders[k].iter_mut() {
            *v *= fac;
        }
        fac *= (p - k) as f64;
    }
    ders
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unclamped_and_decreasing() {
        assert!(KnotVector::new(2, vec![0.0, 0.0, 0.5, 1.0, 1.0, 1.0]).is_err());
        assert!(KnotVector::new(1, vec![0.0, 0.0, 0.7, 0.5, 1.0, 1.0]).is_err());
        assert!(KnotVector::new(2, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).is_ok());
    }

    #[test]
    fn quadratic_bernstein_values() {
        let kv = KnotVector::uniform(2, 1, 0.0, 1.0).unwrap();
        let (ids, d) = kv.eval(0.25, 2).unwrap();
        assert_eq!(ids, vec![0, 1, 2]);
        let t: f64 = 0.25;
        let expect = [(1.0 - t).powi(2), 2.0 * t * (1.0 - t), t * t];
        for j in 0..3 {
            assert!((d[0][j] - expect[j]).abs() < 1e-15);
        }
        assert!((d[1][0] + 2.0 * (1.0 - t)).abs() < 1e-14);
        assert!((d[2][1] + 4.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_span_count_and_lookup() {
        let kv = KnotVector::uniform(3, 4, -1.0, 1.0).unwrap();
        assert_eq!(kv.num_functions(), 7);
        assert_eq!(kv.spans().len(), 4);
        assert_eq!(kv.find_span(-1.0), 3);
        assert_eq!(kv.find_span(1.0), 6);
        assert_eq!(kv.find_span(0.0), 5);
    }

    #[test]
    fn outside_domain_is_an_error() {
        let kv = KnotVector::uniform(2, 2, 0.0, 1.0).unwrap();
        assert!(matches!(kv.eval(1.5, 0), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn periodic_basis_is_periodic() {
        let pk = PeriodicKnots::new(3, 5, 0.0, 2.0).unwrap();
        let (ia, da) = pk.eval(0.0, 2).unwrap();
        let (ib, db) = pk.eval(2.0, 2).unwrap();
        for k in 0..3 {
            let mut va = vec![0.0; 5];
            let mut vb = vec![0.0; 5];
            for j in 0..4 {
                va[ia[j]] += da[k][j];
                vb[ib[j]] += db[k][j];
            }
            for g in 0..5 {
                assert!((va[g] - vb[g]).abs() < 1e-12, "derivative {k}, fn {g}");
            }
        }
        assert!(pk.end_functions(false).is_empty());
    }
}
