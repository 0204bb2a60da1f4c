//! Truncated bivariate Taylor arithmetic (total order 3).
//!
//! Analytic surface parametrizations are written as ordinary expressions in
//! this type; every partial derivative up to third order then falls out exactly
//! instead of being transcribed by hand.

use std::ops::{Add, Mul, Neg, Sub};

/// Number of monomials `r^i s^j` with `i + j <= 3`.
pub const NUM_PARTIALS: usize = 10;

/// Ordering of the mixed partials used throughout the crate:
/// `1, r, s, rr, rs, ss, rrr, rrs, rss, sss`.
pub const PARTIALS: [(usize, usize); NUM_PARTIALS] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

/// Number of partials with total order `<= order`.
pub const fn partials_up_to(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Position of `d^(i+j) / dr^i ds^j` in [`PARTIALS`].
pub const fn partial_index(i: usize, j: usize) -> usize {
    let k = i + j;
    k * (k + 1) / 2 + j
}

const FACT: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

/// Taylor coefficients `c[idx(i, j)]` of `f(r0 + dr, s0 + ds) = sum c_ij dr^i ds^j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Taylor2 {
    c: [f64; NUM_PARTIALS],
}

impl Taylor2 {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; NUM_PARTIALS];
        c[0] = v;
        Self { c }
    }

    pub fn var_r(r0: f64) -> Self {
        let mut t = Self::constant(r0);
        t.c[1] = 1.0;
        t
    }

    pub fn var_s(s0: f64) -> Self {
        let mut t = Self::constant(s0);
        t.c[2] = 1.0;
        t
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// All partial derivatives in [`PARTIALS`] order.
    pub fn derivatives(&self) -> [f64; NUM_PARTIALS] {
        let mut d = [0.0; NUM_PARTIALS];
        for (k, &(i, j)) in PARTIALS.iter().enumerate() {
            d[k] = self.c[k] * FACT[i] * FACT[j];
        }
        d
    }

    pub fn scale(self, a: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|v| *v *= a);
        Self { c }
    }

    /// Composition `g(self)` given `g(a0), g'(a0), g''(a0), g'''(a0)`.
    fn compose(self, g: [f64; 4]) -> Self {
        let mut d = self;
        d.c[0] = 0.0;
        let d2 = d * d;
        let d3 = d2 * d;
        Taylor2::constant(g[0]) + d.scale(g[1]) + d2.scale(g[2] / 2.0) + d3.scale(g[3] / 6.0)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.compose([c, -s, -c, s])
    }
}

impl Add for Taylor2 {
    type Output = Taylor2;
    fn add(self, o: Taylor2) -> Taylor2 {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(a, b)| *a += b);
        Taylor2 { c }
    }
}

impl Sub for Taylor2 {
    type Output = Taylor2;
    fn sub(self, o: Taylor2) -> Taylor2 {
        self + (-o)
    }
}

impl Neg for Taylor2 {
    type Output = Taylor2;
    fn neg(self) -> Taylor2 {
        self.scale(-1.0)
    }
}

impl Mul for Taylor2 {
    type Output = Taylor2;
    fn mul(self, o: Taylor2) -> Taylor2 {
        let mut c = [0.0; NUM_PARTIALS];
        for (ka, &(ia, ja)) in PARTIALS.iter().enumerate() {
            if self.c[ka] == 0.0 {
                continue;
            }
            for (kb, &(ib, jb)) in PARTIALS.iter().enumerate() {
                if ia + ja + ib + jb > 3 {
                    continue;
                }
                c[partial_index(ia + ib, ja + jb)] += self.c[ka] * o.c[kb];
            }
        }
        Taylor2 { c }
    }
}

impl Mul<Taylor2> for f64 {
    type Output = Taylor2;
    fn mul(self, o: Taylor2) -> Taylor2 {
        o.scale(self)
    }
}

impl Add<f64> for Taylor2 {
    type Output = Taylor2;
    fn add(self, o: f64) -> Taylor2 {
        self + Taylor2::constant(o)
    }
}

impl Sub<Taylor2> for f64 {
    type Output = Taylor2;
    fn sub(self, o: Taylor2) -> Taylor2 {
        Taylor2::constant(self) - o
    }
}
