//! Scalar types shared by the pointwise kernels.
//!
//! Geometry and mechanics kernels are written once, generic over [`Real`], and
//! instantiated either with `f64` (assembly, post-processing) or with [`Jet`]
//! (first-order forward-mode derivatives with respect to the two surface
//! parameters), which is what the strong-form residuals need to take surface
//! divergences of stress resultants.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use nalgebra::{Matrix3, Vector3};
use num_traits::{One, Zero};

pub trait Real:
    nalgebra::Scalar
    + Copy
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    fn cst(v: f64) -> Self;
    fn sqrt(self) -> Self;
    /// Value part (the number itself for `f64`).
    fn re(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
}

/// A value together with its partial derivatives along the two surface
/// parameters `r` and `s`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub dr: f64,
    pub ds: f64,
}

impl Jet {
    pub const fn new(v: f64, dr: f64, ds: f64) -> Self {
        Self { v, dr, ds }
    }

    pub const fn constant(v: f64) -> Self {
        Self { v, dr: 0.0, ds: 0.0 }
    }
}

impl Zero for Jet {
    fn zero() -> Self {
        Jet::constant(0.0)
    }
    fn is_zero(&self) -> bool {
        self.v == 0.0 && self.dr == 0.0 && self.ds == 0.0
    }
}

impl One for Jet {
    fn one() -> Self {
        Jet::constant(1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.dr + o.dr, self.ds + o.ds)
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.dr - o.dr, self.ds - o.ds)
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.v * o.v,
            self.dr * o.v + self.v * o.dr,
            self.ds * o.v + self.v * o.ds,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    #[inline]
    fn div(self, o: Jet) -> Jet {
        let inv = 1.0 / o.v;
        let q = self.v * inv;
        Jet::new(q, (self.dr - q * o.dr) * inv, (self.ds - q * o.ds) * inv)
    }
}

impl Neg for Jet {
    type Output = Jet;
    #[inline]
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.dr, -self.ds)
    }
}

impl AddAssign for Jet {
    #[inline]
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl SubAssign for Jet {
    #[inline]
    fn sub_assign(&mut self, o: Jet) {
        *self = *self - o;
    }
}

impl MulAssign for Jet {
    #[inline]
    fn mul_assign(&mut self, o: Jet) {
        *self = *self * o;
    }
}

impl DivAssign for Jet {
    #[inline]
    fn div_assign(&mut self, o: Jet) {
        *self = *self / o;
    }
}

impl Real for Jet {
    #[inline]
    fn cst(v: f64) -> Self {
        Jet::constant(v)
    }
    #[inline]
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        let k = 0.5 / s;
        Jet::new(s, self.dr * k, self.ds * k)
    }
    #[inline]
    fn re(self) -> f64 {
        self.v
    }
}

pub fn jet_vec(v: &Vector3<f64>, dr: &Vector3<f64>, ds: &Vector3<f64>) -> Vector3<Jet> {
    Vector3::from_fn(|i, _| Jet::new(v[i], dr[i], ds[i]))
}

pub fn values3(v: &Vector3<Jet>) -> Vector3<f64> {
    v.map(|j| j.v)
}

pub fn values33(m: &Matrix3<Jet>) -> Matrix3<f64> {
    m.map(|j| j.v)
}

pub fn lift3<T: Real>(v: &Vector3<f64>) -> Vector3<T> {
    v.map(T::cst)
}

pub fn lift33<T: Real>(m: &Matrix3<f64>) -> Matrix3<T> {
    m.map(T::cst)
}
