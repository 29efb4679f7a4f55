//! Double-double arithmetic (error-free sums and FMA products) for the
//! handful of operations the field-integration check needs.
//!
//! Forward and backward evanescent fields are nearly in quadrature, so the
//! time-averaged flux `Re(E H*)` is a small remainder of large products.
//! Plain f64 loses `~e^{2β(L−z)}` in relative accuracy there.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::new(x)
    }
}

impl Add for DoubleDouble {
    type Output = DoubleDouble;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = DoubleDouble;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = DoubleDouble;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = DoubleDouble;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexDd {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ComplexDd {
    pub fn new(re: DoubleDouble, im: DoubleDouble) -> Self {
        ComplexDd { re, im }
    }

    pub fn conj(self) -> Self {
        ComplexDd::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> DoubleDouble {
        self.re * self.re + self.im * self.im
    }

    /// Multiply by `i`.
    pub fn mul_i(self) -> Self {
        ComplexDd::new(-self.im, self.re)
    }

    pub fn scale(self, s: f64) -> Self {
        let s = DoubleDouble::new(s);
        ComplexDd::new(self.re * s, self.im * s)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl From<Complex64> for ComplexDd {
    fn from(z: Complex64) -> Self {
        ComplexDd::new(z.re.into(), z.im.into())
    }
}

impl Add for ComplexDd {
    type Output = ComplexDd;
    fn add(self, rhs: Self) -> Self {
        ComplexDd::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ComplexDd {
    type Output = ComplexDd;
    fn sub(self, rhs: Self) -> Self {
        ComplexDd::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ComplexDd {
    type Output = ComplexDd;
    fn neg(self) -> Self {
        ComplexDd::new(-self.re, -self.im)
    }
}

impl Mul for ComplexDd {
    type Output = ComplexDd;
    fn mul(self, rhs: Self) -> Self {
        ComplexDd::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}
