//! Scalar backends shared by every series in the crate.
//!
//! All q-series code is written once against [`Real`] and instantiated for
//! native `f64` and for [`BigReal`], a software binary float whose precision
//! is chosen at run time. Constants are created with [`Real::lift`], which
//! takes the working precision from an existing value, so a computation stays
//! at the precision of its inputs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::Complex64;

/// Complex scalar used at the public API.
pub type C64 = Complex64;

/// Working-precision real number.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `v` at the working precision of `self`.
    fn lift(&self, v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn is_zero(&self) -> bool;
    /// Significand width in bits.
    fn precision_bits(&self) -> u32;

    /// `self^e` for `self > 0`; integral exponents are evaluated exactly.
    fn powf(&self, e: &Self) -> Self {
        let ef = e.to_f64();
        if ef.fract() == 0.0 && ef.abs() < f64::from(i32::MAX) && e.lift(ef) == *e {
            self.powi(ef as i32)
        } else {
            (self.ln() * e.clone()).exp()
        }
    }

    /// Unit roundoff of the working precision.
    fn unit_roundoff(&self) -> f64 {
        (-(self.precision_bits() as f64)).exp2()
    }

    fn zero_like(&self) -> Self {
        self.lift(0.0)
    }

    fn one_like(&self) -> Self {
        self.lift(1.0)
    }
}

impl Real for f64 {
    fn lift(&self, v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn precision_bits(&self) -> u32 {
        f64::MANTISSA_DIGITS
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
}

type Big = FBig<HalfEven, 2>;

/// Binary floating-point number with run-time precision.
#[derive(Clone, PartialEq)]
pub struct BigReal(Big);

impl BigReal {
    /// Exact conversion of `v` carried at `bits` of precision.
    ///
    /// Panics if `v` is not finite.
    pub fn from_f64(v: f64, bits: u32) -> Self {
        let exact = Big::try_from(v).expect("BigReal::from_f64 needs a finite value");
        BigReal(exact.with_precision(bits.max(f64::MANTISSA_DIGITS) as usize).value())
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({:e}, {} bits)", self.to_f64(), self.precision_bits())
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! big_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                BigReal($tr::$method(self.0, rhs.0))
            }
        }
    };
}

big_binop!(Add, add);
big_binop!(Sub, sub);
big_binop!(Mul, mul);
big_binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Real for BigReal {
    fn lift(&self, v: f64) -> Self {
        BigReal::from_f64(v, self.precision_bits())
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn abs(&self) -> Self {
        if self.0 < Big::ZERO {
            BigReal(-self.0.clone())
        } else {
            self.clone()
        }
    }
    fn exp(&self) -> Self {
        BigReal(self.0.exp())
    }
    fn ln(&self) -> Self {
        BigReal(self.0.ln())
    }
    fn powi(&self, n: i32) -> Self {
        BigReal(self.0.powi(n.into()))
    }
    fn is_zero(&self) -> bool {
        self.0 == Big::ZERO
    }
    fn precision_bits(&self) -> u32 {
        self.0.precision() as u32
    }
}

/// Complex number over a [`Real`] backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }

    pub fn real(re: R) -> Self {
        let im = re.zero_like();
        Cx { re, im }
    }

    /// Exact lift of a double-precision complex value.
    pub fn lift(unit: &R, z: C64) -> Self {
        Cx::new(unit.lift(z.re), unit.lift(z.im))
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(&self) -> R {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// `|z|` rounded to double precision.
    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn scale(&self, s: &R) -> Self {
        Cx::new(self.re.clone() * s.clone(), self.im.clone() * s.clone())
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Cx::new(-self.im.clone(), self.re.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<R: Real> Add for Cx<R> {
    type Output = Cx<R>;
    fn add(self, rhs: Cx<R>) -> Cx<R> {
        Cx::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<R: Real> Sub for Cx<R> {
    type Output = Cx<R>;
    fn sub(self, rhs: Cx<R>) -> Cx<R> {
        Cx::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<R: Real> Mul for Cx<R> {
    type Output = Cx<R>;
    fn mul(self, rhs: Cx<R>) -> Cx<R> {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Cx::new(re, im)
    }
}

impl<R: Real> Div for Cx<R> {
    type Output = Cx<R>;
    fn div(self, rhs: Cx<R>) -> Cx<R> {
        let den = rhs.norm_sqr();
        let re = (self.re.clone() * rhs.re.clone() + self.im.clone() * rhs.im.clone()) / den.clone();
        let im = (self.im * rhs.re - self.re * rhs.im) / den;
        Cx::new(re, im)
    }
}

impl<R: Real> Neg for Cx<R> {
    type Output = Cx<R>;
    fn neg(self) -> Cx<R> {
        Cx::new(-self.re, -self.im)
    }
}

/// Neumaier-compensated running sum of one real component.
#[derive(Clone, Debug)]
pub(crate) struct Compensated<R> {
    sum: R,
    carry: R,
}

impl<R: Real> Compensated<R> {
    pub(crate) fn new(zero: R) -> Self {
        Compensated {
            carry: zero.clone(),
            sum: zero,
        }
    }

    pub(crate) fn add(&mut self, x: R) {
        let t = self.sum.clone() + x.clone();
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry.clone() + ((self.sum.clone() - t.clone()) + x);
        } else {
            self.carry = self.carry.clone() + ((x - t.clone()) + self.sum.clone());
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> R {
        self.sum.clone() + self.carry.clone()
    }
}

/// Compensated complex accumulator.
#[derive(Clone, Debug)]
pub(crate) struct CxSum<R> {
    re: Compensated<R>,
    im: Compensated<R>,
}

impl<R: Real> CxSum<R> {
    pub(crate) fn new(zero: &R) -> Self {
        CxSum {
            re: Compensated::new(zero.clone()),
            im: Compensated::new(zero.clone()),
        }
    }

    pub(crate) fn add(&mut self, z: Cx<R>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub(crate) fn value(&self) -> Cx<R> {
        Cx::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of double-precision complex values in the given order.
pub(crate) fn sum_c64<I: IntoIterator<Item = C64>>(terms: I) -> C64 {
    let mut acc = CxSum::new(&0.0);
    for t in terms {
        acc.add(Cx::new(t.re, t.im));
    }
    acc.value().to_c64()
}

/// Compensated sum of doubles in the given order.
pub(crate) fn sum_f64<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = Compensated::new(0.0);
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_lift_is_exact() {
        let q = BigReal::from_f64(0.1, 200);
        assert_eq!(q.to_f64(), 0.1);
        assert_eq!(q.precision_bits(), 200);
        let third = q.lift(1.0) / q.lift(3.0);
        assert_eq!(third.precision_bits(), 200);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn powf_uses_exact_integer_powers() {
        let q = BigReal::from_f64(0.5, 128);
        assert_eq!(q.powf(&q.lift(3.0)).to_f64(), 0.125);
        let r = q.powf(&q.lift(0.5)).to_f64();
        assert!((r - 0.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(0.5f64.powf(3.0), 0.125);
    }

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let s = sum_f64([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn complex_division_roundtrip() {
        let a = Cx::new(1.5f64, -2.0);
        let b = Cx::new(0.25f64, 3.0);
        let c = (a.clone() * b.clone()) / b;
        assert!((c.re - a.re).abs() < 1e-15 && (c.im - a.im).abs() < 1e-15);
    }
}
