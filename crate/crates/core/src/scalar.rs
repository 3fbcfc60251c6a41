//! Exact scalars in Q and Q(i).
//!
//! Every scalar is stored as a pair of canonical rationals `re + im*i`. Values
//! with `im == 0` are the rationals; a [`Field`] tag decides which of the two
//! fields a computation is allowed to land in.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// The rationals.
    #[serde(rename = "Q")]
    Rational,
    /// The Gaussian rationals Q(i).
    #[serde(rename = "Qi")]
    Gaussian,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Rational => "Q",
            Field::Gaussian => "Qi",
        }
    }

    pub fn contains(self, s: &Scalar) -> bool {
        self == Field::Gaussian || s.is_rational()
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" => Ok(Field::Rational),
            "Qi" | "qi" | "Q(i)" => Ok(Field::Gaussian),
            other => Err(Error::FieldMismatch(format!("unsupported coefficient field `{other}` (expected Q or Qi)"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An exact element of Q(i). Ordering is lexicographic on `(re, im)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::rational(BigRational::from_integer(n))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar { re: BigRational::from_integer(re.into()), im: BigRational::from_integer(im.into()) }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Self::rational(self.re.recip()));
        }
        let n = self.norm();
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// True if the value "looks negative" when printed: a negative rational,
    /// or a purely imaginary value with negative imaginary part.
    pub fn is_negative_like(&self) -> bool {
        if self.im.is_zero() {
            self.re.is_negative()
        } else {
            self.re.is_zero() && self.im.is_negative()
        }
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.re.denom(), self.im.denom())
    }

    /// Exact square root inside `field`, if one exists.
    pub fn sqrt(&self, field: Field) -> Option<Scalar> {
        match field {
            Field::Rational => {
                if !self.is_rational() {
                    return None;
                }
                rational_sqrt(&self.re).map(Scalar::rational)
            }
            Field::Gaussian => gaussian_sqrt(self),
        }
    }

    pub fn is_square(&self, field: Field) -> bool {
        self.sqrt(field).is_some()
    }
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn gaussian_sqrt(z: &Scalar) -> Option<Scalar> {
    if z.im.is_zero() {
        if let Some(r) = rational_sqrt(&z.re) {
            return Some(Scalar::rational(r));
        }
        return rational_sqrt(&-&z.re).map(|r| Scalar::new(BigRational::zero(), r));
    }
    // (x + y i)^2 = z with x^2 = (re + |z|)/2 and y = im / (2x).
    let modulus = rational_sqrt(&z.norm())?;
    let two = BigRational::from_integer(2.into());
    let x = rational_sqrt(&((&z.re + &modulus) / &two))?;
    if x.is_zero() {
        return None;
    }
    let y = &z.im / (&two * &x);
    let w = Scalar::new(x, y);
    (&w * &w == *z).then_some(w)
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::rational(q)
    }
}

// Integer fast paths: `BigRational` arithmetic always renormalizes through
// gcds, which dominates polynomial products with integral coefficients.
fn q_add(a: &BigRational, b: &BigRational) -> BigRational {
    if a.denom().is_one() && b.denom().is_one() {
        return BigRational::from_integer(a.numer() + b.numer());
    }
    a + b
}

fn q_sub(a: &BigRational, b: &BigRational) -> BigRational {
    if a.denom().is_one() && b.denom().is_one() {
        return BigRational::from_integer(a.numer() - b.numer());
    }
    a - b
}

fn q_mul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.denom().is_one() && b.denom().is_one() {
        return BigRational::from_integer(a.numer() * b.numer());
    }
    a * b
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::rational(q_add(&self.re, &o.re));
        }
        Scalar { re: q_add(&self.re, &o.re), im: q_add(&self.im, &o.im) }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::rational(q_sub(&self.re, &o.re));
        }
        Scalar { re: q_sub(&self.re, &o.re), im: q_sub(&self.im, &o.im) }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::rational(q_mul(&self.re, &o.re));
        }
        Scalar {
            re: q_sub(&q_mul(&self.re, &o.re), &q_mul(&self.im, &o.im)),
            im: q_add(&q_mul(&self.re, &o.im), &q_mul(&self.im, &o.re)),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero.
    fn div(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::rational(&self.re / &o.re);
        }
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re = q_add(&self.re, &o.re);
        if !o.im.is_zero() {
            self.im = q_add(&self.im, &o.im);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re = q_sub(&self.re, &o.re);
        if !o.im.is_zero() {
            self.im = q_sub(&self.im, &o.im);
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// `3/2`, `-i`, `2*i`, `1/2-3*i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() { "i".to_string() } else { format!("{}*i", fmt_rational(&im_abs)) };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        if self.re.is_zero() {
            let lead = if self.im.is_negative() { "-" } else { "" };
            write!(f, "{lead}{im_txt}")
        } else {
            write!(f, "{}{sign}{im_txt}", fmt_rational(&self.re))
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts the same syntax the polynomial parser accepts for constants.
    fn from_str(s: &str) -> Result<Self> {
        let ring = crate::poly::Ring::new(Vec::new(), Vec::new(), Field::Gaussian);
        let p = crate::poly::parse_poly(s, &ring)?;
        p.constant_value().ok_or_else(|| Error::Syntax { pos: 0, msg: format!("`{s}` is not a constant") })
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
