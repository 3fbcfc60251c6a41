//! Checked `i128` arithmetic in Z and Z[i], and residue classes modulo an
//! element of either ring.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A Gaussian integer. Rational integers have `im == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GInt {
    pub re: i128,
    pub im: i128,
}

fn ovf() -> Error {
    Error::Overflow("integer search arithmetic".into())
}

impl GInt {
    pub const ZERO: GInt = GInt { re: 0, im: 0 };
    pub const ONE: GInt = GInt { re: 1, im: 0 };

    pub fn new(re: i128, im: i128) -> Self {
        GInt { re, im }
    }

    pub fn int(re: i128) -> Self {
        GInt { re, im: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(self) -> Self {
        GInt { re: self.re, im: -self.im }
    }

    pub fn add(self, o: GInt) -> Result<GInt> {
        Ok(GInt { re: self.re.checked_add(o.re).ok_or_else(ovf)?, im: self.im.checked_add(o.im).ok_or_else(ovf)? })
    }

    pub fn sub(self, o: GInt) -> Result<GInt> {
        Ok(GInt { re: self.re.checked_sub(o.re).ok_or_else(ovf)?, im: self.im.checked_sub(o.im).ok_or_else(ovf)? })
    }

    pub fn neg(self) -> GInt {
        GInt { re: -self.re, im: -self.im }
    }

    pub fn mul(self, o: GInt) -> Result<GInt> {
        let m = |a: i128, b: i128| a.checked_mul(b).ok_or_else(ovf);
        let re = m(self.re, o.re)?.checked_sub(m(self.im, o.im)?).ok_or_else(ovf)?;
        let im = m(self.re, o.im)?.checked_add(m(self.im, o.re)?).ok_or_else(ovf)?;
        Ok(GInt { re, im })
    }

    pub fn norm(self) -> Result<i128> {
        let a = self.re.checked_mul(self.re).ok_or_else(ovf)?;
        let b = self.im.checked_mul(self.im).ok_or_else(ovf)?;
        a.checked_add(b).ok_or_else(ovf)
    }

    /// Max of the absolute values of both parts.
    pub fn height(self) -> i128 {
        self.re.abs().max(self.im.abs())
    }

    /// Exact quotient, if `o` divides `self`.
    pub fn div_exact(self, o: GInt) -> Result<Option<GInt>> {
        if o.is_zero() {
            return Ok(None);
        }
        let n = o.norm()?;
        let w = self.mul(o.conj())?;
        if w.re % n != 0 || w.im % n != 0 {
            return Ok(None);
        }
        Ok(Some(GInt { re: w.re / n, im: w.im / n }))
    }

    /// Euclidean division with rounding to the nearest lattice point.
    fn rem(self, o: GInt) -> Result<GInt> {
        let n = o.norm()?;
        let w = self.mul(o.conj())?;
        let q = GInt { re: round_div(w.re, n), im: round_div(w.im, n) };
        self.sub(q.mul(o)?)
    }

    pub fn is_unit(self) -> Result<bool> {
        Ok(self.norm()? == 1)
    }

    /// The associate with `re > 0, im >= 0` (for Z: the absolute value).
    pub fn normalized(self) -> GInt {
        let mut z = self;
        for _ in 0..4 {
            if z.re > 0 && z.im >= 0 {
                return z;
            }
            z = GInt { re: -z.im, im: z.re };
        }
        z
    }

    pub fn to_scalar(self) -> Scalar {
        Scalar::new(BigInt::from(self.re).into(), BigInt::from(self.im).into())
    }

    /// Converts a scalar with integral parts.
    pub fn from_scalar(s: &Scalar) -> Result<GInt> {
        if !s.re().is_integer() || !s.im().is_integer() {
            return Err(Error::InvalidArgument(format!("{s} is not integral")));
        }
        let re = s.re().to_integer().to_i128().ok_or_else(ovf)?;
        let im = s.im().to_integer().to_i128().ok_or_else(ovf)?;
        Ok(GInt { re, im })
    }
}

fn round_div(a: i128, n: i128) -> i128 {
    // floor((2a + n) / 2n)
    Integer::div_floor(&(2 * a + n), &(2 * n))
}

pub fn gcd(a: GInt, b: GInt) -> Result<GInt> {
    let (mut a, mut b) = (a, b);
    while !b.is_zero() {
        let r = a.rem(b)?;
        a = b;
        b = r;
    }
    Ok(a.normalized())
}

pub fn gcd_all(xs: &[GInt]) -> Result<GInt> {
    xs.iter().try_fold(GInt::ZERO, |acc, &x| gcd(acc, x))
}

/// Square root in Z or Z[i], if one exists.
pub fn sqrt(z: GInt, gaussian: bool) -> Result<Option<GInt>> {
    if z.im == 0 && z.re >= 0 {
        let r = z.re.sqrt();
        if r * r == z.re {
            return Ok(Some(GInt::int(r)));
        }
        if !gaussian {
            return Ok(None);
        }
    }
    if !gaussian {
        return Ok(None);
    }
    let n2 = z.norm()?;
    let n = n2.sqrt();
    if n * n != n2 {
        return Ok(None);
    }
    let (x2, y2) = (n + z.re, n - z.re);
    if x2 % 2 != 0 {
        return Ok(None);
    }
    let (x2, y2) = (x2 / 2, y2 / 2);
    let (x, y) = (x2.sqrt(), y2.sqrt());
    if x * x != x2 || y * y != y2 {
        return Ok(None);
    }
    let cand = GInt { re: x, im: if z.im < 0 { -y } else { y } };
    Ok((cand.mul(cand)? == z).then_some(cand))
}

/// Residue classes of Z or Z[i] modulo a nonzero element.
#[derive(Clone, Debug)]
pub struct Residues {
    modulus: GInt,
    gaussian: bool,
    size: i128,
}

impl Residues {
    pub fn new(modulus: GInt, gaussian: bool) -> Result<Self> {
        if modulus.is_zero() || (!gaussian && modulus.im != 0) {
            return Err(Error::InvalidArgument("modulus must be nonzero and lie in the ring".into()));
        }
        let size = if gaussian { modulus.norm()? } else { modulus.re.abs() };
        Ok(Residues { modulus, gaussian, size })
    }

    /// Number of residue classes.
    pub fn size(&self) -> i128 {
        self.size
    }

    /// Canonical key of the class of `z`; additive in `z`, zero iff `m | z`.
    pub fn key(&self, z: GInt) -> Result<(i128, i128)> {
        if self.gaussian {
            let w = z.mul(self.modulus.conj())?;
            Ok((w.re.rem_euclid(self.size), w.im.rem_euclid(self.size)))
        } else {
            Ok((z.re.rem_euclid(self.size), 0))
        }
    }

    pub fn divides(&self, z: GInt) -> Result<bool> {
        Ok(self.key(z)? == (0, 0))
    }

    /// One representative per class.
    pub fn representatives(&self) -> Result<Vec<GInt>> {
        if !self.gaussian {
            return Ok((0..self.size).map(GInt::int).collect());
        }
        let mut seen = std::collections::HashSet::new();
        let mut reps = Vec::new();
        for x in 0..self.size {
            for y in 0..self.size {
                let z = GInt::new(x, y);
                if seen.insert(self.key(z)?) {
                    reps.push(z);
                }
            }
            if reps.len() as i128 == self.size {
                break;
            }
        }
        Ok(reps)
    }
}

/// Least common multiple of the denominators of a scalar list.
pub fn common_denominator(xs: &[Scalar]) -> BigInt {
    xs.iter().fold(BigInt::from(1), |acc, s| acc.lcm(&s.denominator_lcm()))
}

/// Integral content of a scalar list after clearing denominators.
pub fn integral_vector(xs: &[Scalar]) -> Result<Vec<GInt>> {
    let l = Scalar::from_bigint(common_denominator(xs));
    let scaled: Vec<Scalar> = xs.iter().map(|x| x * &l).collect();
    let mut g = BigInt::zero();
    for s in &scaled {
        g = g.gcd(&s.re().to_integer()).gcd(&s.im().to_integer());
    }
    let g = if g.is_zero() { Scalar::one() } else { Scalar::from_bigint(g) };
    let ginv = g.inv().expect("nonzero content");
    scaled.iter().map(|s| GInt::from_scalar(&(s * &ginv))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_basics() {
        let a = GInt::new(2, 1);
        let b = GInt::new(2, -1);
        assert_eq!(a.mul(b).unwrap(), GInt::int(5));
        assert_eq!(GInt::int(5).div_exact(a).unwrap(), Some(b));
        assert_eq!(GInt::int(3).div_exact(a).unwrap(), None);
        assert_eq!(gcd(GInt::int(5), GInt::new(3, 4)).unwrap(), GInt::new(2, 1));
        assert_eq!(GInt::new(-1, 2).normalized(), GInt::new(2, 1));
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt(GInt::int(9), false).unwrap(), Some(GInt::int(3)));
        assert_eq!(sqrt(GInt::int(-9), false).unwrap(), None);
        let r = sqrt(GInt::int(-9), true).unwrap().unwrap();
        assert_eq!(r.mul(r).unwrap(), GInt::int(-9));
        let r = sqrt(GInt::new(3, 4), true).unwrap().unwrap();
        assert_eq!(r.mul(r).unwrap(), GInt::new(3, 4));
        assert_eq!(sqrt(GInt::int(2), true).unwrap(), None);
        assert_eq!(sqrt(GInt::new(0, 2), true).unwrap(), Some(GInt::new(1, 1)));
    }

    #[test]
    fn residue_classes() {
        let r = Residues::new(GInt::new(2, 1), true).unwrap();
        assert_eq!(r.representatives().unwrap().len(), 5);
        assert!(r.divides(GInt::int(5)).unwrap());
        assert!(!r.divides(GInt::int(3)).unwrap());
        let r = Residues::new(GInt::int(3), true).unwrap();
        assert_eq!(r.representatives().unwrap().len(), 9);
        let r = Residues::new(GInt::int(4), false).unwrap();
        assert_eq!(r.representatives().unwrap().len(), 4);
    }
}
