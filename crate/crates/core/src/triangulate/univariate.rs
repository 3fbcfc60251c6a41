//! Dense univariate polynomials over the scalar field, square-free
//! decomposition and roots in the field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Coefficients from the constant term upward, without trailing zeros.
pub(crate) type UPoly = Vec<Scalar>;

pub(crate) fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn degree(p: &UPoly) -> Option<usize> {
    p.len().checked_sub(1)
}

fn derivative(p: &UPoly) -> UPoly {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::from_int(k as i64)).collect())
}

fn monic(p: &UPoly) -> UPoly {
    match p.last() {
        Some(lc) => {
            let inv = lc.inv().expect("nonzero leading coefficient");
            p.iter().map(|c| c * &inv).collect()
        }
        None => Vec::new(),
    }
}

fn sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let z = Scalar::zero();
    trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let inv = b[db].inv().expect("nonzero leading coefficient");
    let mut r = a.clone();
    let mut q = vec![Scalar::zero(); a.len().saturating_sub(db)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &inv;
        for (k, bk) in b.iter().enumerate() {
            let t = &c * bk;
            r[dr - db + k] -= &t;
        }
        q[dr - db] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

fn quo(a: &UPoly, b: &UPoly) -> UPoly {
    divrem(a, b).0
}

/// Yun's algorithm: monic square-free factors with their multiplicities.
pub(crate) fn square_free(p: &UPoly) -> Vec<(UPoly, u32)> {
    let p = trim(p.clone());
    if degree(&p).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let dp = derivative(&p);
    let a0 = gcd(&p, &dp);
    let mut b = quo(&p, &a0);
    let mut c = quo(&dp, &a0);
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        b = quo(&b, &a);
        c = quo(&d, &a);
        d = sub(&c, &derivative(&b));
        if degree(&a).unwrap_or(0) > 0 {
            out.push((monic(&a), i));
        }
        i += 1;
    }
    out
}

/// Roots in `field` of a square-free polynomial.
///
/// Complete over ℚ. Over ℚ(i) a leftover factor of degree three or more
/// without rational coefficients is reported as `NeedsExtension`.
pub(crate) fn roots(p: &UPoly, field: Field) -> Result<Vec<Scalar>> {
    let p = trim(p.clone());
    match degree(&p) {
        None | Some(0) => Ok(Vec::new()),
        Some(1) => Ok(vec![-(&p[0] / &p[1])]),
        Some(2) => {
            let disc = &p[1] * &p[1] - Scalar::from_int(4) * &p[0] * &p[2];
            let Some(s) = disc.sqrt(field) else { return Ok(Vec::new()) };
            let two_a = Scalar::from_int(2) * &p[2];
            let mut r = vec![(-&p[1] + &s) / &two_a, (-&p[1] - &s) / &two_a];
            r.sort();
            r.dedup();
            Ok(r)
        }
        Some(_) => {
            if !p.iter().all(Scalar::is_rational) {
                return Err(Error::NeedsExtension(format!(
                    "roots of a degree {} polynomial with Gaussian coefficients",
                    p.len() - 1
                )));
            }
            let q: Vec<BigRational> = p.iter().map(|c| c.re().clone()).collect();
            let rat = rational_roots(&q);
            let mut rest = p.clone();
            for r in &rat {
                rest = quo(&rest, &vec![-Scalar::rational(r.clone()), Scalar::one()]);
            }
            let mut out: Vec<Scalar> = rat.into_iter().map(Scalar::rational).collect();
            if field == Field::Gaussian && degree(&rest).unwrap_or(0) > 0 {
                if degree(&rest) == Some(2) {
                    out.extend(roots(&rest, field)?);
                } else {
                    return Err(Error::NeedsExtension(format!(
                        "Gaussian roots of a degree {} rational polynomial",
                        rest.len() - 1
                    )));
                }
            }
            out.sort();
            Ok(out)
        }
    }
}

/// Rational roots of a square-free rational polynomial of positive degree.
///
/// With `a` the leading coefficient of the integral rescaling, `s = a t`
/// turns it monic over Z; integer roots of that are isolated with Sturm
/// sequences and tested exactly.
fn rational_roots(p: &[BigRational]) -> Vec<BigRational> {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let k = ints.len() - 1;
    let a = ints[k].clone();
    // Q(s) = a^{k-1} p(s / a) = Σ ints[i] a^{k-1-i} s^i
    let monic: Vec<BigInt> = (0..=k)
        .map(|i| if i == k { BigInt::one() } else { &ints[i] * num_traits::pow(a.clone(), k - 1 - i) })
        .collect();
    let bound = monic.iter().map(|c| c.abs()).max().unwrap_or_default() + BigInt::one();
    let qr: Vec<BigRational> = monic.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let seq = sturm(&qr);
    let mut found = Vec::new();
    let lo = BigRational::from_integer(-bound.clone());
    let hi = BigRational::from_integer(bound);
    isolate(&seq, &qr, lo, hi, &mut found);
    let a = BigRational::from_integer(a);
    let mut out: Vec<BigRational> = found.into_iter().map(|s| BigRational::from_integer(s) / &a).collect();
    out.sort();
    out.dedup();
    out
}

fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn qtrim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qrem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db {
        let c = r.last().unwrap() / &b[db];
        let off = r.len() - 1 - db;
        for (k, bk) in b.iter().enumerate() {
            r[off + k] -= &c * bk;
        }
        r.pop();
        r = qtrim(r);
    }
    qtrim(r)
}

fn sturm(p: &[BigRational]) -> Vec<Vec<BigRational>> {
    let dp: Vec<BigRational> =
        p.iter().enumerate().skip(1).map(|(k, c)| c * BigRational::from_integer(k.into())).collect();
    let mut seq = vec![p.to_vec(), qtrim(dp)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r: Vec<BigRational> = qrem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn sign_changes(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let signs: Vec<bool> = seq.iter().map(|p| eval(p, x)).filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Collects the integer roots in `(lo, hi]`.
fn isolate(seq: &[Vec<BigRational>], p: &[BigRational], lo: BigRational, hi: BigRational, out: &mut Vec<BigInt>) {
    let count = sign_changes(seq, &lo).saturating_sub(sign_changes(seq, &hi));
    if count == 0 {
        return;
    }
    if &hi - &lo <= BigRational::one() {
        let mut k = lo.floor().to_integer() + BigInt::one();
        while BigRational::from_integer(k.clone()) <= hi {
            if eval(p, &BigRational::from_integer(k.clone())).is_zero() {
                out.push(k.clone());
            }
            k += 1;
        }
        return;
    }
    let mid = ((&lo + &hi) / BigRational::from_integer(2.into())).floor();
    isolate(seq, p, lo, mid.clone(), out);
    isolate(seq, p, mid, hi, out);
}
