//! Weight functions, weighted leading parts and directional weight walks.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::calculus::{hessian, poly_determinant};
use crate::error::{Error, Result};
use crate::linalg::Transform;
use crate::poly::{Monomial, Poly};
use crate::scalar::Scalar;

/// One rational weight per variable. Parameters carry no weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFn(Vec<BigRational>);

impl WeightFn {
    pub fn new(w: Vec<BigRational>) -> Self {
        WeightFn(w)
    }

    pub fn uniform(n: usize) -> Self {
        WeightFn(vec![BigRational::one(); n])
    }

    pub fn from_ints(w: &[i64]) -> Self {
        WeightFn(w.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn values(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &BigRational {
        &self.0[i]
    }

    /// `Σ α_i w_i` over the variable slots.
    pub fn of_monomial(&self, m: &Monomial) -> BigRational {
        self.0
            .iter()
            .zip(m.exponents())
            .filter(|(_, &e)| e > 0)
            .fold(BigRational::zero(), |acc, (w, &e)| acc + w * BigRational::from_integer(e.into()))
    }

    /// Largest weight of a term; `None` for zero.
    pub fn of_poly(&self, f: &Poly) -> Option<BigRational> {
        f.terms().map(|(m, _)| self.of_monomial(m)).max()
    }

    /// `self + s·δ`.
    pub fn step(&self, delta: &[BigRational], s: &BigRational) -> WeightFn {
        WeightFn(self.0.iter().zip(delta).map(|(w, d)| w + d * s).collect())
    }

    /// True if all weights are positive and non-decreasing.
    pub fn is_positive_ordered(&self) -> bool {
        self.0.iter().all(Signed::is_positive) && self.0.windows(2).all(|p| p[0] <= p[1])
    }

    /// Scales to the smallest positive integer vector with the same direction.
    pub fn normalized(&self) -> WeightFn {
        let lcm = self.0.iter().fold(BigInt::one(), |acc, w| num_integer::Integer::lcm(&acc, w.denom()));
        let ints: Vec<BigInt> =
            self.0.iter().map(|w| (w * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        if g.is_zero() {
            return self.clone();
        }
        WeightFn(ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|w| Scalar::rational(w.clone()).to_string()).collect()
    }
}

impl fmt::Display for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for WeightFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Scalar>::deserialize(d)?;
        v.into_iter()
            .map(|s| {
                if s.is_rational() {
                    Ok(s.re().clone())
                } else {
                    Err(serde::de::Error::custom("weights must be rational"))
                }
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(WeightFn)
    }
}

/// The terms of maximal weight and that weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingPart {
    pub part: Poly,
    pub value: BigRational,
}

pub fn w_leading_part(f: &Poly, w: &WeightFn) -> Result<LeadingPart> {
    check_len(f, w)?;
    let value = w.of_poly(f).ok_or(Error::ZeroPolynomial)?;
    let part = f.filter(|m| w.of_monomial(m) == value);
    Ok(LeadingPart { part, value })
}

fn check_len(f: &Poly, w: &WeightFn) -> Result<()> {
    if w.len() != f.nvars() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} variables", w.len(), f.nvars())));
    }
    Ok(())
}

/// Smallest `s > 0` at which a new term joins the leading part along `δ`.
///
/// On the open interval `(0, s)` the `(w + s'δ)`-leading part is the set of
/// `w`-leading terms of maximal `δ`-weight. `None` means no term ever joins.
pub fn next_critical_step(f: &Poly, w: &WeightFn, delta: &[BigRational]) -> Result<Option<BigRational>> {
    check_len(f, w)?;
    if delta.len() != w.len() {
        return Err(Error::DimensionMismatch("direction length".into()));
    }
    if delta.iter().any(Signed::is_negative) || delta.iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("direction must be nonnegative and nonzero".into()));
    }
    let lead = w_leading_part(f, w)?;
    let dw = WeightFn(delta.to_vec());
    let top = dw.of_poly(&lead.part).expect("leading part is nonzero");
    let mut best: Option<BigRational> = None;
    for (m, _) in f.terms() {
        let dt = dw.of_monomial(m);
        if dt <= top {
            continue;
        }
        let s = (&lead.value - w.of_monomial(m)) / (dt - &top);
        if s.is_positive() && best.as_ref().is_none_or(|b| &s < b) {
            best = Some(s);
        }
    }
    Ok(best)
}

/// Strictly increasing weights with `w_i + w_{n+1-i}` constant.
pub fn wchoice_weights(n: usize, d: u32) -> Result<WeightFn> {
    if n < 1 || d < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 1 and d >= 2, got n = {n}, d = {d}")));
    }
    let d = BigInt::from(d);
    let pw = |e: usize| -> BigInt { Pow::pow(&d, e) };
    let w = (1..=n)
        .map(|i| {
            let v = if 2 * i <= n + 2 { pw(i - 1) } else { pw(n.div_ceil(2) - 1) + pw(n / 2) - pw(n - i) };
            BigRational::from_integer(v)
        })
        .collect();
    Ok(WeightFn(w))
}

/// True iff `w(f(Tx)) = w_i + w_{n+1-i}` for every `i`, under the
/// hypotheses that the `w`-leading part of `f(Tx)` has nonzero Hessian
/// determinant and the `w`-leading part of `det ℋf(Tx)` has a constant term.
pub fn verify_weight_sum(f: &Poly, t: &Transform, w: &WeightFn) -> Result<bool> {
    check_len(f, w)?;
    let g = f.substitute_linear(t.matrix())?;
    let lead = w_leading_part(&g, w)?;
    if poly_determinant(&hessian(&lead.part))?.is_zero() {
        return Err(Error::PreconditionUnmet("Hessian determinant of the leading part vanishes".into()));
    }
    let det = poly_determinant(&hessian(&g))?;
    if det.is_zero() {
        return Err(Error::PreconditionUnmet("Hessian determinant vanishes".into()));
    }
    let det_lead = w_leading_part(&det, w)?;
    let n = f.nvars();
    if !det_lead.part.terms().any(|(m, _)| m.var_degree(n) == 0) {
        return Err(Error::PreconditionUnmet("leading part of the Hessian determinant has no constant term".into()));
    }
    Ok((0..n).all(|i| lead.value == w.get(i) + w.get(n - 1 - i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};
    use crate::scalar::Field;
    use std::sync::Arc;

    fn p(s: &str, r: &Arc<Ring>) -> Poly {
        parse_poly(s, r).unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn leading_parts() {
        let r = Ring::standard(2, Field::Rational);
        let lp = w_leading_part(&p("x1*x2 + x2^3", &r), &WeightFn::uniform(2)).unwrap();
        assert_eq!((lp.part, lp.value), (p("x2^3", &r), q(3)));
        let lp = w_leading_part(&p("x1^3 + x1*x2", &r), &WeightFn::from_ints(&[1, 2])).unwrap();
        assert_eq!((lp.part, lp.value), (p("x1^3 + x1*x2", &r), q(3)));
        let h = p("x1^2 - 3*x1*x2 + x2^2", &r);
        assert_eq!(w_leading_part(&h, &WeightFn::uniform(2)).unwrap().part, h);
        assert_eq!(w_leading_part(&Poly::zero(&r), &WeightFn::uniform(2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn critical_steps() {
        let r = Ring::standard(2, Field::Rational);
        let w = WeightFn::uniform(2);
        assert_eq!(next_critical_step(&p("x1^3 + x1*x2", &r), &w, &[q(0), q(1)]).unwrap(), Some(q(1)));
        assert_eq!(next_critical_step(&p("x1^3", &r), &w, &[q(1), q(1)]).unwrap(), None);
        assert_eq!(next_critical_step(&p("x1*x2 + x2^3", &r), &w, &[q(1), q(0)]).unwrap(), Some(q(1)));
        assert!(next_critical_step(&p("x1", &r), &w, &[q(0), q(0)]).is_err());
    }

    #[test]
    fn wchoice_examples() {
        assert_eq!(wchoice_weights(3, 3).unwrap(), WeightFn::from_ints(&[1, 3, 5]));
        assert_eq!(wchoice_weights(2, 3).unwrap(), WeightFn::from_ints(&[1, 3]));
        assert_eq!(wchoice_weights(4, 3).unwrap(), WeightFn::from_ints(&[1, 3, 9, 11]));
        assert_eq!(wchoice_weights(1, 5).unwrap(), WeightFn::from_ints(&[1]));
        assert!(matches!(wchoice_weights(0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(wchoice_weights(3, 1), Err(Error::InvalidArgument(_))));
        for n in 1..8 {
            for d in 2..6 {
                let w = wchoice_weights(n, d).unwrap();
                assert!(w.values().windows(2).all(|p| p[0] < p[1]));
                let s = w.get(0) + w.get(n - 1);
                assert!((0..n).all(|i| w.get(i) + w.get(n - 1 - i) == s));
            }
        }
    }

    #[test]
    fn weight_sums() {
        let r3 = Ring::standard(3, Field::Rational);
        let t3 = Transform::identity(3);
        assert!(verify_weight_sum(&p("x1*x3 + x2^2 + x1^2", &r3), &t3, &WeightFn::from_ints(&[1, 2, 3])).unwrap());
        let r = Ring::standard(2, Field::Rational);
        let t = Transform::identity(2);
        assert!(verify_weight_sum(&p("x1*x2", &r), &t, &WeightFn::uniform(2)).unwrap());
        assert!(verify_weight_sum(&p("x1*x2 + x1^3", &r), &t, &WeightFn::from_ints(&[1, 2])).unwrap());
        assert!(matches!(
            verify_weight_sum(&p("x1*x2 + x1^3", &r), &t, &WeightFn::uniform(2)),
            Err(Error::PreconditionUnmet(_))
        ));
    }

    #[test]
    fn serde_round_trip() {
        let w = WeightFn::new(vec![q(1), BigRational::new(3.into(), 2.into())]);
        let j = serde_json::to_string(&w).unwrap();
        assert_eq!(j, r#"["1","3/2"]"#);
        assert_eq!(serde_json::from_str::<WeightFn>(&j).unwrap(), w);
    }
}
