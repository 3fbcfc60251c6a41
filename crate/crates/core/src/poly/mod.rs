//! Sparse multivariate polynomials over Q and Q(i).
//!
//! A [`Poly`] lives in a [`Ring`]: an ordered list of variables, an ordered
//! list of formal parameters and a coefficient [`Field`]. Exponent vectors
//! cover variables first, then parameters. Parameters behave as constants for
//! differentiation, degree and weighting, so a determinant can come out as an
//! exact polynomial in them.

mod format;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

pub use parse::parse_poly;

/// Variable names, parameter names and coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    params: Vec<String>,
    field: Field,
}

impl Ring {
    pub fn new(vars: Vec<String>, params: Vec<String>, field: Field) -> Arc<Ring> {
        Arc::new(Ring { vars, params, field })
    }

    /// Variables `x1..xn` without parameters.
    pub fn standard(n: usize, field: Field) -> Arc<Ring> {
        Self::with_params(n, &[], field)
    }

    pub fn with_params(n: usize, params: &[&str], field: Field) -> Arc<Ring> {
        let vars = (1..=n).map(|i| format!("x{i}")).collect();
        let params = params.iter().map(|p| p.to_string()).collect();
        Ring::new(vars, params, field)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    /// Length of exponent vectors.
    pub fn width(&self) -> usize {
        self.vars.len() + self.params.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Name of slot `k` of an exponent vector.
    pub fn slot_name(&self, k: usize) -> &str {
        if k < self.vars.len() {
            &self.vars[k]
        } else {
            &self.params[k - self.vars.len()]
        }
    }

    pub fn slot_of(&self, name: &str) -> Option<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .or_else(|| self.params.iter().position(|p| p == name).map(|k| k + self.vars.len()))
    }
}

/// Exponent vector. Ordered graded-lexicographically over all slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(width: usize) -> Self {
        Monomial(vec![0; width])
    }

    pub fn var(width: usize, k: usize) -> Self {
        let mut e = vec![0; width];
        e[k] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Degree in the first `nvars` slots only.
    pub fn var_degree(&self, nvars: usize) -> u32 {
        self.0[..nvars].iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// `o / self`; caller guarantees divisibility.
    fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(o.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.total_degree().cmp(&o.total_degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial with exact coefficients. No stored coefficient is zero.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring) && self.terms == o.terms
    }
}

impl Eq for Poly {}

/// Slices of a polynomial by degree in its variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedParts {
    /// `None` for the zero polynomial.
    pub degree: Option<u32>,
    pub constant: Poly,
    pub linear_part: Poly,
    pub quadratic_part: Poly,
    /// `None` for the zero polynomial.
    pub leading_homogeneous: Option<Poly>,
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        Self::term(ring, c, Monomial::one(ring.width()))
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Scalar::one())
    }

    /// The variable `x_{k+1}` (0-based `k`).
    pub fn var(ring: &Arc<Ring>, k: usize) -> Self {
        Self::term(ring, Scalar::one(), Monomial::var(ring.width(), k))
    }

    /// The `k`-th parameter (0-based).
    pub fn param(ring: &Arc<Ring>, k: usize) -> Self {
        Self::term(ring, Scalar::one(), Monomial::var(ring.width(), ring.nvars() + k))
    }

    pub fn term(ring: &Arc<Ring>, c: Scalar, m: Monomial) -> Self {
        assert_eq!(m.0.len(), ring.width(), "exponent vector width");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    /// `sum_j coeffs[j] * x_{j+1}`.
    pub fn linear_form(ring: &Arc<Ring>, coeffs: &[Scalar]) -> Self {
        let mut p = Poly::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(ring.width(), k), c.clone());
        }
        p
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// True if no variable or parameter occurs.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_default())
    }

    /// Constant, nonzero, free of parameters.
    pub fn is_nonzero_constant(&self) -> bool {
        self.is_constant() && !self.is_zero()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Largest term in graded-lex order over all slots.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Total degree in the variables; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        let n = self.nvars();
        self.terms.keys().map(|m| m.var_degree(n)).max()
    }

    /// Degree in a subset of the variables (0-based indices).
    pub fn degree_in(&self, vars: &[usize]) -> Option<u32> {
        self.terms.keys().map(|m| vars.iter().map(|&k| m.0[k]).sum()).max()
    }

    /// True if the variable `k` (0-based) occurs.
    pub fn involves_var(&self, k: usize) -> bool {
        self.terms.keys().any(|m| m.0[k] > 0)
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Terms of degree exactly `d` in the variables.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        let n = self.nvars();
        self.filter(|m| m.var_degree(n) == d)
    }

    pub fn graded_parts(&self) -> GradedParts {
        let degree = self.degree();
        GradedParts {
            degree,
            constant: self.homogeneous_part(0),
            linear_part: self.homogeneous_part(1),
            quadratic_part: self.homogeneous_part(2),
            leading_homogeneous: degree.map(|d| self.homogeneous_part(d)),
        }
    }

    pub fn leading_homogeneous(&self) -> Result<Poly> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, c: &Scalar, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `k` (0-based).
    pub fn partial(&self, k: usize) -> Result<Poly> {
        if k >= self.nvars() {
            return Err(Error::IndexOutOfRange { index: k + 1, len: self.nvars() });
        }
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[k] -= 1;
            out.add_term(dm, c * &Scalar::from_int(e as i64));
        }
        Ok(out)
    }

    /// Substitutes polynomials for the variables; parameters are untouched.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        let n = self.nvars();
        if images.len() != n {
            return Err(Error::DimensionMismatch(format!("{} images for {} variables", images.len(), n)));
        }
        let target = images.first().map(|p| p.ring.clone()).unwrap_or_else(|| self.ring.clone());
        if target.nparams() != self.ring.nparams() {
            return Err(Error::DimensionMismatch("parameter lists differ".into()));
        }
        // powers[k][e] = images[k]^e, filled lazily
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&p.ring)]).collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut param_mono = vec![0; target.width()];
            param_mono[target.nvars()..].copy_from_slice(&m.0[n..]);
            let mut acc = Poly::term(&target, c.clone(), Monomial(param_mono));
            for (k, &e) in m.0[..n].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().unwrap() * &images[k];
                    powers[k].push(next);
                }
                acc = &acc * &powers[k][e as usize];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// `f(Tx)`: each `x_i` becomes `sum_j T[i][j] x_j`.
    pub fn substitute_linear(&self, t: &crate::linalg::ScalarMatrix) -> Result<Poly> {
        let n = self.nvars();
        if t.rows() != n || t.cols() != n {
            return Err(Error::DimensionMismatch(format!("{}x{} transform for {} variables", t.rows(), t.cols(), n)));
        }
        let images: Vec<Poly> = (0..n).map(|i| Poly::linear_form(&self.ring, t.row(i))).collect();
        self.compose(&images)
    }

    /// `f(x + shift)`.
    pub fn translate(&self, shift: &[Scalar]) -> Result<Poly> {
        let n = self.nvars();
        if shift.len() != n {
            return Err(Error::DimensionMismatch(format!("shift of length {} for {} variables", shift.len(), n)));
        }
        let images: Vec<Poly> =
            (0..n).map(|k| &Poly::var(&self.ring, k) + &Poly::constant(&self.ring, shift[k].clone())).collect();
        self.compose(&images)
    }

    /// Substitutes scalars for all variables; parameters remain.
    pub fn eval_vars(&self, point: &[Scalar]) -> Result<Poly> {
        let n = self.nvars();
        if point.len() != n {
            return Err(Error::DimensionMismatch(format!("point of length {} for {} variables", point.len(), n)));
        }
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (k, &e) in m.0[..n].iter().enumerate() {
                if e > 0 {
                    v = &v * &point[k].pow(e);
                }
            }
            let mut rest = m.0.clone();
            rest[..n].iter_mut().for_each(|e| *e = 0);
            out.add_term(Monomial(rest), v);
        }
        Ok(out)
    }

    /// Value at a point when no parameters occur.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        let p = self.eval_vars(point)?;
        p.constant_value().ok_or_else(|| Error::DimensionMismatch("evaluation leaves parameters".into()))
    }

    /// Sets parameter `k` (0-based) to a scalar.
    pub fn specialize_param(&self, k: usize, value: &Scalar) -> Poly {
        let slot = self.ring.nvars() + k;
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[slot];
            let mut mm = m.clone();
            mm.0[slot] = 0;
            out.add_term(mm, c * &value.pow(e));
        }
        out
    }

    /// Moves the polynomial to another ring with the same slot layout.
    pub fn with_ring(&self, ring: &Arc<Ring>) -> Result<Poly> {
        if ring.width() != self.ring.width() || ring.nvars() != self.ring.nvars() {
            return Err(Error::DimensionMismatch("ring layouts differ".into()));
        }
        if ring.field() == Field::Rational && self.terms.values().any(|c| !c.is_rational()) {
            return Err(Error::FieldMismatch("Gaussian coefficients in a rational ring".into()));
        }
        Ok(Poly { ring: ring.clone(), terms: self.terms.clone() })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.terms.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c * &lc_inv;
            for (dm, dc) in d.terms.iter().rev().skip(1) {
                rem.add_term(dm.mul(&qm), -(&qc * dc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Coefficients of a linear form in the variables; `None` if `self` is not one.
    pub fn linear_coefficients(&self) -> Option<Vec<Scalar>> {
        let n = self.nvars();
        let mut out = vec![Scalar::zero(); n];
        for (m, c) in &self.terms {
            if m.total_degree() != 1 {
                return None;
            }
            let k = m.0.iter().position(|&e| e == 1)?;
            if k >= n {
                return None;
            }
            out[k] = c.clone();
        }
        Some(out)
    }

    /// Rewrites a polynomial in `K[x_1]` as a univariate coefficient list.
    pub fn univariate_coefficients(&self, k: usize) -> Option<Vec<Scalar>> {
        let mut out: Vec<Scalar> = Vec::new();
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(j, &e)| j != k && e > 0) {
                return None;
            }
            let e = m.0[k] as usize;
            if out.len() <= e {
                out.resize(e + 1, Scalar::zero());
            }
            out[e] = c.clone();
        }
        Some(out)
    }
}

fn check_ring(a: &Poly, b: &Poly) {
    debug_assert!(Arc::ptr_eq(&a.ring, &b.ring) || a.ring == b.ring, "polynomials from different rings");
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        check_ring(self, o);
        let (mut big, small) = if self.terms.len() >= o.terms.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        check_ring(self, o);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        check_ring(self, o);
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Scalar::from_int(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::format_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ScalarMatrix;

    fn ring(n: usize) -> Arc<Ring> {
        Ring::standard(n, Field::Rational)
    }

    fn p(s: &str, r: &Arc<Ring>) -> Poly {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn derivatives() {
        let r = ring(3);
        assert_eq!(p("x1^3", &r).partial(0).unwrap(), p("3*x1^2", &r));
        assert!(p("x1*x2", &r).partial(2).unwrap().is_zero());
        assert!(matches!(p("x1", &r).partial(3), Err(Error::IndexOutOfRange { .. })));

        let rt = Ring::with_params(2, &["t"], Field::Rational);
        let f = p("x1*x2 + t*x1*x2^2", &rt);
        assert_eq!(f.partial(1).unwrap(), p("x1 + 2*t*x1*x2", &rt));
    }

    #[test]
    fn linear_substitution_examples() {
        let r = ring(2);
        let swap = ScalarMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(p("x1*x2", &r).substitute_linear(&swap).unwrap(), p("x1*x2", &r));
        assert_eq!(p("x1*x2 + x2^3", &r).substitute_linear(&swap).unwrap(), p("x1*x2 + x1^3", &r));
        let shear = ScalarMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(p("x1^2", &r).substitute_linear(&shear).unwrap(), p("x1^2 + 2*x1*x2 + x2^2", &r));
        let bad = ScalarMatrix::identity(3);
        assert!(matches!(p("x1", &r).substitute_linear(&bad), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn graded_parts_examples() {
        let r = ring(2);
        let g = p("x1*x2 + x1^3", &r).graded_parts();
        assert_eq!(g.degree, Some(3));
        assert_eq!(g.quadratic_part, p("x1*x2", &r));
        assert_eq!(g.leading_homogeneous.unwrap(), p("x1^3", &r));

        let g = p("5", &r).graded_parts();
        assert_eq!(g.degree, Some(0));
        assert_eq!(g.constant, p("5", &r));
        assert!(g.quadratic_part.is_zero() && g.linear_part.is_zero());

        assert_eq!(Poly::zero(&r).leading_homogeneous(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn parameters_do_not_count_towards_degree() {
        let rt = Ring::with_params(2, &["t"], Field::Rational);
        let f = p("t^5*x1 + x2^2", &rt);
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.specialize_param(0, &Scalar::from_int(0)), p("x2^2", &rt));
    }

    #[test]
    fn exact_division() {
        let r = ring(2);
        let a = p("x1^2 - x2^2", &r);
        assert_eq!(a.div_exact(&p("x1 - x2", &r)), Some(p("x1 + x2", &r)));
        assert_eq!(a.div_exact(&p("x1 + 2*x2", &r)), None);
    }

    #[test]
    fn translate_and_eval() {
        let r = ring(2);
        let f = p("x1*x2 + x1^3", &r);
        let g = f.translate(&[Scalar::from_int(1), Scalar::from_int(0)]).unwrap();
        assert_eq!(g, p("x1^3 + 3*x1^2 + 3*x1 + 1 + x1*x2 + x2", &r));
        assert_eq!(f.eval(&[Scalar::from_int(2), Scalar::from_int(3)]).unwrap(), Scalar::from_int(14));
    }
}
